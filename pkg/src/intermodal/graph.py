"""Mode-annotated routing graph: core types, strict JSON ingestion, snapping."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

EARTH_RADIUS_M = 6_371_000.0
SNAP_RADIUS_M = 500.0


class Mode(str, Enum):
    """Travel modes an edge may carry and a traveller may select."""

    WALK = "walk"
    BIKE = "bike"
    CAR = "car"
    MOTORHOME = "motorhome"
    PT = "pt"


# Canonical mode order for deterministic iteration and serialization.
MODE_ORDER: tuple[Mode, ...] = tuple(Mode)


class VehicleKind(str, Enum):
    BIKE = "bike"
    CAR = "car"
    MOTORHOME = "motorhome"

    @property
    def riding_mode(self) -> Mode:
        return _RIDING_MODE[self]


_RIDING_MODE = {
    VehicleKind.BIKE: Mode.BIKE,
    VehicleKind.CAR: Mode.CAR,
    VehicleKind.MOTORHOME: Mode.MOTORHOME,
}


@dataclass(frozen=True)
class DimensionProfile:
    width_m: float
    length_m: float
    height_m: float
    weight_kg: float


# Default physical envelope per vehicle kind.  The motorhome is strictly wider
# and longer than the car so width/length restrictions can separate the two.
KIND_PROFILES: dict[VehicleKind, DimensionProfile] = {
    VehicleKind.BIKE: DimensionProfile(0.7, 1.9, 1.2, 20.0),
    VehicleKind.CAR: DimensionProfile(1.8, 4.5, 1.6, 1600.0),
    VehicleKind.MOTORHOME: DimensionProfile(2.3, 7.0, 3.2, 3500.0),
}


class GraphFormatError(ValueError):
    """Malformed or internally inconsistent graph document."""


class SnapError(Exception):
    """No node within the snap radius of the queried coordinate."""

    def __init__(self, lat: float, lon: float, distance_m: float):
        super().__init__(
            f"no node within {SNAP_RADIUS_M:.0f} m of ({lat}, {lon}); "
            f"nearest is {distance_m:.1f} m away"
        )
        self.lat = lat
        self.lon = lon
        self.distance_m = distance_m
        self.where: str | None = None  # which request field missed, set by callers


@dataclass(frozen=True)
class Node:
    id: str
    lat: float
    lon: float


@dataclass(frozen=True)
class Edge:
    from_node: str
    to_node: str
    length_m: float
    allowed: dict[Mode, float]  # mode -> speed in km/h
    transit_line: str | None = None
    max_width_m: float | None = None
    max_length_m: float | None = None
    max_height_m: float | None = None
    max_weight_kg: float | None = None


@dataclass(frozen=True)
class TransitLine:
    id: str
    headway_s: float


@dataclass(frozen=True)
class ParkingFacility:
    node: str
    accepts: frozenset[VehicleKind]
    capacity_width_m: float | None = None
    capacity_length_m: float | None = None


def haversine_m(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in meters on a spherical earth."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlmb = math.radians(lon2 - lon1)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


class Graph:
    """Directed multigraph with per-edge mode annotations.

    Instances are immutable after construction and safe to share across
    concurrent searches.  Construction validates referential integrity and
    builds the per-mode adjacency index the search core runs on: edge traversal
    times are precomputed per (edge, mode) from length and the mode's speed.
    """

    def __init__(
        self,
        nodes: list[Node] | tuple[Node, ...],
        edges: list[Edge] | tuple[Edge, ...],
        transit_lines: list[TransitLine] | tuple[TransitLine, ...] = (),
        parking: list[ParkingFacility] | tuple[ParkingFacility, ...] = (),
        name: str = "unnamed",
    ):
        self.nodes = tuple(nodes)
        self.edges = tuple(edges)
        self.transit_lines = tuple(transit_lines)
        self.parking = tuple(parking)
        self.name = name
        self._validate()
        self._build_index()

    # -- validation ---------------------------------------------------------

    def _validate(self) -> None:
        seen: set[str] = set()
        for i, node in enumerate(self.nodes):
            where = f"nodes[{i}] ('{node.id}')"
            if node.id in seen:
                raise GraphFormatError(f"{where}: duplicate node id")
            seen.add(node.id)
            if not -90.0 <= node.lat <= 90.0:
                raise GraphFormatError(f"{where}: lat {node.lat} out of range")
            if not -180.0 <= node.lon <= 180.0:
                raise GraphFormatError(f"{where}: lon {node.lon} out of range")

        line_ids: set[str] = set()
        for i, line in enumerate(self.transit_lines):
            where = f"transit_lines[{i}] ('{line.id}')"
            if line.id in line_ids:
                raise GraphFormatError(f"{where}: duplicate line id")
            line_ids.add(line.id)
            if not line.headway_s > 0:
                raise GraphFormatError(f"{where}: headway_s must be positive")

        for i, e in enumerate(self.edges):
            where = f"edges[{i}] ({e.from_node}->{e.to_node})"
            if e.from_node not in seen:
                raise GraphFormatError(f"{where}: unknown endpoint '{e.from_node}'")
            if e.to_node not in seen:
                raise GraphFormatError(f"{where}: unknown endpoint '{e.to_node}'")
            if e.from_node == e.to_node:
                raise GraphFormatError(f"{where}: self-loop not allowed")
            if not e.length_m > 0:
                raise GraphFormatError(f"{where}: length_m must be positive")
            if not e.allowed:
                raise GraphFormatError(f"{where}: allowed modes must be non-empty")
            for mode, speed in e.allowed.items():
                if not speed > 0:
                    raise GraphFormatError(f"{where}: speed for {mode.value} must be positive")
            if Mode.PT in e.allowed:
                if e.transit_line is None:
                    raise GraphFormatError(f"{where}: pt edge requires transit_line")
                if set(e.allowed) != {Mode.PT}:
                    raise GraphFormatError(f"{where}: pt edge must allow only pt")
            elif e.transit_line is not None:
                raise GraphFormatError(f"{where}: transit_line requires pt in allowed")
            if e.transit_line is not None and e.transit_line not in line_ids:
                raise GraphFormatError(f"{where}: unknown transit_line '{e.transit_line}'")
            for attr in ("max_width_m", "max_length_m", "max_height_m", "max_weight_kg"):
                value = getattr(e, attr)
                if value is not None and not value > 0:
                    raise GraphFormatError(f"{where}: {attr} must be positive")

        for i, p in enumerate(self.parking):
            where = f"parking[{i}] ('{p.node}')"
            if p.node not in seen:
                raise GraphFormatError(f"{where}: unknown node")
            if not p.accepts:
                raise GraphFormatError(f"{where}: accepts must be non-empty")
            for attr in ("capacity_width_m", "capacity_length_m"):
                value = getattr(p, attr)
                if value is not None and not value > 0:
                    raise GraphFormatError(f"{where}: {attr} must be positive")

    # -- search index -------------------------------------------------------

    def _build_index(self) -> None:
        n = len(self.nodes)
        self.node_index: dict[str, int] = {node.id: i for i, node in enumerate(self.nodes)}
        self.node_ids: tuple[str, ...] = tuple(node.id for node in self.nodes)
        self.line_ids: tuple[str, ...] = tuple(line.id for line in self.transit_lines)
        self.line_index: dict[str, int] = {lid: i for i, lid in enumerate(self.line_ids)}
        self.headways: tuple[float, ...] = tuple(line.headway_s for line in self.transit_lines)

        # Per-mode adjacency.  Vehicle modes carry the edge's dimension limits
        # (inf when absent); pt entries carry the line index instead.
        inf = math.inf
        walk: list[list[tuple]] = [[] for _ in range(n)]
        vehicle: dict[Mode, list[list[tuple]]] = {
            Mode.BIKE: [[] for _ in range(n)],
            Mode.CAR: [[] for _ in range(n)],
            Mode.MOTORHOME: [[] for _ in range(n)],
        }
        pt: list[list[tuple]] = [[] for _ in range(n)]
        for e in self.edges:
            u = self.node_index[e.from_node]
            v = self.node_index[e.to_node]
            for mode, speed_kmh in e.allowed.items():
                secs = e.length_m / (speed_kmh / 3.6)
                if mode is Mode.WALK:
                    walk[u].append((v, secs, e.length_m))
                elif mode is Mode.PT:
                    pt[u].append((v, secs, e.length_m, self.line_index[e.transit_line]))
                else:
                    limits = (
                        e.max_width_m if e.max_width_m is not None else inf,
                        e.max_length_m if e.max_length_m is not None else inf,
                        e.max_height_m if e.max_height_m is not None else inf,
                        e.max_weight_kg if e.max_weight_kg is not None else inf,
                    )
                    vehicle[mode][u].append((v, secs, e.length_m) + limits)
        self.adj_walk = walk
        self.adj_vehicle = vehicle
        self.adj_pt = pt

        boardable: list[list[int]] = [[] for _ in range(n)]
        for u in range(n):
            lines_here = sorted({entry[3] for entry in pt[u]}, key=lambda j: self.line_ids[j])
            boardable[u] = lines_here
        self.boardable_lines = boardable

        parking_at: dict[int, list[ParkingFacility]] = {}
        for p in self.parking:
            parking_at.setdefault(self.node_index[p.node], []).append(p)
        self.parking_at: dict[int, tuple[ParkingFacility, ...]] = {
            idx: tuple(fs) for idx, fs in parking_at.items()
        }

    # -- metadata -----------------------------------------------------------

    @property
    def meta(self) -> dict:
        return {
            "name": self.name,
            "nodes": len(self.nodes),
            "edges": len(self.edges),
            "transit_lines": len(self.transit_lines),
            "parking": len(self.parking),
        }

    @property
    def bbox(self) -> tuple[float, float, float, float] | None:
        """(min_lat, min_lon, max_lat, max_lon), or None for an empty graph."""
        if not self.nodes:
            return None
        lats = [node.lat for node in self.nodes]
        lons = [node.lon for node in self.nodes]
        return (min(lats), min(lons), max(lats), max(lons))


def snap(point: tuple[float, float], graph: Graph) -> str:
    """Nearest node id by great-circle distance.

    Exact distance ties prefer the lexicographically smallest node id.  Raises
    SnapError when the nearest node is farther than SNAP_RADIUS_M.
    """
    lat, lon = point
    best_id: str | None = None
    best = math.inf
    for node in graph.nodes:
        d = haversine_m(lat, lon, node.lat, node.lon)
        if d < best or (d == best and best_id is not None and node.id < best_id):
            best = d
            best_id = node.id
    if best_id is None or best > SNAP_RADIUS_M:
        raise SnapError(lat, lon, best)
    return best_id


# -- strict JSON ingestion ---------------------------------------------------

_TOP_KEYS = {"nodes", "edges", "transit_lines", "parking", "meta"}
_NODE_KEYS = {"id", "lat", "lon"}
_EDGE_KEYS = {
    "from", "to", "length_m", "allowed", "transit_line",
    "max_width_m", "max_length_m", "max_height_m", "max_weight_kg",
}
_LINE_KEYS = {"id", "headway_s"}
_PARKING_KEYS = {"node", "accepts", "capacity_width_m", "capacity_length_m"}
_MODE_VALUES = {m.value for m in Mode}
_KIND_VALUES = {k.value for k in VehicleKind}


def _check_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise GraphFormatError(f"{where}: unknown key '{unknown[0]}'")
    missing = sorted(required - set(obj))
    if missing:
        raise GraphFormatError(f"{where}: missing key '{missing[0]}'")


def _number(obj: dict, key: str, where: str) -> float:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GraphFormatError(f"{where}: {key} must be a number")
    return float(value)


def _string(obj: dict, key: str, where: str) -> str:
    value = obj[key]
    if not isinstance(value, str):
        raise GraphFormatError(f"{where}: {key} must be a string")
    return value


def parse_graph(text: str) -> Graph:
    """Parse a graph document, rejecting unknown keys and dangling references.

    Validation is deterministic: the same document always fails with the same
    first error, reported with the entity's position and id.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"document: malformed JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(doc, dict):
        raise GraphFormatError("document: top level must be an object")
    _check_keys(doc, _TOP_KEYS, {"nodes", "edges"}, "document")

    name = "unnamed"
    if "meta" in doc:
        meta = doc["meta"]
        if not isinstance(meta, dict):
            raise GraphFormatError("meta: must be an object")
        _check_keys(meta, {"name"}, {"name"}, "meta")
        name = _string(meta, "name", "meta")

    def _entries(key: str) -> list:
        value = doc.get(key, [])
        if not isinstance(value, list):
            raise GraphFormatError(f"{key}: must be an array")
        return value

    nodes = []
    for i, raw in enumerate(_entries("nodes")):
        where = f"nodes[{i}]"
        if not isinstance(raw, dict):
            raise GraphFormatError(f"{where}: must be an object")
        _check_keys(raw, _NODE_KEYS, _NODE_KEYS, where)
        nodes.append(Node(
            id=_string(raw, "id", where),
            lat=_number(raw, "lat", where),
            lon=_number(raw, "lon", where),
        ))

    lines = []
    for i, raw in enumerate(_entries("transit_lines")):
        where = f"transit_lines[{i}]"
        if not isinstance(raw, dict):
            raise GraphFormatError(f"{where}: must be an object")
        _check_keys(raw, _LINE_KEYS, _LINE_KEYS, where)
        lines.append(TransitLine(
            id=_string(raw, "id", where),
            headway_s=_number(raw, "headway_s", where),
        ))

    edges = []
    for i, raw in enumerate(_entries("edges")):
        where = f"edges[{i}]"
        if not isinstance(raw, dict):
            raise GraphFormatError(f"{where}: must be an object")
        _check_keys(raw, _EDGE_KEYS, {"from", "to", "length_m", "allowed"}, where)
        raw_allowed = raw["allowed"]
        if not isinstance(raw_allowed, dict):
            raise GraphFormatError(f"{where}: allowed must be an object")
        allowed: dict[Mode, float] = {}
        for mode_key in raw_allowed:
            if mode_key not in _MODE_VALUES:
                raise GraphFormatError(f"{where}: unknown mode '{mode_key}'")
            allowed[Mode(mode_key)] = _number(raw_allowed, mode_key, where)
        optional_num = {
            key: (_number(raw, key, where) if key in raw else None)
            for key in ("max_width_m", "max_length_m", "max_height_m", "max_weight_kg")
        }
        edges.append(Edge(
            from_node=_string(raw, "from", where),
            to_node=_string(raw, "to", where),
            length_m=_number(raw, "length_m", where),
            allowed=allowed,
            transit_line=_string(raw, "transit_line", where) if "transit_line" in raw else None,
            **optional_num,
        ))

    parking = []
    for i, raw in enumerate(_entries("parking")):
        where = f"parking[{i}]"
        if not isinstance(raw, dict):
            raise GraphFormatError(f"{where}: must be an object")
        _check_keys(raw, _PARKING_KEYS, {"node", "accepts"}, where)
        raw_accepts = raw["accepts"]
        if not isinstance(raw_accepts, list) or not raw_accepts:
            raise GraphFormatError(f"{where}: accepts must be a non-empty array")
        kinds = set()
        for kind_key in raw_accepts:
            if kind_key not in _KIND_VALUES:
                raise GraphFormatError(f"{where}: unknown vehicle kind '{kind_key}'")
            kinds.add(VehicleKind(kind_key))
        parking.append(ParkingFacility(
            node=_string(raw, "node", where),
            accepts=frozenset(kinds),
            capacity_width_m=_number(raw, "capacity_width_m", where) if "capacity_width_m" in raw else None,
            capacity_length_m=_number(raw, "capacity_length_m", where) if "capacity_length_m" in raw else None,
        ))

    return Graph(nodes, edges, lines, parking, name=name)


def serialize_graph(graph: Graph) -> str:
    """Inverse of parse_graph: parse_graph(serialize_graph(g)) reproduces g."""
    doc: dict = {
        "meta": {"name": graph.name},
        "nodes": [{"id": n.id, "lat": n.lat, "lon": n.lon} for n in graph.nodes],
        "transit_lines": [
            {"id": line.id, "headway_s": line.headway_s} for line in graph.transit_lines
        ],
        "edges": [],
        "parking": [],
    }
    for e in graph.edges:
        raw: dict = {
            "from": e.from_node,
            "to": e.to_node,
            "length_m": e.length_m,
            "allowed": {m.value: e.allowed[m] for m in MODE_ORDER if m in e.allowed},
        }
        if e.transit_line is not None:
            raw["transit_line"] = e.transit_line
        for key, value in (
            ("max_width_m", e.max_width_m),
            ("max_length_m", e.max_length_m),
            ("max_height_m", e.max_height_m),
            ("max_weight_kg", e.max_weight_kg),
        ):
            if value is not None:
                raw[key] = value
        doc["edges"].append(raw)
    for p in graph.parking:
        raw = {
            "node": p.node,
            "accepts": sorted(k.value for k in p.accepts),
        }
        if p.capacity_width_m is not None:
            raw["capacity_width_m"] = p.capacity_width_m
        if p.capacity_length_m is not None:
            raw["capacity_length_m"] = p.capacity_length_m
        doc["parking"].append(raw)
    return json.dumps(doc, indent=2)
