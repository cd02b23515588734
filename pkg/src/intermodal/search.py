"""Perception-weighted intermodal route search.

The engine runs Dijkstra over an expanded state space: a state is (node,
carrier, used vehicles), where the carrier is on-foot, riding an owned
vehicle, or aboard a transit line.  Mode choice is an output of the search;
the traveller changes mode only where a transfer transition exists and the
change improves the objective.  Perception multipliers scale each mode's
actual time contribution into the cost the search minimizes, so the reported
total_duration_s stays physical while perceived_cost carries the preference
weighting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from heapq import heappop, heappush

from intermodal.graph import (
    KIND_PROFILES,
    MODE_ORDER,
    Graph,
    Mode,
    VehicleKind,
)

MULTIPLIER_MIN = 1.0
MULTIPLIER_MAX = 100.0

DEFAULT_PICKUP_S = {VehicleKind.BIKE: 30.0, VehicleKind.CAR: 60.0, VehicleKind.MOTORHOME: 120.0}
DEFAULT_PARK_S = {VehicleKind.BIKE: 30.0, VehicleKind.CAR: 120.0, VehicleKind.MOTORHOME: 300.0}
DEFAULT_BOARD_S = 30.0

DEFAULT_IMPLICIT_DESTINATION_PARKING = frozenset({VehicleKind.BIKE, VehicleKind.CAR})


class InvalidRequestError(ValueError):
    """Request is structurally valid JSON-side but unusable against the graph."""


class UnreachableError(Exception):
    """No feasible route exists under the request's constraints."""


class StateBudgetError(RuntimeError):
    """Reachable state space exceeds the enumeration guard."""


class Objective(str, Enum):
    FASTEST_TIME = "fastest_time"
    SHORTEST_DISTANCE = "shortest_distance"


@dataclass(frozen=True)
class MultiplierProfile:
    """Per-mode perception factors; 1.0 leaves a mode's time unweighted."""

    id: str
    multipliers: dict[Mode, float]

    def __post_init__(self):
        for mode in MODE_ORDER:
            if mode not in self.multipliers:
                raise InvalidRequestError(f"profile '{self.id}': missing multiplier for {mode.value}")
        for mode, value in self.multipliers.items():
            if not MULTIPLIER_MIN <= value <= MULTIPLIER_MAX:
                raise InvalidRequestError(
                    f"profile '{self.id}': multiplier for {mode.value} must be in "
                    f"[{MULTIPLIER_MIN:g}, {MULTIPLIER_MAX:g}]"
                )

    def __getitem__(self, mode: Mode) -> float:
        return self.multipliers[mode]

    @classmethod
    def neutral(cls) -> "MultiplierProfile":
        return cls("neutral", {m: 1.0 for m in MODE_ORDER})

    @classmethod
    def uniform(cls, c: float) -> "MultiplierProfile":
        return cls(f"uniform_{c:g}", {m: c for m in MODE_ORDER})


NEUTRAL_PROFILE = MultiplierProfile.neutral()


@dataclass(frozen=True)
class SwitchCosts:
    """Seconds charged for mode-change actions; weighted by the riding mode."""

    board_s: float = DEFAULT_BOARD_S
    pickup_s: dict[VehicleKind, float] = field(default_factory=dict)
    park_s: dict[VehicleKind, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "pickup_s", {**DEFAULT_PICKUP_S, **self.pickup_s})
        object.__setattr__(self, "park_s", {**DEFAULT_PARK_S, **self.park_s})
        if self.board_s < 0:
            raise InvalidRequestError("switch costs must be non-negative")
        for table in (self.pickup_s, self.park_s):
            for value in table.values():
                if value < 0:
                    raise InvalidRequestError("switch costs must be non-negative")

    @classmethod
    def zero(cls) -> "SwitchCosts":
        return cls(0.0, {k: 0.0 for k in VehicleKind}, {k: 0.0 for k in VehicleKind})


@dataclass(frozen=True)
class OwnedVehicle:
    id: str
    kind: VehicleKind
    location: str  # node id where it is initially parked


@dataclass(frozen=True)
class RoutingRequest:
    origin: str
    destination: str
    allowed_modes: frozenset[Mode]
    vehicles: tuple[OwnedVehicle, ...] = ()
    objective: Objective = Objective.FASTEST_TIME
    departure_time: str | None = None
    switch_costs: SwitchCosts = field(default_factory=SwitchCosts)
    implicit_destination_parking: frozenset[VehicleKind] = DEFAULT_IMPLICIT_DESTINATION_PARKING

    def __post_init__(self):
        object.__setattr__(self, "allowed_modes", frozenset(self.allowed_modes))
        object.__setattr__(self, "vehicles", tuple(self.vehicles))
        object.__setattr__(
            self, "implicit_destination_parking", frozenset(self.implicit_destination_parking)
        )
        if not self.allowed_modes:
            raise InvalidRequestError("allowed_modes must be non-empty")
        kinds_seen: set[VehicleKind] = set()
        ids_seen: set[str] = set()
        for v in self.vehicles:
            if v.kind in kinds_seen:
                raise InvalidRequestError(f"more than one {v.kind.value} vehicle in request")
            if v.id in ids_seen:
                raise InvalidRequestError(f"duplicate vehicle id '{v.id}'")
            kinds_seen.add(v.kind)
            ids_seen.add(v.id)


@dataclass(frozen=True)
class RouteLeg:
    """A contiguous stretch in one mode.

    transfer_s carries the waits attributed to this leg: boarding wait for a
    transit leg, pickup and parking time for a vehicle leg.
    """

    mode: Mode
    nodes: tuple[str, ...]
    distance_m: float
    in_motion_s: float
    transfer_s: float
    transit_line: str | None = None
    vehicle_id: str | None = None


@dataclass(frozen=True)
class Route:
    legs: tuple[RouteLeg, ...]
    total_duration_s: float
    total_distance_m: float
    perceived_cost: float
    profile_id: str
    warnings: tuple[str, ...] = ()

    @property
    def mode_sequence(self) -> tuple[str, ...]:
        return tuple(leg.mode.value for leg in self.legs)

    @property
    def node_path(self) -> tuple[str, ...]:
        if not self.legs:
            return ()
        path = list(self.legs[0].nodes)
        for leg in self.legs[1:]:
            path.extend(leg.nodes[1:])
        return tuple(path)

    @property
    def mode_changes(self) -> int:
        return max(0, len(self.legs) - 1)


def perceived_cost_under(route: Route, profile: MultiplierProfile) -> float:
    """Re-cost an assembled route under another multiplier profile."""
    return sum((leg.in_motion_s + leg.transfer_s) * profile[leg.mode] for leg in route.legs)


@dataclass(frozen=True)
class _SearchOptions:
    """Internal knobs for constrained searches (motorhome options, bounds).

    drive_modes reroutes a vehicle onto another mode's network; its legs stay
    labeled and perceived as the vehicle's own riding mode.
    """

    drive_modes: dict[str, Mode] = field(default_factory=dict)
    ignore_dimensions: frozenset[str] = frozenset()
    drop_kind_override: dict[str, VehicleKind] = field(default_factory=dict)
    skip_drop_capacity: frozenset[str] = frozenset()
    drop_any_facility: frozenset[str] = frozenset()
    no_implicit_destination: frozenset[str] = frozenset()
    force_first_vehicle: str | None = None


_DEFAULT_OPTIONS = _SearchOptions()

_FOOT = 0


class _Context:
    """Precomputed transition tables for one (graph, request, profile) query."""

    def __init__(
        self,
        graph: Graph,
        request: RoutingRequest,
        mults: dict[Mode, float],
        profile_id: str,
        distance_objective: bool,
        opts: _SearchOptions = _DEFAULT_OPTIONS,
        speed_factors: dict[tuple[str, str, Mode], float] | None = None,
    ):
        self.graph = graph
        self.request = request
        self.mults = mults
        self.profile_id = profile_id
        self.distance_objective = distance_objective
        self.opts = opts

        idx = graph.node_index
        if request.origin not in idx:
            raise InvalidRequestError(f"origin node '{request.origin}' not in graph")
        if request.destination not in idx:
            raise InvalidRequestError(f"destination node '{request.destination}' not in graph")
        self.origin = idx[request.origin]
        self.dest = idx[request.destination]

        self.allowed = request.allowed_modes
        self.walk_allowed = Mode.WALK in self.allowed
        self.board_allowed = Mode.PT in self.allowed
        self.mult_walk = mults[Mode.WALK]
        self.mult_pt = mults[Mode.PT]

        self.nveh = len(request.vehicles)
        self.veh_loc: list[int] = []
        self.veh_leg_mode: list[Mode] = []
        self.veh_drive_mode: list[Mode] = []
        self.veh_mult: list[float] = []
        self.veh_dims: list[tuple[float, float, float, float] | None] = []
        self.veh_pick_s: list[float] = []
        self.veh_park_s: list[float] = []
        self.veh_adj: list[list[list[tuple]]] = []
        self.veh_at: dict[int, list[int]] = {}
        for i, v in enumerate(request.vehicles):
            if v.location not in idx:
                raise InvalidRequestError(f"vehicle '{v.id}' location '{v.location}' not in graph")
            self.veh_loc.append(idx[v.location])
            leg_mode = v.kind.riding_mode
            drive_mode = opts.drive_modes.get(v.id, leg_mode)
            self.veh_leg_mode.append(leg_mode)
            self.veh_drive_mode.append(drive_mode)
            self.veh_mult.append(mults[leg_mode])
            dims = KIND_PROFILES[v.kind]
            self.veh_dims.append(
                None if v.id in opts.ignore_dimensions
                else (dims.width_m, dims.length_m, dims.height_m, dims.weight_kg)
            )
            self.veh_pick_s.append(request.switch_costs.pickup_s[v.kind])
            self.veh_park_s.append(request.switch_costs.park_s[v.kind])
            self.veh_adj.append(graph.adj_vehicle[drive_mode])
            self.veh_at.setdefault(idx[v.location], []).append(i)

        self.force_first: int | None = None
        if opts.force_first_vehicle is not None:
            for i, v in enumerate(request.vehicles):
                if v.id == opts.force_first_vehicle:
                    self.force_first = i
                    break
            else:
                raise InvalidRequestError(
                    f"forced first vehicle '{opts.force_first_vehicle}' not in request"
                )

        board_base = request.switch_costs.board_s
        self.board_secs = [h / 2.0 + board_base for h in graph.headways]

        self.factors: dict[tuple[int, int, Mode], float] | None = None
        if speed_factors:
            converted = {}
            for (u, v, mode), f in speed_factors.items():
                if u in idx and v in idx:
                    converted[(idx[u], idx[v], mode)] = f
            self.factors = converted or None

        # State encoding: ((node * C + carrier) * NM + used) * 2 + moved.
        # Carrier 0 is on-foot, 1..nveh rides that vehicle, above that sits
        # aboard transit line (carrier - 1 - nveh).  `moved` tracks whether the
        # current carrier stretch has traversed an edge yet, which is what
        # makes the leg-count tie-break additive per transition.
        self.C = 1 + self.nveh + len(graph.line_ids)
        self.NM = 1 << self.nveh

    # -- state encoding ------------------------------------------------------

    def encode(self, node: int, carrier: int, used: int, moved: int) -> int:
        return ((node * self.C + carrier) * self.NM + used) * 2 + moved

    def decode(self, state: int) -> tuple[int, int, int, int]:
        rest, moved = divmod(state, 2)
        rest, used = divmod(rest, self.NM)
        node, carrier = divmod(rest, self.C)
        return node, carrier, used, moved

    def start_state(self) -> int:
        return self.encode(self.origin, _FOOT, 0, 0)

    def is_terminal(self, node: int, carrier: int) -> bool:
        return node == self.dest and carrier == _FOOT

    # -- transition relation -------------------------------------------------

    def _can_drop(self, node: int, vi: int) -> bool:
        vehicle = self.request.vehicles[vi]
        vid = vehicle.id
        facilities = self.graph.parking_at.get(node, ())
        if facilities and vid in self.opts.drop_any_facility:
            return True
        kind = self.opts.drop_kind_override.get(vid, vehicle.kind)
        check_capacity = vid not in self.opts.skip_drop_capacity
        dims = KIND_PROFILES[vehicle.kind]
        for fac in facilities:
            if kind not in fac.accepts:
                continue
            if check_capacity:
                if fac.capacity_width_m is not None and dims.width_m > fac.capacity_width_m:
                    continue
                if fac.capacity_length_m is not None and dims.length_m > fac.capacity_length_m:
                    continue
            return True
        if (
            node == self.dest
            and vid not in self.opts.no_implicit_destination
            and vehicle.kind in self.request.implicit_destination_parking
        ):
            return True
        return False

    def transitions(self, node: int, carrier: int, used: int, moved: int) -> list[tuple]:
        """All transitions from a state: (next_state, dcost, ddur, dlegs, trace)."""
        out: list[tuple] = []
        dist_obj = self.distance_objective
        factors = self.factors
        leg_start = 0 if moved else 1

        if carrier == _FOOT:
            forced = (
                self.force_first is not None
                and not used & (1 << self.force_first)
            )
            if not forced and self.walk_allowed:
                mult = self.mult_walk
                for entry in self.graph.adj_walk[node]:
                    to, secs, length = entry
                    if factors is not None:
                        f = factors.get((node, to, Mode.WALK))
                        if f is not None:
                            secs = secs / f
                    cost = length if dist_obj else secs * mult
                    assert cost >= 0.0 and secs >= 0.0
                    out.append((
                        self.encode(to, _FOOT, used, 1),
                        cost, secs, leg_start, ("edge", to, secs, length),
                    ))
            if not forced and self.board_allowed:
                mult = self.mult_pt
                for j in self.graph.boardable_lines[node]:
                    secs = self.board_secs[j]
                    cost = 0.0 if dist_obj else secs * mult
                    assert cost >= 0.0 and secs >= 0.0
                    out.append((
                        self.encode(node, 1 + self.nveh + j, used, 0),
                        cost, secs, 0, ("board", j, secs),
                    ))
            for vi in self.veh_at.get(node, ()):
                if used & (1 << vi):
                    continue
                if forced and vi != self.force_first:
                    continue
                if self.veh_drive_mode[vi] not in self.allowed:
                    continue
                # Without walking, transfers away from the vehicle are not
                # actionable: pickups happen only at the origin itself.
                if not self.walk_allowed and node != self.origin:
                    continue
                secs = self.veh_pick_s[vi]
                cost = 0.0 if dist_obj else secs * self.veh_mult[vi]
                assert cost >= 0.0 and secs >= 0.0
                out.append((
                    self.encode(node, 1 + vi, used, 0),
                    cost, secs, 0, ("pickup", vi, secs),
                ))
            return out

        if carrier <= self.nveh:
            vi = carrier - 1
            mult = self.veh_mult[vi]
            dims = self.veh_dims[vi]
            drive_mode = self.veh_drive_mode[vi]
            for entry in self.veh_adj[vi][node]:
                to, secs, length, max_w, max_l, max_h, max_wt = entry
                if dims is not None and (
                    dims[0] > max_w or dims[1] > max_l or dims[2] > max_h or dims[3] > max_wt
                ):
                    continue
                if factors is not None:
                    f = factors.get((node, to, drive_mode))
                    if f is not None:
                        secs = secs / f
                cost = length if dist_obj else secs * mult
                assert cost >= 0.0 and secs >= 0.0
                out.append((
                    self.encode(to, carrier, used, 1),
                    cost, secs, leg_start, ("edge", to, secs, length),
                ))
            if (self.walk_allowed or node == self.dest) and self._can_drop(node, vi):
                secs = self.veh_park_s[vi]
                cost = 0.0 if dist_obj else secs * mult
                assert cost >= 0.0 and secs >= 0.0
                out.append((
                    self.encode(node, _FOOT, used | (1 << vi), 0),
                    cost, secs, 0, ("drop", vi, secs),
                ))
            return out

        j = carrier - 1 - self.nveh
        mult = self.mult_pt
        for entry in self.graph.adj_pt[node]:
            to, secs, length, line = entry
            if line != j:
                continue
            if factors is not None:
                f = factors.get((node, to, Mode.PT))
                if f is not None:
                    secs = secs / f
            cost = length if dist_obj else secs * mult
            assert cost >= 0.0 and secs >= 0.0
            out.append((
                self.encode(to, carrier, used, 1),
                cost, secs, leg_start, ("edge", to, secs, length),
            ))
        out.append((self.encode(node, _FOOT, used, 0), 0.0, 0.0, 0, ("alight",)))
        return out

    # -- route assembly ------------------------------------------------------

    def assemble(self, traces: list[tuple]) -> Route:
        node_ids = self.graph.node_ids
        stretches: list[dict] = []
        current = {
            "carrier": _FOOT, "start": self.origin, "edges": [], "entry": 0.0, "exit": 0.0,
        }
        node = self.origin
        for trace in traces:
            kind = trace[0]
            if kind == "edge":
                current["edges"].append(trace[1:])
                node = trace[1]
            elif kind == "board":
                stretches.append(current)
                current = {
                    "carrier": 1 + self.nveh + trace[1], "start": node,
                    "edges": [], "entry": trace[2], "exit": 0.0,
                }
            elif kind == "pickup":
                stretches.append(current)
                current = {
                    "carrier": 1 + trace[1], "start": node,
                    "edges": [], "entry": trace[2], "exit": 0.0,
                }
            elif kind == "drop":
                current["exit"] = trace[2]
                stretches.append(current)
                current = {"carrier": _FOOT, "start": node, "edges": [], "entry": 0.0, "exit": 0.0}
            else:  # alight
                stretches.append(current)
                current = {"carrier": _FOOT, "start": node, "edges": [], "entry": 0.0, "exit": 0.0}
        stretches.append(current)

        legs: list[RouteLeg] = []
        for s in stretches:
            transfer = s["entry"] + s["exit"]
            if not s["edges"] and transfer == 0.0:
                continue
            carrier = s["carrier"]
            if carrier == _FOOT:
                mode, line_id, vehicle_id = Mode.WALK, None, None
            elif carrier <= self.nveh:
                vi = carrier - 1
                mode = self.veh_leg_mode[vi]
                line_id = None
                vehicle_id = self.request.vehicles[vi].id
            else:
                mode = Mode.PT
                line_id = self.graph.line_ids[carrier - 1 - self.nveh]
                vehicle_id = None
            nodes = [node_ids[s["start"]]]
            distance = 0.0
            in_motion = 0.0
            for to, secs, length in s["edges"]:
                nodes.append(node_ids[to])
                distance += length
                in_motion += secs
            legs.append(RouteLeg(
                mode=mode,
                nodes=tuple(nodes),
                distance_m=distance,
                in_motion_s=in_motion,
                transfer_s=transfer,
                transit_line=line_id,
                vehicle_id=vehicle_id,
            ))

        total_duration = sum(leg.in_motion_s + leg.transfer_s for leg in legs)
        total_distance = sum(leg.distance_m for leg in legs)
        if self.distance_objective:
            perceived = total_duration
        else:
            perceived = sum(
                (leg.in_motion_s + leg.transfer_s) * self.mults[leg.mode] for leg in legs
            )
        return Route(
            legs=tuple(legs),
            total_duration_s=total_duration,
            total_distance_m=total_distance,
            perceived_cost=perceived,
            profile_id=self.profile_id,
        )


# -- search -------------------------------------------------------------------


def _node_sequence(state: int, parents: dict, ctx: _Context) -> list[str]:
    rev: list[int] = []
    cur = state
    while True:
        entry = parents[cur]
        if entry is None:
            rev.append(ctx.origin)
            break
        prev, trace = entry
        if trace[0] == "edge":
            rev.append(trace[1])
        cur = prev
    ids = ctx.graph.node_ids
    return [ids[i] for i in reversed(rev)]


def _refine_tie(ctx, parents, settled, heap, state, nstate, trace, nkey) -> None:
    """On an exact (cost, duration, legs) tie, keep the lexicographically
    smaller node-id sequence; reopen the state if it was already settled."""
    candidate = _node_sequence(state, parents, ctx)
    if trace[0] == "edge":
        candidate.append(ctx.graph.node_ids[trace[1]])
    if candidate < _node_sequence(nstate, parents, ctx):
        parents[nstate] = (state, trace)
        if nstate in settled:
            settled.discard(nstate)
            heappush(heap, (nkey[0], nkey[1], nkey[2], nstate))


def _dijkstra(ctx: _Context) -> list[tuple] | None:
    """Returns the optimal trace list, or None when the goal is unreachable.

    The priority key is the additive triple (cost, duration, legs-started);
    exact triples are refined by comparing node-id sequences, which realizes
    the lexicographic first-divergence tie-break.  Equal-key states keep
    draining after the goal settles so a tied-but-smaller path can still
    replace the recorded parents.

    The transition relation is inlined here for throughput; the generator in
    _Context.transitions is the readable twin that the enumeration oracle
    runs on, and the equivalence of the two is what the randomized
    oracle tests pin down.
    """
    start = ctx.start_state()
    if ctx.origin == ctx.dest:
        return []
    labels: dict[int, tuple[float, float, int]] = {start: (0.0, 0.0, 0)}
    parents: dict[int, tuple[int, tuple] | None] = {start: None}
    heap: list[tuple[float, float, int, int]] = [(0.0, 0.0, 0, start)]
    settled: set[int] = set()
    goal_key: tuple[float, float, int] | None = None
    goal_state: int | None = None

    graph = ctx.graph
    adj_walk = graph.adj_walk
    adj_pt = graph.adj_pt
    boardable = graph.boardable_lines
    parking_at = graph.parking_at
    veh_at = ctx.veh_at
    C = ctx.C
    NM = ctx.NM
    nveh = ctx.nveh
    dest = ctx.dest
    origin = ctx.origin
    dist_obj = ctx.distance_objective
    factors = ctx.factors
    walk_allowed = ctx.walk_allowed
    board_allowed = ctx.board_allowed
    mult_walk = ctx.mult_walk
    mult_pt = ctx.mult_pt
    force_first = ctx.force_first
    force_bit = 0 if force_first is None else 1 << force_first
    best_get = labels.get
    push = heappush

    while heap:
        cost, dur, legs, state = heappop(heap)
        if goal_key is not None and (cost, dur, legs) > goal_key:
            break
        if state in settled:
            continue
        lbl = labels[state]
        if lbl[0] != cost or lbl[1] != dur or lbl[2] != legs:
            continue  # stale heap entry
        settled.add(state)
        moved = state & 1
        rest = state >> 1
        rest, used = divmod(rest, NM)
        node, carrier = divmod(rest, C)
        if node == dest and carrier == _FOOT:
            if goal_key is None:
                goal_key = (cost, dur, legs)
                goal_state = state
            continue
        leg_inc = 0 if moved else 1

        if carrier == _FOOT:
            forced = force_first is not None and not used & force_bit
            if not forced and walk_allowed:
                for entry in adj_walk[node]:
                    to, secs, length = entry
                    if factors is not None:
                        f = factors.get((node, to, Mode.WALK))
                        if f is not None:
                            secs = secs / f
                    assert secs >= 0.0
                    ncost = cost + (length if dist_obj else secs * mult_walk)
                    ndur = dur + secs
                    nlegs = legs + leg_inc
                    nstate = (to * C * NM + used) * 2 + 1
                    old = best_get(nstate)
                    if old is None or ncost < old[0] or (
                        ncost == old[0]
                        and (ndur < old[1] or (ndur == old[1] and nlegs < old[2]))
                    ):
                        labels[nstate] = (ncost, ndur, nlegs)
                        parents[nstate] = (state, ("edge", to, secs, length))
                        push(heap, (ncost, ndur, nlegs, nstate))
                    elif ncost == old[0] and ndur == old[1] and nlegs == old[2]:
                        _refine_tie(ctx, parents, settled, heap, state, nstate,
                                    ("edge", to, secs, length), old)
            if not forced and board_allowed:
                for j in boardable[node]:
                    secs = ctx.board_secs[j]
                    ncost = cost + (0.0 if dist_obj else secs * mult_pt)
                    ndur = dur + secs
                    nstate = ((node * C + 1 + nveh + j) * NM + used) * 2
                    old = best_get(nstate)
                    if old is None or ncost < old[0] or (
                        ncost == old[0]
                        and (ndur < old[1] or (ndur == old[1] and legs < old[2]))
                    ):
                        labels[nstate] = (ncost, ndur, legs)
                        parents[nstate] = (state, ("board", j, secs))
                        push(heap, (ncost, ndur, legs, nstate))
                    elif ncost == old[0] and ndur == old[1] and legs == old[2]:
                        _refine_tie(ctx, parents, settled, heap, state, nstate,
                                    ("board", j, secs), old)
            if node in veh_at:
                for vi in veh_at[node]:
                    if used & (1 << vi):
                        continue
                    if forced and vi != force_first:
                        continue
                    if ctx.veh_drive_mode[vi] not in ctx.allowed:
                        continue
                    if not walk_allowed and node != origin:
                        continue
                    secs = ctx.veh_pick_s[vi]
                    ncost = cost + (0.0 if dist_obj else secs * ctx.veh_mult[vi])
                    ndur = dur + secs
                    nstate = ((node * C + 1 + vi) * NM + used) * 2
                    old = best_get(nstate)
                    if old is None or ncost < old[0] or (
                        ncost == old[0]
                        and (ndur < old[1] or (ndur == old[1] and legs < old[2]))
                    ):
                        labels[nstate] = (ncost, ndur, legs)
                        parents[nstate] = (state, ("pickup", vi, secs))
                        push(heap, (ncost, ndur, legs, nstate))
                    elif ncost == old[0] and ndur == old[1] and legs == old[2]:
                        _refine_tie(ctx, parents, settled, heap, state, nstate,
                                    ("pickup", vi, secs), old)

        elif carrier <= nveh:
            vi = carrier - 1
            mult = ctx.veh_mult[vi]
            dims = ctx.veh_dims[vi]
            drive_mode = ctx.veh_drive_mode[vi]
            for entry in ctx.veh_adj[vi][node]:
                to, secs, length, max_w, max_l, max_h, max_wt = entry
                if dims is not None and (
                    dims[0] > max_w or dims[1] > max_l or dims[2] > max_h or dims[3] > max_wt
                ):
                    continue
                if factors is not None:
                    f = factors.get((node, to, drive_mode))
                    if f is not None:
                        secs = secs / f
                assert secs >= 0.0
                ncost = cost + (length if dist_obj else secs * mult)
                ndur = dur + secs
                nlegs = legs + leg_inc
                nstate = ((to * C + carrier) * NM + used) * 2 + 1
                old = best_get(nstate)
                if old is None or ncost < old[0] or (
                    ncost == old[0]
                    and (ndur < old[1] or (ndur == old[1] and nlegs < old[2]))
                ):
                    labels[nstate] = (ncost, ndur, nlegs)
                    parents[nstate] = (state, ("edge", to, secs, length))
                    push(heap, (ncost, ndur, nlegs, nstate))
                elif ncost == old[0] and ndur == old[1] and nlegs == old[2]:
                    _refine_tie(ctx, parents, settled, heap, state, nstate,
                                ("edge", to, secs, length), old)
            if (
                (walk_allowed or node == dest)
                and (node in parking_at or node == dest)
                and ctx._can_drop(node, vi)
            ):
                secs = ctx.veh_park_s[vi]
                ncost = cost + (0.0 if dist_obj else secs * mult)
                ndur = dur + secs
                nstate = ((node * C) * NM + (used | (1 << vi))) * 2
                old = best_get(nstate)
                if old is None or ncost < old[0] or (
                    ncost == old[0]
                    and (ndur < old[1] or (ndur == old[1] and legs < old[2]))
                ):
                    labels[nstate] = (ncost, ndur, legs)
                    parents[nstate] = (state, ("drop", vi, secs))
                    push(heap, (ncost, ndur, legs, nstate))
                elif ncost == old[0] and ndur == old[1] and legs == old[2]:
                    _refine_tie(ctx, parents, settled, heap, state, nstate,
                                ("drop", vi, secs), old)

        else:
            j = carrier - 1 - nveh
            for entry in adj_pt[node]:
                to, secs, length, line = entry
                if line != j:
                    continue
                if factors is not None:
                    f = factors.get((node, to, Mode.PT))
                    if f is not None:
                        secs = secs / f
                assert secs >= 0.0
                ncost = cost + (length if dist_obj else secs * mult_pt)
                ndur = dur + secs
                nlegs = legs + leg_inc
                nstate = ((to * C + carrier) * NM + used) * 2 + 1
                old = best_get(nstate)
                if old is None or ncost < old[0] or (
                    ncost == old[0]
                    and (ndur < old[1] or (ndur == old[1] and nlegs < old[2]))
                ):
                    labels[nstate] = (ncost, ndur, nlegs)
                    parents[nstate] = (state, ("edge", to, secs, length))
                    push(heap, (ncost, ndur, nlegs, nstate))
                elif ncost == old[0] and ndur == old[1] and nlegs == old[2]:
                    _refine_tie(ctx, parents, settled, heap, state, nstate,
                                ("edge", to, secs, length), old)
            nstate = (node * C * NM + used) * 2
            old = best_get(nstate)
            if old is None or cost < old[0] or (
                cost == old[0] and (dur < old[1] or (dur == old[1] and legs < old[2]))
            ):
                labels[nstate] = (cost, dur, legs)
                parents[nstate] = (state, ("alight",))
                push(heap, (cost, dur, legs, nstate))
            elif cost == old[0] and dur == old[1] and legs == old[2]:
                _refine_tie(ctx, parents, settled, heap, state, nstate, ("alight",), old)

    if goal_state is None:
        return None
    rev: list[tuple] = []
    cur = goal_state
    while True:
        entry = parents[cur]
        if entry is None:
            break
        cur, trace = entry
        rev.append(trace)
    rev.reverse()
    return rev


def _run(ctx: _Context) -> Route:
    traces = _dijkstra(ctx)
    if traces is None:
        raise UnreachableError(
            f"no feasible route from '{ctx.request.origin}' to '{ctx.request.destination}'"
        )
    return ctx.assemble(traces)


def shortest_route(
    graph: Graph,
    request: RoutingRequest,
    profile: MultiplierProfile,
    *,
    speed_factors: dict[tuple[str, str, Mode], float] | None = None,
    _opts: _SearchOptions = _DEFAULT_OPTIONS,
) -> Route:
    """Minimal perceived-cost route; ties fall to duration, legs, node ids."""
    if request.objective is not Objective.FASTEST_TIME:
        raise InvalidRequestError("shortest_route handles fastest_time requests only")
    ctx = _Context(
        graph, request, profile.multipliers, profile.id,
        distance_objective=False, opts=_opts, speed_factors=speed_factors,
    )
    return _run(ctx)


def shortest_distance_route(
    graph: Graph,
    request: RoutingRequest,
    *,
    speed_factors: dict[tuple[str, str, Mode], float] | None = None,
) -> Route:
    """Minimal total-distance route; transfers add duration but no distance.

    Perception multipliers deliberately do not apply; the reported
    perceived_cost equals total_duration_s under profile id "distance".
    """
    if request.objective is not Objective.SHORTEST_DISTANCE:
        raise InvalidRequestError("shortest_distance_route handles shortest_distance requests only")
    ctx = _Context(
        graph, request, {m: 1.0 for m in MODE_ORDER}, "distance",
        distance_objective=True, speed_factors=speed_factors,
    )
    return _run(ctx)


def enumerate_feasible_routes(
    graph: Graph,
    request: RoutingRequest,
    max_states: int = 100_000,
    profile: MultiplierProfile | None = None,
    *,
    speed_factors: dict[tuple[str, str, Mode], float] | None = None,
    _opts: _SearchOptions = _DEFAULT_OPTIONS,
) -> list[Route]:
    """Exhaustively enumerate routes along all simple state paths.

    Exponential by nature; the guard rejects instances whose reachable state
    space exceeds max_states.  Intended as the brute-force optimality oracle
    for the search, so it deliberately avoids Dijkstra entirely.  _opts and
    speed_factors mirror shortest_route so constrained searches can be checked
    against the same enumeration.
    """
    if profile is None:
        profile = NEUTRAL_PROFILE
    distance_objective = request.objective is Objective.SHORTEST_DISTANCE
    ctx = _Context(
        graph, request,
        {m: 1.0 for m in MODE_ORDER} if distance_objective else profile.multipliers,
        "distance" if distance_objective else profile.id,
        distance_objective=distance_objective,
        opts=_opts,
        speed_factors=speed_factors,
    )
    start = ctx.start_state()

    # Reachability sweep: the guard counts (node, carrier, used) states, the
    # `moved` bit is projected away (state >> 1 strips it).
    seen: set[int] = {start}
    coarse: set[int] = {start >> 1}
    queue: list[int] = [start]
    while queue:
        state = queue.pop()
        node, carrier, used, moved = ctx.decode(state)
        for nstate, *_ in ctx.transitions(node, carrier, used, moved):
            if nstate in seen:
                continue
            seen.add(nstate)
            coarse.add(nstate >> 1)
            if len(coarse) > max_states:
                raise StateBudgetError(
                    f"reachable state space exceeds {max_states} states"
                )
            queue.append(nstate)

    routes: list[Route] = []
    traces: list[tuple] = []
    on_path: set[int] = {start >> 1}
    node, carrier, used, moved = ctx.decode(start)
    if ctx.is_terminal(node, carrier):
        routes.append(ctx.assemble([]))
    frames = [(start, iter(ctx.transitions(node, carrier, used, moved)), False)]
    while frames:
        state, it, has_trace = frames[-1]
        step = next(it, None)
        if step is None:
            frames.pop()
            on_path.discard(state >> 1)
            if has_trace:
                traces.pop()
            continue
        nstate, _dc, _dd, _dl, trace = step
        if nstate >> 1 in on_path:
            continue
        on_path.add(nstate >> 1)
        traces.append(trace)
        node, carrier, used, moved = ctx.decode(nstate)
        if ctx.is_terminal(node, carrier):
            routes.append(ctx.assemble(list(traces)))
        frames.append((nstate, iter(ctx.transitions(node, carrier, used, moved)), True))
    return routes
