"""Wire formats shared by the HTTP service and the CLI.

Request bodies are validated by pydantic models with unknown keys rejected,
mirroring the strictness of the graph format.  Responses are emitted through
canonical_json so repeated runs over the same inputs are byte-identical:
keys sorted, floats fixed to at most six decimals with trailing zeros
stripped.
"""

from __future__ import annotations

import math
from datetime import datetime, timezone
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .alternatives import Alternative, DEFAULT_PROFILE_FAMILY, ProfileFamily
from .graph import Graph, Mode, SnapError, VehicleKind, snap
from .motorhome import MotorhomeOption, MotorhomeRequest
from .search import (
    InvalidRequestError,
    MultiplierProfile,
    Objective,
    OwnedVehicle,
    Route,
    RoutingRequest,
    SwitchCosts,
)

MODE_NAMES = tuple(m.value for m in Mode)
KIND_NAMES = tuple(k.value for k in VehicleKind)


def parse_expiry(text: str | None) -> datetime | None:
    """ISO-8601 to aware datetime; naive stamps are taken as UTC."""
    if text is None:
        return None
    if text.endswith(("Z", "z")):  # fromisoformat grows Z support only in 3.11
        text = text[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(text)
    except ValueError as exc:
        raise InvalidRequestError(f"bad expires_at timestamp: {text!r}") from exc
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp


# -- canonical JSON ----------------------------------------------------------


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite float in response: {x!r}")
    text = format(x, ".6f").rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def canonical_json(value, *, _indent: str = "") -> str:
    """Deterministic JSON: sorted keys, floats at most six decimals."""
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, str):
        import json

        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        items = []
        for key in sorted(value):
            if not isinstance(key, str):
                raise TypeError(f"non-string key: {key!r}")
            items.append(f"{canonical_json(key)}: {canonical_json(value[key])}")
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(canonical_json(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


# -- request models ----------------------------------------------------------


class LocationModel(BaseModel):
    """Either a node id or a lat/lon pair (snapped to the nearest node)."""

    model_config = ConfigDict(extra="forbid")

    node: str | None = None
    lat: float | None = None
    lon: float | None = None

    @model_validator(mode="after")
    def _one_form(self):
        has_node = self.node is not None
        has_coords = self.lat is not None or self.lon is not None
        if has_node and has_coords:
            raise ValueError("give either node or lat/lon, not both")
        if not has_node and (self.lat is None or self.lon is None):
            raise ValueError("give a node id or both lat and lon")
        return self

    def resolve(self, graph: Graph, where: str | None = None) -> str:
        """Node id, snapping coordinates; snap failures are labeled with
        `where` so clients can tell which endpoint missed the graph."""
        if self.node is not None:
            return self.node
        try:
            return snap((self.lat, self.lon), graph)
        except SnapError as exc:
            exc.where = where
            raise


class VehicleModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    kind: Literal["bike", "car", "motorhome"]
    location: LocationModel

    def to_vehicle(self, graph: Graph, where: str | None = None) -> OwnedVehicle:
        return OwnedVehicle(
            id=self.id,
            kind=VehicleKind(self.kind),
            location=self.location.resolve(graph, where),
        )


class SwitchCostsModel(BaseModel):
    """Partial overrides; omitted entries keep the built-in defaults."""

    model_config = ConfigDict(extra="forbid")

    pickup_s: dict[Literal["bike", "car", "motorhome"], float] = Field(default_factory=dict)
    park_s: dict[Literal["bike", "car", "motorhome"], float] = Field(default_factory=dict)
    board_s: float | None = None

    @field_validator("pickup_s", "park_s")
    @classmethod
    def _non_negative(cls, v):
        for kind, secs in v.items():
            if secs < 0:
                raise ValueError(f"{kind}: switch cost must be non-negative")
        return v

    @field_validator("board_s")
    @classmethod
    def _board_non_negative(cls, v):
        if v is not None and v < 0:
            raise ValueError("board_s must be non-negative")
        return v

    def to_switch_costs(self) -> SwitchCosts:
        kwargs = {}
        if self.board_s is not None:
            kwargs["board_s"] = float(self.board_s)
        return SwitchCosts(
            pickup_s={VehicleKind(k): float(s) for k, s in self.pickup_s.items()},
            park_s={VehicleKind(k): float(s) for k, s in self.park_s.items()},
            **kwargs,
        )


class ProfileModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    multipliers: dict[Literal["walk", "bike", "car", "motorhome", "pt"], float]

    def to_profile(self) -> MultiplierProfile:
        return MultiplierProfile(
            id=self.id, multipliers={Mode(m): float(v) for m, v in self.multipliers.items()}
        )


class RouteRequestModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    origin: LocationModel
    destination: LocationModel
    modes: list[Literal["walk", "bike", "car", "motorhome", "pt"]]
    vehicles: list[VehicleModel] = Field(default_factory=list)
    objective: Literal["fastest_time", "shortest_distance"] = "fastest_time"
    departure_time: str | None = None
    switch_costs: SwitchCostsModel | None = None
    profiles: list[ProfileModel] | None = None

    @field_validator("modes")
    @classmethod
    def _modes_non_empty(cls, v):
        if not v:
            raise ValueError("modes must not be empty")
        if len(set(v)) != len(v):
            raise ValueError("modes must be unique")
        return v

    def to_request(self, graph: Graph) -> RoutingRequest:
        return RoutingRequest(
            origin=self.origin.resolve(graph, "origin"),
            destination=self.destination.resolve(graph, "destination"),
            allowed_modes=frozenset(Mode(m) for m in self.modes),
            vehicles=tuple(
                v.to_vehicle(graph, f"vehicles[{i}].location")
                for i, v in enumerate(self.vehicles)
            ),
            objective=Objective(self.objective),
            departure_time=self.departure_time,
            switch_costs=(self.switch_costs or SwitchCostsModel()).to_switch_costs(),
        )

    def to_family(self) -> ProfileFamily:
        if self.profiles is None:
            return DEFAULT_PROFILE_FAMILY
        return ProfileFamily(tuple(p.to_profile() for p in self.profiles))


class MotorhomeRequestModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    origin: LocationModel
    destination: LocationModel
    vehicles: list[VehicleModel]
    egress_modes: list[Literal["walk", "bike", "car", "pt"]] | None = None
    departure_time: str | None = None
    switch_costs: SwitchCostsModel | None = None
    profile: ProfileModel | None = None

    def to_request(self, graph: Graph) -> MotorhomeRequest:
        kwargs = {}
        if self.egress_modes is not None:
            kwargs["egress_modes"] = frozenset(Mode(m) for m in self.egress_modes)
        return MotorhomeRequest(
            origin=self.origin.resolve(graph, "origin"),
            destination=self.destination.resolve(graph, "destination"),
            vehicles=tuple(
                v.to_vehicle(graph, f"vehicles[{i}].location")
                for i, v in enumerate(self.vehicles)
            ),
            departure_time=self.departure_time,
            switch_costs=(self.switch_costs or SwitchCostsModel()).to_switch_costs(),
            **kwargs,
        )


class OverrideModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    from_node: str = Field(alias="from")
    to: str
    mode: Literal["walk", "bike", "car", "motorhome", "pt"]
    factor: float
    expires_at: str | None = None

    @field_validator("factor")
    @classmethod
    def _factor_range(cls, v):
        if not 0.0 < v <= 10.0:
            raise ValueError("factor must be in (0, 10]")
        return v


class OverridesBodyModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    overrides: list[OverrideModel]


# -- response builders -------------------------------------------------------


def leg_payload(leg) -> dict:
    out = {
        "mode": leg.mode.value,
        "nodes": list(leg.nodes),
        "distance_m": leg.distance_m,
        "in_motion_s": leg.in_motion_s,
        "transfer_s": leg.transfer_s,
    }
    if leg.transit_line is not None:
        out["transit_line"] = leg.transit_line
    if leg.vehicle_id is not None:
        out["vehicle_id"] = leg.vehicle_id
    return out


def route_payload(route: Route) -> dict:
    return {
        "legs": [leg_payload(leg) for leg in route.legs],
        "totals": {
            "duration_s": route.total_duration_s,
            "distance_m": route.total_distance_m,
            "perceived_cost": route.perceived_cost,
            "profile_id": route.profile_id,
        },
    }


def alternative_payload(alt: Alternative) -> dict:
    return {
        **route_payload(alt.route),
        "mode_changes": alt.mode_changes,
        "by_mode": {
            mode.value: {"duration_s": bd.duration_s, "distance_m": bd.distance_m}
            for mode, bd in alt.by_mode.items()
        },
        "warnings": list(alt.warnings),
    }


def motorhome_option_payload(opt: MotorhomeOption) -> dict:
    return {
        **route_payload(opt.route),
        "label": opt.label.value,
        "parking_node": opt.parking_node,
        "risk_flag": opt.risk_flag,
    }


def geometry_payload(graph: Graph, routes: list[Route]) -> dict:
    """lat/lon for every node any returned leg touches, for map drawing."""
    seen: dict[str, list[float]] = {}
    for route in routes:
        for leg in route.legs:
            for node_id in leg.nodes:
                if node_id not in seen:
                    node = graph.nodes[graph.node_index[node_id]]
                    seen[node_id] = [node.lat, node.lon]
    return seen


def error_payload(kind: str, detail: str, **extra) -> dict:
    return {"error": {"kind": kind, "detail": detail, **extra}}
