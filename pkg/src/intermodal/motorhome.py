"""Three-option trip planning for motorhome travellers.

The trip always starts by driving the motorhome; the options differ in where
the vehicle may legally or practically be left and in how the rest of the trip
continues:

  designated_motorhome  drives the motorhome network respecting dimension
                        limits and parks only at facilities accepting
                        motorhomes (capacity checked).
  car_parking_risk      drives the car network ignoring dimension limits and
                        parks at car facilities; flagged as risky since the
                        spot is not designated for the vehicle.
  park_closest          as car_parking_risk, but the onward trip is walking
                        only, which pushes the parking spot as close to the
                        destination as the objective allows.

Unreachable options are omitted; the returned order is always the above.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from intermodal.graph import Graph, Mode, VehicleKind
from intermodal.search import (
    InvalidRequestError,
    MultiplierProfile,
    Objective,
    OwnedVehicle,
    Route,
    RoutingRequest,
    SwitchCosts,
    UnreachableError,
    _SearchOptions,
    shortest_route,
)

DEFAULT_EGRESS_MODES = frozenset({Mode.WALK, Mode.PT})


class MotorhomeOptionLabel(str, Enum):
    DESIGNATED_MOTORHOME = "designated_motorhome"
    CAR_PARKING_RISK = "car_parking_risk"
    PARK_CLOSEST = "park_closest"


@dataclass(frozen=True)
class MotorhomeRequest:
    origin: str
    destination: str
    vehicles: tuple[OwnedVehicle, ...]
    egress_modes: frozenset[Mode] = DEFAULT_EGRESS_MODES
    departure_time: str | None = None
    switch_costs: SwitchCosts = field(default_factory=SwitchCosts)

    def __post_init__(self):
        object.__setattr__(self, "vehicles", tuple(self.vehicles))
        object.__setattr__(self, "egress_modes", frozenset(self.egress_modes))
        motorhomes = [v for v in self.vehicles if v.kind is VehicleKind.MOTORHOME]
        if len(motorhomes) != 1:
            raise InvalidRequestError("request must contain exactly one motorhome vehicle")
        if motorhomes[0].location != self.origin:
            raise InvalidRequestError(
                f"motorhome must be located at the origin '{self.origin}', "
                f"not '{motorhomes[0].location}'"
            )

    @property
    def motorhome(self) -> OwnedVehicle:
        return next(v for v in self.vehicles if v.kind is VehicleKind.MOTORHOME)


@dataclass(frozen=True)
class MotorhomeOption:
    label: MotorhomeOptionLabel
    route: Route
    parking_node: str | None
    risk_flag: bool


def _parking_node(route: Route, vehicle_id: str) -> str | None:
    for leg in route.legs:
        if leg.vehicle_id == vehicle_id:
            return leg.nodes[-1]
    return None


def three_option_routes(
    graph: Graph,
    request: MotorhomeRequest,
    profile: MultiplierProfile,
    *,
    speed_factors: dict[tuple[str, str, Mode], float] | None = None,
) -> list[MotorhomeOption]:
    """Up to three labeled options, in fixed label order."""
    mh = request.motorhome
    as_car = _SearchOptions(
        drive_modes={mh.id: Mode.CAR},
        ignore_dimensions=frozenset({mh.id}),
        drop_kind_override={mh.id: VehicleKind.CAR},
        skip_drop_capacity=frozenset({mh.id}),
        no_implicit_destination=frozenset({mh.id}),
        force_first_vehicle=mh.id,
    )
    plans = (
        (
            MotorhomeOptionLabel.DESIGNATED_MOTORHOME,
            Mode.MOTORHOME,
            request.egress_modes,
            _SearchOptions(
                no_implicit_destination=frozenset({mh.id}),
                force_first_vehicle=mh.id,
            ),
            False,
        ),
        (MotorhomeOptionLabel.CAR_PARKING_RISK, Mode.CAR, request.egress_modes, as_car, True),
        (MotorhomeOptionLabel.PARK_CLOSEST, Mode.CAR, frozenset({Mode.WALK}), as_car, True),
    )

    options: list[MotorhomeOption] = []
    for label, drive_mode, egress, opts, risky in plans:
        base = RoutingRequest(
            origin=request.origin,
            destination=request.destination,
            allowed_modes=egress | {drive_mode},
            vehicles=request.vehicles,
            objective=Objective.FASTEST_TIME,
            departure_time=request.departure_time,
            switch_costs=request.switch_costs,
        )
        try:
            route = shortest_route(graph, base, profile, speed_factors=speed_factors, _opts=opts)
        except UnreachableError:
            continue
        options.append(MotorhomeOption(
            label=label,
            route=route,
            parking_node=_parking_node(route, mh.id),
            risk_flag=risky,
        ))
    return options
