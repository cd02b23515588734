"""Intermodal route planning with perception-weighted travel times."""

from intermodal.graph import (
    Edge,
    Graph,
    GraphFormatError,
    Mode,
    Node,
    ParkingFacility,
    SnapError,
    TransitLine,
    VehicleKind,
    parse_graph,
    serialize_graph,
    snap,
)
from intermodal.search import (
    InvalidRequestError,
    MultiplierProfile,
    Objective,
    OwnedVehicle,
    Route,
    RouteLeg,
    RoutingRequest,
    StateBudgetError,
    SwitchCosts,
    UnreachableError,
    enumerate_feasible_routes,
    perceived_cost_under,
    shortest_distance_route,
    shortest_route,
)

__all__ = [
    "Edge",
    "Graph",
    "GraphFormatError",
    "InvalidRequestError",
    "Mode",
    "MultiplierProfile",
    "Node",
    "Objective",
    "OwnedVehicle",
    "ParkingFacility",
    "Route",
    "RouteLeg",
    "RoutingRequest",
    "SnapError",
    "StateBudgetError",
    "SwitchCosts",
    "TransitLine",
    "UnreachableError",
    "VehicleKind",
    "enumerate_feasible_routes",
    "parse_graph",
    "perceived_cost_under",
    "serialize_graph",
    "shortest_distance_route",
    "shortest_route",
    "snap",
]
