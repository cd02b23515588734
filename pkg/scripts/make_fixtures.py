#!/usr/bin/env python3
"""Regenerate the JSON fixtures under fixtures/.

Deterministic: edge lengths derive from node coordinates plus a seeded
detour factor, so reruns reproduce the committed files byte for byte.
The script sanity-checks each fixture through the engine before writing.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from intermodal.alternatives import generate_alternatives
from intermodal.graph import (
    Edge,
    Graph,
    Node,
    ParkingFacility,
    TransitLine,
    haversine_m,
    parse_graph,
    serialize_graph,
)
from intermodal.motorhome import MotorhomeRequest, three_option_routes
from intermodal.search import (
    Mode,
    MultiplierProfile,
    NEUTRAL_PROFILE,
    OwnedVehicle,
    RoutingRequest,
    SwitchCosts,
    VehicleKind,
    shortest_route,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def write(path: Path, text: str) -> None:
    path.write_text(text if text.endswith("\n") else text + "\n")
    print(f"wrote {path.relative_to(FIXTURES.parent)}")


def dump_request(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


# -- worked example: walking beats a faster bike under time sensitivity ------


def walk_vs_bike() -> None:
    graph = Graph(
        nodes=[Node("a", 48.2, 16.35), Node("b", 48.21, 16.37)],
        edges=[
            # 15 min on foot vs 11 min riding; perception decides
            Edge("a", "b", 1250.0, {Mode.WALK: 5.0}),
            Edge("a", "b", 2750.0, {Mode.BIKE: 15.0}),
        ],
        name="walk_vs_bike",
    )
    profile = MultiplierProfile(
        "time_sensitive",
        {Mode.WALK: 2.0, Mode.BIKE: 3.0, Mode.CAR: 1.0, Mode.MOTORHOME: 1.0, Mode.PT: 1.0},
    )
    request = RoutingRequest(
        origin="a",
        destination="b",
        allowed_modes={Mode.WALK, Mode.BIKE},
        vehicles=(OwnedVehicle("bike1", VehicleKind.BIKE, "a"),),
        switch_costs=SwitchCosts.zero(),
    )
    route = shortest_route(graph, request, profile)
    assert route.mode_sequence == ("walk",), route.mode_sequence
    assert abs(route.perceived_cost - 1800.0) < 1e-9

    write(FIXTURES / "walk_vs_bike_graph.json", serialize_graph(graph))
    write(FIXTURES / "walk_vs_bike_request.json", dump_request({
        "origin": {"node": "a"},
        "destination": {"node": "b"},
        "modes": ["walk", "bike"],
        "vehicles": [{"id": "bike1", "kind": "bike", "location": {"node": "a"}}],
        "switch_costs": {
            "board_s": 0,
            "pickup_s": {"bike": 0, "car": 0, "motorhome": 0},
            "park_s": {"bike": 0, "car": 0, "motorhome": 0},
        },
        "profiles": [
            {"id": "neutral", "multipliers": {"walk": 1, "bike": 1, "car": 1, "motorhome": 1, "pt": 1}},
            {"id": "time_sensitive", "multipliers": {"walk": 2, "bike": 3, "car": 1, "motorhome": 1, "pt": 1}},
        ],
    }))


# -- demo city ----------------------------------------------------------------

# Node id -> (lat, lon).  A small city: camp west of town, a fast ring road
# south, a walkable center with a metro spine, offices east.
NODES = {
    "camp": (48.1980, 16.3300),
    "w1": (48.2000, 16.3360),
    "w2": (48.2040, 16.3400),
    "w3": (48.2080, 16.3440),
    "r1": (48.1960, 16.3420),
    "r2": (48.1950, 16.3560),
    "r3": (48.1970, 16.3700),
    "r4": (48.2010, 16.3800),
    "c1": (48.2070, 16.3560),
    "c2": (48.2060, 16.3660),
    "c3": (48.2030, 16.3620),
    "old1": (48.2095, 16.3605),
    "e1": (48.2080, 16.3760),
    "e2": (48.2050, 16.3780),
    "e3": (48.2100, 16.3820),
}

LOCAL = {Mode.WALK: 4.8, Mode.BIKE: 15.0, Mode.CAR: 30.0, Mode.MOTORHOME: 30.0}
CENTER = {Mode.WALK: 4.8, Mode.BIKE: 14.0, Mode.CAR: 25.0}
RING = {Mode.CAR: 60.0, Mode.MOTORHOME: 60.0}
CONNECTOR = {Mode.CAR: 45.0, Mode.MOTORHOME: 45.0}
PED = {Mode.WALK: 4.8}

# (u, v, speeds, restrictions); every entry becomes a two-way pair
STREETS = [
    ("camp", "w1", LOCAL, {}),
    ("w1", "w2", LOCAL, {}),
    ("w2", "w3", LOCAL, {}),
    ("w2", "c3", CENTER, {}),
    ("w3", "c1", CENTER, {}),
    ("c1", "old1", PED, {}),
    ("old1", "c2", PED, {}),
    # narrow direct street: cars fit, anything wider does not
    ("c1", "c2", CENTER, {"max_width_m": 2.0}),
    ("c3", "c2", CENTER, {}),
    ("c2", "e1", CENTER, {}),
    ("e1", "e2", CENTER, {}),
    ("e2", "e3", CENTER, {}),
    ("e1", "e3", CENTER, {}),
    ("camp", "r1", CONNECTOR, {}),
    ("r1", "r2", RING, {}),
    ("r2", "r3", RING, {}),
    ("r3", "r4", RING, {}),
    ("r4", "e3", CONNECTOR, {}),
    ("r2", "c3", CONNECTOR, {}),
    ("r3", "e2", {Mode.WALK: 4.8, Mode.BIKE: 15.0, Mode.CAR: 35.0}, {}),
]

METRO_STOPS = ["w3", "c1", "c2", "e1"]
BUS_STOPS = ["r3", "e2"]


def demo_city() -> None:
    rng = random.Random(42)
    nodes = [Node(nid, lat, lon) for nid, (lat, lon) in NODES.items()]
    edges: list[Edge] = []

    def length(u: str, v: str, detour: float) -> float:
        (lat1, lon1), (lat2, lon2) = NODES[u], NODES[v]
        return round(haversine_m(lat1, lon1, lat2, lon2) * detour, 1)

    for u, v, speeds, extra in STREETS:
        detour = round(1.05 + 0.2 * rng.random(), 3)
        lm = length(u, v, detour)
        edges.append(Edge(u, v, lm, dict(speeds), **extra))
        edges.append(Edge(v, u, lm, dict(speeds), **extra))

    lines = [TransitLine("M2", headway_s=420.0), TransitLine("B7", headway_s=720.0)]
    for a, b in zip(METRO_STOPS, METRO_STOPS[1:]):
        lm = length(a, b, 1.02)
        edges.append(Edge(a, b, lm, {Mode.PT: 34.0}, transit_line="M2"))
        edges.append(Edge(b, a, lm, {Mode.PT: 34.0}, transit_line="M2"))
    for a, b in zip(BUS_STOPS, BUS_STOPS[1:]):
        lm = length(a, b, 1.25)
        edges.append(Edge(a, b, lm, {Mode.PT: 22.0}, transit_line="B7"))
        edges.append(Edge(b, a, lm, {Mode.PT: 22.0}, transit_line="B7"))

    parking = [
        # designated area fits the big vehicle; the downtown garage does not,
        # which is what the risk-tolerant options knowingly ignore
        ParkingFacility("r3", frozenset({VehicleKind.MOTORHOME}),
                        capacity_width_m=3.5, capacity_length_m=9.0),
        ParkingFacility("c3", frozenset({VehicleKind.CAR}), capacity_width_m=2.2),
        ParkingFacility("c2", frozenset({VehicleKind.BIKE})),
        ParkingFacility("e2", frozenset({VehicleKind.BIKE})),
    ]

    graph = Graph(nodes, edges, lines, parking, name="demo_city")

    request = RoutingRequest(
        origin="w1",
        destination="e2",
        allowed_modes={Mode.WALK, Mode.BIKE, Mode.CAR, Mode.PT},
        vehicles=(
            OwnedVehicle("bike1", VehicleKind.BIKE, "w1"),
            OwnedVehicle("car1", VehicleKind.CAR, "w1"),
        ),
        departure_time="2026-08-17T08:30:00",
    )
    alts = generate_alternatives(graph, request)
    sequences = {a.route.mode_sequence for a in alts.alternatives}
    assert len(alts.alternatives) >= 2, sequences
    assert len(sequences) >= 2, sequences

    mh_request = MotorhomeRequest(
        origin="camp",
        destination="e2",
        vehicles=(OwnedVehicle("mh1", VehicleKind.MOTORHOME, "camp"),),
    )
    options = three_option_routes(graph, mh_request, NEUTRAL_PROFILE)
    labels = [o.label.value for o in options]
    assert labels == ["designated_motorhome", "car_parking_risk", "park_closest"], labels
    assert options[0].parking_node == "r3", options[0].parking_node
    assert options[1].parking_node == "c3", options[1].parking_node
    assert options[2].parking_node == "c3", options[2].parking_node
    assert len({(o.route.mode_sequence, o.route.node_path) for o in options}) == 3

    write(FIXTURES / "demo_graph.json", serialize_graph(graph))
    write(FIXTURES / "demo_request.json", dump_request({
        "origin": {"node": "w1"},
        "destination": {"node": "e2"},
        "modes": ["walk", "bike", "car", "pt"],
        "vehicles": [
            {"id": "bike1", "kind": "bike", "location": {"node": "w1"}},
            {"id": "car1", "kind": "car", "location": {"node": "w1"}},
        ],
        "departure_time": "2026-08-17T08:30:00",
    }))
    write(FIXTURES / "demo_motorhome_request.json", dump_request({
        "origin": {"node": "camp"},
        "destination": {"node": "e2"},
        "vehicles": [{"id": "mh1", "kind": "motorhome", "location": {"node": "camp"}}],
    }))

    # round-trip sanity
    reparsed = parse_graph(serialize_graph(graph))
    assert serialize_graph(reparsed) == serialize_graph(graph)


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    walk_vs_bike()
    demo_city()
    print("fixtures ok")


if __name__ == "__main__":
    main()
