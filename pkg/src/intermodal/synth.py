"""Synthetic graphs and scenarios for experiments and randomized testing."""

from __future__ import annotations

import random

from intermodal.graph import (
    Edge,
    Graph,
    Mode,
    Node,
    ParkingFacility,
    TransitLine,
    VehicleKind,
)
from intermodal.search import (
    MultiplierProfile,
    Objective,
    OwnedVehicle,
    RoutingRequest,
    SwitchCosts,
)

_SPEED_RANGES = {
    Mode.WALK: (4.0, 6.0),
    Mode.BIKE: (12.0, 20.0),
    Mode.CAR: (30.0, 60.0),
    Mode.MOTORHOME: (25.0, 50.0),
}


def random_profile(rng: random.Random, pid: str) -> MultiplierProfile:
    return MultiplierProfile(pid, {m: round(rng.uniform(1.0, 100.0), 2) for m in Mode})


def random_scenario(
    rng: random.Random,
    *,
    max_nodes: int = 8,
    max_vehicles: int = 3,
) -> tuple[Graph, RoutingRequest]:
    """A small random graph plus a request against it.

    Connectivity is not guaranteed; callers must treat unreachable as a valid
    outcome.  Most instances get a two-way walk backbone over a shuffled node
    order so the reachable case stays the common one.  Sized to stay well
    inside the enumeration guard so results can be checked against the
    brute-force oracle.
    """
    n = rng.randint(2, max_nodes)
    nodes = [
        Node(f"n{i}", 48.2 + 0.0015 * rng.random(), 16.3 + 0.0015 * rng.random())
        for i in range(n)
    ]
    ids = [node.id for node in nodes]

    edges: list[Edge] = []
    if rng.random() < 0.6:
        chain = ids[:]
        rng.shuffle(chain)
        for a, b in zip(chain, chain[1:]):
            secs_speed = round(rng.uniform(3.0, 6.0), 1)
            length = round(rng.uniform(60.0, 900.0), 1)
            edges.append(Edge(from_node=a, to_node=b, length_m=length,
                              allowed={Mode.WALK: secs_speed}))
            edges.append(Edge(from_node=b, to_node=a, length_m=length,
                              allowed={Mode.WALK: secs_speed}))
    p_edge = rng.uniform(0.15, 0.4)
    for i in range(n):
        for j in range(n):
            if i == j or rng.random() > p_edge:
                continue
            mode_pool = list(_SPEED_RANGES)
            k = rng.randint(1, 3)
            modes = rng.sample(mode_pool, k)
            allowed = {m: round(rng.uniform(*_SPEED_RANGES[m]), 1) for m in modes}
            restrictions = {}
            if Mode.MOTORHOME in allowed and rng.random() < 0.3:
                restrictions["max_width_m"] = rng.choice([2.0, 2.2, 2.5])
            if (Mode.CAR in allowed or Mode.MOTORHOME in allowed) and rng.random() < 0.15:
                restrictions["max_weight_kg"] = rng.choice([1000.0, 2000.0, 5000.0])
            edges.append(Edge(
                from_node=ids[i],
                to_node=ids[j],
                length_m=round(rng.uniform(50.0, 2500.0), 1),
                allowed=allowed,
                **restrictions,
            ))

    lines: list[TransitLine] = []
    for li in range(rng.randint(0, 2)):
        if n < 3:
            break
        stops = rng.sample(ids, rng.randint(2, min(4, n)))
        line = TransitLine(f"L{li}", headway_s=float(rng.randint(120, 900)))
        lines.append(line)
        speed = round(rng.uniform(20.0, 40.0), 1)
        for a, b in zip(stops, stops[1:]):
            edges.append(Edge(
                from_node=a, to_node=b,
                length_m=round(rng.uniform(400.0, 3000.0), 1),
                allowed={Mode.PT: speed},
                transit_line=line.id,
            ))

    parking: list[ParkingFacility] = []
    for node in nodes:
        if rng.random() < 0.35:
            kinds = rng.sample(list(VehicleKind), rng.randint(1, 3))
            caps = {}
            if rng.random() < 0.4:
                caps["capacity_width_m"] = rng.choice([1.9, 2.1, 2.4, 3.0])
            if rng.random() < 0.3:
                caps["capacity_length_m"] = rng.choice([4.0, 5.0, 7.5])
            parking.append(ParkingFacility(node.id, frozenset(kinds), **caps))

    graph = Graph(nodes, edges, lines, parking, name=f"random_{n}n")

    vehicles = []
    for kind in rng.sample(list(VehicleKind), rng.randint(0, max_vehicles)):
        vehicles.append(OwnedVehicle(f"veh_{kind.value}", kind, rng.choice(ids)))

    allowed_modes = {m for m in Mode if rng.random() < 0.55}
    if rng.random() < 0.8:
        allowed_modes.add(Mode.WALK)
    for v in vehicles:
        if rng.random() < 0.7:
            allowed_modes.add(v.kind.riding_mode)
    if not allowed_modes:
        allowed_modes.add(Mode.WALK)

    origin = rng.choice(ids)
    destination = rng.choice(ids) if rng.random() < 0.05 else rng.choice(
        [i for i in ids if i != origin] or ids
    )
    switch = SwitchCosts.zero() if rng.random() < 0.3 else SwitchCosts()
    request = RoutingRequest(
        origin=origin,
        destination=destination,
        allowed_modes=frozenset(allowed_modes),
        vehicles=tuple(vehicles),
        objective=Objective.FASTEST_TIME,
        departure_time="2026-08-17T08:00:00",
        switch_costs=switch,
    )
    return graph, request


def grid_graph(rows: int, cols: int, *, seed: int = 0) -> Graph:
    """City-like grid: two-way avenues, alternating one-way cross streets,
    a transit line along the middle row, parking clustered in the east half.

    Edge lengths are jittered so distinct paths rarely tie exactly.
    """
    rng = random.Random(seed)
    nodes: list[Node] = []
    for r in range(rows):
        for c in range(cols):
            nodes.append(Node(f"g{r}_{c}", 48.0 + r * 0.0009, 16.0 + c * 0.0013))
    ids = [node.id for node in nodes]

    def nid(r: int, c: int) -> str:
        return ids[r * cols + c]

    edges: list[Edge] = []
    street = {Mode.WALK: 5.0, Mode.BIKE: 15.0, Mode.CAR: 50.0}
    for r in range(rows):
        for c in range(cols - 1):
            length = round(100.0 * rng.uniform(0.85, 1.15), 1)
            edges.append(Edge(nid(r, c), nid(r, c + 1), length, dict(street)))
            edges.append(Edge(nid(r, c + 1), nid(r, c), length, dict(street)))
    for c in range(cols):
        for r in range(rows - 1):
            length = round(100.0 * rng.uniform(0.85, 1.15), 1)
            if c % 2 == 0:
                edges.append(Edge(nid(r, c), nid(r + 1, c), length, dict(street)))
            else:
                edges.append(Edge(nid(r + 1, c), nid(r, c), length, dict(street)))

    mid = rows // 2
    line = TransitLine("metro", headway_s=600.0)
    for c in range(cols - 1):
        length = round(100.0 * rng.uniform(0.95, 1.05), 1)
        edges.append(Edge(
            nid(mid, c), nid(mid, c + 1), length, {Mode.PT: 40.0}, transit_line="metro",
        ))
        edges.append(Edge(
            nid(mid, c + 1), nid(mid, c), length, {Mode.PT: 40.0}, transit_line="metro",
        ))

    parking: list[ParkingFacility] = []
    accepts = frozenset({VehicleKind.BIKE, VehicleKind.CAR})
    for r in range(0, rows, max(1, rows // 8)):
        for c in range(cols // 2, cols, max(1, cols // 8)):
            parking.append(ParkingFacility(nid(r, c), accepts))
    parking.append(ParkingFacility(nid(rows - 1, cols - 1), accepts))

    return Graph(nodes, edges, [line], parking, name=f"grid_{rows}x{cols}")
