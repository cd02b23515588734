"""Time single intermodal queries against a synthetic grid network.

Builds the desk-scale benchmark graph (50k nodes at the default size) and runs
corner-to-corner queries with two owned vehicles, printing per-run and median
wall times.  The goal for the default size is a median under 500 ms.
"""

import argparse
import statistics
import time

from intermodal import Mode, OwnedVehicle, RoutingRequest, VehicleKind, shortest_route
from intermodal.search import NEUTRAL_PROFILE
from intermodal.synth import grid_graph


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=200)
    parser.add_argument("--cols", type=int, default=250)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--runs", type=int, default=5)
    args = parser.parse_args()

    started = time.perf_counter()
    graph = grid_graph(args.rows, args.cols, seed=args.seed)
    print(f"graph: {len(graph.nodes)} nodes, {len(graph.edges)} edges "
          f"(built in {time.perf_counter() - started:.1f} s)")

    origin = "g0_0"
    destination = f"g{args.rows - 1}_{args.cols - 1}"
    request = RoutingRequest(
        origin=origin,
        destination=destination,
        allowed_modes={Mode.WALK, Mode.BIKE, Mode.CAR, Mode.PT},
        vehicles=(
            OwnedVehicle("bike1", VehicleKind.BIKE, origin),
            OwnedVehicle("car1", VehicleKind.CAR, origin),
        ),
    )

    timings = []
    route = None
    for i in range(args.runs):
        t0 = time.perf_counter()
        route = shortest_route(graph, request, NEUTRAL_PROFILE)
        elapsed = time.perf_counter() - t0
        timings.append(elapsed)
        print(f"run {i + 1}: {elapsed * 1000:.0f} ms")

    print(f"median: {statistics.median(timings) * 1000:.0f} ms")
    print(f"route: {route.mode_sequence}, {route.total_duration_s:.0f} s, "
          f"{route.total_distance_m / 1000:.1f} km, {len(route.legs)} legs")


if __name__ == "__main__":
    main()
