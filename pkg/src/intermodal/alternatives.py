"""Route alternatives via perception-profile variation.

One shortest-route search per profile in a family, then three deterministic
cleanup passes: plausibility (drop routes with too-short vehicle or transit
legs), dedup (same legs and nodes), and dominance (slower with at least as
many mode changes loses, unless it is the last route with a distinct mode
sequence).  Departure-time jitter and k-shortest-path expansion are out of
scope: profiles are the only alternative generator.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from intermodal.graph import Graph, MODE_ORDER, Mode
from intermodal.search import (
    InvalidRequestError,
    MultiplierProfile,
    NEUTRAL_PROFILE,
    Objective,
    Route,
    RoutingRequest,
    UnreachableError,
    perceived_cost_under,
    shortest_route,
)

PLAUSIBILITY_WARNING = "implausible_short_leg"

DEFAULT_PLAUSIBILITY_THRESHOLDS_S: dict[Mode, float] = {
    Mode.WALK: 0.0,
    Mode.BIKE: 120.0,
    Mode.CAR: 120.0,
    Mode.MOTORHOME: 300.0,
    Mode.PT: 60.0,
}


@dataclass(frozen=True)
class ProfileFamily:
    """Ordered multiplier profiles; the first must be the neutral all-ones."""

    profiles: tuple[MultiplierProfile, ...]

    def __post_init__(self):
        object.__setattr__(self, "profiles", tuple(self.profiles))
        if not self.profiles:
            raise InvalidRequestError("profile family must be non-empty")
        first = self.profiles[0]
        if any(first[m] != 1.0 for m in MODE_ORDER):
            raise InvalidRequestError("profile family must start with the neutral profile")
        seen: set[str] = set()
        for p in self.profiles:
            if p.id in seen:
                raise InvalidRequestError(f"duplicate profile id '{p.id}'")
            seen.add(p.id)

    def __iter__(self):
        return iter(self.profiles)

    def __len__(self) -> int:
        return len(self.profiles)


DEFAULT_PROFILE_FAMILY = ProfileFamily((
    NEUTRAL_PROFILE,
    MultiplierProfile("walk_averse", {
        Mode.WALK: 4.0, Mode.BIKE: 1.0, Mode.CAR: 1.0, Mode.MOTORHOME: 1.0, Mode.PT: 1.0,
    }),
    MultiplierProfile("bike_favoring", {
        Mode.WALK: 3.0, Mode.BIKE: 1.0, Mode.CAR: 6.0, Mode.MOTORHOME: 6.0, Mode.PT: 2.0,
    }),
    MultiplierProfile("car_averse", {
        Mode.WALK: 1.0, Mode.BIKE: 1.0, Mode.CAR: 50.0, Mode.MOTORHOME: 50.0, Mode.PT: 1.0,
    }),
    MultiplierProfile("pt_favoring", {
        Mode.WALK: 2.0, Mode.BIKE: 8.0, Mode.CAR: 8.0, Mode.MOTORHOME: 8.0, Mode.PT: 1.0,
    }),
))


@dataclass(frozen=True)
class ModeBreakdown:
    duration_s: float
    distance_m: float


@dataclass(frozen=True)
class Alternative:
    route: Route
    mode_changes: int
    by_mode: dict[Mode, ModeBreakdown]
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class AlternativeSet:
    alternatives: tuple[Alternative, ...]

    def __len__(self) -> int:
        return len(self.alternatives)

    def routes(self) -> tuple[Route, ...]:
        return tuple(a.route for a in self.alternatives)


def _is_plausible(route: Route, thresholds: dict[Mode, float]) -> bool:
    for leg in route.legs:
        if leg.mode is Mode.WALK:
            continue
        if leg.in_motion_s < thresholds.get(leg.mode, 0.0):
            return False
    return True


def _stable_key(route: Route) -> tuple:
    return (
        route.total_duration_s,
        route.perceived_cost,
        len(route.legs),
        route.mode_sequence,
        route.node_path,
    )


def plausibility_filter(
    routes: list[Route],
    thresholds: dict[Mode, float] | None = None,
) -> list[Route]:
    """Drop routes containing a non-walk leg shorter than its mode threshold.

    Order-preserving and idempotent.  Never returns an empty list for a
    non-empty input: when everything is implausible the single best route is
    retained, marked with a warning.
    """
    if thresholds is None:
        thresholds = DEFAULT_PLAUSIBILITY_THRESHOLDS_S
    survivors = [r for r in routes if _is_plausible(r, thresholds)]
    if survivors or not routes:
        return survivors
    best = min(routes, key=_stable_key)
    if PLAUSIBILITY_WARNING not in best.warnings:
        best = replace(best, warnings=best.warnings + (PLAUSIBILITY_WARNING,))
    return [best]


def _dominance_filter(ordered: list[Route]) -> list[Route]:
    # Candidates arrive sorted by (duration, mode changes, ...), so earlier
    # survivors are never slower than the route under inspection.
    survivors: list[Route] = []
    for r in ordered:
        dominated = False
        for s in survivors:
            if (
                s.total_duration_s <= r.total_duration_s
                and s.mode_changes <= r.mode_changes
                and (
                    s.total_duration_s < r.total_duration_s
                    or s.mode_changes < r.mode_changes
                )
            ):
                dominated = True
                break
        if dominated and all(s.mode_sequence != r.mode_sequence for s in survivors):
            dominated = False  # keep the last representative of this mode sequence
        if not dominated:
            survivors.append(r)
    return survivors


def annotate_route(route: Route) -> Alternative:
    by_mode: dict[Mode, ModeBreakdown] = {}
    for mode in MODE_ORDER:
        duration = 0.0
        distance = 0.0
        present = False
        for leg in route.legs:
            if leg.mode is mode:
                present = True
                duration += leg.in_motion_s + leg.transfer_s
                distance += leg.distance_m
        if present:
            by_mode[mode] = ModeBreakdown(duration_s=duration, distance_m=distance)
    return Alternative(
        route=route,
        mode_changes=route.mode_changes,
        by_mode=by_mode,
        warnings=route.warnings,
    )


def generate_alternatives(
    graph: Graph,
    request: RoutingRequest,
    family: ProfileFamily = DEFAULT_PROFILE_FAMILY,
    *,
    thresholds: dict[Mode, float] | None = None,
    speed_factors: dict[tuple[str, str, Mode], float] | None = None,
) -> AlternativeSet:
    """One search per profile, filtered and sorted into an alternative set.

    Raises UnreachableError only when every profile fails to find a route.
    """
    if request.objective is not Objective.FASTEST_TIME:
        raise InvalidRequestError("alternatives are generated for fastest_time requests only")
    collected: list[Route] = []
    for profile in family:
        try:
            collected.append(
                shortest_route(graph, request, profile, speed_factors=speed_factors)
            )
        except UnreachableError:
            continue
    if not collected:
        raise UnreachableError(
            f"no feasible route from '{request.origin}' to '{request.destination}' "
            "under any profile"
        )

    plausible = plausibility_filter(collected, thresholds)

    deduped: list[Route] = []
    seen: set[tuple] = set()
    for r in plausible:
        key = (r.mode_sequence, r.node_path)
        if key in seen:
            continue
        seen.add(key)
        deduped.append(r)

    ordered = sorted(deduped, key=lambda r: (r.total_duration_s, r.mode_changes) + _stable_key(r))
    surviving = _dominance_filter(ordered)

    final = sorted(
        surviving,
        key=lambda r: (
            r.total_duration_s,
            perceived_cost_under(r, NEUTRAL_PROFILE),
        ) + _stable_key(r),
    )
    return AlternativeSet(tuple(annotate_route(r) for r in final))
