"""HTTP interface: one graph per app instance, routed over FastAPI.

Speed overrides are held as an immutable dict that PUT /overrides replaces
wholesale; each request reads whichever reference is current, so a query
never sees a half-applied update.  Expired entries are filtered out at query
time against the wall clock.
"""

from __future__ import annotations

import math
from datetime import datetime, timezone

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError

from .alternatives import DEFAULT_PROFILE_FAMILY, annotate_route, generate_alternatives
from .graph import Graph, Mode, SnapError
from .motorhome import three_option_routes
from .search import (
    InvalidRequestError,
    NEUTRAL_PROFILE,
    Objective,
    UnreachableError,
    shortest_distance_route,
)
from .wire import (
    MotorhomeRequestModel,
    OverridesBodyModel,
    RouteRequestModel,
    alternative_payload,
    canonical_json,
    error_payload,
    geometry_payload,
    motorhome_option_payload,
    parse_expiry,
)


def _canonical(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def create_app(graph: Graph, *, clock=None) -> FastAPI:
    """Build the service around one routing graph.

    clock is injectable for tests; it must return an aware datetime.
    """
    now = clock or (lambda: datetime.now(timezone.utc))
    app = FastAPI(title="intermodal", docs_url=None, redoc_url=None)
    app.state.graph = graph
    app.state.overrides = {}  # (from_id, to_id, Mode) -> (factor, expires_at | None)

    def active_factors() -> dict[tuple[str, str, Mode], float] | None:
        table = app.state.overrides  # grab one reference; PUT swaps, never mutates
        if not table:
            return None
        current = now()
        live = {
            key: factor
            for key, (factor, expiry) in table.items()
            if expiry is None or expiry > current
        }
        return live or None

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        fields = [
            {"loc": ".".join(str(part) for part in err["loc"]), "msg": err["msg"]}
            for err in exc.errors()
        ]
        return _canonical(
            error_payload("invalid_request", "request body failed validation", fields=fields),
            status_code=400,
        )

    @app.exception_handler(InvalidRequestError)
    async def on_invalid_request(request: Request, exc: InvalidRequestError):
        return _canonical(error_payload("invalid_request", str(exc)), status_code=400)

    @app.exception_handler(SnapError)
    async def on_snap_error(request: Request, exc: SnapError):
        extra = {"where": exc.where}
        if math.isfinite(exc.distance_m):
            extra["distance_m"] = round(exc.distance_m, 1)
        return _canonical(error_payload("snap_failed", str(exc), **extra), status_code=422)

    @app.exception_handler(UnreachableError)
    async def on_unreachable(request: Request, exc: UnreachableError):
        return _canonical(error_payload("unreachable", str(exc)), status_code=422)

    @app.get("/health")
    async def health():
        g: Graph = app.state.graph
        return _canonical({
            "name": g.name,
            "nodes": len(g.nodes),
            "edges": len(g.edges),
            "overrides": len(app.state.overrides),
            "bbox": list(g.bbox) if g.bbox else None,
        })

    @app.get("/profiles")
    async def profiles():
        return _canonical({
            "profiles": [
                {"id": p.id, "multipliers": {m.value: v for m, v in p.multipliers.items()}}
                for p in DEFAULT_PROFILE_FAMILY.profiles
            ]
        })

    @app.post("/route")
    async def route(body: RouteRequestModel):
        g: Graph = app.state.graph
        request = body.to_request(g)
        factors = active_factors()
        if request.objective is Objective.SHORTEST_DISTANCE:
            alts = [annotate_route(shortest_distance_route(g, request, speed_factors=factors))]
        else:
            alts = list(
                generate_alternatives(
                    g, request, body.to_family(), speed_factors=factors
                ).alternatives
            )
        routes = [alt.route for alt in alts]
        return _canonical({
            "origin_node": request.origin,
            "destination_node": request.destination,
            "alternatives": [alternative_payload(alt) for alt in alts],
            "geometry": geometry_payload(g, routes),
        })

    @app.post("/motorhome")
    async def motorhome(body: MotorhomeRequestModel):
        g: Graph = app.state.graph
        request = body.to_request(g)
        profile = body.profile.to_profile() if body.profile else NEUTRAL_PROFILE
        options = three_option_routes(g, request, profile, speed_factors=active_factors())
        return _canonical({
            "origin_node": request.origin,
            "destination_node": request.destination,
            "options": [motorhome_option_payload(opt) for opt in options],
            "geometry": geometry_payload(g, [opt.route for opt in options]),
        })

    @app.put("/overrides")
    async def put_overrides(body: OverridesBodyModel):
        g: Graph = app.state.graph
        table: dict[tuple[str, str, Mode], tuple[float, datetime | None]] = {}
        for item in body.overrides:
            if item.from_node not in g.node_index:
                raise InvalidRequestError(f"override from-node '{item.from_node}' not in graph")
            if item.to not in g.node_index:
                raise InvalidRequestError(f"override to-node '{item.to}' not in graph")
            key = (item.from_node, item.to, Mode(item.mode))
            table[key] = (item.factor, parse_expiry(item.expires_at))
        app.state.overrides = table  # atomic swap; in-flight queries keep the old dict
        return _canonical({"overrides": len(table)})

    return app
