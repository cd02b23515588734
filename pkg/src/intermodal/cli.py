"""Command line front: validate graphs, run queries, serve HTTP.

stdout carries exactly one canonical JSON document on success so repeated
invocations over the same inputs are byte-identical.  Errors go to stderr as
one-line JSON.  Exit codes: 0 success, 1 no feasible route, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from pydantic import ValidationError

from .alternatives import annotate_route, generate_alternatives
from .graph import Graph, GraphFormatError, Mode, SnapError, parse_graph
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

EXIT_OK = 0
EXIT_UNREACHABLE = 1
EXIT_BAD_INPUT = 2


class _CliError(Exception):
    def __init__(self, exit_code: int, payload: dict):
        super().__init__(payload["error"]["detail"])
        self.exit_code = exit_code
        self.payload = payload


def _fail(exit_code: int, kind: str, detail: str, **extra) -> _CliError:
    return _CliError(exit_code, error_payload(kind, detail, **extra))


def _read_text(path: str, what: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _fail(EXIT_BAD_INPUT, "io_error", f"cannot read {what} file: {exc}")


def _load_graph(path: str) -> Graph:
    try:
        return parse_graph(_read_text(path, "graph"))
    except GraphFormatError as exc:
        raise _fail(EXIT_BAD_INPUT, "bad_graph", str(exc))


def _validation_fields(exc: ValidationError) -> list[dict]:
    return [
        {"loc": ".".join(str(part) for part in err["loc"]), "msg": err["msg"]}
        for err in exc.errors()
    ]


def _load_model(model_cls, path: str, what: str):
    text = _read_text(path, what)
    try:
        return model_cls.model_validate_json(text)
    except ValidationError as exc:
        raise _fail(
            EXIT_BAD_INPUT, "invalid_request",
            f"{what} file failed validation", fields=_validation_fields(exc),
        )


def _load_factors(path: str | None) -> dict[tuple[str, str, Mode], float] | None:
    """Overrides file in the PUT /overrides body shape; expiry honored."""
    if path is None:
        return None
    from datetime import datetime, timezone

    body = _load_model(OverridesBodyModel, path, "overrides")
    now = datetime.now(timezone.utc)
    factors = {}
    for item in body.overrides:
        expiry = parse_expiry(item.expires_at)
        if expiry is not None and expiry <= now:
            continue
        factors[(item.from_node, item.to, Mode(item.mode))] = item.factor
    return factors or None


def _emit(payload: dict) -> None:
    sys.stdout.write(canonical_json(payload) + "\n")


def _cmd_validate(args) -> int:
    graph = _load_graph(args.graph)
    _emit({"ok": True, **graph.meta})
    return EXIT_OK


def _cmd_route(args) -> int:
    graph = _load_graph(args.graph)
    body = _load_model(RouteRequestModel, args.request, "request")
    factors = _load_factors(args.overrides)
    try:
        request = body.to_request(graph)
        if request.objective is Objective.SHORTEST_DISTANCE:
            alts = [annotate_route(shortest_distance_route(graph, request, speed_factors=factors))]
        else:
            alts = list(
                generate_alternatives(
                    graph, request, body.to_family(), speed_factors=factors
                ).alternatives
            )
    except SnapError as exc:
        raise _fail(EXIT_BAD_INPUT, "snap_failed", str(exc), where=exc.where)
    except InvalidRequestError as exc:
        raise _fail(EXIT_BAD_INPUT, "invalid_request", str(exc))
    except UnreachableError as exc:
        raise _fail(EXIT_UNREACHABLE, "unreachable", str(exc))
    _emit({
        "origin_node": request.origin,
        "destination_node": request.destination,
        "alternatives": [alternative_payload(a) for a in alts],
        "geometry": geometry_payload(graph, [a.route for a in alts]),
    })
    return EXIT_OK


def _cmd_motorhome(args) -> int:
    graph = _load_graph(args.graph)
    body = _load_model(MotorhomeRequestModel, args.request, "request")
    factors = _load_factors(args.overrides)
    try:
        request = body.to_request(graph)
        profile = body.profile.to_profile() if body.profile else NEUTRAL_PROFILE
        options = three_option_routes(graph, request, profile, speed_factors=factors)
    except SnapError as exc:
        raise _fail(EXIT_BAD_INPUT, "snap_failed", str(exc), where=exc.where)
    except InvalidRequestError as exc:
        raise _fail(EXIT_BAD_INPUT, "invalid_request", str(exc))
    _emit({
        "origin_node": request.origin,
        "destination_node": request.destination,
        "options": [motorhome_option_payload(o) for o in options],
        "geometry": geometry_payload(graph, [o.route for o in options]),
    })
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    graph = _load_graph(args.graph)
    uvicorn.run(create_app(graph), host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="intermodal")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a graph file and print its counts")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("route", help="plan route alternatives")
    p.add_argument("--graph", required=True)
    p.add_argument("--request", required=True)
    p.add_argument("--overrides")
    p.set_defaults(func=_cmd_route)

    p = sub.add_parser("motorhome", help="plan the three motorhome arrival options")
    p.add_argument("--graph", required=True)
    p.add_argument("--request", required=True)
    p.add_argument("--overrides")
    p.set_defaults(func=_cmd_motorhome)

    p = sub.add_parser("serve", help="serve the HTTP interface")
    p.add_argument("--graph", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        sys.stderr.write(canonical_json(exc.payload) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
