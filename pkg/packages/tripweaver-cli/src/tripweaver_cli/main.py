"""``tripweaver`` command-line entry point.

Commands: ``gen-data``, ``build-network``, ``plan`` and ``eval``.  Exit
codes: 0 success (an infeasible plan is still a success), 1 unreadable or
rejected input and I/O failures, 2 usage and domain errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import geojson
from pydantic import ValidationError

from tripweaver_core.exceptions import DataFormatError, DomainError, VenueNotFoundError
from tripweaver_core.geo import Location
from tripweaver_core.network import network_from_json, network_to_json
from tripweaver_core.search import plan
from tripweaver_core.types import MINUTES_PER_DAY, Query, UserProfile
from tripweaver_ingest.pipeline import build_network
from tripweaver_ingest.profiles import uniform_profile, users_from_json, users_to_json
from tripweaver_ingest.synth import generate_checkins, generate_city, generate_traces

from tripweaver_cli.config import PlannerConfig, resolve_config
from tripweaver_cli.evaluation import evaluate
from tripweaver_cli.export import dumps_document, itinerary_document, itinerary_geojson, write_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2

GUEST_USER = "guest"


# ---------------------------------------------------------------------------
# Argument types
# ---------------------------------------------------------------------------


def parse_clock(text: str) -> float:
    """``HH:MM`` → minutes of the day; ``24:00`` is allowed as an end time."""
    try:
        hours, minutes = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HH:MM, got {text!r}") from None
    total = hours * 60 + minutes
    if not (0 <= minutes < 60 and 0 <= total <= MINUTES_PER_DAY):
        raise argparse.ArgumentTypeError(f"time of day out of range: {text!r}")
    return float(total)


def parse_location(text: str) -> Location:
    """``LAT,LON`` → ``(lat, lon)``."""
    try:
        lat, lon = (float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LAT,LON, got {text!r}") from None
    return (lat, lon)


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("Wrote %s", path)


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        _write_text(path, text)


def _config(args: argparse.Namespace, **overrides: Any) -> PlannerConfig:
    return resolve_config(args.config, {"seed": args.seed, **overrides})


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_gen_data(args: argparse.Namespace) -> int:
    config = _config(args)
    seed = config.seed
    venues_csv, city = generate_city(seed, args.venues)
    traces_csv = generate_traces(city, args.vehicles, args.trips, args.noise_m, seed + 1)
    checkins_csv = generate_checkins(city, args.users, args.checkins_per_user, args.days, seed + 2)

    out: Path = args.out
    _write_text(out / "venues.csv", venues_csv)
    _write_text(out / "traces.csv", traces_csv)
    _write_text(out / "checkins.csv", checkins_csv)
    _write_text(out / "ground_truth.json", city.to_json() + "\n")
    print(f"Wrote venues.csv, traces.csv, checkins.csv and ground_truth.json to {out}")
    return EXIT_OK


def cmd_build_network(args: argparse.Namespace) -> int:
    config = _config(
        args,
        top_k=args.top_k,
        observation_days=args.observation_days,
        utc_offset_min=args.utc_offset_min,
        snap_radius_m=args.snap_radius_m,
        workers=args.workers,
    )
    data: Path = args.data
    venues_path = args.venues_csv or data / "venues.csv"
    checkins_path = args.checkins_csv or data / "checkins.csv"
    traces_path = args.traces_csv or data / "traces.csv"

    with venues_path.open("rb") as venues, checkins_path.open("rb") as checkins, traces_path.open("rb") as traces:
        build = build_network(venues, checkins, traces, config.build_params())

    out: Path = args.out
    users_out: Path = args.users_out or out.with_name("users.json")
    _write_text(out, network_to_json(build.network) + "\n")
    _write_text(users_out, users_to_json(build.users) + "\n")
    print(build.summary.model_dump_json(indent=2))
    return EXIT_OK


def _load_user(args: argparse.Namespace, categories: list[str]) -> UserProfile:
    user_id = args.user or GUEST_USER
    users_path: Path | None = args.users
    if users_path is None:
        default = args.network.with_name("users.json")
        users_path = default if default.exists() else None
    profiles = users_from_json(users_path.read_text(encoding="utf-8")) if users_path else {}
    profile = profiles.get(user_id)
    if profile is None:
        if args.user:
            logger.warning("Unknown user %r; using uniform category weights", user_id)
        profile = uniform_profile(user_id, categories or ["any"])
    return profile


def cmd_plan(args: argparse.Namespace) -> int:
    config = _config(
        args,
        alpha=args.alpha,
        max_wait=args.max_wait,
        candidate_limit=args.candidate_limit,
        local_search_rounds=args.local_search_rounds,
        restarts=args.restarts,
    )
    network = network_from_json(args.network.read_text(encoding="utf-8"))
    user = _load_user(args, network.categories())
    query = Query(
        start_location=args.start_loc,
        end_location=args.end_loc or args.start_loc,
        start_time=args.start_time,
        end_time=args.end_time,
    )
    itinerary = plan(
        network,
        user,
        query,
        config.schedule_params(),
        config.search_params(),
        alpha=config.alpha,
    )
    document = itinerary_document(itinerary, network, user, query, alpha=config.alpha)
    _emit(dumps_document(document), args.out)
    if args.geojson:
        _write_text(args.geojson, geojson.dumps(itinerary_geojson(itinerary, network, query), indent=2) + "\n")
    if args.table:
        args.table.parent.mkdir(parents=True, exist_ok=True)
        write_table(args.table, document)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    config = _config(args)
    network = network_from_json(args.network.read_text(encoding="utf-8")) if args.network else None
    report = evaluate(
        args.instances,
        args.candidates,
        config.seed,
        network=network,
        schedule_params=config.schedule_params(),
        search_params=config.search_params(),
        alpha=config.alpha,
    )
    _emit(report.model_dump_json(indent=2) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON config file (default: $TRIPWEAVER_CONFIG)")
    common.add_argument("--seed", type=int, help="random seed (default 0)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")

    parser = argparse.ArgumentParser(
        prog="tripweaver",
        description="Plan time-budgeted city itineraries from check-ins and GPS traces.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen-data", parents=[common], help="write a synthetic city and its crowd data")
    gen.add_argument("--venues", type=int, default=200)
    gen.add_argument("--vehicles", type=int, default=100)
    gen.add_argument("--trips", type=int, default=10, help="trips per vehicle")
    gen.add_argument("--users", type=int, default=500)
    gen.add_argument("--checkins-per-user", type=int, default=20)
    gen.add_argument("--days", type=int, default=30)
    gen.add_argument("--noise-m", type=float, default=10.0, help="GPS noise scale in metres")
    gen.add_argument("--out", type=Path, required=True, help="output directory")
    gen.set_defaults(handler=cmd_gen_data)

    build = commands.add_parser("build-network", parents=[common], help="build network.json from the three CSVs")
    build.add_argument("--data", type=Path, default=Path("."), help="directory holding the CSVs")
    build.add_argument("--venues-csv", type=Path)
    build.add_argument("--checkins-csv", type=Path)
    build.add_argument("--traces-csv", type=Path)
    build.add_argument("--out", type=Path, default=Path("network.json"))
    build.add_argument("--users-out", type=Path, help="default: users.json next to --out")
    build.add_argument("--top-k", type=int)
    build.add_argument("--observation-days", type=int)
    build.add_argument("--utc-offset-min", type=int)
    build.add_argument("--snap-radius-m", type=float)
    build.add_argument("--workers", type=int)
    build.set_defaults(handler=cmd_build_network)

    planner = commands.add_parser("plan", parents=[common], help="plan an itinerary")
    planner.add_argument("--network", type=Path, required=True)
    planner.add_argument("--users", type=Path, help="default: users.json next to --network")
    planner.add_argument("--user", help="user id (unknown users get uniform weights)")
    planner.add_argument("--start-time", type=parse_clock, required=True, help="HH:MM")
    planner.add_argument("--end-time", type=parse_clock, required=True, help="HH:MM")
    planner.add_argument("--start-loc", type=parse_location, required=True, help="LAT,LON")
    planner.add_argument("--end-loc", type=parse_location, help="LAT,LON (default: --start-loc)")
    planner.add_argument("--out", type=Path, help="itinerary JSON (default: stdout)")
    planner.add_argument("--geojson", type=Path, help="also write a GeoJSON FeatureCollection")
    planner.add_argument("--table", type=Path, help="also write the visits as .csv or .xlsx")
    planner.add_argument("--alpha", type=float)
    planner.add_argument("--max-wait", type=float)
    planner.add_argument("--candidate-limit", type=int)
    planner.add_argument("--local-search-rounds", type=int)
    planner.add_argument("--restarts", type=int)
    planner.set_defaults(handler=cmd_plan)

    ev = commands.add_parser("eval", parents=[common], help="compare the planner with the exhaustive oracle")
    ev.add_argument("--instances", type=int, default=100)
    ev.add_argument("--candidates", type=int, default=6)
    ev.add_argument("--network", type=Path, help="sample instances from this network instead of synthetic cities")
    ev.add_argument("--out", type=Path, help="report JSON (default: stdout)")
    ev.set_defaults(handler=cmd_eval)

    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _configure_logging(args.verbose)

    try:
        return args.handler(args)
    except (OSError, DataFormatError, json.JSONDecodeError) as exc:
        print(f"tripweaver: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, VenueNotFoundError, ValidationError) as exc:
        print(f"tripweaver: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
