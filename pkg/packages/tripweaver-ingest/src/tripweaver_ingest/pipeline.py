"""End-to-end POI network construction from the three input files."""

from __future__ import annotations

import logging
from typing import BinaryIO

from pydantic import BaseModel, ConfigDict, Field

from tripweaver_core.network import DEFAULT_SPEED_KMH, PoiNetwork
from tripweaver_core.types import SLOTS_PER_DAY, UserProfile

from tripweaver_ingest.parsing import parse_checkins, parse_traces, parse_venues
from tripweaver_ingest.profiles import (
    DEFAULT_TOP_K,
    build_user_profiles,
    build_venue_profiles,
    rank_venues,
)
from tripweaver_ingest.transit import TransitParams, build_transit_matrix

logger = logging.getLogger(__name__)


class BuildParams(BaseModel):
    """Every knob of the network build."""

    model_config = ConfigDict(frozen=True)

    observation_days: int = 30
    utc_offset_min: int = 0
    smoothing: float = 1.0
    top_k: int = DEFAULT_TOP_K
    transit: TransitParams = Field(default_factory=TransitParams)
    default_speed_kmh: float = DEFAULT_SPEED_KMH
    workers: int = 1


class BuildSummary(BaseModel):
    venues_read: int
    venues_kept: int
    checkins: int
    users: int
    gps_points: int
    vehicles: int
    stay_points: int
    matched_stays: int
    observed_cells: int
    observed_cell_slots: int
    fallback_fraction: float
    skipped_rows: dict[str, int]


class NetworkBuild(BaseModel):
    network: PoiNetwork
    users: list[UserProfile]
    summary: BuildSummary


def build_network(
    venues_csv: BinaryIO,
    checkins_csv: BinaryIO,
    traces_csv: BinaryIO,
    params: BuildParams | None = None,
) -> NetworkBuild:
    """Parse, rank, profile and assemble a :class:`PoiNetwork`.

    Steps: keep the ``top_k`` venues by check-in count, fill their
    popularity and visit histograms, recover transit and stay times from the
    traces (snapping against *all* venues so a stop at a dropped venue is
    not credited to a kept neighbour), then derive user profiles.
    """
    params = params or BuildParams()
    venues = parse_venues(venues_csv)
    checkins = parse_checkins(checkins_csv)
    traces = parse_traces(traces_csv)

    kept_ids = set(rank_venues(checkins.records, venues.records, params.top_k))
    profiled = build_venue_profiles(
        checkins.records,
        venues.records,
        params.observation_days,
        utc_offset_min=params.utc_offset_min,
    )
    transit_params = params.transit.model_copy(update={"utc_offset_min": params.utc_offset_min})
    matrix = build_transit_matrix(
        traces.records,
        venues.records,
        transit_params,
        default_speed_kmh=params.default_speed_kmh,
        workers=params.workers,
    )

    kept = []
    for venue in profiled:
        if venue.id not in kept_ids:
            continue
        stay = matrix.stay_minutes.get(venue.id)
        kept.append(venue.replace(mean_stay=stay) if stay is not None else venue)
    profiles = [p for p in matrix.profiles if p.from_id in kept_ids and p.to_id in kept_ids]
    network = PoiNetwork.build(kept, profiles, matrix.fallback_speed)
    users = build_user_profiles(checkins.records, venues.records, params.smoothing)

    pairs = len(kept) * (len(kept) - 1)
    observed_slots = sum(1 for p in profiles for n in p.slot_samples if n > 0)
    summary = BuildSummary(
        venues_read=len(venues.records),
        venues_kept=len(kept),
        checkins=len(checkins.records),
        users=len(users),
        gps_points=len(traces.records),
        vehicles=matrix.vehicles,
        stay_points=matrix.stay_points,
        matched_stays=matrix.matched_stays,
        observed_cells=len(profiles),
        observed_cell_slots=observed_slots,
        fallback_fraction=1.0 - observed_slots / (pairs * SLOTS_PER_DAY) if pairs else 1.0,
        skipped_rows={
            "venues": venues.skipped,
            "checkins": checkins.skipped,
            "traces": traces.skipped,
        },
    )
    logger.info(
        "Built network: %d venues, %d observed cells, %.1f%% fallback cell-slots",
        summary.venues_kept,
        summary.observed_cells,
        100 * summary.fallback_fraction,
    )
    return NetworkBuild(network=network, users=users, summary=summary)
