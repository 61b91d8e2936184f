"""Turn check-ins and GPS traces into a POI network, or synthesize them."""

__version__ = "1.0.0"

from tripweaver_ingest.records import CheckinRecord, GpsPoint, ParseResult, StayPoint
from tripweaver_ingest.parsing import parse_checkins, parse_traces, parse_venues
from tripweaver_ingest.profiles import (
    build_user_profiles,
    build_venue_profiles,
    rank_venues,
    uniform_profile,
    users_from_json,
    users_to_json,
)
from tripweaver_ingest.staypoints import detect_stay_points
from tripweaver_ingest.transit import (
    TransitMatrix,
    TransitParams,
    build_transit_matrix,
    estimate_fallback_speeds,
    trimmed_mean,
)
from tripweaver_ingest.pipeline import BuildParams, BuildSummary, NetworkBuild, build_network
from tripweaver_ingest.synth import (
    CityGroundTruth,
    CityParams,
    generate_checkins,
    generate_city,
    generate_traces,
    ground_truth_network,
)

__all__ = [
    # records
    "CheckinRecord",
    "GpsPoint",
    "ParseResult",
    "StayPoint",
    # parsing
    "parse_checkins",
    "parse_traces",
    "parse_venues",
    # profiles
    "build_user_profiles",
    "build_venue_profiles",
    "rank_venues",
    "uniform_profile",
    "users_from_json",
    "users_to_json",
    # stay points and transit
    "detect_stay_points",
    "TransitMatrix",
    "TransitParams",
    "build_transit_matrix",
    "estimate_fallback_speeds",
    "trimmed_mean",
    # pipeline
    "BuildParams",
    "BuildSummary",
    "NetworkBuild",
    "build_network",
    # synthetic data
    "CityGroundTruth",
    "CityParams",
    "generate_checkins",
    "generate_city",
    "generate_traces",
    "ground_truth_network",
]
