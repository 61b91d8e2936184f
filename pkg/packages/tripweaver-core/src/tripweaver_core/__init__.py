"""POI network model, route scoring, scheduling and trip search."""

__version__ = "1.0.0"

from tripweaver_core.enums import ExportFormat, InfeasibleReason, MoveKind, Provenance
from tripweaver_core.exceptions import (
    DataFormatError,
    DomainError,
    TripweaverError,
    VenueNotFoundError,
)
from tripweaver_core.geo import EARTH_RADIUS_KM, Location, haversine_km, pairwise_haversine_km
from tripweaver_core.types import (
    MINUTES_PER_DAY,
    SLOTS_PER_DAY,
    Infeasible,
    Itinerary,
    Query,
    ScheduledVisit,
    TransitProfile,
    UserProfile,
    Venue,
)
from tripweaver_core.network import (
    DEFAULT_SPEED_KMH,
    MIN_TRANSIT_MINUTES,
    PoiNetwork,
    network_from_json,
    network_to_json,
    transit_duration,
)
from tripweaver_core.scoring import DEFAULT_ALPHA, attractiveness, route_score, suitability
from tripweaver_core.schedule import ScheduleParams, simulate, validate_itinerary
from tripweaver_core.search import MAX_ORACLE_CANDIDATES, SearchParams, brute_force, plan

__all__ = [
    # enums
    "ExportFormat",
    "InfeasibleReason",
    "MoveKind",
    "Provenance",
    # exceptions
    "DataFormatError",
    "DomainError",
    "TripweaverError",
    "VenueNotFoundError",
    # geo
    "EARTH_RADIUS_KM",
    "Location",
    "haversine_km",
    "pairwise_haversine_km",
    # types
    "MINUTES_PER_DAY",
    "SLOTS_PER_DAY",
    "Infeasible",
    "Itinerary",
    "Query",
    "ScheduledVisit",
    "TransitProfile",
    "UserProfile",
    "Venue",
    # network
    "DEFAULT_SPEED_KMH",
    "MIN_TRANSIT_MINUTES",
    "PoiNetwork",
    "network_from_json",
    "network_to_json",
    "transit_duration",
    # scoring
    "DEFAULT_ALPHA",
    "attractiveness",
    "route_score",
    "suitability",
    # schedule
    "ScheduleParams",
    "simulate",
    "validate_itinerary",
    # search
    "MAX_ORACLE_CANDIDATES",
    "SearchParams",
    "brute_force",
    "plan",
]
