"""Pydantic models for venues, transit profiles, profiles, queries and itineraries.

These are the shared data structures that flow between ingestion, the
planner and the command line.  All times are minutes of a single day
(``0 … 1440``); all locations are ``(lat, lon)`` in degrees.
"""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from tripweaver_core.enums import InfeasibleReason, Provenance
from tripweaver_core.geo import Location

MINUTES_PER_DAY = 1440
MINUTES_PER_SLOT = 60
SLOTS_PER_DAY = 24

EMPTY_HISTOGRAM: tuple[float, ...] = (0.0,) * SLOTS_PER_DAY

#: Tolerance for comparing minute timestamps.
TIME_TOLERANCE = 1e-6


def hour_slot(minute: float) -> int:
    """Return the hourly slot index (0–23) of a minute of the day."""
    return int(minute // MINUTES_PER_SLOT)


def check_location(value: Location) -> Location:
    lat, lon = value
    if not (-90.0 <= lat <= 90.0):
        raise ValueError(f"latitude out of range: {lat}")
    if not (-180.0 <= lon <= 180.0):
        raise ValueError(f"longitude out of range: {lon}")
    return (float(lat), float(lon))


def _check_slots(values: tuple, name: str) -> None:
    if len(values) != SLOTS_PER_DAY:
        raise ValueError(f"{name} must have {SLOTS_PER_DAY} entries, got {len(values)}")


# ---------------------------------------------------------------------------
# Network
# ---------------------------------------------------------------------------


class Venue(BaseModel):
    """A point of interest.

    ``visit_histogram`` is the hourly check-in density.  It is stored
    normalized to sum 1 whenever any entry is positive; an all-zero
    histogram means "no temporal evidence".
    """

    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    name: str = ""
    location: Location
    category: str
    popularity: float = Field(default=0.0, ge=0)
    open_min: int = Field(ge=0, le=MINUTES_PER_DAY)
    close_min: int = Field(ge=0, le=MINUTES_PER_DAY)
    visit_histogram: tuple[float, ...] = EMPTY_HISTOGRAM
    mean_stay: float = Field(gt=0)

    @field_validator("location")
    @classmethod
    def _check_location(cls, v: Location) -> Location:
        return check_location(v)

    @field_validator("visit_histogram")
    @classmethod
    def _normalize_histogram(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        _check_slots(v, "visit_histogram")
        if any(x < 0 or not math.isfinite(x) for x in v):
            raise ValueError("visit_histogram entries must be finite and >= 0")
        total = math.fsum(v)
        if total > 0:
            return tuple(x / total for x in v)
        return EMPTY_HISTOGRAM

    @model_validator(mode="after")
    def _check_hours(self) -> Venue:
        if self.open_min >= self.close_min:
            raise ValueError(
                f"venue {self.id!r}: open_min ({self.open_min}) must be "
                f"before close_min ({self.close_min})"
            )
        return self

    def replace(self, **changes: object) -> Venue:
        """Return a re-validated copy with *changes* applied."""
        return Venue.model_validate(self.model_dump() | changes)


class TransitProfile(BaseModel):
    """Time-sliced transit durations for one directed venue pair."""

    model_config = ConfigDict(frozen=True)

    from_id: str
    to_id: str
    slot_minutes: tuple[float, ...]
    slot_samples: tuple[int, ...] = (0,) * SLOTS_PER_DAY
    provenance: tuple[Provenance, ...] = (Provenance.FALLBACK,) * SLOTS_PER_DAY

    @model_validator(mode="after")
    def _validate_slots(self) -> TransitProfile:
        if self.from_id == self.to_id:
            raise ValueError(f"self-transit profile for {self.from_id!r} is not stored")
        _check_slots(self.slot_minutes, "slot_minutes")
        _check_slots(self.slot_samples, "slot_samples")
        _check_slots(self.provenance, "provenance")
        if any(m <= 0 or not math.isfinite(m) for m in self.slot_minutes):
            raise ValueError("slot_minutes must be finite and > 0")
        for slot, (n, prov) in enumerate(zip(self.slot_samples, self.provenance)):
            if n < 0:
                raise ValueError("slot_samples must be >= 0")
            if n == 0 and prov != Provenance.FALLBACK:
                raise ValueError(f"slot {slot} has no samples but is marked observed")
        return self

    def is_observed(self, slot: int) -> bool:
        return self.provenance[slot] == Provenance.OBSERVED


# ---------------------------------------------------------------------------
# Users and queries
# ---------------------------------------------------------------------------


class UserProfile(BaseModel):
    """Per-category preference weights derived from a visiting history."""

    model_config = ConfigDict(frozen=True)

    user_id: str
    category_weights: dict[str, float]
    visited: tuple[str, ...] = ()

    @field_validator("category_weights")
    @classmethod
    def _check_weights(cls, v: dict[str, float]) -> dict[str, float]:
        if not v:
            raise ValueError("category_weights must not be empty")
        if any(not (0.0 <= w <= 1.0) for w in v.values()):
            raise ValueError("category weights must lie in [0, 1]")
        if abs(math.fsum(v.values()) - 1.0) > 1e-9:
            raise ValueError("category weights must sum to 1")
        return dict(sorted(v.items()))

    @field_validator("visited")
    @classmethod
    def _sort_visited(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        return tuple(sorted(set(v)))

    def weight(self, category: str) -> float:
        return self.category_weights.get(category, 0.0)


class Query(BaseModel):
    """A time-budgeted itinerary request."""

    model_config = ConfigDict(frozen=True)

    start_location: Location
    end_location: Location
    start_time: float
    end_time: float

    @field_validator("start_location", "end_location")
    @classmethod
    def _check_location(cls, v: Location) -> Location:
        return check_location(v)

    @model_validator(mode="after")
    def _check_window(self) -> Query:
        if not (0 <= self.start_time < self.end_time <= MINUTES_PER_DAY):
            raise ValueError(
                "query window must satisfy 0 <= start_time < end_time <= 1440 "
                f"(got {self.start_time}..{self.end_time})"
            )
        return self

    @property
    def budget(self) -> float:
        return self.end_time - self.start_time


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


class ScheduledVisit(BaseModel):
    """One stop of an itinerary."""

    model_config = ConfigDict(frozen=True)

    venue_id: str
    arrival: float
    wait: float = Field(ge=0)
    visit_start: float
    depart: float

    @model_validator(mode="after")
    def _check_times(self) -> ScheduledVisit:
        if abs(self.visit_start - (self.arrival + self.wait)) > TIME_TOLERANCE:
            raise ValueError(
                f"visit at {self.venue_id!r}: visit_start ({self.visit_start}) must equal "
                f"arrival + wait ({self.arrival} + {self.wait})"
            )
        if self.depart <= self.visit_start:
            raise ValueError(
                f"visit at {self.venue_id!r}: depart ({self.depart}) must follow "
                f"visit_start ({self.visit_start})"
            )
        return self


class Itinerary(BaseModel):
    """An ordered schedule of visits.

    ``feasible`` is only ever false for the empty itinerary returned when the
    start-to-end transit alone does not fit the budget.
    """

    model_config = ConfigDict(frozen=True)

    visits: list[ScheduledVisit] = Field(default_factory=list)
    final_arrival: float
    score: float = Field(default=0.0, ge=0)
    feasible: bool = True

    @property
    def venue_ids(self) -> list[str]:
        return [v.venue_id for v in self.visits]

    @property
    def venue_count(self) -> int:
        return len(self.visits)


class Infeasible(BaseModel):
    """Normal (non-exceptional) result of simulating an unschedulable order."""

    model_config = ConfigDict(frozen=True)

    reason: InfeasibleReason
    venue_id: str | None = None
