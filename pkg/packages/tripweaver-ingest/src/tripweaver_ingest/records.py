"""Raw records read from the crowdsourced inputs."""

from __future__ import annotations

from typing import Generic, TypeVar

from pydantic import BaseModel, ConfigDict, Field, field_validator

from tripweaver_core.geo import Location
from tripweaver_core.types import check_location

T = TypeVar("T")

SECONDS_PER_DAY = 86_400


def local_minute(timestamp: int, utc_offset_min: int = 0) -> int:
    """Minute of the local day (0–1439) for an epoch timestamp."""
    return ((timestamp + utc_offset_min * 60) % SECONDS_PER_DAY) // 60


class CheckinRecord(BaseModel):
    """One LBSN check-in."""

    model_config = ConfigDict(frozen=True)

    user_id: str = Field(min_length=1)
    venue_id: str = Field(min_length=1)
    timestamp: int = Field(gt=0)


class GpsPoint(BaseModel):
    """One fix of a vehicle trace."""

    model_config = ConfigDict(frozen=True)

    vehicle_id: str = Field(min_length=1)
    timestamp: int
    location: Location

    @field_validator("location")
    @classmethod
    def _check_location(cls, v: Location) -> Location:
        return check_location(v)


class StayPoint(BaseModel):
    """A period where a vehicle stayed within a small radius."""

    model_config = ConfigDict(frozen=True)

    vehicle_id: str
    centroid: Location
    arrive: int
    depart: int

    @property
    def duration_min(self) -> float:
        return (self.depart - self.arrive) / 60.0


class ParseResult(BaseModel, Generic[T]):
    """Records parsed from one stream plus the number of rows skipped."""

    records: list[T]
    skipped: int = 0
