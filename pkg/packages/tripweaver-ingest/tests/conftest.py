"""Shared fixtures for tripweaver-ingest tests."""

from __future__ import annotations

import io
from collections.abc import Callable, Iterable

import pytest

from tripweaver_core.types import Venue

from tripweaver_ingest.records import GpsPoint

CENTRE = (37.7749, -122.4194)

# roughly 1 km in degrees of latitude
KM = 1 / 111.195

# 2011-03-01T00:00:00Z
MIDNIGHT = 1_298_937_600


def at(hour: int, minute: int = 0, second: int = 0, *, day: int = 0) -> int:
    """Epoch seconds for a UTC time of day."""
    return MIDNIGHT + day * 86_400 + hour * 3600 + minute * 60 + second


def offset(north_km: float, east_km: float = 0.0) -> tuple[float, float]:
    return (CENTRE[0] + north_km * KM, CENTRE[1] + east_km * KM * 1.2643)


def csv_bytes(*lines: str) -> io.BytesIO:
    return io.BytesIO("".join(f"{line}\n" for line in lines).encode("utf-8"))


def dwell(
    vehicle_id: str,
    location: tuple[float, float],
    start: int,
    minutes: int,
    *,
    step_s: int = 60,
) -> list[GpsPoint]:
    """Fixes every *step_s* seconds at one spot, both ends included."""
    return [
        GpsPoint(vehicle_id=vehicle_id, timestamp=t, location=location)
        for t in range(start, start + minutes * 60 + 1, step_s)
    ]


@pytest.fixture()
def dwell_factory() -> Callable[..., list[GpsPoint]]:
    return dwell


@pytest.fixture()
def city_venues() -> list[Venue]:
    """Three venues 2 km apart on a north-south line, plus a park to the east."""
    return [
        Venue(id="V1", location=offset(0.0), category="museum", open_min=540, close_min=1020, mean_stay=60),
        Venue(id="V2", location=offset(2.0), category="museum", open_min=540, close_min=1020, mean_stay=45),
        Venue(id="V3", location=offset(4.0), category="restaurant", open_min=660, close_min=1320, mean_stay=50),
        Venue(id="V4", location=offset(0.0, 3.0), category="park", open_min=0, close_min=1440, mean_stay=30),
    ]


@pytest.fixture()
def venues_csv() -> Callable[[Iterable[Venue]], io.BytesIO]:
    def render(venues: Iterable[Venue]) -> io.BytesIO:
        rows = ["venue_id,name,lat,lon,category,open_min,close_min,mean_stay"]
        for v in venues:
            rows.append(
                f"{v.id},{v.name},{v.location[0]:.6f},{v.location[1]:.6f},"
                f"{v.category},{v.open_min},{v.close_min},{v.mean_stay:g}"
            )
        return csv_bytes(*rows)

    return render


@pytest.fixture()
def csv_input() -> Callable[..., io.BytesIO]:
    return csv_bytes


@pytest.fixture()
def clock() -> Callable[..., int]:
    return at


@pytest.fixture()
def place() -> Callable[..., tuple[float, float]]:
    return offset
