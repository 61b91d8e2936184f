"""Deterministic synthetic city, vehicle traces and check-ins with known ground truth.

Every output is a pure function of its seed and parameters: the same call
returns byte-identical CSV text.  The ground truth travels with the data
(``ground_truth.json``) so recovery can be checked against it.

Layout of a city:

* venue 0 is an airport in the south-west corner (open all day);
* venue 1 is a noon-peaked restaurant about 2 km east of the airport;
* the rest are placed uniformly in a square box, at least
  ``min_separation_m`` apart, with whole-hour opening times, a Gaussian
  hourly visit profile around a random peak, and a Zipf-like popularity
  prior.

Travel time between venues is great-circle distance at ``base_speed_kmh``,
multiplied by ``rush_multiplier`` when departing in a rush hour, and never
below one minute.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Mapping
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from tripweaver_core.exceptions import DomainError, VenueNotFoundError
from tripweaver_core.geo import Location, distances_to_km, haversine_km
from tripweaver_core.network import MIN_TRANSIT_MINUTES, PoiNetwork
from tripweaver_core.types import MINUTES_PER_DAY, SLOTS_PER_DAY, Venue

from tripweaver_ingest.parsing import CHECKIN_HEADER, TRACE_HEADER, VENUE_HEADER
from tripweaver_ingest.records import SECONDS_PER_DAY

KM_PER_DEGREE = 111.195

DEFAULT_CATEGORIES = (
    "bar",
    "cafe",
    "gallery",
    "landmark",
    "museum",
    "park",
    "restaurant",
    "shop",
)

AIRPORT_CATEGORY = "airport"

# 2011-03-01T00:00:00Z, a UTC midnight
DEFAULT_BASE_EPOCH = 1_298_937_600

_MAX_PLACEMENT_ATTEMPTS = 500


class CityParams(BaseModel):
    """Shape of the synthetic city and its traffic."""

    model_config = ConfigDict(frozen=True)

    center: Location = (37.7749, -122.4194)
    #: Side of the square box in km; by default ``max(10, sqrt(n_venues))``.
    extent_km: float | None = Field(default=None, gt=0)
    base_speed_kmh: float = Field(default=36.0, gt=0)
    rush_hours: tuple[int, ...] = (7, 8)
    rush_multiplier: float = Field(default=2.0, ge=1.0)
    min_separation_m: float = Field(default=500.0, ge=0)
    categories: tuple[str, ...] = DEFAULT_CATEGORIES
    base_epoch: int = DEFAULT_BASE_EPOCH


class SyntheticVenue(BaseModel):
    """A venue together with the truth the generators sample from."""

    model_config = ConfigDict(frozen=True)

    id: str
    name: str
    location: Location
    category: str
    open_min: int
    close_min: int
    mean_stay: int
    peak_hour: int
    histogram: tuple[float, ...]
    popularity_prior: float


class CityGroundTruth(BaseModel):
    """The generating truth of a synthetic city."""

    model_config = ConfigDict(frozen=True)

    seed: int
    params: CityParams
    venues: list[SyntheticVenue]

    _index: dict[str, SyntheticVenue] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context: Any) -> None:
        self._index = {v.id: v for v in self.venues}

    def venue(self, venue_id: str) -> SyntheticVenue:
        try:
            return self._index[venue_id]
        except KeyError:
            raise VenueNotFoundError(venue_id) from None

    def speed_kmh(self, slot: int) -> float:
        """Effective travel speed for departures in *slot*."""
        if slot in self.params.rush_hours:
            return self.params.base_speed_kmh / self.params.rush_multiplier
        return self.params.base_speed_kmh

    def true_transit(self, from_id: str, to_id: str, slot: int) -> float:
        """Noise-free minutes from *from_id* to *to_id* departing in *slot*."""
        if from_id == to_id:
            self.venue(from_id)
            return 0.0
        km = haversine_km(self.venue(from_id).location, self.venue(to_id).location)
        return max(km / self.speed_kmh(slot) * 60.0, MIN_TRANSIT_MINUTES)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str | bytes) -> CityGroundTruth:
        return cls.model_validate_json(text)


# ---------------------------------------------------------------------------
# City
# ---------------------------------------------------------------------------


def _offset(center: Location, north_km: float, east_km: float) -> Location:
    lat = center[0] + north_km / KM_PER_DEGREE
    lon = center[1] + east_km / (KM_PER_DEGREE * math.cos(math.radians(center[0])))
    return (round(lat, 6), round(lon, 6))


def _gaussian_histogram(
    peak: int, sigma: float, open_min: int, close_min: int
) -> tuple[float, ...]:
    hours = np.arange(SLOTS_PER_DAY)
    weights = np.exp(-((hours - peak) ** 2) / (2 * sigma**2))
    weights[(hours * 60 < open_min) | (hours * 60 >= close_min)] = 0.0
    return tuple(float(w) for w in weights / weights.sum())


def generate_city(
    seed: int, n_venues: int, params: CityParams | None = None
) -> tuple[str, CityGroundTruth]:
    """Generate ``venues.csv`` content and the matching ground truth."""
    if n_venues < 2:
        raise DomainError(f"a city needs at least 2 venues, got {n_venues}")
    params = params or CityParams()
    rng = np.random.default_rng(seed)
    extent = params.extent_km or max(10.0, math.sqrt(n_venues))
    half = extent / 2
    width = max(4, len(str(n_venues - 1)))
    min_sep_km = params.min_separation_m / 1000.0

    corner = (-0.4 * extent, -0.4 * extent)
    placed: list[Location] = [
        _offset(params.center, *corner),
        _offset(params.center, corner[0], corner[1] + 2.0),
    ]
    while len(placed) < n_venues:
        for _ in range(_MAX_PLACEMENT_ATTEMPTS):
            north, east = rng.uniform(-half, half, size=2)
            candidate = _offset(params.center, float(north), float(east))
            if float(distances_to_km(candidate, placed).min()) >= min_sep_km:
                placed.append(candidate)
                break
        else:
            raise DomainError(
                f"could not place {n_venues} venues {params.min_separation_m} m apart "
                f"in a {extent:.1f} km box"
            )

    ranks = rng.permutation(n_venues)
    # the restaurant is the most popular venue
    top = int(np.argmin(ranks))
    ranks[[1, top]] = ranks[[top, 1]]
    priors = 1.0 / (ranks + 1.0) ** 0.8

    venues = [
        SyntheticVenue(
            id=f"V{0:0{width}d}",
            name="Airport",
            location=placed[0],
            category=AIRPORT_CATEGORY,
            open_min=0,
            close_min=MINUTES_PER_DAY,
            mean_stay=30,
            peak_hour=8,
            histogram=_gaussian_histogram(8, 4.0, 0, MINUTES_PER_DAY),
            popularity_prior=float(priors[0]),
        ),
        SyntheticVenue(
            id=f"V{1:0{width}d}",
            name="Trattoria",
            location=placed[1],
            category="restaurant",
            open_min=660,
            close_min=1320,
            mean_stay=60,
            peak_hour=12,
            histogram=_gaussian_histogram(12, 1.0, 660, 1320),
            popularity_prior=float(priors[1]),
        ),
    ]
    for i in range(2, n_venues):
        category = str(params.categories[int(rng.integers(len(params.categories)))])
        open_h = int(rng.integers(6, 13))
        close_h = min(24, open_h + int(rng.integers(6, 15)))
        peak = int(rng.integers(open_h, close_h))
        sigma = float(rng.uniform(1.0, 3.0))
        venues.append(
            SyntheticVenue(
                id=f"V{i:0{width}d}",
                name=f"{category.title()} {i}",
                location=placed[i],
                category=category,
                open_min=open_h * 60,
                close_min=close_h * 60,
                mean_stay=int(rng.integers(25, 121)),
                peak_hour=peak,
                histogram=_gaussian_histogram(peak, sigma, open_h * 60, close_h * 60),
                popularity_prior=float(priors[i]),
            )
        )

    city = CityGroundTruth(seed=seed, params=params, venues=venues)
    return venues_csv(city), city


def venues_csv(city: CityGroundTruth) -> str:
    """Render the city's venue metadata as ``venues.csv``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(VENUE_HEADER)
    for v in city.venues:
        writer.writerow(
            [
                v.id,
                v.name,
                f"{v.location[0]:.6f}",
                f"{v.location[1]:.6f}",
                v.category,
                v.open_min,
                v.close_min,
                v.mean_stay,
            ]
        )
    return buf.getvalue()


def ground_truth_network(
    city: CityGroundTruth, popularity: Mapping[str, float] | None = None
) -> PoiNetwork:
    """A network whose transit equals :meth:`CityGroundTruth.true_transit`.

    Without *popularity*, the prior is scaled so the most popular venue
    sees 50 check-ins a day.
    """
    top_prior = max(v.popularity_prior for v in city.venues)
    venues = [
        Venue(
            id=v.id,
            name=v.name,
            location=v.location,
            category=v.category,
            popularity=(
                popularity.get(v.id, 0.0)
                if popularity is not None
                else 50.0 * v.popularity_prior / top_prior
            ),
            open_min=v.open_min,
            close_min=v.close_min,
            visit_histogram=v.histogram,
            mean_stay=v.mean_stay,
        )
        for v in city.venues
    ]
    speeds = [city.speed_kmh(slot) for slot in range(SLOTS_PER_DAY)]
    return PoiNetwork.build(venues, fallback_speed=speeds)


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


def _dwell_times(arrive: int, depart: int, cadence_s: int) -> list[int]:
    times = list(range(arrive, depart, cadence_s))
    if times[-1] != depart:
        times.append(depart)
    return times


def _travel_times(depart: int, arrive: int, cadence_s: int) -> list[int]:
    """Fix times strictly inside a trip.

    The first half is aligned to the departure and the second half to the
    arrival, so every fix is at least one cadence of travel away from both
    ends (or half the trip, whichever is less).
    """
    mid = (depart + arrive) / 2
    outbound = [t for t in range(depart + cadence_s, arrive, cadence_s) if t < mid]
    inbound = [t for t in range(arrive - cadence_s, depart, -cadence_s) if t >= mid]
    return outbound + inbound[::-1]


def generate_traces(
    city: CityGroundTruth,
    n_vehicles: int,
    trips_per_vehicle: int,
    noise_m: float,
    seed: int,
    *,
    cadence_s: int = 60,
    travel_jitter: float = 0.05,
) -> str:
    """Render ``traces.csv`` for vehicles hopping between random venues.

    Each vehicle starts at a random venue at a random time of day, dwells
    about the venue's true stay (±10 %), then drives to another venue in
    ``true_transit × (1 ± travel_jitter)``.  Dwell fixes include the exact
    arrival and departure seconds.  Positions get Gaussian noise of scale
    *noise_m*.
    """
    if n_vehicles < 0 or trips_per_vehicle < 0:
        raise DomainError("vehicle and trip counts must be >= 0")
    if noise_m < 0 or cadence_s <= 0 or not (0 <= travel_jitter < 1):
        raise DomainError("noise_m >= 0, cadence_s > 0 and 0 <= travel_jitter < 1 required")
    rng = np.random.default_rng(seed)
    venues = city.venues
    n = len(venues)
    base = city.params.base_epoch
    width = max(3, len(str(max(n_vehicles - 1, 0))))
    lat_scale = 1.0 / (KM_PER_DEGREE * 1000.0)
    lon_scale = lat_scale / math.cos(math.radians(city.params.center[0]))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for k in range(n_vehicles):
        vehicle_id = f"T{k:0{width}d}"
        current = int(rng.integers(n))
        clock = base + int(rng.integers(SECONDS_PER_DAY))
        fixes: list[tuple[int, float, float]] = []

        for trip in range(trips_per_vehicle + 1):
            here = venues[current]
            depart = clock + int(round(here.mean_stay * rng.uniform(0.9, 1.1) * 60))
            fixes.extend((t, *here.location) for t in _dwell_times(clock, depart, cadence_s))
            if trip == trips_per_vehicle:
                break
            nxt = int(rng.integers(n - 1))
            if nxt >= current:
                nxt += 1
            there = venues[nxt]
            slot = ((depart - base) % SECONDS_PER_DAY) // 3600
            minutes = city.true_transit(here.id, there.id, slot)
            minutes *= 1.0 + rng.uniform(-travel_jitter, travel_jitter)
            arrive = depart + max(1, int(round(minutes * 60)))
            for t in _travel_times(depart, arrive, cadence_s):
                f = (t - depart) / (arrive - depart)
                fixes.append(
                    (
                        t,
                        here.location[0] + f * (there.location[0] - here.location[0]),
                        here.location[1] + f * (there.location[1] - here.location[1]),
                    )
                )
            clock = arrive
            current = nxt

        noise = rng.normal(0.0, noise_m, size=(len(fixes), 2)) if noise_m > 0 else None
        for i, (t, lat, lon) in enumerate(fixes):
            if noise is not None:
                lat += noise[i, 0] * lat_scale
                lon += noise[i, 1] * lon_scale
            writer.writerow([vehicle_id, t, f"{lat:.6f}", f"{lon:.6f}"])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Check-ins
# ---------------------------------------------------------------------------


def generate_checkins(
    city: CityGroundTruth,
    n_users: int,
    checkins_per_user: int,
    days: int,
    seed: int,
    *,
    preference_boost: float = 4.0,
) -> str:
    """Render ``checkins.csv``.

    Each user favours one category (its venues are *preference_boost* times
    as likely); venues are otherwise drawn by popularity prior.  The hour of
    a check-in follows the venue's true histogram, so it always falls inside
    opening hours.
    """
    if n_users < 0 or checkins_per_user < 0:
        raise DomainError("user and check-in counts must be >= 0")
    if days <= 0:
        raise DomainError(f"days must be > 0, got {days}")
    rng = np.random.default_rng(seed)
    venues = city.venues
    priors = np.array([v.popularity_prior for v in venues])
    categories = np.array([v.category for v in venues])
    choices = sorted(set(categories.tolist()))
    width = max(4, len(str(max(n_users - 1, 0))))
    base = city.params.base_epoch

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CHECKIN_HEADER)
    for u in range(n_users):
        user_id = f"u{u:0{width}d}"
        preferred = choices[int(rng.integers(len(choices)))]
        weights = priors * np.where(categories == preferred, preference_boost, 1.0)
        picks = rng.choice(len(venues), size=checkins_per_user, p=weights / weights.sum())
        for index in picks:
            venue = venues[int(index)]
            day = int(rng.integers(days))
            hour = int(rng.choice(SLOTS_PER_DAY, p=venue.histogram))
            second = int(rng.integers(3600))
            writer.writerow([user_id, venue.id, base + day * SECONDS_PER_DAY + hour * 3600 + second])
    return buf.getvalue()
