"""Time-sliced transit matrix and stay times recovered from GPS traces.

Each vehicle trace is reduced to stay points, every stay point is snapped
to the nearest venue within ``snap_radius_m`` (ties go to the smallest
venue id), and each pair of consecutive matched stays at different venues
yields one transit sample ``arrive(B) − depart(A)`` in the hour slot of
``depart(A)``.  An unmatched stay breaks the chain: the vehicle stopped
somewhere that is not a venue.

Per cell-slot, samples outside the configured percentile band are dropped
before averaging.  Samples are sorted before aggregation, so the result
does not depend on trace order or on how vehicles were spread across
worker processes.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from tripweaver_core.enums import Provenance
from tripweaver_core.exceptions import DomainError
from tripweaver_core.geo import Location, distances_to_km, haversine_km
from tripweaver_core.network import DEFAULT_SPEED_KMH, MIN_TRANSIT_MINUTES
from tripweaver_core.types import SLOTS_PER_DAY, TransitProfile, Venue, hour_slot

from tripweaver_ingest.records import GpsPoint, local_minute
from tripweaver_ingest.staypoints import (
    DEFAULT_DIST_THRESHOLD_M,
    DEFAULT_TIME_THRESHOLD_MIN,
    detect_stay_points,
)

logger = logging.getLogger(__name__)


class TransitParams(BaseModel):
    """Knobs for turning traces into transit profiles and stay times.

    Parameters
    ----------
    snap_radius_m:
        Largest distance between a stay-point centroid and the venue it is
        matched to.
    trim:
        Low and high percentiles (linear interpolation) outside which
        samples of a cell-slot are discarded.
    min_trim_samples:
        Cell-slots with fewer samples are averaged untrimmed.
    stay_dist_m, stay_time_min:
        Stay-point detection thresholds.
    utc_offset_min:
        Fixed offset from UTC used to derive local hour slots.
    """

    model_config = ConfigDict(frozen=True)

    snap_radius_m: float = 100.0
    trim: tuple[float, float] = (5.0, 95.0)
    min_trim_samples: int = 5
    stay_dist_m: float = DEFAULT_DIST_THRESHOLD_M
    stay_time_min: float = DEFAULT_TIME_THRESHOLD_MIN
    utc_offset_min: int = 0


class TransitSample(NamedTuple):
    from_id: str
    to_id: str
    slot: int
    minutes: float


class DwellSample(NamedTuple):
    venue_id: str
    minutes: float


class TransitMatrix(BaseModel):
    """Everything recovered from one batch of traces."""

    profiles: list[TransitProfile]
    stay_minutes: dict[str, float]
    stay_samples: dict[str, int]
    fallback_speed: tuple[float, ...]
    samples: list[TransitSample]
    vehicles: int = 0
    stay_points: int = 0
    matched_stays: int = 0

    @property
    def observed_cells(self) -> int:
        return len(self.profiles)

    @property
    def observed_cell_slots(self) -> int:
        return sum(
            1 for p in self.profiles for prov in p.provenance if prov == Provenance.OBSERVED
        )


def _check_params(params: TransitParams) -> None:
    if params.snap_radius_m <= 0:
        raise DomainError(f"snap_radius_m must be > 0, got {params.snap_radius_m}")
    low, high = params.trim
    if not (0.0 <= low < high <= 100.0):
        raise DomainError(f"trim must satisfy 0 <= low < high <= 100, got {params.trim}")
    if params.min_trim_samples < 1:
        raise DomainError("min_trim_samples must be >= 1")


def trimmed_mean(
    values: Iterable[float], trim: tuple[float, float], min_samples: int
) -> tuple[float, int]:
    """Mean and count of the values inside the percentile band.

    Trimming only applies once there are at least *min_samples* values.
    """
    arr = np.sort(np.asarray(list(values), dtype=float))
    if arr.size >= min_samples:
        low, high = np.percentile(arr, trim)
        kept = arr[(arr >= low) & (arr <= high)]
        if kept.size:
            arr = kept
    mean = float(arr.mean())
    return min(max(mean, float(arr[0])), float(arr[-1])), int(arr.size)


class _Snapper:
    """Nearest-venue lookup within a radius."""

    def __init__(self, venues: Sequence[Venue], radius_m: float) -> None:
        ordered = sorted(venues, key=lambda v: v.id)
        self.ids = [v.id for v in ordered]
        self.points: list[Location] = [v.location for v in ordered]
        self.radius_km = radius_m / 1000.0

    def snap(self, centroid: Location) -> str | None:
        if not self.ids:
            return None
        distances = distances_to_km(centroid, self.points)
        # argmin returns the first minimum, i.e. the smallest id
        best = int(np.argmin(distances))
        return self.ids[best] if distances[best] <= self.radius_km else None


def _vehicle_samples(
    trace: list[GpsPoint], snapper: _Snapper, params: TransitParams
) -> tuple[list[TransitSample], list[DwellSample], int]:
    stays = detect_stay_points(trace, params.stay_dist_m, params.stay_time_min)
    transits: list[TransitSample] = []
    dwells: list[DwellSample] = []
    previous: tuple[str, int] | None = None
    for stay in stays:
        venue_id = snapper.snap(stay.centroid)
        if venue_id is None:
            previous = None
            continue
        dwells.append(DwellSample(venue_id, stay.duration_min))
        if previous is not None and previous[0] != venue_id:
            from_id, left_at = previous
            minutes = (stay.arrive - left_at) / 60.0
            if minutes > 0:
                slot = hour_slot(local_minute(left_at, params.utc_offset_min))
                transits.append(TransitSample(from_id, venue_id, slot, minutes))
        previous = (venue_id, stay.depart)
    return transits, dwells, len(stays)


def group_traces(points: Iterable[GpsPoint]) -> list[list[GpsPoint]]:
    """Split points into per-vehicle traces, by vehicle id.

    Each trace is sorted by timestamp; fixes sharing a timestamp are ordered
    by location so the result does not depend on input order.
    """
    by_vehicle: dict[str, list[GpsPoint]] = defaultdict(list)
    for point in points:
        by_vehicle[point.vehicle_id].append(point)
    return [
        sorted(by_vehicle[vid], key=lambda p: (p.timestamp, p.location)) for vid in sorted(by_vehicle)
    ]


def estimate_fallback_speeds(
    samples: Iterable[TransitSample],
    venues: Sequence[Venue],
    default_speed_kmh: float = DEFAULT_SPEED_KMH,
) -> tuple[float, ...]:
    """Per-slot median observed speed (km/h); *default_speed_kmh* where unobserved."""
    if default_speed_kmh <= 0:
        raise DomainError(f"default_speed_kmh must be > 0, got {default_speed_kmh}")
    location = {v.id: v.location for v in venues}
    per_slot: list[list[float]] = [[] for _ in range(SLOTS_PER_DAY)]
    for sample in samples:
        if sample.from_id not in location or sample.to_id not in location:
            continue
        km = haversine_km(location[sample.from_id], location[sample.to_id])
        if km > 0 and sample.minutes > 0:
            per_slot[sample.slot].append(km / sample.minutes * 60.0)
    return tuple(
        float(np.median(speeds)) if speeds else float(default_speed_kmh) for speeds in per_slot
    )


def build_transit_matrix(
    traces: Iterable[GpsPoint],
    venues: Sequence[Venue],
    params: TransitParams | None = None,
    *,
    fallback_speed: Sequence[float] | None = None,
    default_speed_kmh: float = DEFAULT_SPEED_KMH,
    workers: int = 1,
) -> TransitMatrix:
    """Recover transit profiles and stay times from raw GPS fixes.

    Only directed pairs with at least one observed slot get a profile; its
    unobserved slots hold the distance-based fallback estimate.  When
    *fallback_speed* is not given it is estimated from the samples.
    """
    params = params or TransitParams()
    _check_params(params)
    vehicle_traces = group_traces(traces)
    snapper = _Snapper(venues, params.snap_radius_m)

    if workers > 1 and len(vehicle_traces) > 1:
        chunksize = max(1, len(vehicle_traces) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    _vehicle_samples,
                    vehicle_traces,
                    repeat(snapper),
                    repeat(params),
                    chunksize=chunksize,
                )
            )
    else:
        results = [_vehicle_samples(t, snapper, params) for t in vehicle_traces]

    samples = sorted(s for transits, _, _ in results for s in transits)
    dwells = sorted(d for _, dwell, _ in results for d in dwell)
    stay_points = sum(n for _, _, n in results)

    speeds = (
        tuple(float(s) for s in fallback_speed)
        if fallback_speed is not None
        else estimate_fallback_speeds(samples, venues, default_speed_kmh)
    )

    cells: dict[tuple[str, str], dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    for sample in samples:
        cells[(sample.from_id, sample.to_id)][sample.slot].append(sample.minutes)

    location = {v.id: v.location for v in venues}
    profiles = []
    for (from_id, to_id), slots in sorted(cells.items()):
        km = haversine_km(location[from_id], location[to_id])
        minutes: list[float] = []
        counts: list[int] = []
        provenance: list[Provenance] = []
        for slot in range(SLOTS_PER_DAY):
            values = slots.get(slot)
            if values:
                mean, kept = trimmed_mean(values, params.trim, params.min_trim_samples)
                minutes.append(mean)
                counts.append(kept)
                provenance.append(Provenance.OBSERVED)
            else:
                minutes.append(max(km / speeds[slot] * 60.0, MIN_TRANSIT_MINUTES))
                counts.append(0)
                provenance.append(Provenance.FALLBACK)
        profiles.append(
            TransitProfile(
                from_id=from_id,
                to_id=to_id,
                slot_minutes=tuple(minutes),
                slot_samples=tuple(counts),
                provenance=tuple(provenance),
            )
        )

    by_venue: dict[str, list[float]] = defaultdict(list)
    for dwell in dwells:
        by_venue[dwell.venue_id].append(dwell.minutes)
    stay_minutes: dict[str, float] = {}
    stay_samples: dict[str, int] = {}
    for venue_id in sorted(by_venue):
        stay_minutes[venue_id], stay_samples[venue_id] = trimmed_mean(
            by_venue[venue_id], params.trim, params.min_trim_samples
        )

    logger.info(
        "Recovered %d transit samples over %d cells from %d vehicles (%d of %d stays matched)",
        len(samples),
        len(profiles),
        len(vehicle_traces),
        len(dwells),
        stay_points,
    )
    return TransitMatrix(
        profiles=profiles,
        stay_minutes=stay_minutes,
        stay_samples=stay_samples,
        fallback_speed=speeds,
        samples=samples,
        vehicles=len(vehicle_traces),
        stay_points=stay_points,
        matched_stays=len(dwells),
    )
