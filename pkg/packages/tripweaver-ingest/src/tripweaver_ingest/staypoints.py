"""Stay-point detection over a single vehicle trace.

A stay point is a maximal run of fixes that all lie within
``dist_threshold_m`` of the run's first fix and that spans at least
``time_threshold_min`` minutes.  When a run is too short the scan restarts
at the next fix; when it qualifies, the scan resumes after it.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from tripweaver_core.exceptions import DomainError
from tripweaver_core.geo import haversine_m

from tripweaver_ingest.records import GpsPoint, StayPoint

DEFAULT_DIST_THRESHOLD_M = 200.0
DEFAULT_TIME_THRESHOLD_MIN = 20.0


def check_trace(trace: Sequence[GpsPoint]) -> None:
    """Raise unless *trace* is one vehicle's fixes in timestamp order."""
    if not trace:
        return
    vehicle = trace[0].vehicle_id
    previous = trace[0].timestamp
    for point in trace[1:]:
        if point.vehicle_id != vehicle:
            raise DomainError(
                f"trace mixes vehicles {vehicle!r} and {point.vehicle_id!r}"
            )
        if point.timestamp < previous:
            raise DomainError(
                f"trace of {vehicle!r} is not sorted by timestamp "
                f"({point.timestamp} after {previous})"
            )
        previous = point.timestamp


def detect_stay_points(
    trace: Sequence[GpsPoint],
    dist_threshold_m: float = DEFAULT_DIST_THRESHOLD_M,
    time_threshold_min: float = DEFAULT_TIME_THRESHOLD_MIN,
) -> list[StayPoint]:
    """Detect stay points in one vehicle's time-ordered trace."""
    if dist_threshold_m <= 0:
        raise DomainError(f"dist_threshold_m must be > 0, got {dist_threshold_m}")
    if time_threshold_min < 0:
        raise DomainError(f"time_threshold_min must be >= 0, got {time_threshold_min}")
    check_trace(trace)

    min_seconds = time_threshold_min * 60.0
    stays: list[StayPoint] = []
    n = len(trace)
    i = 0
    while i < n:
        anchor = trace[i].location
        j = i + 1
        while j < n and haversine_m(anchor, trace[j].location) <= dist_threshold_m:
            j += 1
        # the run is trace[i:j]
        if trace[j - 1].timestamp - trace[i].timestamp >= min_seconds and j - i > 1:
            coords = np.asarray([p.location for p in trace[i:j]], dtype=float)
            lat, lon = coords.mean(axis=0)
            stays.append(
                StayPoint(
                    vehicle_id=trace[i].vehicle_id,
                    centroid=(float(lat), float(lon)),
                    arrive=trace[i].timestamp,
                    depart=trace[j - 1].timestamp,
                )
            )
            i = j
        else:
            i += 1
    return stays
