"""Great-circle distance helpers."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

#: Mean Earth radius in kilometres.
EARTH_RADIUS_KM = 6371.0088

Location = tuple[float, float]


def haversine_km(a: Location, b: Location) -> float:
    """Great-circle distance between two ``(lat, lon)`` points in km."""
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    lat2, lon2 = math.radians(b[0]), math.radians(b[1])
    h = (
        math.sin((lat2 - lat1) / 2) ** 2
        + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2
    )
    return 2 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def haversine_m(a: Location, b: Location) -> float:
    return haversine_km(a, b) * 1000.0


def pairwise_haversine_km(points: Sequence[Location]) -> np.ndarray:
    """Return the ``n × n`` great-circle distance matrix for *points*."""
    if not points:
        return np.zeros((0, 0))
    rad = np.radians(np.asarray(points, dtype=float))
    lat = rad[:, 0][:, None]
    lon = rad[:, 1][:, None]
    h = (
        np.sin((lat.T - lat) / 2) ** 2
        + np.cos(lat) * np.cos(lat.T) * np.sin((lon.T - lon) / 2) ** 2
    )
    return 2 * EARTH_RADIUS_KM * np.arcsin(np.minimum(1.0, np.sqrt(h)))


def distances_to_km(origin: Location, points: Sequence[Location]) -> np.ndarray:
    """Great-circle distances from *origin* to each of *points*, in km."""
    if not points:
        return np.zeros(0)
    rad = np.radians(np.asarray(points, dtype=float))
    lat0, lon0 = math.radians(origin[0]), math.radians(origin[1])
    h = (
        np.sin((rad[:, 0] - lat0) / 2) ** 2
        + math.cos(lat0) * np.cos(rad[:, 0]) * np.sin((rad[:, 1] - lon0) / 2) ** 2
    )
    return 2 * EARTH_RADIUS_KM * np.arcsin(np.minimum(1.0, np.sqrt(h)))
