"""The POI network and time-dependent transit lookup.

A :class:`PoiNetwork` bundles venues, the directed transit profiles recovered
from GPS traces, and per-slot fallback speeds used whenever a pair (or a
slot of a pair) has no observed evidence.  The network is immutable once
built and safe to share between concurrent planning queries.

Transit is charged at the rate of the *departure* slot, even when the trip
crosses into the next hour.  This admits non-FIFO artefacts (leaving later
can arrive earlier) which are accepted for simplicity.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Mapping
from types import MappingProxyType
from typing import Any

from pydantic import BaseModel, ConfigDict, PrivateAttr, field_validator, model_validator

from tripweaver_core.exceptions import DomainError, VenueNotFoundError
from tripweaver_core.geo import Location, haversine_km, pairwise_haversine_km
from tripweaver_core.types import (
    MINUTES_PER_DAY,
    SLOTS_PER_DAY,
    TransitProfile,
    Venue,
    hour_slot,
)

logger = logging.getLogger(__name__)

#: Floor applied to distance-based transit between distinct endpoints.
MIN_TRANSIT_MINUTES = 1.0

#: Fallback speed used when nothing better is known (km/h).
DEFAULT_SPEED_KMH = 30.0

#: A transit endpoint: a venue id or a raw ``(lat, lon)``.
Endpoint = str | Location


class TravelTable:
    """Plain lookup tables behind :meth:`PoiNetwork.travel_minutes`.

    Built once per network.  The forward schedule pass reads it directly so
    that no model attribute is touched per leg.
    """

    __slots__ = ("windows", "_index", "_distances", "_locations", "_observed", "_speeds")

    def __init__(
        self,
        venues: Mapping[str, Venue],
        transit: Mapping[tuple[str, str], TransitProfile],
        fallback_speed: tuple[float, ...],
    ) -> None:
        ids = list(venues)
        #: venue id -> (open_min, close_min, mean_stay)
        self.windows: dict[str, tuple[int, int, float]] = {
            vid: (v.open_min, v.close_min, v.mean_stay) for vid, v in venues.items()
        }
        self._index = {vid: i for i, vid in enumerate(ids)}
        self._distances: list[list[float]] = pairwise_haversine_km(
            [venues[vid].location for vid in ids]
        ).tolist()
        self._locations = {vid: v.location for vid, v in venues.items()}
        # observed minutes per slot, None where the slot falls back
        self._observed: dict[tuple[str, str], tuple[float | None, ...]] = {
            key: tuple(
                m if p.is_observed(slot) else None for slot, m in enumerate(p.slot_minutes)
            )
            for key, p in transit.items()
        }
        self._speeds = fallback_speed

    def _locate(self, endpoint: Endpoint) -> Location:
        if isinstance(endpoint, str):
            try:
                return self._locations[endpoint]
            except KeyError:
                raise VenueNotFoundError(endpoint) from None
        return endpoint

    def minutes(self, origin: Endpoint, dest: Endpoint, depart: float) -> float:
        slot = hour_slot(depart)
        if isinstance(origin, str) and isinstance(dest, str):
            if origin == dest:
                return 0.0
            observed = self._observed.get((origin, dest))
            if observed is not None:
                value = observed[slot]
                if value is not None:
                    return value
            try:
                km = self._distances[self._index[origin]][self._index[dest]]
            except KeyError as exc:
                raise VenueNotFoundError(exc.args[0]) from None
        else:
            a = self._locate(origin)
            b = self._locate(dest)
            if a == b:
                return 0.0
            km = haversine_km(a, b)
        return max(km / self._speeds[slot] * 60.0, MIN_TRANSIT_MINUTES)


class PoiNetwork(BaseModel):
    """Immutable bundle of venues, transit profiles and fallback speeds.

    ``venues`` and ``transit`` are exposed as read-only mappings once the
    model is built.
    """

    model_config = ConfigDict(frozen=True)

    venues: dict[str, Venue]
    transit: dict[tuple[str, str], TransitProfile] = {}
    fallback_speed: tuple[float, ...] = (DEFAULT_SPEED_KMH,) * SLOTS_PER_DAY

    _table: TravelTable | None = PrivateAttr(default=None)
    _max_popularity: float = PrivateAttr(default=1.0)

    @field_validator("fallback_speed")
    @classmethod
    def _check_speeds(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if len(v) != SLOTS_PER_DAY:
            raise ValueError(f"fallback_speed must have {SLOTS_PER_DAY} entries")
        if any(s <= 0 for s in v):
            raise ValueError("fallback_speed entries must be > 0")
        return v

    @model_validator(mode="after")
    def _check_keys(self) -> PoiNetwork:
        for key, venue in self.venues.items():
            if key != venue.id:
                raise ValueError(f"venue keyed {key!r} has id {venue.id!r}")
        for (a, b), profile in self.transit.items():
            if (profile.from_id, profile.to_id) != (a, b):
                raise ValueError(f"transit keyed {(a, b)!r} describes {profile.from_id!r}->{profile.to_id!r}")
            for vid in (a, b):
                if vid not in self.venues:
                    raise ValueError(f"transit profile references unknown venue {vid!r}")
        return self

    def model_post_init(self, __context: Any) -> None:
        object.__setattr__(self, "venues", MappingProxyType(dict(self.venues)))
        object.__setattr__(self, "transit", MappingProxyType(dict(self.transit)))
        self._table = TravelTable(self.venues, self.transit, self.fallback_speed)
        peak = max((v.popularity for v in self.venues.values()), default=0.0)
        self._max_popularity = peak if peak > 0 else 1.0

    # ------------------------------------------------------------------
    # Construction helpers
    # ------------------------------------------------------------------

    @classmethod
    def build(
        cls,
        venues: Iterable[Venue],
        transit: Iterable[TransitProfile] = (),
        fallback_speed: Iterable[float] | None = None,
    ) -> PoiNetwork:
        """Build a network from flat venue and profile collections."""
        venue_map: dict[str, Venue] = {}
        for venue in sorted(venues, key=lambda v: v.id):
            if venue.id in venue_map:
                raise DomainError(f"duplicate venue id {venue.id!r}")
            venue_map[venue.id] = venue
        transit_map: dict[tuple[str, str], TransitProfile] = {}
        for profile in sorted(transit, key=lambda p: (p.from_id, p.to_id)):
            key = (profile.from_id, profile.to_id)
            if key in transit_map:
                logger.warning("Overwriting transit profile %r", key)
            transit_map[key] = profile
        speeds = tuple(fallback_speed) if fallback_speed is not None else (DEFAULT_SPEED_KMH,) * SLOTS_PER_DAY
        return cls(venues=venue_map, transit=transit_map, fallback_speed=speeds)

    def subset(self, venue_ids: Iterable[str]) -> PoiNetwork:
        """Return the network restricted to *venue_ids*."""
        keep = set(venue_ids)
        for vid in keep:
            self.venue(vid)
        return PoiNetwork.build(
            (v for vid, v in self.venues.items() if vid in keep),
            (p for (a, b), p in self.transit.items() if a in keep and b in keep),
            self.fallback_speed,
        )

    # ------------------------------------------------------------------
    # Lookup
    # ------------------------------------------------------------------

    @property
    def max_popularity(self) -> float:
        return self._max_popularity

    def venue(self, venue_id: str) -> Venue:
        try:
            return self.venues[venue_id]
        except KeyError:
            raise VenueNotFoundError(venue_id) from None

    def location_of(self, endpoint: Endpoint) -> Location:
        if isinstance(endpoint, str):
            return self.venue(endpoint).location
        return endpoint

    def categories(self) -> list[str]:
        return sorted({v.category for v in self.venues.values()})

    @property
    def table(self) -> TravelTable:
        return self._table

    def travel_minutes(self, origin: Endpoint, dest: Endpoint, depart: float) -> float:
        """Unchecked transit lookup.

        Callers guarantee ``0 <= depart < 1440``; use :func:`transit_duration`
        for validated access.
        """
        return self._table.minutes(origin, dest, depart)


def transit_duration(
    network: PoiNetwork,
    origin: Endpoint,
    dest: Endpoint,
    depart: float,
) -> float:
    """Minutes needed to travel from *origin* to *dest* leaving at *depart*.

    Returns the observed duration for the departure slot when the directed
    profile has one, otherwise the great-circle distance at the slot's
    fallback speed.  Identical endpoints cost nothing.
    """
    if not (0 <= depart < MINUTES_PER_DAY):
        raise DomainError(f"departure minute out of range [0, 1440): {depart}")
    for endpoint in (origin, dest):
        if isinstance(endpoint, str):
            network.venue(endpoint)
    return network.travel_minutes(origin, dest, depart)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def network_to_dict(network: PoiNetwork) -> dict[str, Any]:
    return {
        "venues": [v.model_dump(mode="json") for v in network.venues.values()],
        "transit": [p.model_dump(mode="json") for p in network.transit.values()],
        "fallback_speed": list(network.fallback_speed),
    }


def network_to_json(network: PoiNetwork, *, indent: int | None = 2) -> str:
    """Serialize *network* as a single JSON document."""
    return json.dumps(network_to_dict(network), indent=indent)


def network_from_dict(data: dict[str, Any]) -> PoiNetwork:
    return PoiNetwork.build(
        (Venue.model_validate(v) for v in data.get("venues", [])),
        (TransitProfile.model_validate(p) for p in data.get("transit", [])),
        data.get("fallback_speed"),
    )


def network_from_json(text: str | bytes) -> PoiNetwork:
    """Parse a document written by :func:`network_to_json`."""
    return network_from_dict(json.loads(text))
