"""Shared fixtures for tripweaver-core tests."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
import pytest

from tripweaver_core.enums import Provenance
from tripweaver_core.network import PoiNetwork
from tripweaver_core.types import (
    SLOTS_PER_DAY,
    Query,
    TransitProfile,
    UserProfile,
    Venue,
)

CENTRE = (37.7749, -122.4194)
CATEGORIES = ["food", "museum", "park", "shop"]

# roughly 1 km in degrees of latitude
KM = 1 / 111.195


def make_venue(
    vid: str,
    *,
    offset_km: tuple[float, float] = (0.0, 0.0),
    category: str = "museum",
    popularity: float = 1.0,
    open_min: int = 0,
    close_min: int = 1440,
    mean_stay: float = 60.0,
    histogram: list[float] | None = None,
) -> Venue:
    return Venue(
        id=vid,
        name=f"Venue {vid}",
        location=(CENTRE[0] + offset_km[0] * KM, CENTRE[1] + offset_km[1] * KM),
        category=category,
        popularity=popularity,
        open_min=open_min,
        close_min=close_min,
        mean_stay=mean_stay,
        visit_histogram=tuple(histogram) if histogram is not None else (0.0,) * SLOTS_PER_DAY,
    )


def random_instance(
    rng: np.random.Generator, n_venues: int
) -> tuple[PoiNetwork, UserProfile, Query]:
    """A small random city: venues within ~3 km of the centre, a 3–6 hour query."""
    venues = []
    for i in range(n_venues):
        open_h = int(rng.integers(6, 12))
        close_h = min(open_h + int(rng.integers(4, 12)), 24)
        histogram = [0.0] * SLOTS_PER_DAY
        for h in range(open_h, close_h):
            histogram[h] = float(rng.random() ** 2)
        venues.append(
            make_venue(
                f"V{i:02d}",
                offset_km=(float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3))),
                category=CATEGORIES[int(rng.integers(len(CATEGORIES)))],
                popularity=float(rng.uniform(0, 20)),
                open_min=open_h * 60,
                close_min=close_h * 60,
                mean_stay=float(rng.uniform(30, 90)),
                histogram=histogram,
            )
        )
    profiles = []
    ids = [v.id for v in venues]
    for _ in range(n_venues // 2):
        a, b = rng.choice(len(ids), size=2, replace=False)
        minutes = [float(m) for m in rng.uniform(3, 15, size=SLOTS_PER_DAY)]
        observed = [bool(x) for x in rng.random(SLOTS_PER_DAY) < 0.5]
        profiles.append(
            TransitProfile(
                from_id=ids[int(a)],
                to_id=ids[int(b)],
                slot_minutes=tuple(minutes),
                slot_samples=tuple(3 if o else 0 for o in observed),
                provenance=tuple(Provenance.OBSERVED if o else Provenance.FALLBACK for o in observed),
            )
        )
    speeds = [float(s) for s in rng.uniform(20, 40, size=SLOTS_PER_DAY)]
    network = PoiNetwork.build(venues, profiles, speeds)

    weights = rng.dirichlet(np.ones(len(CATEGORIES)))
    weights = weights / weights.sum()
    user = UserProfile(
        user_id="u1",
        category_weights={c: float(w) for c, w in zip(CATEGORIES, weights)},
    )
    start = float(rng.integers(8, 11) * 60)
    query = Query(
        start_location=CENTRE,
        end_location=CENTRE,
        start_time=start,
        end_time=start + float(rng.integers(180, 361)),
    )
    return network, user, query


@pytest.fixture()
def venue_factory() -> Callable[..., Venue]:
    return make_venue


@pytest.fixture()
def instance_factory() -> Callable[[np.random.Generator, int], tuple[PoiNetwork, UserProfile, Query]]:
    return random_instance


@pytest.fixture()
def two_venue_network() -> PoiNetwork:
    """V1 and V2 about 1.4 km apart with an observed 07:00 profile V1→V2."""
    v1 = make_venue("V1", popularity=4.0)
    v2 = make_venue("V2", offset_km=(1.0, 1.0), category="park", popularity=2.0)
    minutes = [10.0] * SLOTS_PER_DAY
    minutes[7] = 25.0
    samples = [0] * SLOTS_PER_DAY
    samples[7] = 3
    provenance = [Provenance.FALLBACK] * SLOTS_PER_DAY
    provenance[7] = Provenance.OBSERVED
    profile = TransitProfile(
        from_id="V1",
        to_id="V2",
        slot_minutes=tuple(minutes),
        slot_samples=tuple(samples),
        provenance=tuple(provenance),
    )
    return PoiNetwork.build([v1, v2], [profile])


@pytest.fixture()
def museum_lover() -> UserProfile:
    return UserProfile(
        user_id="u1",
        category_weights={"food": 0.2, "museum": 0.5, "park": 0.2, "shop": 0.1},
    )
