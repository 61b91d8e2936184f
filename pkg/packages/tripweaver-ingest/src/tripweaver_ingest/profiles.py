"""Venue and user profiles derived from check-ins."""

from __future__ import annotations

import json
import logging
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence

from tripweaver_core.exceptions import DomainError
from tripweaver_core.types import SLOTS_PER_DAY, UserProfile, Venue, hour_slot

from tripweaver_ingest.records import CheckinRecord, local_minute

logger = logging.getLogger(__name__)

DEFAULT_TOP_K = 1000


def rank_venues(
    records: Iterable[CheckinRecord],
    venues: Sequence[Venue],
    top_k: int = DEFAULT_TOP_K,
) -> list[str]:
    """Ids of the *top_k* venues with the most check-ins.

    Ordered by check-in count descending, then venue id.  Venues without
    check-ins still rank (with count 0) so small cities keep every venue.
    """
    if top_k <= 0:
        raise DomainError(f"top_k must be > 0, got {top_k}")
    known = {v.id for v in venues}
    counts = Counter(r.venue_id for r in records if r.venue_id in known)
    ranked = sorted(known, key=lambda vid: (-counts[vid], vid))
    return ranked[:top_k]


def build_venue_profiles(
    records: Iterable[CheckinRecord],
    venues: Sequence[Venue],
    observation_days: int,
    *,
    utc_offset_min: int = 0,
) -> list[Venue]:
    """Fill popularity (check-ins per day) and the hourly visit histogram.

    Check-ins at unknown venues are counted and skipped.
    """
    if observation_days <= 0:
        raise DomainError(f"observation_days must be > 0, got {observation_days}")

    known = {v.id for v in venues}
    hours: dict[str, list[int]] = defaultdict(lambda: [0] * SLOTS_PER_DAY)
    unknown = 0
    for record in records:
        if record.venue_id not in known:
            unknown += 1
            continue
        hour = hour_slot(local_minute(record.timestamp, utc_offset_min))
        hours[record.venue_id][hour] += 1
    if unknown:
        logger.warning("Skipped %d check-ins at unknown venues", unknown)

    profiled = []
    for venue in venues:
        counts = hours.get(venue.id)
        if counts is None:
            profiled.append(venue.replace(popularity=0.0, visit_histogram=(0.0,) * SLOTS_PER_DAY))
        else:
            profiled.append(
                venue.replace(
                    popularity=sum(counts) / observation_days,
                    visit_histogram=tuple(float(c) for c in counts),
                )
            )
    return profiled


def uniform_profile(user_id: str, categories: Iterable[str]) -> UserProfile:
    """A profile with equal weight on every category."""
    cats = sorted(set(categories))
    if not cats:
        raise DomainError("cannot build a profile without categories")
    return UserProfile(user_id=user_id, category_weights={c: 1.0 / len(cats) for c in cats})


def build_user_profiles(
    records: Iterable[CheckinRecord],
    venues: Sequence[Venue],
    smoothing: float = 1.0,
    *,
    user_ids: Iterable[str] = (),
) -> list[UserProfile]:
    """Additively smoothed per-category weights for every user, sorted by id.

    ``weight[c] = (visits to c + smoothing) / (visits + smoothing × |categories|)``.
    Users listed in *user_ids* without any check-in get uniform weights.
    """
    if smoothing <= 0:
        raise DomainError(f"smoothing must be > 0, got {smoothing}")
    category_of = {v.id: v.category for v in venues}
    categories = sorted(set(category_of.values()))
    if not categories:
        raise DomainError("venue metadata defines no categories")

    visits: dict[str, Counter[str]] = defaultdict(Counter)
    visited: dict[str, set[str]] = defaultdict(set)
    for record in records:
        category = category_of.get(record.venue_id)
        if category is None:
            continue
        visits[record.user_id][category] += 1
        visited[record.user_id].add(record.venue_id)
    for user_id in user_ids:
        visits.setdefault(user_id, Counter())

    profiles = []
    denominator_base = smoothing * len(categories)
    for user_id in sorted(visits):
        counts = visits[user_id]
        denominator = sum(counts.values()) + denominator_base
        weights = {c: (counts[c] + smoothing) / denominator for c in categories}
        profiles.append(
            UserProfile(
                user_id=user_id,
                category_weights=weights,
                visited=tuple(visited.get(user_id, ())),
            )
        )
    return profiles


# ---------------------------------------------------------------------------
# users.json
# ---------------------------------------------------------------------------


def users_to_json(profiles: Sequence[UserProfile], *, indent: int | None = 2) -> str:
    return json.dumps(
        {"users": [p.model_dump(mode="json") for p in sorted(profiles, key=lambda p: p.user_id)]},
        indent=indent,
    )


def users_from_json(text: str | bytes) -> dict[str, UserProfile]:
    """Parse ``users.json`` into a mapping keyed by user id."""
    data = json.loads(text)
    profiles = (UserProfile.model_validate(u) for u in data.get("users", []))
    return {p.user_id: p for p in profiles}
