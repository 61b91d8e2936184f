"""Route scoring: venue attractiveness and visiting-time suitability.

The score of a route is the sum over its visits of
``attractiveness × suitability``; both factors lie in ``[0, 1]``.

* Attractiveness blends the user's peak-relative category preference with
  log-damped popularity: ``α·pref + (1 − α)·log(1 + pop) / log(1 + max_pop)``.
* Suitability is the mean, over the hours a visit touches, of the venue's
  visit histogram relative to its peak hour.  Venues without temporal
  evidence score a neutral 1.0.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

from tripweaver_core.exceptions import DomainError
from tripweaver_core.network import PoiNetwork
from tripweaver_core.types import (
    MINUTES_PER_SLOT,
    SLOTS_PER_DAY,
    Itinerary,
    UserProfile,
    Venue,
    hour_slot,
)

DEFAULT_ALPHA = 0.5


def _check_alpha(alpha: float) -> None:
    if not (0.0 <= alpha <= 1.0):
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")


def attractiveness(
    user: UserProfile,
    venue: Venue,
    network: PoiNetwork,
    *,
    alpha: float = DEFAULT_ALPHA,
) -> float:
    """Attractiveness of *venue* to *user*, in ``[0, 1]``.

    A category missing from the profile counts as weight 0.
    """
    _check_alpha(alpha)
    peak_weight = max(user.category_weights.values())
    pref = user.weight(venue.category) / peak_weight if peak_weight > 0 else 0.0
    pop_norm = math.log1p(venue.popularity) / math.log1p(network.max_popularity)
    value = alpha * pref + (1.0 - alpha) * min(pop_norm, 1.0)
    return min(max(value, 0.0), 1.0)


def relative_histogram(venue: Venue) -> tuple[float, ...] | None:
    """Peak-relative visit histogram, or ``None`` when it is all zero."""
    peak = max(venue.visit_histogram)
    if peak <= 0:
        return None
    return tuple(x / peak for x in venue.visit_histogram)


def touched_hours(visit_start: float, depart: float) -> range:
    """Hour slots overlapped by the half-open interval ``[visit_start, depart)``."""
    first = hour_slot(visit_start)
    last = min(math.ceil(depart / MINUTES_PER_SLOT) - 1, SLOTS_PER_DAY - 1)
    return range(first, max(first, last) + 1)


def mean_relative(
    relative: Sequence[float] | None, visit_start: float, depart: float
) -> float:
    """Suitability from a precomputed :func:`relative_histogram` (unchecked)."""
    if relative is None:
        return 1.0
    hours = touched_hours(visit_start, depart)
    return math.fsum(relative[h] for h in hours) / len(hours)


def suitability(venue: Venue, visit_start: float, depart: float) -> float:
    """How well ``[visit_start, depart)`` matches the venue's busy hours."""
    if not (visit_start < depart):
        raise DomainError(f"empty visit interval {visit_start}..{depart}")
    if visit_start < venue.open_min or depart > venue.close_min:
        raise DomainError(
            f"visit {visit_start}..{depart} outside operating hours of {venue.id!r} "
            f"({venue.open_min}..{venue.close_min})"
        )
    return mean_relative(relative_histogram(venue), visit_start, depart)


def route_score(
    itinerary: Itinerary,
    user: UserProfile,
    network: PoiNetwork,
    *,
    alpha: float = DEFAULT_ALPHA,
) -> float:
    """Sum of ``attractiveness × suitability`` over the itinerary's visits."""
    total = 0.0
    for visit in itinerary.visits:
        venue = network.venue(visit.venue_id)
        total += attractiveness(user, venue, network, alpha=alpha) * suitability(
            venue, visit.visit_start, visit.depart
        )
    return total
