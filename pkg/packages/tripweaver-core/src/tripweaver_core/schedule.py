"""Forward time simulation of an ordered venue sequence against a query.

The clock starts at ``query.start_time`` at the start location.  For each
venue the traveller pays the transit, may wait for opening (at most
``max_wait`` minutes), stays ``mean_stay`` minutes and must leave by
closing time.  The final leg to the end location counts against the budget.

:func:`simulate` is the validated public entry point.  The planner uses
:func:`forward_pass`, which skips argument checks, allocates no pydantic
models and can resume from any prefix (the schedule of the first *k* visits
never depends on what follows them).
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, Field

from tripweaver_core.enums import InfeasibleReason
from tripweaver_core.exceptions import DomainError
from tripweaver_core.network import Endpoint, PoiNetwork, TravelTable
from tripweaver_core.types import (
    MINUTES_PER_DAY,
    TIME_TOLERANCE,
    Infeasible,
    Itinerary,
    Query,
    ScheduledVisit,
)

#: Tolerance for time comparisons in :func:`validate_itinerary`.
TIME_EPS = TIME_TOLERANCE

# Departures at exactly the end of the day are charged at the last slot.
_LAST_DEPARTURE = MINUTES_PER_DAY - 1e-9


class ScheduleParams(BaseModel):
    """Feasibility knobs for the forward pass."""

    model_config = ConfigDict(frozen=True)

    max_wait: float = Field(default=60.0, ge=0)


class Stop(NamedTuple):
    venue_id: str
    arrival: float
    wait: float
    visit_start: float
    depart: float


class Timeline(NamedTuple):
    stops: list[Stop]
    final_arrival: float


class Rejection(NamedTuple):
    reason: InfeasibleReason
    venue_id: str | None


def forward_pass(
    table: TravelTable,
    query: Query,
    order: Sequence[str],
    params: ScheduleParams,
    *,
    origin: Endpoint | None = None,
    clock: float | None = None,
) -> Timeline | Rejection:
    """Schedule *order*, optionally resuming at *origin* at minute *clock*.

    Venue ids are assumed valid and distinct.  The returned stops cover only
    *order*, not the prefix that led to *origin*.
    """
    here: Endpoint = query.start_location if origin is None else origin
    now = query.start_time if clock is None else clock
    stops: list[Stop] = []
    for vid in order:
        step = advance(table, query, here, now, vid, params)
        if isinstance(step, Rejection):
            return step
        stops.append(step)
        here = vid
        now = step.depart
    final = close(table, query, here, now)
    if final is None:
        return Rejection(InfeasibleReason.BUDGET, None)
    return Timeline(stops, final)


def advance(
    table: TravelTable,
    query: Query,
    here: Endpoint,
    now: float,
    venue_id: str,
    params: ScheduleParams,
) -> Stop | Rejection:
    """Travel from *here* (leaving at *now*) to *venue_id* and visit it.

    A rejection here means no sequence with this prefix can be feasible.
    """
    if now > query.end_time:
        return Rejection(InfeasibleReason.BUDGET, venue_id)
    open_min, close_min, mean_stay = table.windows[venue_id]
    arrival = now + table.minutes(here, venue_id, min(now, _LAST_DEPARTURE))
    if arrival > close_min:
        return Rejection(InfeasibleReason.CLOSED, venue_id)
    wait = 0.0
    if arrival < open_min:
        wait = open_min - arrival
        if wait > params.max_wait:
            return Rejection(InfeasibleReason.WAIT, venue_id)
    visit_start = arrival + wait
    depart = visit_start + mean_stay
    if depart > close_min:
        return Rejection(InfeasibleReason.CLOSED, venue_id)
    if depart > query.end_time:
        return Rejection(InfeasibleReason.BUDGET, venue_id)
    return Stop(venue_id, arrival, wait, visit_start, depart)


def close(table: TravelTable, query: Query, here: Endpoint, now: float) -> float | None:
    """Final arrival at the end location, or ``None`` if it misses the budget."""
    if now > query.end_time:
        return None
    final = now + table.minutes(here, query.end_location, min(now, _LAST_DEPARTURE))
    return final if final <= query.end_time else None


def to_itinerary(timeline: Timeline, *, score: float = 0.0) -> Itinerary:
    return Itinerary(
        visits=[ScheduledVisit(**stop._asdict()) for stop in timeline.stops],
        final_arrival=timeline.final_arrival,
        score=score,
    )


def check_order(network: PoiNetwork, order: Sequence[str]) -> None:
    """Raise unless *order* is a sequence of distinct, known venue ids."""
    seen: set[str] = set()
    for vid in order:
        network.venue(vid)
        if vid in seen:
            raise DomainError(f"venue {vid!r} appears more than once in the order")
        seen.add(vid)


def simulate(
    network: PoiNetwork,
    query: Query,
    order: Sequence[str],
    params: ScheduleParams | None = None,
) -> Itinerary | Infeasible:
    """Forward-simulate *order*; infeasibility is returned, not raised.

    The itinerary's ``score`` is left at 0; callers fill it in with
    :func:`~tripweaver_core.scoring.route_score`.
    """
    check_order(network, order)
    result = forward_pass(network.table, query, order, params or ScheduleParams())
    if isinstance(result, Rejection):
        return Infeasible(reason=result.reason, venue_id=result.venue_id)
    return to_itinerary(result)


def validate_itinerary(
    network: PoiNetwork,
    query: Query,
    itinerary: Itinerary,
    params: ScheduleParams | None = None,
) -> list[str]:
    """Independently re-check an itinerary; return the violations found."""
    params = params or ScheduleParams()
    problems: list[str] = []
    if not itinerary.feasible:
        if itinerary.visits:
            problems.append("infeasible itinerary must not contain visits")
        return problems

    seen: set[str] = set()
    here: Endpoint = query.start_location
    clock = query.start_time
    for i, visit in enumerate(itinerary.visits):
        tag = f"visit {i} ({visit.venue_id})"
        if visit.venue_id not in network.venues:
            problems.append(f"{tag}: unknown venue")
            return problems
        if visit.venue_id in seen:
            problems.append(f"{tag}: duplicate venue")
        seen.add(visit.venue_id)
        venue = network.venues[visit.venue_id]

        expected_arrival = clock + network.travel_minutes(here, visit.venue_id, min(clock, _LAST_DEPARTURE))
        if abs(visit.arrival - expected_arrival) > TIME_EPS:
            problems.append(f"{tag}: arrival {visit.arrival} != {expected_arrival}")
        if visit.wait < -TIME_EPS or visit.wait > params.max_wait + TIME_EPS:
            problems.append(f"{tag}: wait {visit.wait} outside [0, {params.max_wait}]")
        if abs(visit.visit_start - (visit.arrival + visit.wait)) > TIME_EPS:
            problems.append(f"{tag}: visit_start != arrival + wait")
        if abs(visit.depart - (visit.visit_start + venue.mean_stay)) > TIME_EPS:
            problems.append(f"{tag}: depart != visit_start + mean_stay")
        if visit.visit_start < venue.open_min - TIME_EPS:
            problems.append(f"{tag}: starts before opening")
        if visit.depart > venue.close_min + TIME_EPS:
            problems.append(f"{tag}: departs after closing")
        if visit.arrival < clock - TIME_EPS:
            problems.append(f"{tag}: time runs backwards")
        here = visit.venue_id
        clock = visit.depart

    if itinerary.final_arrival < clock - TIME_EPS:
        problems.append("final arrival precedes last departure")
    if itinerary.final_arrival > query.end_time + TIME_EPS:
        problems.append(f"final arrival {itinerary.final_arrival} exceeds end {query.end_time}")
    return problems
