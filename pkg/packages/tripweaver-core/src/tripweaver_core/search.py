"""Trip search: greedy insertion, local search, and an exhaustive oracle.

:func:`plan` grows a route from the empty order by repeatedly taking the
feasible insertion with the best ``score gain / extra elapsed minutes``
(extra time floored at one minute, ties to the lower venue id and then the
earlier position).  It then runs a best-improvement local search over three
neighbourhoods (relocate one visit, swap two visits, replace a visit with an
unused venue); after each accepted move insertion runs again to use any time
the move freed.  Every evaluation goes through the same forward pass, so
every returned itinerary is feasible.  A visit never scores more than its
venue's attractiveness, so candidates whose summed attractiveness cannot
beat the incumbent are skipped without simulating them.

:func:`brute_force` enumerates every permutation of every subset of at most
ten candidates and serves as the reference for the heuristic's gap.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from tripweaver_core.enums import MoveKind
from tripweaver_core.exceptions import DomainError
from tripweaver_core.network import Endpoint, PoiNetwork
from tripweaver_core.schedule import (
    Rejection,
    ScheduleParams,
    Stop,
    Timeline,
    advance,
    close,
    forward_pass,
)
from tripweaver_core.scoring import (
    DEFAULT_ALPHA,
    attractiveness,
    mean_relative,
    relative_histogram,
    touched_hours,
)
from tripweaver_core.types import Itinerary, Query, ScheduledVisit, UserProfile

logger = logging.getLogger(__name__)

#: Score differences below this are treated as ties.
SCORE_EPS = 1e-9

#: Largest candidate set :func:`brute_force` accepts.
MAX_ORACLE_CANDIDATES = 10

# Added to score upper bounds so rounding never prunes a winning move.
_BOUND_SLACK = 1e-12


class SearchParams(BaseModel):
    """Search effort and reproducibility knobs.

    ``restarts`` is 0 by default, which keeps the search free of randomness;
    ``rng_seed`` only matters when restarts are enabled.
    """

    model_config = ConfigDict(frozen=True)

    candidate_limit: int = Field(default=1000, gt=0)
    local_search_rounds: int = Field(default=50, ge=0)
    rng_seed: int = Field(default=0, ge=0)
    restarts: int = Field(default=0, ge=0)


class _Route(NamedTuple):
    order: tuple[str, ...]
    stops: tuple[Stop, ...]
    # running[p] is the score of the first p visits
    running: tuple[float, ...]
    # suffix[p] is the summed attractiveness of visits p onwards, which
    # bounds their score whatever their timing
    suffix: tuple[float, ...]
    final_arrival: float

    @property
    def score(self) -> float:
        return self.running[-1]


class _Planner:
    """Per-query evaluation state shared by :func:`plan` and :func:`brute_force`."""

    def __init__(
        self,
        network: PoiNetwork,
        user: UserProfile,
        query: Query,
        schedule_params: ScheduleParams,
        alpha: float,
    ) -> None:
        self.network = network
        self.table = network.table
        self.user = user
        self.query = query
        self.params = schedule_params
        self.alpha = alpha
        self._attractiveness: dict[str, float] = {}
        self._relative: dict[str, tuple[float, ...] | None] = {}
        # (venue id, first hour, last hour) -> score term
        self._terms: dict[tuple[str, int, int], float] = {}

    # ------------------------------------------------------------------
    # Scoring
    # ------------------------------------------------------------------

    def attractiveness(self, venue_id: str) -> float:
        value = self._attractiveness.get(venue_id)
        if value is None:
            venue = self.network.venues[venue_id]
            value = attractiveness(self.user, venue, self.network, alpha=self.alpha)
            self._attractiveness[venue_id] = value
            self._relative[venue_id] = relative_histogram(venue)
        return value

    def term(self, stop: Stop) -> float:
        hours = touched_hours(stop.visit_start, stop.depart)
        key = (stop.venue_id, hours.start, hours.stop)
        value = self._terms.get(key)
        if value is None:
            attr = self.attractiveness(stop.venue_id)
            value = attr * mean_relative(self._relative[stop.venue_id], stop.visit_start, stop.depart)
            self._terms[key] = value
        return value

    # ------------------------------------------------------------------
    # Route evaluation
    # ------------------------------------------------------------------

    def root(self) -> _Route | None:
        found = self.resume(None, 0, ())
        return None if found is None else self.assemble(None, 0, found[1])

    def resume(
        self, route: _Route | None, position: int, tail: Sequence[str]
    ) -> tuple[float, Timeline] | None:
        """Score ``route.order[:position] + tail`` without building a route."""
        if position == 0 or route is None:
            result = forward_pass(self.table, self.query, tail, self.params)
            total = 0.0
        else:
            prev = route.stops[position - 1]
            result = forward_pass(
                self.table,
                self.query,
                tail,
                self.params,
                origin=prev.venue_id,
                clock=prev.depart,
            )
            total = route.running[position]
        if isinstance(result, Rejection):
            return None
        for stop in result.stops:
            total += self.term(stop)
        return total, result

    def assemble(self, route: _Route | None, position: int, timeline: Timeline) -> _Route:
        prefix = route.stops[:position] if route is not None else ()
        stops = prefix + tuple(timeline.stops)
        running = [0.0]
        for stop in stops:
            running.append(running[-1] + self.term(stop))
        suffix = [0.0]
        for stop in reversed(stops):
            suffix.append(suffix[-1] + self.attractiveness(stop.venue_id))
        suffix.reverse()
        return _Route(
            order=tuple(s.venue_id for s in stops),
            stops=stops,
            running=tuple(running),
            suffix=tuple(suffix),
            final_arrival=timeline.final_arrival,
        )

    def itinerary(self, route: _Route) -> Itinerary:
        return Itinerary(
            visits=[ScheduledVisit(**stop._asdict()) for stop in route.stops],
            final_arrival=route.final_arrival,
            score=route.score,
        )

    def infeasible(self) -> Itinerary:
        q = self.query
        transit = self.network.travel_minutes(q.start_location, q.end_location, q.start_time)
        return Itinerary(final_arrival=q.start_time + transit, feasible=False)

    # ------------------------------------------------------------------
    # Heuristic search
    # ------------------------------------------------------------------

    def candidate_pool(self, limit: int) -> list[str]:
        """The *limit* most attractive venues that can ever be visited, by id.

        A venue is viable when a full stay fits both its opening hours and
        the query window, ignoring travel.
        """
        q = self.query
        viable = [
            v.id
            for v in self.network.venues.values()
            if max(v.open_min, q.start_time) + v.mean_stay <= min(v.close_min, q.end_time)
        ]
        ranked = sorted(viable, key=lambda vid: (-self.attractiveness(vid), vid))
        return sorted(ranked[:limit])

    def insert_greedily(self, route: _Route, pool: Sequence[str]) -> _Route:
        start = self.query.start_time
        used = set(route.order)
        while True:
            elapsed = route.final_arrival - start
            order = route.order
            best: tuple[float, str, int, Timeline] | None = None
            for vid in pool:
                if vid in used:
                    continue
                attr = self.attractiveness(vid)
                for position in range(len(order) + 1):
                    # extra time is floored at one minute, so gain bounds the ratio
                    bound = (
                        route.running[position] + attr + route.suffix[position] - route.score
                        + _BOUND_SLACK
                    )
                    if bound <= SCORE_EPS or (best is not None and bound <= best[0]):
                        continue
                    found = self.resume(route, position, (vid, *order[position:]))
                    if found is None:
                        continue
                    score, timeline = found
                    gain = score - route.score
                    if gain <= SCORE_EPS:
                        continue
                    extra = max(timeline.final_arrival - start - elapsed, 1.0)
                    ratio = gain / extra
                    if best is None or ratio > best[0]:
                        best = (ratio, vid, position, timeline)
            if best is None:
                return route
            ratio, vid, position, timeline = best
            route = self.assemble(route, position, timeline)
            used.add(vid)
            logger.debug(
                "Inserted %s at %d (ratio %.4f, score %.4f)", vid, position, ratio, route.score
            )

    def _moves(
        self, route: _Route, pool: Sequence[str]
    ) -> Iterator[tuple[MoveKind, int, tuple[str, ...], float]]:
        """Yield ``(kind, first changed position, new order, score bound)``.

        The bound is the prefix score plus the attractiveness of every venue
        from the changed position on; no timing can score above it.
        """
        order = route.order
        running = route.running
        suffix = route.suffix
        k = len(order)
        for i in range(k):
            rest = order[:i] + order[i + 1:]
            for j in range(k):
                if j != i:
                    p = min(i, j)
                    yield (
                        MoveKind.RELOCATE,
                        p,
                        rest[:j] + (order[i],) + rest[j:],
                        running[p] + suffix[p],
                    )
        for i in range(k):
            for j in range(i + 1, k):
                swapped = list(order)
                swapped[i], swapped[j] = swapped[j], swapped[i]
                yield MoveKind.SWAP, i, tuple(swapped), running[i] + suffix[i]
        used = set(order)
        for i in range(k):
            base = running[i] + suffix[i + 1]
            for vid in pool:
                if vid not in used:
                    yield (
                        MoveKind.REPLACE,
                        i,
                        order[:i] + (vid,) + order[i + 1:],
                        base + self.attractiveness(vid),
                    )

    def improve(self, route: _Route, pool: Sequence[str], rounds: int) -> _Route:
        for round_no in range(rounds):
            best: tuple[float, MoveKind, int, Timeline] | None = None
            for kind, position, order, bound in self._moves(route, pool):
                threshold = route.score + SCORE_EPS if best is None else best[0]
                if bound + _BOUND_SLACK <= threshold:
                    continue
                found = self.resume(route, position, order[position:])
                if found is None:
                    continue
                score, timeline = found
                if score > route.score + SCORE_EPS and (best is None or score > best[0]):
                    best = (score, kind, position, timeline)
            if best is None:
                break
            score, kind, position, timeline = best
            route = self.assemble(route, position, timeline)
            logger.debug("Round %d: %s at %d -> %.4f", round_no, kind, position, score)
            route = self.insert_greedily(route, pool)
        return route

    def restart(self, route: _Route, pool: Sequence[str], params: SearchParams) -> _Route:
        """Drop a random third of the visits, rebuild, keep strict improvements."""
        rng = np.random.default_rng(params.rng_seed)
        best = route
        for _ in range(params.restarts):
            k = len(best.order)
            if k == 0:
                break
            dropped_at = set(rng.choice(k, size=max(1, k // 3), replace=False).tolist())
            dropped = {best.order[i] for i in dropped_at}
            kept = tuple(v for v in best.order if v not in dropped)
            found = self.resume(None, 0, kept)
            if found is None:
                continue
            candidate = self.assemble(None, 0, found[1])
            candidate = self.insert_greedily(candidate, [v for v in pool if v not in dropped])
            candidate = self.improve(candidate, pool, params.local_search_rounds)
            if candidate.score > best.score + SCORE_EPS:
                best = candidate
        return best


def plan(
    network: PoiNetwork,
    user: UserProfile,
    query: Query,
    schedule_params: ScheduleParams | None = None,
    search_params: SearchParams | None = None,
    *,
    alpha: float = DEFAULT_ALPHA,
) -> Itinerary:
    """Plan a high-scoring feasible itinerary for *user* under *query*.

    Returns the empty itinerary with ``feasible=False`` when even the direct
    start-to-end transit misses the budget.
    """
    search_params = search_params or SearchParams()
    planner = _Planner(network, user, query, schedule_params or ScheduleParams(), alpha)
    root = planner.root()
    if root is None:
        logger.info("Start-to-end transit alone exceeds the time budget")
        return planner.infeasible()

    pool = planner.candidate_pool(search_params.candidate_limit)
    route = planner.insert_greedily(root, pool)
    logger.debug("Greedy phase: %d visits, score %.4f", len(route.order), route.score)
    route = planner.improve(route, pool, search_params.local_search_rounds)
    if search_params.restarts:
        route = planner.restart(route, pool, search_params)
    logger.info("Planned %d visits, score %.4f", len(route.order), route.score)
    return planner.itinerary(route)


def brute_force(
    network: PoiNetwork,
    user: UserProfile,
    query: Query,
    candidate_ids: Sequence[str],
    schedule_params: ScheduleParams | None = None,
    *,
    alpha: float = DEFAULT_ALPHA,
) -> Itinerary:
    """Exhaustively find the best itinerary over at most ten candidates.

    Ties go to the lexicographically smallest venue-id sequence.  A prefix
    whose visits are already infeasible is not extended: appending venues
    never changes the schedule of the prefix.
    """
    ids = sorted(set(candidate_ids))
    if len(ids) > MAX_ORACLE_CANDIDATES:
        raise DomainError(
            f"brute_force accepts at most {MAX_ORACLE_CANDIDATES} candidates, got {len(ids)}"
        )
    for vid in ids:
        network.venue(vid)
    params = schedule_params or ScheduleParams()
    planner = _Planner(network, user, query, params, alpha)

    best: tuple[float, tuple[str, ...], tuple[Stop, ...], float] | None = None
    root_final = close(planner.table, query, query.start_location, query.start_time)
    if root_final is not None:
        best = (0.0, (), (), root_final)

    def explore(order: tuple[str, ...], stops: tuple[Stop, ...], total: float,
                here: Endpoint, now: float) -> None:
        nonlocal best
        for vid in ids:
            if vid in order:
                continue
            step = advance(planner.table, query, here, now, vid, params)
            if isinstance(step, Rejection):
                continue
            score = total + planner.term(step)
            extended = (*order, vid)
            visited = (*stops, step)
            final = close(planner.table, query, vid, step.depart)
            if final is not None and (
                best is None
                or score > best[0] + SCORE_EPS
                or (abs(score - best[0]) <= SCORE_EPS and extended < best[1])
            ):
                best = (score, extended, visited, final)
            explore(extended, visited, score, vid, step.depart)

    explore((), (), 0.0, query.start_location, query.start_time)
    if best is None:
        return planner.infeasible()
    score, order, stops, final = best
    return Itinerary(
        visits=[ScheduledVisit(**s._asdict()) for s in stops],
        final_arrival=final,
        score=score,
    )
