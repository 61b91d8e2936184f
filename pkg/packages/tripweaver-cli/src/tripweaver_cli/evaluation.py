"""Heuristic-versus-oracle evaluation over seeded small instances."""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from functools import partial

import numpy as np
from pydantic import BaseModel

from tripweaver_core.exceptions import DomainError
from tripweaver_core.network import PoiNetwork
from tripweaver_core.schedule import ScheduleParams, validate_itinerary
from tripweaver_core.search import MAX_ORACLE_CANDIDATES, SearchParams, brute_force, plan
from tripweaver_core.types import Query, UserProfile
from tripweaver_ingest.synth import CityParams, generate_city, ground_truth_network

logger = logging.getLogger(__name__)

#: Side of the synthetic box used when no network is given (km).
EVAL_EXTENT_KM = 6.0

Instance = tuple[PoiNetwork, UserProfile, Query]


class InstanceResult(BaseModel):
    index: int
    candidates: list[str]
    start_time: float
    end_time: float
    plan_score: float
    oracle_score: float
    ratio: float
    plan_venues: list[str]
    oracle_venues: list[str]
    violations: list[str]
    plan_ms: float
    oracle_ms: float


class EvalSummary(BaseModel):
    instances: int
    candidates: int
    seed: int
    mean_ratio: float
    min_ratio: float
    optimal_fraction: float
    feasible_fraction: float
    violations: int
    plan_ms_mean: float
    plan_ms_max: float
    oracle_ms_mean: float
    oracle_ms_max: float


class EvalReport(BaseModel):
    summary: EvalSummary
    results: list[InstanceResult]


def score_ratio(plan_score: float, oracle_score: float) -> float:
    """``plan / oracle``; two zero scores count as a perfect match."""
    if oracle_score <= 0:
        return 1.0
    return plan_score / oracle_score


def _random_user(rng: np.random.Generator, categories: list[str]) -> UserProfile:
    weights = rng.dirichlet(np.ones(len(categories)))
    weights = weights / weights.sum()
    return UserProfile(
        user_id="eval",
        category_weights={c: float(w) for c, w in zip(categories, weights)},
    )


def _random_window(rng: np.random.Generator) -> tuple[float, float]:
    start = float(rng.integers(8, 12) * 60)
    return start, start + float(rng.integers(180, 361))


def synthetic_instance(seed: int, candidates: int) -> Instance:
    """A fresh ground-truth city of *candidates* venues with a random user and query."""
    rng = np.random.default_rng(seed)
    _, city = generate_city(seed, candidates, CityParams(extent_km=EVAL_EXTENT_KM))
    network = ground_truth_network(city)
    centre = city.params.center
    start, end = _random_window(rng)
    query = Query(start_location=centre, end_location=centre, start_time=start, end_time=end)
    return network, _random_user(rng, network.categories()), query


def network_instance(network: PoiNetwork, seed: int, candidates: int) -> Instance:
    """A random *candidates*-venue slice of *network*, starting at its centroid."""
    rng = np.random.default_rng(seed)
    ids = sorted(network.venues)
    picked = sorted(ids[int(i)] for i in rng.choice(len(ids), size=candidates, replace=False))
    sub = network.subset(picked)
    lat, lon = np.mean([sub.venue(vid).location for vid in picked], axis=0)
    centre = (float(lat), float(lon))
    start, end = _random_window(rng)
    query = Query(start_location=centre, end_location=centre, start_time=start, end_time=end)
    return sub, _random_user(rng, sub.categories()), query


def evaluate(
    instances: int,
    candidates: int,
    seed: int,
    *,
    network: PoiNetwork | None = None,
    schedule_params: ScheduleParams | None = None,
    search_params: SearchParams | None = None,
    alpha: float,
) -> EvalReport:
    """Compare :func:`plan` with :func:`brute_force` on *instances* seeded cases.

    Instance ``i`` is built from ``seed + i``, so any single case can be
    reproduced on its own.
    """
    if instances <= 0:
        raise DomainError(f"instances must be > 0, got {instances}")
    if not (1 <= candidates <= MAX_ORACLE_CANDIDATES):
        raise DomainError(f"candidates must be in [1, {MAX_ORACLE_CANDIDATES}], got {candidates}")
    if network is not None and len(network.venues) < candidates:
        raise DomainError(f"network has only {len(network.venues)} venues, need {candidates}")
    schedule_params = schedule_params or ScheduleParams()

    make: Callable[[int], Instance] = (
        partial(synthetic_instance, candidates=candidates)
        if network is None
        else partial(network_instance, network, candidates=candidates)
    )

    results = []
    for index in range(instances):
        sub, user, query = make(seed + index)
        ids = sorted(sub.venues)

        started = time.perf_counter()
        heuristic = plan(sub, user, query, schedule_params, search_params, alpha=alpha)
        plan_ms = (time.perf_counter() - started) * 1000
        started = time.perf_counter()
        oracle = brute_force(sub, user, query, ids, schedule_params, alpha=alpha)
        oracle_ms = (time.perf_counter() - started) * 1000

        violations = validate_itinerary(sub, query, heuristic, schedule_params)
        if violations:
            logger.warning("Instance %d: %s", index, "; ".join(violations))
        results.append(
            InstanceResult(
                index=index,
                candidates=ids,
                start_time=query.start_time,
                end_time=query.end_time,
                plan_score=heuristic.score,
                oracle_score=oracle.score,
                ratio=score_ratio(heuristic.score, oracle.score),
                plan_venues=heuristic.venue_ids,
                oracle_venues=oracle.venue_ids,
                violations=violations,
                plan_ms=plan_ms,
                oracle_ms=oracle_ms,
            )
        )

    ratios = [r.ratio for r in results]
    plan_times = [r.plan_ms for r in results]
    oracle_times = [r.oracle_ms for r in results]
    summary = EvalSummary(
        instances=instances,
        candidates=candidates,
        seed=seed,
        mean_ratio=float(np.mean(ratios)),
        min_ratio=min(ratios),
        optimal_fraction=sum(1 for r in ratios if r >= 1.0 - 1e-9) / instances,
        feasible_fraction=sum(1 for r in results if not r.violations) / instances,
        violations=sum(len(r.violations) for r in results),
        plan_ms_mean=float(np.mean(plan_times)),
        plan_ms_max=max(plan_times),
        oracle_ms_mean=float(np.mean(oracle_times)),
        oracle_ms_max=max(oracle_times),
    )
    logger.info(
        "Evaluated %d instances: mean ratio %.4f, min %.4f",
        instances,
        summary.mean_ratio,
        summary.min_ratio,
    )
    return EvalReport(summary=summary, results=results)
