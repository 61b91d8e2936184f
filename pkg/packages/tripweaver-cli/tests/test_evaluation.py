"""Tests for the heuristic-versus-oracle harness and planner scale."""

import time

import pytest

from tripweaver_core.exceptions import DomainError
from tripweaver_core.schedule import validate_itinerary
from tripweaver_core.search import plan
from tripweaver_core.types import Query, UserProfile
from tripweaver_ingest.synth import generate_city, ground_truth_network

from tripweaver_cli.evaluation import evaluate, score_ratio, synthetic_instance


class TestScoreRatio:
    def test_values(self):
        assert score_ratio(0.5, 1.0) == 0.5
        assert score_ratio(0.0, 0.0) == 1.0
        assert score_ratio(2.0, 2.0) == 1.0


class TestEvaluate:
    def test_deterministic_instances(self):
        a = synthetic_instance(5, 7)
        b = synthetic_instance(5, 7)
        assert a == b
        network, _, _ = a
        assert len(network.venues) == 7

    def test_summary_consistent(self):
        report = evaluate(12, 6, 3, alpha=0.5)
        assert len(report.results) == 12
        assert [r.index for r in report.results] == list(range(12))
        ratios = [r.ratio for r in report.results]
        assert report.summary.mean_ratio == pytest.approx(sum(ratios) / 12)
        assert report.summary.min_ratio == min(ratios)
        assert all(r.plan_score <= r.oracle_score + 1e-9 for r in report.results)
        assert report.summary.violations == 0

    @pytest.mark.parametrize("candidates", [0, 11])
    def test_candidate_range(self, candidates):
        with pytest.raises(DomainError):
            evaluate(1, candidates, 0, alpha=0.5)

    def test_instances_must_be_positive(self):
        with pytest.raises(DomainError):
            evaluate(0, 5, 0, alpha=0.5)


class TestScale:
    def test_thousand_venue_plan(self):
        _, city = generate_city(7, 1000)
        network = ground_truth_network(city)
        user = UserProfile(
            user_id="u1",
            category_weights={c: 1 / len(network.categories()) for c in network.categories()},
        )
        centre = city.params.center
        query = Query(start_location=centre, end_location=centre, start_time=540, end_time=1050)
        started = time.perf_counter()
        itinerary = plan(network, user, query)
        elapsed = time.perf_counter() - started
        assert elapsed < 5.0
        assert itinerary.venue_count > 0
        assert validate_itinerary(network, query, itinerary) == []
