"""Tests for the forward time simulation and the itinerary validator."""

import pytest
from pydantic import ValidationError

from tripweaver_core.enums import InfeasibleReason
from tripweaver_core.exceptions import DomainError, VenueNotFoundError
from tripweaver_core.geo import haversine_km
from tripweaver_core.network import PoiNetwork
from tripweaver_core.schedule import ScheduleParams, simulate, validate_itinerary
from tripweaver_core.types import SLOTS_PER_DAY, Infeasible, Itinerary, Query, ScheduledVisit

HOME = (37.7749, -122.4194)


@pytest.fixture()
def morning_network(venue_factory) -> PoiNetwork:
    """One museum exactly 30 minutes from HOME, opening at 08:00."""
    venue = venue_factory("V1", offset_km=(4.0, 0.0), open_min=480, close_min=1200, mean_stay=60)
    km = haversine_km(HOME, venue.location)
    return PoiNetwork.build([venue], fallback_speed=[2 * km] * SLOTS_PER_DAY)


def _query(start: float, end: float) -> Query:
    return Query(start_location=HOME, end_location=HOME, start_time=start, end_time=end)


class TestSimulate:
    def test_wait_then_visit(self, morning_network):
        result = simulate(morning_network, _query(420, 930), ["V1"])
        assert isinstance(result, Itinerary)
        (visit,) = result.visits
        assert visit.arrival == 450
        assert visit.wait == 30
        assert visit.visit_start == 480
        assert visit.depart == 540
        assert result.final_arrival == 570
        assert result.score == 0.0

    def test_empty_order_feasible(self, morning_network):
        result = simulate(morning_network, _query(420, 930), [])
        assert isinstance(result, Itinerary)
        assert result.visits == []
        assert result.final_arrival == 420

    def test_empty_order_infeasible_when_end_is_far(self, morning_network):
        far = morning_network.venue("V1").location
        query = Query(start_location=HOME, end_location=far, start_time=600, end_time=620)
        result = simulate(morning_network, query, [])
        assert result == Infeasible(reason=InfeasibleReason.BUDGET)

    def test_one_minute_budget(self, morning_network):
        result = simulate(morning_network, _query(600, 601), ["V1"])
        assert isinstance(result, Infeasible)
        assert result.reason == InfeasibleReason.BUDGET
        assert result.venue_id == "V1"

    def test_wait_too_long(self, morning_network):
        # arrive 07:00, opens 08:00: 60 min wait is allowed, more is not
        assert isinstance(simulate(morning_network, _query(390, 900), ["V1"]), Itinerary)
        result = simulate(morning_network, _query(360, 900), ["V1"])
        assert result == Infeasible(reason=InfeasibleReason.WAIT, venue_id="V1")

    def test_strict_no_waiting(self, morning_network):
        result = simulate(morning_network, _query(420, 930), ["V1"], ScheduleParams(max_wait=0))
        assert result == Infeasible(reason=InfeasibleReason.WAIT, venue_id="V1")

    def test_closes_during_visit(self, morning_network):
        # arrive 19:30, must leave by 20:00 but stays 60 minutes
        result = simulate(morning_network, _query(1140, 1430), ["V1"])
        assert result == Infeasible(reason=InfeasibleReason.CLOSED, venue_id="V1")

    def test_arrives_after_close(self, morning_network):
        result = simulate(morning_network, _query(1200, 1430), ["V1"])
        assert result == Infeasible(reason=InfeasibleReason.CLOSED, venue_id="V1")

    def test_final_leg_counts(self, morning_network):
        # visit ends 09:00, return takes 30 more minutes
        result = simulate(morning_network, _query(450, 560), ["V1"])
        assert result == Infeasible(reason=InfeasibleReason.BUDGET)

    def test_duplicate_venue(self, two_venue_network):
        with pytest.raises(DomainError):
            simulate(two_venue_network, _query(600, 900), ["V1", "V1"])

    def test_unknown_venue(self, two_venue_network):
        with pytest.raises(VenueNotFoundError):
            simulate(two_venue_network, _query(600, 900), ["V1", "V7"])

    def test_observed_transit_used(self, two_venue_network):
        result = simulate(two_venue_network, _query(360, 900), ["V1", "V2"])
        assert isinstance(result, Itinerary)
        first, second = result.visits
        assert first.depart == pytest.approx(first.visit_start + 60)
        # V1 is left during slot 7 where the profile was observed
        if 420 <= first.depart < 480:
            assert second.arrival == pytest.approx(first.depart + 25.0)

    def test_deterministic(self, two_venue_network):
        a = simulate(two_venue_network, _query(600, 900), ["V2", "V1"])
        b = simulate(two_venue_network, _query(600, 900), ["V2", "V1"])
        assert a.model_dump_json() == b.model_dump_json()

    def test_prefix_stable(self, two_venue_network):
        full = simulate(two_venue_network, _query(600, 900), ["V2", "V1"])
        prefix = simulate(two_venue_network, _query(600, 900), ["V2"])
        assert full.visits[0] == prefix.visits[0]

    def test_departure_at_end_of_day(self, venue_factory):
        network = PoiNetwork.build([venue_factory("V1", open_min=1380, close_min=1440, mean_stay=60)])
        query = Query(start_location=HOME, end_location=network.venue("V1").location,
                      start_time=1380, end_time=1440)
        result = simulate(network, query, ["V1"])
        assert isinstance(result, Itinerary)
        assert result.visits[0].depart == 1440
        assert result.final_arrival == 1440


class TestValidateItinerary:
    def test_simulated_route_is_clean(self, two_venue_network):
        query = _query(600, 900)
        result = simulate(two_venue_network, query, ["V1", "V2"])
        assert validate_itinerary(two_venue_network, query, result) == []

    def test_detects_tampering(self, two_venue_network):
        query = _query(600, 900)
        result = simulate(two_venue_network, query, ["V1", "V2"])
        visits = list(result.visits)
        visits[1] = visits[1].model_copy(update={"depart": visits[1].depart + 5})
        tampered = result.model_copy(update={"visits": visits})
        problems = validate_itinerary(two_venue_network, query, tampered)
        assert any("mean_stay" in p for p in problems)

    def test_detects_budget_overrun(self, two_venue_network):
        query = _query(600, 900)
        result = simulate(two_venue_network, query, ["V1"])
        late = result.model_copy(update={"final_arrival": 950.0})
        assert any("exceeds" in p for p in validate_itinerary(two_venue_network, query, late))

    def test_unknown_venue(self, two_venue_network):
        itinerary = Itinerary(
            visits=[ScheduledVisit(venue_id="V7", arrival=610, wait=0, visit_start=610, depart=670)],
            final_arrival=680,
        )
        assert validate_itinerary(two_venue_network, _query(600, 900), itinerary) == [
            "visit 0 (V7): unknown venue"
        ]


class TestScheduledVisit:
    def test_consistent_times(self):
        visit = ScheduledVisit(venue_id="V1", arrival=600, wait=15, visit_start=615, depart=675)
        assert visit.visit_start == visit.arrival + visit.wait

    def test_start_must_equal_arrival_plus_wait(self):
        with pytest.raises(ValidationError):
            ScheduledVisit(venue_id="V1", arrival=600, wait=15, visit_start=620, depart=680)

    def test_depart_must_follow_start(self):
        with pytest.raises(ValidationError):
            ScheduledVisit(venue_id="V1", arrival=600, wait=0, visit_start=600, depart=600)

    def test_negative_wait_rejected(self):
        with pytest.raises(ValidationError):
            ScheduledVisit(venue_id="V1", arrival=600, wait=-5, visit_start=595, depart=655)
