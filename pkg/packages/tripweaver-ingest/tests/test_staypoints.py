"""Tests for stay-point detection."""

import pytest

from tripweaver_core.exceptions import DomainError

from tripweaver_ingest.records import GpsPoint
from tripweaver_ingest.staypoints import detect_stay_points


class TestDetectStayPoints:
    def test_stationary_half_hour(self, dwell_factory, clock, place):
        trace = dwell_factory("T1", place(0.0), clock(9), 30)
        (stay,) = detect_stay_points(trace, 200, 20)
        assert stay.duration_min == pytest.approx(30.0)
        assert stay.arrive == clock(9)
        assert stay.depart == clock(9, 30)
        assert stay.centroid == pytest.approx(place(0.0))

    def test_moving_vehicle(self, clock, place):
        trace = [
            GpsPoint(vehicle_id="T1", timestamp=clock(9, i), location=place(float(i)))
            for i in range(40)
        ]
        assert detect_stay_points(trace, 200, 20) == []

    def test_two_dwells_with_drive(self, dwell_factory, clock, place):
        a, b = place(0.0), place(5.0)
        drive = [
            GpsPoint(vehicle_id="T1", timestamp=clock(9, 25 + k), location=place(0.5 * k))
            for k in range(1, 10)
        ]
        trace = dwell_factory("T1", a, clock(9), 25) + drive + dwell_factory("T1", b, clock(9, 35), 25)
        first, second = detect_stay_points(trace, 200, 20)
        assert (first.arrive, first.depart) == (clock(9), clock(9, 25))
        assert (second.arrive, second.depart) == (clock(9, 35), clock(10))
        assert second.centroid == pytest.approx(b)

    def test_short_dwell_ignored(self, dwell_factory, clock, place):
        trace = dwell_factory("T1", place(0.0), clock(9), 10)
        assert detect_stay_points(trace, 200, 20) == []

    def test_jitter_within_radius(self, clock, place):
        trace = [
            GpsPoint(vehicle_id="T1", timestamp=clock(9, i), location=place(0.05 * (i % 3)))
            for i in range(31)
        ]
        (stay,) = detect_stay_points(trace, 200, 20)
        assert stay.centroid[0] == pytest.approx(place(0.05)[0], abs=1e-4)

    def test_empty_trace(self):
        assert detect_stay_points([], 200, 20) == []

    def test_unsorted_trace(self, dwell_factory, clock, place):
        trace = dwell_factory("T1", place(0.0), clock(9), 30)
        trace[3], trace[4] = trace[4], trace[3]
        with pytest.raises(DomainError, match="not sorted"):
            detect_stay_points(trace, 200, 20)

    def test_mixed_vehicles(self, dwell_factory, clock, place):
        trace = dwell_factory("T1", place(0.0), clock(9), 5) + dwell_factory("T2", place(0.0), clock(9, 10), 5)
        with pytest.raises(DomainError, match="mixes vehicles"):
            detect_stay_points(trace, 200, 20)

    def test_bad_thresholds(self, dwell_factory, clock, place):
        trace = dwell_factory("T1", place(0.0), clock(9), 30)
        with pytest.raises(DomainError):
            detect_stay_points(trace, 0, 20)
        with pytest.raises(DomainError):
            detect_stay_points(trace, 200, -1)
