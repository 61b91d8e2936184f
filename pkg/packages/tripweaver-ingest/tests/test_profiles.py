"""Tests for venue ranking, venue profiles and user profiles."""

import pytest

from tripweaver_core.exceptions import DomainError
from tripweaver_core.types import SLOTS_PER_DAY, Venue

from tripweaver_ingest.profiles import (
    build_user_profiles,
    build_venue_profiles,
    rank_venues,
    uniform_profile,
    users_from_json,
    users_to_json,
)
from tripweaver_ingest.records import CheckinRecord


def _checkin(user: str, venue: str, ts: int) -> CheckinRecord:
    return CheckinRecord(user_id=user, venue_id=venue, timestamp=ts)


class TestRankVenues:
    def test_orders_by_count_then_id(self, city_venues, clock):
        records = [
            _checkin("u1", "V3", clock(12)),
            _checkin("u2", "V3", clock(13)),
            _checkin("u1", "V2", clock(10)),
            _checkin("u1", "V4", clock(10)),
        ]
        assert rank_venues(records, city_venues, top_k=10) == ["V3", "V2", "V4", "V1"]

    def test_top_k_truncates(self, city_venues, clock):
        records = [_checkin("u1", "V4", clock(10))]
        assert rank_venues(records, city_venues, top_k=2) == ["V4", "V1"]

    def test_unknown_venues_ignored(self, city_venues, clock):
        records = [_checkin("u1", "NOPE", clock(10))] * 5
        assert rank_venues(records, city_venues, top_k=1) == ["V1"]

    def test_non_positive_top_k(self, city_venues):
        with pytest.raises(DomainError):
            rank_venues([], city_venues, top_k=0)


class TestBuildVenueProfiles:
    def test_noon_point_mass(self, city_venues, clock):
        records = [_checkin(f"u{i}", "V1", clock(12, 5 * i, day=i % 5)) for i in range(10)]
        profiled = {v.id: v for v in build_venue_profiles(records, city_venues, 5)}
        assert profiled["V1"].popularity == pytest.approx(2.0)
        expected = [0.0] * SLOTS_PER_DAY
        expected[12] = 1.0
        assert list(profiled["V1"].visit_histogram) == expected

    def test_venue_without_checkins(self, city_venues, clock):
        records = [_checkin("u1", "V1", clock(12))]
        profiled = {v.id: v for v in build_venue_profiles(records, city_venues, 1)}
        assert profiled["V2"].popularity == 0.0
        assert sum(profiled["V2"].visit_histogram) == 0.0

    def test_one_per_hour_is_uniform(self, city_venues, clock):
        records = [_checkin("u1", "V4", clock(h, 30)) for h in range(24)]
        profiled = {v.id: v for v in build_venue_profiles(records, city_venues, 1)}
        assert profiled["V4"].popularity == pytest.approx(24.0)
        assert profiled["V4"].visit_histogram == pytest.approx([1 / 24] * 24)
        assert sum(profiled["V4"].visit_histogram) == pytest.approx(1.0, abs=1e-9)

    def test_utc_offset_shifts_hours(self, city_venues, clock):
        records = [_checkin("u1", "V1", clock(10, 15))]
        profiled = {v.id: v for v in build_venue_profiles(records, city_venues, 1, utc_offset_min=120)}
        assert profiled["V1"].visit_histogram[12] == 1.0

    def test_unknown_venue_skipped(self, city_venues, clock, caplog):
        records = [_checkin("u1", "NOPE", clock(10)), _checkin("u1", "V1", clock(10))]
        profiled = {v.id: v for v in build_venue_profiles(records, city_venues, 1)}
        assert profiled["V1"].popularity == 1.0
        assert "unknown venues" in caplog.text

    def test_metadata_preserved(self, city_venues, clock):
        profiled = build_venue_profiles([_checkin("u1", "V2", clock(10))], city_venues, 1)
        assert [(v.id, v.open_min, v.close_min, v.mean_stay) for v in profiled] == [
            (v.id, v.open_min, v.close_min, v.mean_stay) for v in city_venues
        ]

    @pytest.mark.parametrize("days", [0, -3])
    def test_non_positive_days(self, city_venues, days):
        with pytest.raises(DomainError):
            build_venue_profiles([], city_venues, days)


class TestBuildUserProfiles:
    @pytest.fixture()
    def two_categories(self, city_venues) -> list[Venue]:
        return [v for v in city_venues if v.category in {"museum", "park"}]

    def test_smoothed_weights(self, two_categories, clock):
        records = [
            _checkin("u1", "V1", clock(10)),
            _checkin("u1", "V2", clock(11)),
            _checkin("u1", "V1", clock(12, day=1)),
            _checkin("u1", "V4", clock(9)),
        ]
        (profile,) = build_user_profiles(records, two_categories, smoothing=1.0)
        assert profile.category_weights["museum"] == pytest.approx(4 / 6)
        assert profile.category_weights["park"] == pytest.approx(2 / 6)
        assert profile.visited == ("V1", "V2", "V4")

    def test_user_without_checkins_is_uniform(self, city_venues):
        venues = city_venues + [
            Venue(id="V5", location=(37.7, -122.4), category="shop", open_min=600, close_min=1200, mean_stay=20)
        ]
        (profile,) = build_user_profiles([], venues, user_ids=["u9"])
        assert profile.user_id == "u9"
        assert profile.category_weights == pytest.approx(
            {"museum": 0.25, "park": 0.25, "restaurant": 0.25, "shop": 0.25}
        )
        assert profile.visited == ()

    def test_vanishing_smoothing(self, two_categories, clock):
        records = [_checkin("u1", "V1", clock(10)) for _ in range(3)]
        (profile,) = build_user_profiles(records, two_categories, smoothing=1e-9)
        assert profile.category_weights["museum"] == pytest.approx(1.0, abs=1e-6)

    def test_sorted_by_user(self, city_venues, clock):
        records = [_checkin(u, "V1", clock(10)) for u in ("zoe", "adam", "mia")]
        assert [p.user_id for p in build_user_profiles(records, city_venues)] == ["adam", "mia", "zoe"]

    @pytest.mark.parametrize("smoothing", [0.0, -1.0])
    def test_non_positive_smoothing(self, city_venues, smoothing):
        with pytest.raises(DomainError):
            build_user_profiles([], city_venues, smoothing)

    def test_uniform_profile(self):
        profile = uniform_profile("guest", ["park", "museum", "park"])
        assert profile.category_weights == {"museum": 0.5, "park": 0.5}

    def test_users_json(self, city_venues, clock):
        profiles = build_user_profiles([_checkin("u1", "V3", clock(12))], city_venues)
        loaded = users_from_json(users_to_json(profiles))
        assert loaded == {"u1": profiles[0]}
