"""Tests for planner configuration resolution."""

import json

import pytest
from pydantic import ValidationError

from tripweaver_core.exceptions import DomainError

from tripweaver_cli.config import PlannerConfig, resolve_config


class TestResolveConfig:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("TRIPWEAVER_CONFIG", raising=False)
        config = resolve_config()
        assert config == PlannerConfig()
        assert config.alpha == 0.5
        assert config.max_wait == 60.0
        assert config.top_k == 1000

    def test_file_then_flags(self, tmp_path):
        path = tmp_path / "planner.json"
        path.write_text(json.dumps({"alpha": 0.8, "max_wait": 15}))
        config = resolve_config(path, {"alpha": 0.3, "max_wait": None})
        assert config.alpha == 0.3
        assert config.max_wait == 15

    def test_environment_variable(self, tmp_path, monkeypatch):
        path = tmp_path / "env.json"
        path.write_text(json.dumps({"candidate_limit": 25}))
        monkeypatch.setenv("TRIPWEAVER_CONFIG", str(path))
        assert resolve_config().candidate_limit == 25

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "planner.json"
        path.write_text(json.dumps({"alpah": 0.8}))
        with pytest.raises(ValidationError):
            resolve_config(path)

    def test_non_object_rejected(self, tmp_path):
        path = tmp_path / "planner.json"
        path.write_text("[1, 2]")
        with pytest.raises(DomainError):
            resolve_config(path)

    @pytest.mark.parametrize(
        "values",
        [{"alpha": 1.5}, {"max_wait": -1}, {"candidate_limit": 0}, {"trim": [95, 5]}, {"workers": 0}],
    )
    def test_out_of_range(self, values):
        with pytest.raises(ValidationError):
            PlannerConfig.model_validate(values)


class TestDerivedParams:
    def test_mapping(self):
        config = PlannerConfig(
            max_wait=0, candidate_limit=10, local_search_rounds=3, seed=9, restarts=2,
            snap_radius_m=50, trim=(10, 90), utc_offset_min=-480, top_k=20, workers=2,
        )
        assert config.schedule_params().max_wait == 0
        search = config.search_params()
        assert (search.candidate_limit, search.local_search_rounds, search.rng_seed, search.restarts) == (10, 3, 9, 2)
        build = config.build_params()
        assert build.top_k == 20
        assert build.workers == 2
        assert build.utc_offset_min == -480
        assert build.transit.snap_radius_m == 50
        assert build.transit.trim == (10, 90)
        assert build.transit.utc_offset_min == -480
