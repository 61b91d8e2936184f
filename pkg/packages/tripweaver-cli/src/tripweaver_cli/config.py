"""Planner configuration: defaults < JSON config file < command-line flags."""

from __future__ import annotations

import json
import logging
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

from tripweaver_core.exceptions import DomainError
from tripweaver_core.network import DEFAULT_SPEED_KMH
from tripweaver_core.schedule import ScheduleParams
from tripweaver_core.scoring import DEFAULT_ALPHA
from tripweaver_core.search import SearchParams
from tripweaver_ingest.pipeline import BuildParams
from tripweaver_ingest.profiles import DEFAULT_TOP_K
from tripweaver_ingest.transit import TransitParams

from tripweaver_cli.conf import get_config_path

logger = logging.getLogger(__name__)


class PlannerConfig(BaseModel):
    """Every tunable of the ``tripweaver`` commands.  Unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    # scoring, schedule and search
    alpha: float = Field(default=DEFAULT_ALPHA, ge=0.0, le=1.0)
    max_wait: float = Field(default=60.0, ge=0)
    candidate_limit: int = Field(default=1000, gt=0)
    local_search_rounds: int = Field(default=50, ge=0)
    seed: int = Field(default=0, ge=0)
    restarts: int = Field(default=0, ge=0)

    # network build
    utc_offset_min: int = Field(default=0, ge=-720, le=840)
    trim: tuple[float, float] = (5.0, 95.0)
    min_trim_samples: int = Field(default=5, ge=1)
    stay_dist_m: float = Field(default=200.0, gt=0)
    stay_time_min: float = Field(default=20.0, ge=0)
    snap_radius_m: float = Field(default=100.0, gt=0)
    top_k: int = Field(default=DEFAULT_TOP_K, gt=0)
    smoothing: float = Field(default=1.0, gt=0)
    observation_days: int = Field(default=30, gt=0)
    default_speed_kmh: float = Field(default=DEFAULT_SPEED_KMH, gt=0)
    workers: int = Field(default=1, ge=1)

    @field_validator("trim")
    @classmethod
    def _check_trim(cls, v: tuple[float, float]) -> tuple[float, float]:
        low, high = v
        if not (0.0 <= low < high <= 100.0):
            raise ValueError(f"trim must satisfy 0 <= low < high <= 100, got {v}")
        return v

    def schedule_params(self) -> ScheduleParams:
        return ScheduleParams(max_wait=self.max_wait)

    def search_params(self) -> SearchParams:
        return SearchParams(
            candidate_limit=self.candidate_limit,
            local_search_rounds=self.local_search_rounds,
            rng_seed=self.seed,
            restarts=self.restarts,
        )

    def build_params(self) -> BuildParams:
        return BuildParams(
            observation_days=self.observation_days,
            utc_offset_min=self.utc_offset_min,
            smoothing=self.smoothing,
            top_k=self.top_k,
            transit=TransitParams(
                snap_radius_m=self.snap_radius_m,
                trim=self.trim,
                min_trim_samples=self.min_trim_samples,
                stay_dist_m=self.stay_dist_m,
                stay_time_min=self.stay_time_min,
                utc_offset_min=self.utc_offset_min,
            ),
            default_speed_kmh=self.default_speed_kmh,
            workers=self.workers,
        )


def load_config_file(path: Path) -> dict[str, Any]:
    """Read a JSON config file into a plain mapping."""
    data = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise DomainError(f"{path}: config must be a JSON object")
    return data


def resolve_config(
    path: Path | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> PlannerConfig:
    """Merge defaults, the config file and explicit overrides (``None`` means unset).

    Without *path*, the file named by ``TRIPWEAVER_CONFIG`` is used when set.
    """
    path = path or get_config_path()
    values: dict[str, Any] = {}
    if path is not None:
        values.update(load_config_file(path))
        logger.info("Loaded config from %s", path)
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return PlannerConfig.model_validate(values)
