"""Shared fixtures for tripweaver-cli tests."""

from __future__ import annotations

import json
from collections.abc import Callable
from pathlib import Path

import pytest

from tripweaver_cli.main import main

SEED = "42"


@pytest.fixture()
def run(capsys) -> Callable[..., tuple[int, str]]:
    """Run the CLI and return ``(exit code, stdout)``."""

    def invoke(*argv: str) -> tuple[int, str]:
        code = main(list(argv))
        return code, capsys.readouterr().out

    return invoke


@pytest.fixture(scope="session")
def scenario(tmp_path_factory) -> Path:
    """``gen-data --seed 42 --venues 200`` followed by ``build-network``."""
    root = tmp_path_factory.mktemp("scenario")
    assert main(["gen-data", "--seed", SEED, "--venues", "200", "--out", str(root)]) == 0
    assert main(["build-network", "--data", str(root), "--out", str(root / "network.json")]) == 0
    return root


@pytest.fixture(scope="session")
def airport(scenario) -> str:
    """``LAT,LON`` of the scenario's airport."""
    network = json.loads((scenario / "network.json").read_text())
    (venue,) = [v for v in network["venues"] if v["category"] == "airport"]
    lat, lon = venue["location"]
    return f"{lat},{lon}"
