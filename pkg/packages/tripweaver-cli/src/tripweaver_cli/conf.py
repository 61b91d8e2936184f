"""Environment lookups for ``TRIPWEAVER_*`` variables."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any


def get_setting(name: str, default: Any = None) -> Any:
    """Read a ``TRIPWEAVER_<NAME>`` environment variable."""
    return os.environ.get(f"TRIPWEAVER_{name}", default)


def get_config_path() -> Path | None:
    """Return the config file named by ``TRIPWEAVER_CONFIG``, if any."""
    value = get_setting("CONFIG")
    return Path(value) if value else None
