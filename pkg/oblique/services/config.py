"""
Runtime configuration read from the environment.

A `.env` file in the working directory is loaded first, so every variable
below can be set there instead of in the shell.
"""

import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

from ..models import ToleranceProfile

# Load environment variables from .env file
load_dotenv()

DEFAULT_DATABASE_URL = "sqlite:///reports.db"


@dataclass(frozen=True)
class Settings:
    seed: int
    tolerance: ToleranceProfile
    api_key: str | None
    database_url: str


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}")


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


@lru_cache
def get_settings() -> Settings:
    """Return the process-wide settings.

    Cached; tests that change the environment call `get_settings.cache_clear()`.

    Raises:
        ValueError: If a numeric variable does not parse.
    """
    defaults = ToleranceProfile()
    tolerance = ToleranceProfile(
        tol_rank=_float_env("OBLIQUE_TOL_RANK", defaults.tol_rank),
        tol_eq=_float_env("OBLIQUE_TOL_EQ", defaults.tol_eq),
        tol_norm=_float_env("OBLIQUE_TOL_NORM", defaults.tol_norm),
    )
    return Settings(
        seed=_int_env("OBLIQUE_SEED", 0),
        tolerance=tolerance,
        api_key=os.getenv("OBLIQUE_API_KEY") or None,
        database_url=os.getenv("OBLIQUE_DATABASE_URL", DEFAULT_DATABASE_URL),
    )
