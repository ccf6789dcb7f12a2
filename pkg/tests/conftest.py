import json
from pathlib import Path

import numpy as np
import pytest

from oblique.models import ToleranceProfile
from oblique.services.config import get_settings

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in (
        "OBLIQUE_SEED",
        "OBLIQUE_TOL_RANK",
        "OBLIQUE_TOL_EQ",
        "OBLIQUE_TOL_NORM",
        "OBLIQUE_API_KEY",
    ):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def tol():
    return ToleranceProfile()


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


def load_golden(name: str) -> dict:
    return json.loads((GOLDEN / f"{name}.json").read_text(encoding="utf-8"))


def assert_matches(actual, expected, path="$"):
    """Every key in `expected` must be present in `actual` with an equal value.

    Floats compare with 1e-9 relative and absolute slack; extra keys in
    `actual` are ignored.
    """
    if isinstance(expected, dict):
        assert isinstance(actual, dict), f"{path}: expected an object"
        for key, value in expected.items():
            assert key in actual, f"{path}.{key} missing"
            assert_matches(actual[key], value, f"{path}.{key}")
    elif isinstance(expected, list):
        assert isinstance(actual, list), f"{path}: expected a list"
        assert len(actual) == len(expected), f"{path}: length {len(actual)} != {len(expected)}"
        for i, (a, e) in enumerate(zip(actual, expected)):
            assert_matches(a, e, f"{path}[{i}]")
    elif isinstance(expected, bool) or expected is None or isinstance(expected, str):
        assert actual is expected or actual == expected, f"{path}: {actual!r} != {expected!r}"
        assert type(actual) is type(expected), f"{path}: {actual!r} != {expected!r}"
    else:
        assert not isinstance(actual, bool), f"{path}: got a boolean"
        assert actual == pytest.approx(expected, rel=1e-9, abs=1e-9), f"{path}: {actual!r} != {expected!r}"
