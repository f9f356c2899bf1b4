import os
import sys

import pytest
from hypothesis import HealthCheck
from hypothesis import settings as hypothesis_settings

# Add the package root to sys.path so tests import modules the way main.py does
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

# exact arithmetic is slow and the autouse settings fixture is function scoped
hypothesis_settings.register_profile(
    "greenfields", deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture]
)
hypothesis_settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "greenfields"))

from algebra.groups import clear_registry, make_group  # noqa: E402
from dependencies import load_settings, set_settings  # noqa: E402
from green.engine import clear_memo  # noqa: E402
from green.spec_parser import clear_functor_cache  # noqa: E402


def _reset_state():
    clear_functor_cache()
    clear_memo()
    clear_registry()


@pytest.fixture(autouse=True)
def settings(tmp_path, monkeypatch):
    """Fresh settings with a throwaway cache directory for every test."""
    for key in list(os.environ):
        if key.startswith("GREENFIELDS_"):
            monkeypatch.delenv(key, raising=False)
    _reset_state()
    current = set_settings(load_settings(cache_dir=str(tmp_path / "cache")))
    yield current
    for key in list(os.environ):
        if key.startswith("GREENFIELDS_"):
            monkeypatch.delenv(key, raising=False)
    _reset_state()
    set_settings(load_settings(cache_dir=str(tmp_path / "cache")))


@pytest.fixture
def klein():
    return make_group("C2xC2")


@pytest.fixture
def s3():
    return make_group("S3")
