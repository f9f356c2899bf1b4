import pytest

import dependencies
from dependencies import (
    DEFAULT_CATALOG,
    Settings,
    get_cache_store,
    get_settings,
    load_settings,
    set_settings,
)


def test_defaults():
    settings = load_settings()
    assert settings.enumeration_bound == 256
    assert settings.intermediate_bound == 4096
    assert settings.catalog == DEFAULT_CATALOG
    assert settings.output_format == "text"
    assert settings.seed == 0


def test_environment_then_overrides(monkeypatch):
    monkeypatch.setenv("GREENFIELDS_BOUND", "64")
    monkeypatch.setenv("GREENFIELDS_SEED", "5")
    settings = load_settings(seed=9)
    assert settings.enumeration_bound == 64
    assert settings.seed == 9
    # None overrides leave the lower layers alone
    assert load_settings(seed=None).seed == 5


def test_config_file(tmp_path, monkeypatch):
    config = tmp_path / "greenfields.env"
    config.write_text("OUTPUT_FORMAT=json\ncatalog=C1, C2 C3\nenumeration_bound=32\n")
    settings = load_settings(str(config))
    assert settings.output_format == "json"
    assert settings.catalog == ["C1", "C2", "C3"]
    assert settings.enumeration_bound == 32
    monkeypatch.setenv("GREENFIELDS_BOUND", "16")
    assert load_settings(str(config)).enumeration_bound == 16
    monkeypatch.setenv("GREENFIELDS_CONFIG", str(config))
    assert load_settings().output_format == "json"


@pytest.mark.parametrize(
    "overrides", [{"output_format": "yaml"}, {"enumeration_bound": 0}, {"property_samples": 0}]
)
def test_invalid_settings(overrides):
    with pytest.raises(ValueError):
        load_settings(**overrides)


def test_singletons(tmp_path):
    settings = set_settings(Settings(cache_dir=str(tmp_path)))
    assert get_settings() is settings
    store = get_cache_store()
    assert get_cache_store() is store
    assert store.directory == tmp_path
    set_settings(Settings(cache_dir=None))
    assert get_cache_store() is not store
    assert get_cache_store().directory is None


def test_settings_are_created_lazily(monkeypatch):
    monkeypatch.setattr(dependencies, "_settings", None)
    assert get_settings().enumeration_bound == 256
