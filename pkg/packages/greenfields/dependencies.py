import os
from pathlib import Path

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, Field, field_validator

from shared.cache_store import CacheStore

load_dotenv()

DEFAULT_CATALOG = ["C1", "C2", "C3", "C4", "C2xC2", "C5", "S3", "C6"]

_ENV_KEYS = {
    "GREENFIELDS_BOUND": "enumeration_bound",
    "GREENFIELDS_INTERMEDIATE_BOUND": "intermediate_bound",
    "GREENFIELDS_CACHE_DIR": "cache_dir",
    "GREENFIELDS_SEED": "seed",
    "GREENFIELDS_FORMAT": "output_format",
}

_settings = None
_cache_store = None


class Settings(BaseModel):
    enumeration_bound: int = Field(default=256, ge=1)
    intermediate_bound: int = Field(default=4096, ge=1)
    catalog: list[str] = Field(default_factory=lambda: list(DEFAULT_CATALOG))
    cache_dir: str | None = str(Path.home() / ".cache" / "greenfields")
    output_format: str = "text"
    seed: int = 0
    property_samples: int = Field(default=200, ge=1)

    @field_validator("output_format")
    @classmethod
    def _known_format(cls, value: str) -> str:
        if value not in ("text", "json"):
            raise ValueError("output_format must be 'text' or 'json'")
        return value

    @field_validator("catalog", mode="before")
    @classmethod
    def _split_catalog(cls, value):
        if isinstance(value, str):
            return [item for item in value.replace(",", " ").split() if item]
        return value


def load_settings(config_file: str | None = None, **overrides) -> Settings:
    """Defaults, then the key=value config file, then environment, then overrides."""
    values: dict = {}
    config_file = config_file or os.getenv("GREENFIELDS_CONFIG")
    if config_file:
        for key, value in dotenv_values(config_file).items():
            if value is not None:
                values[key.strip().lower()] = value
    for env_key, field_name in _ENV_KEYS.items():
        if os.getenv(env_key):
            values[field_name] = os.getenv(env_key)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Settings(**values)


def get_settings() -> Settings:
    """Get or create the settings singleton"""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def set_settings(settings: Settings) -> Settings:
    global _settings, _cache_store
    _settings = settings
    _cache_store = None
    return settings


def get_cache_store() -> CacheStore:
    """Get or create the cache store singleton"""
    global _cache_store
    if _cache_store is None:
        _cache_store = CacheStore(get_settings().cache_dir)
    return _cache_store
