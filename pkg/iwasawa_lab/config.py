"""
Configuration

Settings come from three places, strongest first: ``IWASAWA_LAB_*``
environment variables, a sectioned ``config.json`` (path from
``IWASAWA_LAB_CONFIG``, default ``./config.json``), and the defaults below.
String values of the form ``env:NAME`` in the file are read from the
environment variable ``NAME`` and skipped when it is unset.
"""

import json
import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

import structlog
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = structlog.get_logger(__name__)

DEFAULT_CORPUS_DIR = Path(__file__).parent / "corpus"

# config.json section/key -> settings field
_FILE_KEYS = {
    ("corpus", "dir"): "corpus_dir",
    ("logging", "level"): "log_level",
    ("logging", "json"): "log_json",
    ("verify", "height"): "default_height",
    ("verify", "rmax"): "default_rmax",
    ("verify", "max_workers"): "max_workers",
    ("verify", "oracle_word_length"): "oracle_word_length",
}


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="IWASAWA_LAB_", extra="ignore")

    corpus_dir: Path = Field(DEFAULT_CORPUS_DIR, description="Directory of bundled input documents")
    log_level: str = Field("WARNING", description="Log level for messages on stderr")
    log_json: bool = Field(False, description="Render log events as JSON lines")
    default_height: int = Field(2, ge=1, description="Line height bound for subtorus checks")
    default_rmax: int = Field(3, ge=1, description="Last spectral sequence page computed by default")
    max_workers: int = Field(4, ge=1, description="Concurrent checks in a verification suite")
    oracle_word_length: int = Field(4, ge=1, description="Word length for the brute-force lattice oracle")


def _resolve(value: Any) -> Optional[Any]:
    if isinstance(value, str) and value.startswith("env:"):
        return os.getenv(value.split(":", 1)[1])
    return value


def load_config_file(path: Optional[Path] = None) -> Dict[str, Any]:
    """Flatten a sectioned config.json into settings fields"""
    path = Path(path or os.getenv("IWASAWA_LAB_CONFIG", "config.json"))
    if not path.exists():
        return {}
    try:
        with open(path, "r") as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.warning("config file ignored", path=str(path), error=str(e))
        return {}
    values: Dict[str, Any] = {}
    for (section, key), name in _FILE_KEYS.items():
        if key in raw.get(section, {}):
            resolved = _resolve(raw[section][key])
            if resolved is not None:
                values[name] = resolved
    return values


def _from_environment(name: str) -> bool:
    return f"IWASAWA_LAB_{name.upper()}" in os.environ


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    file_values = {k: v for k, v in load_config_file().items() if not _from_environment(k)}
    return Settings(**file_values)


def reset_settings():
    get_settings.cache_clear()
