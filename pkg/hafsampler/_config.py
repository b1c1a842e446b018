"""Runtime settings: built-in defaults, a JSON settings file and env vars.

Resolution order for :func:`get_setting` is explicit argument, then
``HAFSAMPLER_<NAME>`` environment variable, then ``~/.hafsampler/config.json``,
then :data:`DEFAULTS`.
"""
from __future__ import annotations

import functools
import json
import logging
import os
from pathlib import Path
from typing import Any

from ._errors import ConfigError

logger = logging.getLogger(__name__)

CONFIG_DIR = Path.home() / ".hafsampler"
CONFIG_FILE = CONFIG_DIR / "config.json"

ENV_PREFIX = "HAFSAMPLER_"

DEFAULTS: dict[str, Any] = {
    # hafnian products allowed in one exact enumeration
    "max_enum": 100_000_000,
    # rejection attempts per requested sample
    "max_attempts": 1_000_000,
    "hafnian_cap": 20,
    "naive_cap": 8,
    "clique_cap": 30,
    "alpha": 1.0,
    "threads": 1,
    # samples drawn from one derived RNG stream
    "chunk_size": 4096,
}

_INT_SETTINGS = {"max_enum", "max_attempts", "hafnian_cap", "naive_cap",
                 "clique_cap", "threads", "chunk_size"}


@functools.lru_cache(maxsize=8)
def _parse_config(path: Path, mtime_ns: int, size: int) -> dict:
    # keyed on the file stamp so an edited file is parsed again
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a JSON object")
    return data


def _load_config() -> dict:
    """Return the saved settings dict, or ``{}`` when no file exists."""
    try:
        stat = CONFIG_FILE.stat()
    except FileNotFoundError:
        return {}
    except OSError as exc:
        raise ConfigError(f"cannot read {CONFIG_FILE}: {exc}") from exc
    return dict(_parse_config(CONFIG_FILE, stat.st_mtime_ns, stat.st_size))


def _save_config(data: dict) -> Path:
    CONFIG_DIR.mkdir(parents=True, exist_ok=True)
    CONFIG_FILE.write_text(json.dumps(data, indent=2, sort_keys=True))
    _parse_config.cache_clear()
    return CONFIG_FILE


def _coerce(name: str, value: Any) -> Any:
    try:
        if name in _INT_SETTINGS:
            # accepts "1e8" as well as "100000000"
            as_float = float(value)
            if not as_float.is_integer() or as_float < 1:
                raise ValueError(value)
            return int(as_float)
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for {name!r}: {value!r}") from None


def get_setting(name: str, override: Any = None) -> Any:
    """Resolve one setting by name."""
    if name not in DEFAULTS:
        raise ConfigError(f"unknown setting {name!r}")
    if override is not None:
        return _coerce(name, override)
    env_val = os.environ.get(ENV_PREFIX + name.upper())
    if env_val:
        return _coerce(name, env_val)
    saved = _load_config()
    if name in saved and saved[name] is not None:
        return _coerce(name, saved[name])
    return DEFAULTS[name]


def set_setting(name: str, value: Any) -> None:
    """Persist one setting to the JSON settings file."""
    if name not in DEFAULTS:
        raise ConfigError(f"unknown setting {name!r}")
    data = _load_config()
    data[name] = _coerce(name, value)
    path = _save_config(data)
    logger.info("saved %s=%r to %s", name, data[name], path)
