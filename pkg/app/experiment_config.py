"""Parser for line-oriented `key = value` experiment configuration files."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from app.config import settings
from app.errors import ConfigError
from app.types import ExperimentConfig, IndexKind, ModelKind


def _items(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _ints(value: str) -> list[int]:
    return [int(item) for item in _items(value)]


def _floats(value: str) -> list[float]:
    return [float(item) for item in _items(value)]


_PARSERS: dict[str, Callable[[str], Any]] = {
    "models": lambda value: [ModelKind(item.lower()) for item in _items(value)],
    "node_grid": _ints,
    "p_star": _floats,
    "indices": lambda value: [IndexKind(item.upper()) for item in _items(value)],
    "alphas": _floats,
    "replications": lambda value: int(value.strip()),
    "seed": lambda value: int(value.strip()),
    "ws_betas": _floats,
}

_REQUIRED = ("models", "p_star", "seed")


def parse_experiment_config(text: str) -> ExperimentConfig:
    """
    Build an ExperimentConfig from configuration text.

    Blank lines and lines starting with '#' are ignored. Lists are
    comma-separated. node_grid, replications and ws_betas fall back to the
    settings defaults.

    Raises:
        ConfigError: unknown, repeated, missing or invalid key
    """
    values: dict[str, Any] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, separator, value = line.partition("=")
        key = key.strip()
        if not separator:
            raise ConfigError(f"line {line_number}: expected 'key = value', got {line!r}", key or None)
        if key not in _PARSERS:
            raise ConfigError(f"line {line_number}: unknown key {key!r}", key)
        if key in values:
            raise ConfigError(f"line {line_number}: key {key!r} given twice", key)
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {line_number}: invalid value for {key!r}: {value.strip()!r}", key) from exc

    missing = [key for key in _REQUIRED if key not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}", missing[0])

    values.setdefault("node_grid", list(settings.node_grid))
    values.setdefault("replications", settings.default_replications)
    values.setdefault("ws_betas", list(settings.ws_betas))

    try:
        return ExperimentConfig(**values)
    except ValidationError as exc:
        error = exc.errors()[0]
        key = str(error["loc"][0]) if error["loc"] else None
        raise ConfigError(f"invalid value for {key!r}: {error['msg']}", key) from exc


def load_experiment_config(path: Path | str) -> ExperimentConfig:
    """Read and parse an experiment configuration file."""
    return parse_experiment_config(Path(path).read_text(encoding="utf-8"))
