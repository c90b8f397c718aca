"""Exception hierarchy for graph construction, sampling and experiments."""

from __future__ import annotations

from typing import Optional


class GraphIndexError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(GraphIndexError, ValueError):
    """A parameter lies outside its valid range."""

    def __init__(self, message: str, parameter: Optional[str] = None) -> None:
        super().__init__(message)
        self.parameter = parameter


class NodeOutOfRangeError(InvalidParameterError):
    """A node id is not in [0, n)."""


class SelfLoopError(InvalidParameterError):
    """An edge joins a node to itself."""


class UndefinedDensityError(InvalidParameterError):
    """Edge density requested for a graph with fewer than two nodes."""


class ParityError(InvalidParameterError):
    """n * d is odd, so no d-regular graph on n nodes exists."""


class DensityTooLowError(InvalidParameterError):
    """Density target rounds to a parameter of zero."""


class DensityUnreachableError(InvalidParameterError):
    """Density target has no real solution for the model (negative discriminant)."""


class ConfigError(InvalidParameterError):
    """Experiment configuration file is malformed."""

    def __init__(self, message: str, key: Optional[str] = None) -> None:
        super().__init__(message, parameter=key)
        self.key = key


class EdgeListParseError(GraphIndexError, ValueError):
    """Edge-list text is malformed."""

    def __init__(self, message: str, line_number: int) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class GenerationFailedError(GraphIndexError, RuntimeError):
    """A sampler gave up before producing a valid graph."""

    def __init__(self, message: str, replication: Optional[int] = None) -> None:
        super().__init__(message)
        self.replication = replication


class ExperimentError(GraphIndexError):
    """An experiment cell could not be resolved or evaluated."""


def require_probability(value: float, parameter: str) -> float:
    """Return value as float if it lies in [0, 1], else raise InvalidParameterError."""
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidParameterError(f"{parameter} must lie in [0, 1], got {value}", parameter)
    return value


def require_open_probability(value: float, parameter: str) -> float:
    """Return value as float if it lies in (0, 1), else raise InvalidParameterError."""
    value = float(value)
    if not 0.0 < value < 1.0:
        raise InvalidParameterError(f"{parameter} must lie in (0, 1), got {value}", parameter)
    return value


def require_at_least(value: int, minimum: int, parameter: str) -> int:
    """Return value if it is an integer >= minimum, else raise InvalidParameterError."""
    if isinstance(value, bool) or int(value) != value:
        raise InvalidParameterError(f"{parameter} must be an integer, got {value!r}", parameter)
    if value < minimum:
        raise InvalidParameterError(f"{parameter} must be >= {minimum}, got {value}", parameter)
    return int(value)


def require_seed(value: int, parameter: str = "seed") -> int:
    """Return value if it is an integer in [0, 2^64), the range numpy seeding accepts."""
    if isinstance(value, bool) or int(value) != value:
        raise InvalidParameterError(f"{parameter} must be an integer, got {value!r}", parameter)
    if not 0 <= value < 2**64:
        raise InvalidParameterError(f"{parameter} must lie in [0, 2^64), got {value}", parameter)
    return int(value)
