"""Type definitions and data models for graph indices and experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.errors import (
    InvalidParameterError,
    ParityError,
    require_at_least,
    require_probability,
)

Seed = Annotated[int, Field(ge=0, lt=2**64)]


class ModelKind(str, Enum):
    """Random graph models used in experiments."""

    ERDOS_RENYI = "er"
    WATTS_STROGATZ = "ws"
    BARABASI_ALBERT = "ba"
    RANDOM_REGULAR = "rr"
    TWO_PHASE = "two-phase"


class IndexKind(str, Enum):
    """Pairwise index families."""

    DEGREE = "DI"
    CLUSTERING = "CI"


class EstimationMethod(str, Enum):
    """How an exact expectation was obtained."""

    CLOSED_FORM = "closed_form"
    DOUBLE_SUM = "double_sum"
    EXHAUSTIVE_ENUMERATION = "exhaustive_enumeration"


@dataclass(frozen=True)
class Alpha:
    """Exponent applied to pairwise gaps; 1 and 2 have fast paths."""

    value: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.value) and self.value > 0):
            raise InvalidParameterError(f"alpha must be a positive real, got {self.value}", "alpha")

    @classmethod
    def of(cls, alpha: Alpha | float) -> Alpha:
        return alpha if isinstance(alpha, Alpha) else cls(float(alpha))

    @property
    def is_one(self) -> bool:
        return self.value == 1.0

    @property
    def is_two(self) -> bool:
        return self.value == 2.0


@dataclass(frozen=True)
class IndexSpec:
    """An index family together with its exponent, e.g. DI with alpha 2."""

    kind: IndexKind
    alpha: Alpha

    @classmethod
    def of(cls, kind: IndexKind | str, alpha: Alpha | float) -> IndexSpec:
        return cls(IndexKind(kind), Alpha.of(alpha))

    @property
    def label(self) -> str:
        return f"{self.kind.value}{self.alpha.value:g}"


@dataclass(frozen=True)
class ModelSpec:
    """
    A random graph model with resolved parameters.

    ER and TwoPhase use ``p``; WS uses ``k`` and ``beta``; BA uses ``m``;
    RR uses ``d``. Parameters that do not belong to the kind must be None.
    """

    kind: ModelKind
    n: int
    p: Optional[float] = None
    k: Optional[int] = None
    beta: Optional[float] = None
    m: Optional[int] = None
    d: Optional[int] = None

    def __post_init__(self) -> None:
        require_at_least(self.n, 0, "n")
        expected = _MODEL_PARAMETERS[self.kind]
        for name in ("p", "k", "beta", "m", "d"):
            given = getattr(self, name) is not None
            if given and name not in expected:
                raise InvalidParameterError(
                    f"parameter {name} does not apply to model {self.kind.value}", name
                )
            if not given and name in expected:
                raise InvalidParameterError(
                    f"model {self.kind.value} requires parameter {name}", name
                )
        validate_model_parameters(self)

    @property
    def label(self) -> str:
        if self.kind is ModelKind.WATTS_STROGATZ:
            return f"ws-b{self.beta:g}"
        return self.kind.value


_MODEL_PARAMETERS: dict[ModelKind, tuple[str, ...]] = {
    ModelKind.ERDOS_RENYI: ("p",),
    ModelKind.WATTS_STROGATZ: ("k", "beta"),
    ModelKind.BARABASI_ALBERT: ("m",),
    ModelKind.RANDOM_REGULAR: ("d",),
    ModelKind.TWO_PHASE: ("p",),
}


def validate_model_parameters(spec: ModelSpec) -> None:
    """Check kind-specific parameter ranges, raising InvalidParameterError subclasses."""
    n = spec.n
    if spec.kind in (ModelKind.ERDOS_RENYI, ModelKind.TWO_PHASE):
        require_probability(spec.p, "p")  # type: ignore[arg-type]
    elif spec.kind is ModelKind.WATTS_STROGATZ:
        require_at_least(n, 3, "n")
        k = require_at_least(spec.k, 0, "k")  # type: ignore[arg-type]
        if k >= n:
            raise InvalidParameterError(f"k must be < n, got k={k}, n={n}", "k")
        require_probability(spec.beta, "beta")  # type: ignore[arg-type]
    elif spec.kind is ModelKind.BARABASI_ALBERT:
        m = require_at_least(spec.m, 1, "m")  # type: ignore[arg-type]
        if m >= n:
            raise InvalidParameterError(f"m must be < n, got m={m}, n={n}", "m")
    elif spec.kind is ModelKind.RANDOM_REGULAR:
        d = require_at_least(spec.d, 0, "d")  # type: ignore[arg-type]
        if d >= n:
            raise InvalidParameterError(f"d must be < n, got d={d}, n={n}", "d")
        if (n * d) % 2:
            raise ParityError(f"n * d must be even, got n={n}, d={d}", "d")


class BinomialParams(BaseModel):
    """Parameters of Bin(trials, success_prob)."""

    model_config = ConfigDict(frozen=True)

    trials: int = Field(..., ge=0)
    success_prob: float = Field(..., ge=0.0, le=1.0)


class ExactExpectation(BaseModel):
    """An expectation evaluated without sampling."""

    model_config = ConfigDict(frozen=True)

    value: float
    method: EstimationMethod
    total_weight: float = 1.0


class SummaryRow(BaseModel):
    """One Monte Carlo cell: mean and standard error of an index."""

    model_config = ConfigDict(frozen=True)

    model: str
    n: int
    p_star: float
    index: IndexKind
    alpha: float
    replications: int = Field(..., ge=1)
    mean: float
    stderr: float = Field(..., ge=0.0)
    seed: Seed

    @property
    def index_spec(self) -> IndexSpec:
        return IndexSpec.of(self.index, self.alpha)


class ClusteringMoments(BaseModel):
    """Monte Carlo moments of local clustering coefficients in ER graphs."""

    model_config = ConfigDict(frozen=True)

    n: int
    p: float
    replications: int
    mean: float
    second_moment: float
    variance: float
    cross_moment: float
    mean_stderr: float


class ExperimentConfig(BaseModel):
    """Grid of models, node counts and indices for a Monte Carlo run."""

    model_config = ConfigDict(frozen=True)

    models: list[ModelKind] = Field(..., min_length=1)
    node_grid: list[int] = Field(..., min_length=1)
    p_star: list[float] = Field(..., min_length=1)
    indices: list[IndexKind] = Field(default=[IndexKind.DEGREE, IndexKind.CLUSTERING], min_length=1)
    alphas: list[float] = Field(default=[1.0, 2.0], min_length=1)
    replications: int = Field(..., ge=1)
    seed: Seed
    ws_betas: list[float] = Field(default=[0.1, 0.3, 0.5, 0.7, 0.9], min_length=1)

    @field_validator("node_grid")
    @classmethod
    def _ascending_grid(cls, grid: list[int]) -> list[int]:
        if any(n < 3 for n in grid):
            raise ValueError("every node count must be >= 3")
        if any(a >= b for a, b in zip(grid, grid[1:])):
            raise ValueError("node counts must be strictly ascending")
        return grid

    @field_validator("p_star")
    @classmethod
    def _open_densities(cls, densities: list[float]) -> list[float]:
        if any(not 0.0 < p < 1.0 for p in densities):
            raise ValueError("density targets must lie in (0, 1)")
        return densities

    @field_validator("alphas")
    @classmethod
    def _positive_alphas(cls, alphas: list[float]) -> list[float]:
        if any(not (math.isfinite(a) and a > 0) for a in alphas):
            raise ValueError("alphas must be positive reals")
        return sorted(set(alphas))

    @field_validator("ws_betas")
    @classmethod
    def _beta_range(cls, betas: list[float]) -> list[float]:
        if any(not 0.0 <= b <= 1.0 for b in betas):
            raise ValueError("rewiring probabilities must lie in [0, 1]")
        return betas

    @model_validator(mode="after")
    def _unique_models(self) -> ExperimentConfig:
        if len(set(self.models)) != len(self.models):
            raise ValueError("models must not repeat")
        return self

    @property
    def index_specs(self) -> list[IndexSpec]:
        """Requested indices in fixed order: DI before CI, alpha ascending."""
        kinds = [kind for kind in IndexKind if kind in self.indices]
        return [IndexSpec(kind, Alpha(alpha)) for kind in kinds for alpha in self.alphas]


class GraphStats(BaseModel):
    """Indices and clustering summary of one graph."""

    model_config = ConfigDict(frozen=True)

    n: int
    m: int
    density: Optional[float] = None
    indices: dict[str, float] = Field(default_factory=dict)
    clustering_min: float = 0.0
    clustering_max: float = 0.0
    clustering_mean: float = 0.0
