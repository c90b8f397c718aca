"""Seeded Monte Carlo estimation of graph indices and experiment grids."""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from itertools import repeat
from typing import Optional, TextIO

import numpy as np
import pandas as pd

from app.config import settings
from app.errors import (
    DensityUnreachableError,
    ExperimentError,
    GenerationFailedError,
    InvalidParameterError,
    require_at_least,
    require_probability,
    require_seed,
)
from app.generators import erdos_renyi, nominal_density, resolve_model, sample
from app.indices import compute_index
from app.numerics import mean_and_stderr, pairwise_sum
from app.types import (
    ClusteringMoments,
    ExperimentConfig,
    IndexKind,
    IndexSpec,
    ModelKind,
    ModelSpec,
    SummaryRow,
)

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["model", "n", "p_star", "index", "alpha", "replications", "mean", "stderr", "seed"]


def derive_seed(master: int, model_label: str, n: int, replication: int) -> int:
    """
    Seed for one replication of one cell.

    The tuple (master, n, replication, utf-8 bytes of the label) is the entropy
    of a numpy SeedSequence, whose hash avalanches every input bit into the
    64-bit output.
    """
    master = require_seed(master)
    entropy = [master, n, replication, *model_label.encode("utf-8")]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


def _replicate(spec: ModelSpec, indices: Sequence[IndexSpec], seed: int) -> tuple[float, ...]:
    graph = sample(spec, seed)
    return tuple(compute_index(graph, index) for index in indices)


def _evaluate(
    spec: ModelSpec,
    indices: Sequence[IndexSpec],
    seeds: Sequence[int],
    executor: Optional[Executor],
) -> np.ndarray:  # type: ignore[type-arg]
    """Index values per replication, shape (replications, len(indices)), in replication order."""
    if executor is None:
        results: Iterator[tuple[float, ...]] = map(_replicate, repeat(spec), repeat(indices), seeds)
    else:
        chunk = max(1, len(seeds) // (4 * settings.threads))
        results = executor.map(_replicate, repeat(spec), repeat(indices), seeds, chunksize=chunk)

    values = np.empty((len(seeds), len(indices)), dtype=np.float64)
    completed = 0
    try:
        for row in results:
            values[completed] = row
            completed += 1
    except GenerationFailedError as exc:
        raise GenerationFailedError(f"replication {completed}: {exc}", replication=completed) from exc
    return values


def estimate_indices(
    spec: ModelSpec,
    indices: Sequence[IndexSpec],
    replications: int,
    master: int,
    *,
    label: Optional[str] = None,
    model: Optional[str] = None,
    p_star: Optional[float] = None,
    executor: Optional[Executor] = None,
) -> list[SummaryRow]:
    """
    Mean and standard error of several indices computed on the same sampled graphs.

    Args:
        spec: Resolved model
        indices: Indices to evaluate on every graph
        replications: Number of sampled graphs
        master: Master seed
        label: Seed label, defaults to the model label
        model: Model column of the rows, defaults to the model label
        p_star: Density column, defaults to the nominal density of ``spec``
        executor: Optional pool; results do not depend on it

    Returns:
        One SummaryRow per index, in the given order
    """
    replications = require_at_least(replications, 1, "replications")
    label = label or spec.label
    seeds = [derive_seed(master, label, spec.n, r) for r in range(replications)]
    values = _evaluate(spec, indices, seeds, executor)

    rows = []
    for column, index in enumerate(indices):
        mean, stderr = mean_and_stderr(values[:, column])
        rows.append(
            SummaryRow(
                model=model or spec.label,
                n=spec.n,
                p_star=nominal_density(spec) if p_star is None else p_star,
                index=index.kind,
                alpha=index.alpha.value,
                replications=replications,
                mean=mean,
                stderr=stderr,
                seed=master,
            )
        )
    return rows


def estimate_index(
    spec: ModelSpec,
    index: IndexSpec,
    replications: int,
    master: int,
    executor: Optional[Executor] = None,
) -> SummaryRow:
    """Mean and standard error of one index over independently seeded samples of spec."""
    return estimate_indices(spec, [index], replications, master, executor=executor)[0]


@dataclass(frozen=True)
class ExperimentCell:
    """One (model variant, density, node count) point of an experiment grid."""

    variant: str
    p_star: float
    spec: ModelSpec

    @property
    def seed_label(self) -> str:
        return f"{self.variant}@{self.p_star!r}"

    def __str__(self) -> str:
        return f"{self.variant} n={self.spec.n} p_star={self.p_star:g}"


def _variants(config: ExperimentConfig) -> list[tuple[str, ModelKind, Optional[float]]]:
    variants: list[tuple[str, ModelKind, Optional[float]]] = []
    for kind in config.models:
        if kind is ModelKind.WATTS_STROGATZ:
            variants.extend((f"ws-b{beta:g}", kind, beta) for beta in config.ws_betas)
        else:
            variants.append((kind.value, kind, None))
    return variants


class ExperimentRunner:
    """Runs every cell of an experiment grid and collects summary rows."""

    def __init__(self, workers: Optional[int] = None) -> None:
        """
        Initialize runner.

        Args:
            workers: Worker processes; 1 runs in-process (default: settings.threads)
        """
        self.workers = workers or settings.threads

    def plan(self, config: ExperimentConfig) -> list[ExperimentCell]:
        """
        Resolve the grid into cells in output order.

        Barabasi-Albert cells whose density cannot be reached are skipped with a
        warning; any other unresolvable cell raises ExperimentError.
        """
        cells = []
        for variant, kind, beta in _variants(config):
            for p_star in config.p_star:
                for n in config.node_grid:
                    try:
                        spec = resolve_model(kind, n, p_star, beta)
                    except InvalidParameterError as exc:
                        if isinstance(exc, DensityUnreachableError) and kind is ModelKind.BARABASI_ALBERT:
                            logger.warning("skipping %s n=%d p_star=%g: %s", variant, n, p_star, exc)
                            continue
                        raise ExperimentError(
                            f"cannot resolve {variant} n={n} p_star={p_star:g}: {exc}"
                        ) from exc
                    cells.append(ExperimentCell(variant, p_star, spec))
        return cells

    @contextmanager
    def _executor(self) -> Iterator[Optional[Executor]]:
        if self.workers <= 1:
            yield None
            return
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            yield pool

    def run(
        self,
        config: ExperimentConfig,
        on_cell: Optional[Callable[[ExperimentCell], None]] = None,
    ) -> list[SummaryRow]:
        """
        Run the experiment.

        Args:
            config: Experiment grid
            on_cell: Called after each finished cell

        Returns:
            Summary rows ordered by variant, p_star, n, then index

        Raises:
            ExperimentError: a cell cannot be resolved or a sampler gives up
        """
        return self.run_cells(config, self.plan(config), on_cell)

    def run_cells(
        self,
        config: ExperimentConfig,
        cells: Sequence[ExperimentCell],
        on_cell: Optional[Callable[[ExperimentCell], None]] = None,
    ) -> list[SummaryRow]:
        """Run cells already produced by plan(config)."""
        indices = config.index_specs
        rows: list[SummaryRow] = []

        with self._executor() as executor:
            for cell in cells:
                logger.debug("running %s", cell)
                try:
                    rows.extend(
                        estimate_indices(
                            cell.spec,
                            indices,
                            config.replications,
                            config.seed,
                            label=cell.seed_label,
                            model=cell.variant,
                            p_star=cell.p_star,
                            executor=executor,
                        )
                    )
                except GenerationFailedError as exc:
                    raise ExperimentError(f"{cell}: {exc}") from exc
                if on_cell is not None:
                    on_cell(cell)

        return rows


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> list[SummaryRow]:
    """Run every cell of config; the rows do not depend on the worker count."""
    return ExperimentRunner(workers).run(config)


def write_csv(rows: Sequence[SummaryRow], destination: TextIO) -> None:
    """
    Write summary rows as CSV with 17 significant digits and "\\n" line endings.

    Raises:
        ExperimentError: rows is empty
    """
    if not rows:
        raise ExperimentError("no summary rows to write")

    frame = pd.DataFrame(
        {
            "model": [row.model for row in rows],
            "n": [row.n for row in rows],
            "p_star": [row.p_star for row in rows],
            "index": [row.index.value for row in rows],
            "alpha": [row.alpha for row in rows],
            "replications": [row.replications for row in rows],
            "mean": [row.mean for row in rows],
            "stderr": [row.stderr for row in rows],
            "seed": pd.Series([row.seed for row in rows], dtype=object),
        },
        columns=CSV_COLUMNS,
    )
    frame.to_csv(destination, index=False, float_format=settings.float_format, lineterminator="\n")


def read_csv(source: TextIO | str) -> list[SummaryRow]:
    """Parse a CSV written by write_csv back into summary rows."""
    frame = pd.read_csv(
        source,
        float_precision="round_trip",
        dtype={"model": str, "index": str, "seed": str},
        keep_default_na=False,
    )
    missing = [column for column in CSV_COLUMNS if column not in frame.columns]
    if missing:
        raise ExperimentError(f"summary CSV lacks columns: {', '.join(missing)}")

    return [
        SummaryRow(
            model=record["model"],
            n=int(record["n"]),
            p_star=float(record["p_star"]),
            index=IndexKind(record["index"]),
            alpha=float(record["alpha"]),
            replications=int(record["replications"]),
            mean=float(record["mean"]),
            stderr=float(record["stderr"]),
            seed=int(record["seed"]),
        )
        for record in frame.to_dict(orient="records")
    ]


def estimate_clustering_moments(n: int, p: float, replications: int, master: int) -> ClusteringMoments:
    """
    Moments of the local clustering coefficients of nodes 0 and 1 in G(n, p).

    Estimates E[C(0)], E[C(0)^2], Var C(0) and the cross moment E[C(0) C(1)].
    """
    n = require_at_least(n, 2, "n")
    p = require_probability(p, "p")
    replications = require_at_least(replications, 1, "replications")

    label = f"moments@{p!r}"
    first = np.empty(replications)
    second = np.empty(replications)
    for r in range(replications):
        clustering = erdos_renyi(n, p, derive_seed(master, label, n, r)).local_clusterings()
        first[r], second[r] = clustering[0], clustering[1]

    mean, mean_stderr = mean_and_stderr(first)
    second_moment = pairwise_sum(first * first) / replications
    return ClusteringMoments(
        n=n,
        p=p,
        replications=replications,
        mean=mean,
        second_moment=second_moment,
        variance=max(second_moment - mean * mean, 0.0),
        cross_moment=pairwise_sum(first * second) / replications,
        mean_stderr=mean_stderr,
    )
