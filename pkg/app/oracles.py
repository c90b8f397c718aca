"""Closed-form expectations for Erdos-Renyi and two-phase graphs, plus a brute-force oracle."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

from app.config import settings
from app.errors import (
    InvalidParameterError,
    require_at_least,
    require_open_probability,
    require_probability,
)
from app.graph import Graph
from app.indices import clustering_index, degree_index
from app.numerics import pairwise_sum
from app.types import BinomialParams, EstimationMethod, ExactExpectation

Statistic = Callable[[Graph], float]


def expected_di2_er(n: int, p: float) -> float:
    """E[DI_2] = 6 C(n, 3) p (1 - p) for G(n, p)."""
    n = require_at_least(n, 2, "n")
    p = require_probability(p, "p")
    return 6 * math.comb(n, 3) * p * (1 - p)


def expected_degree_gap_squared_er(n: int, p: float) -> float:
    """Per-pair E[(d_i - d_j)^2] = 2 (n - 2) p (1 - p)."""
    n = require_at_least(n, 2, "n")
    p = require_probability(p, "p")
    return 2 * (n - 2) * p * (1 - p)


def normalized_di2_er(p: float) -> float:
    """E[DI_2] / (6 C(n, 3)), which does not depend on n."""
    p = require_probability(p, "p")
    return p * (1 - p)


def binomial_pmf(bp: BinomialParams) -> np.ndarray:  # type: ignore[type-arg]
    """Bin(m, p) probabilities from log-gamma terms, renormalised to sum 1."""
    m, p = bp.trials, bp.success_prob
    k = np.arange(m + 1, dtype=np.float64)
    log_pmf = gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1) + xlogy(k, p) + xlog1py(m - k, -p)
    pmf = np.exp(log_pmf)
    return pmf / pmf.sum()


def mean_abs_diff_binomial(bp: BinomialParams) -> float:
    """
    E|X - Y| for independent X, Y ~ Bin(m, p) by the full double sum.

    O(m^2) time and memory; stable to m of a few thousand.
    """
    if bp.trials == 0:
        return 0.0
    pmf = binomial_pmf(bp)
    k = np.arange(bp.trials + 1, dtype=np.float64)
    gaps = np.abs(k[:, None] - k[None, :])
    return float(pmf @ gaps @ pmf)


def mean_abs_diff_binomial_half(m: int) -> float:
    """E|X - Y| at p = 1/2: m C(2m, m) / 2^(2m), exact integers until one final division."""
    m = require_at_least(m, 0, "m")
    return m * math.comb(2 * m, m) / 4**m


def mean_abs_diff_binomial_asymptotic(bp: BinomialParams) -> float:
    """Large-m approximation 2 sqrt(m p (1 - p) / pi)."""
    m = require_at_least(bp.trials, 1, "trials")
    p = require_open_probability(bp.success_prob, "success_prob")
    return 2 * math.sqrt(m * p * (1 - p) / math.pi)


def expected_degree_gap_er(n: int, p: float) -> float:
    """
    Per-pair E|d_i - d_j| in G(n, p).

    The shared edge {i, j} shifts both degrees alike, so the gap is
    distributed as the difference of two independent Bin(n - 2, p).
    """
    n = require_at_least(n, 2, "n")
    p = require_probability(p, "p")
    return mean_abs_diff_binomial(BinomialParams(trials=n - 2, success_prob=p))


def expected_di1_er(n: int, p: float) -> float:
    """E[DI_1] = C(n, 2) E|B_1 - B_2| with B_1, B_2 ~ Bin(n - 2, p)."""
    return math.comb(require_at_least(n, 2, "n"), 2) * expected_degree_gap_er(n, p)


def expected_di1_er_half(n: int) -> float:
    """E[DI_1] at p = 1/2 from the exact binomial closed form."""
    n = require_at_least(n, 2, "n")
    return math.comb(n, 2) * mean_abs_diff_binomial_half(n - 2)


def expected_di1_upper_bound(n: int, p: float) -> float:
    """C(n, 2) * 2 sqrt((n - 2) p (1 - p)), from E|B - mean| <= sd."""
    n = require_at_least(n, 3, "n")
    p = require_probability(p, "p")
    return math.comb(n, 2) * 2 * math.sqrt((n - 2) * p * (1 - p))


def expected_local_clustering_er(n: int, p: float) -> float:
    """E[C(i)] = p (1 - P(d_i <= 1)); given d_i >= 2 each neighbor pair is joined with probability p."""
    n = require_at_least(n, 1, "n")
    p = require_probability(p, "p")
    if n <= 2:
        return 0.0
    return p * (1 - (1 - p) ** (n - 1) - (n - 1) * p * (1 - p) ** (n - 2))


def ci2_empirical_limit(p: float) -> float:
    """
    2 (1 - p)(1 - p^2) / p, the level CI_2 of G(n, p) settles at in simulation.

    An observed reference value, not a proven limit.
    """
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise InvalidParameterError(f"p must lie in (0, 1], got {p}", "p")
    return 2 * (1 - p) * (1 - p * p) / p


def expected_ci1_two_phase(n: int, p: float) -> float:
    """E[CI_1] = (n^2 - n) p (1 - p) for the isolated-set / clique model."""
    n = require_at_least(n, 2, "n")
    p = require_probability(p, "p")
    return (n * n - n) * p * (1 - p)


STATISTICS: dict[str, Statistic] = {
    "di1": lambda g: degree_index(g, 1),
    "di2": lambda g: degree_index(g, 2),
    "ci1": lambda g: clustering_index(g, 1),
    "ci2": lambda g: clustering_index(g, 2),
    "c0": lambda g: g.local_clustering(0),
}


def brute_force_er_expectation(n: int, p: float, statistic: Statistic) -> ExactExpectation:
    """
    E[statistic(G)] for G(n, p) by enumerating all 2^C(n, 2) labeled graphs.

    Args:
        n: Node count, 2 <= n <= brute_force_max_nodes
        p: Edge probability
        statistic: Function of a graph

    Returns:
        ExactExpectation with the weighted sum and the total weight

    Raises:
        InvalidParameterError: n outside the enumerable range
    """
    n = require_at_least(n, 2, "n")
    p = require_probability(p, "p")
    if n > settings.brute_force_max_nodes:
        raise InvalidParameterError(
            f"refusing to enumerate graphs on {n} nodes "
            f"(limit {settings.brute_force_max_nodes})",
            "n",
        )

    rows, cols = np.triu_indices(n, k=1)
    pair_count = rows.size
    masks = np.arange(2**pair_count, dtype=np.int64)
    present = ((masks[:, None] >> np.arange(pair_count)) & 1).astype(bool)
    sizes = present.sum(axis=1)

    weights = np.array([p**size * (1 - p) ** (pair_count - size) for size in sizes.tolist()])
    values = np.array(
        [
            statistic(Graph.from_edge_list(n, np.column_stack((rows[row], cols[row]))))
            for row in present
        ],
        dtype=np.float64,
    )

    total_weight = pairwise_sum(weights)
    if abs(total_weight - 1.0) > 1e-12:
        raise ArithmeticError(f"enumeration weights sum to {total_weight!r}, not 1")
    return ExactExpectation(
        value=pairwise_sum(values * weights),
        method=EstimationMethod.EXHAUSTIVE_ENUMERATION,
        total_weight=total_weight,
    )
