"""Degree index and clustering index of a graph."""

from __future__ import annotations

from collections.abc import Sequence
from typing import Any, Literal

import numpy as np

from app.errors import InvalidParameterError, require_at_least
from app.graph import Graph
from app.types import Alpha, IndexKind, IndexSpec

_INT64_LIMIT = 2**63


def pairwise_power_sum(
    values: Sequence[float] | np.ndarray[Any, Any],
    alpha: Alpha | float,
    method: Literal["auto", "direct"] = "auto",
) -> float:
    """
    Sum |v_i - v_j|^alpha over all unordered pairs i < j.

    alpha = 1 uses the sorted identity sum_i (2i - 1 - n) v_(i) (rank i from 1),
    alpha = 2 uses the moment identity n * sum (v - mean)^2; any other alpha
    (or method="direct") runs the O(n^2) double loop. Integer input is kept
    integral on both fast paths, so degree sums are exact.

    Args:
        values: Nonempty sequence of reals
        alpha: Positive exponent
        method: "direct" forces the double loop

    Returns:
        The pairwise power sum

    Raises:
        InvalidParameterError: empty values or alpha <= 0
    """
    alpha = Alpha.of(alpha)
    array = np.asarray(values)
    if array.ndim != 1 or array.size == 0:
        raise InvalidParameterError("values must be a nonempty one-dimensional sequence", "values")

    if array.size == 1 or np.all(array == array[0]):
        return 0.0

    if method == "direct" or not (alpha.is_one or alpha.is_two):
        return _direct_power_sum(array.astype(np.float64), alpha.value)

    if np.issubdtype(array.dtype, np.integer):
        return _integer_power_sum(array, alpha)

    ordered = np.sort(array.astype(np.float64))
    n = ordered.size
    if alpha.is_one:
        weights = 2 * np.arange(1, n + 1, dtype=np.float64) - 1 - n
        return float(np.dot(weights, ordered - ordered[0]))
    centered = ordered - ordered.mean()
    return float(max(n * np.dot(centered, centered), 0.0))


def _integer_power_sum(array: np.ndarray[Any, Any], alpha: Alpha) -> float:
    """Exact fast paths for integers; int64 when the largest partial sum fits, Python ints otherwise."""
    n = array.size
    largest = max(abs(int(array.min())), abs(int(array.max())))
    bound = n * n * (largest if alpha.is_one else largest * largest)

    if bound < _INT64_LIMIT:
        ordered = np.sort(array.astype(np.int64))
        if alpha.is_one:
            weights = 2 * np.arange(1, n + 1, dtype=np.int64) - 1 - n
            return float(np.dot(weights, ordered))
        total = int(ordered.sum())
        return float(n * int(np.dot(ordered, ordered)) - total * total)

    values = sorted(int(v) for v in array.tolist())
    if alpha.is_one:
        return float(sum((2 * rank - 1 - n) * v for rank, v in enumerate(values, start=1)))
    total = sum(values)
    return float(n * sum(v * v for v in values) - total * total)


def _direct_power_sum(array: np.ndarray[Any, np.dtype[np.float64]], alpha: float) -> float:
    total = 0.0
    for i in range(array.size - 1):
        total += float(np.sum(np.abs(array[i + 1 :] - array[i]) ** alpha))
    return total


def degree_index(graph: Graph, alpha: Alpha | float) -> float:
    """DI_alpha: pairwise power sum over the degree sequence."""
    require_at_least(graph.node_count, 2, "n")
    return pairwise_power_sum(graph.degrees, alpha)


def clustering_index(graph: Graph, alpha: Alpha | float) -> float:
    """CI_alpha: pairwise power sum over local clustering coefficients."""
    require_at_least(graph.node_count, 2, "n")
    return pairwise_power_sum(graph.local_clusterings(), alpha)


def clustering_index_telescoped(graph: Graph) -> float:
    """
    CI_1 through consecutive gaps of the sorted clustering coefficients.

    sum_{k=2}^{n} (k - 1)(n + 1 - k)(C_(k) - C_(k-1)): the gap between ranks
    k-1 and k is crossed by every pair with one rank below k and one at or
    above it.
    """
    n = require_at_least(graph.node_count, 2, "n")
    ordered = np.sort(graph.local_clusterings())
    k = np.arange(2, n + 1, dtype=np.float64)
    return float(np.dot((k - 1) * (n + 1 - k), np.diff(ordered)))


def compute_index(graph: Graph, index: IndexSpec) -> float:
    if index.kind is IndexKind.DEGREE:
        return degree_index(graph, index.alpha)
    return clustering_index(graph, index.alpha)


def ci_upper_bound(n: int) -> float:
    """n^2 / 4, the largest CI_alpha (alpha >= 1) of any graph on n nodes."""
    n = require_at_least(n, 2, "n")
    return n * n / 4


def degree_index_upper_bound(n: int) -> float:
    """(n - 1) n^2 / 4: the CI bound scaled by the largest possible degree gap."""
    n = require_at_least(n, 2, "n")
    return (n - 1) * n * n / 4
