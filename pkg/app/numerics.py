"""Order-stable reductions shared by oracles and Monte Carlo summaries."""

from __future__ import annotations

import math
from collections.abc import Sequence
from typing import Any

import numpy as np


def pairwise_sum(values: Sequence[float] | np.ndarray[Any, Any]) -> float:
    """
    Sum by recursive halving.

    The split points depend only on the length, so the same values in the
    same order always produce the same bits, however they were computed.
    """
    array = np.asarray(values, dtype=np.float64)
    return _tree_sum(array, 0, array.size)


def _tree_sum(array: np.ndarray[Any, np.dtype[np.float64]], start: int, stop: int) -> float:
    count = stop - start
    if count == 0:
        return 0.0
    if count == 1:
        return float(array[start])
    middle = start + count // 2
    return _tree_sum(array, start, middle) + _tree_sum(array, middle, stop)


def mean_and_stderr(values: Sequence[float] | np.ndarray[Any, Any]) -> tuple[float, float]:
    """
    Sample mean and standard error with the unbiased (n - 1) variance.

    A single value has standard error 0.
    """
    array = np.asarray(values, dtype=np.float64)
    count = array.size
    if count == 0:
        raise ValueError("mean of an empty sample")
    mean = pairwise_sum(array) / count
    if count == 1:
        return mean, 0.0
    variance = pairwise_sum((array - mean) ** 2) / (count - 1)
    return mean, math.sqrt(variance / count)
