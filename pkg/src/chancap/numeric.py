"""Deterministic floating point reductions.

numpy's own reductions use pairwise blocking whose grouping depends on memory
layout and vector width, so the same multiset of terms can sum to different
floats depending on how the array is strided.  The helpers here accumulate
strictly left to right (via the running-sum semantics of cumsum), which makes
every reduction in the package a pure function of its operand values: repeated
evaluation is bit-identical, and so is evaluation of the same values behind a
different layout.

All public quantities in the package are float64 nats.
"""

from __future__ import annotations

import numpy as np

__all__ = ["ordered_sum", "ordered_sum_along", "ordered_dot", "logsumexp"]


def ordered_sum(values: np.ndarray) -> float:
    """Sum all entries left to right in C order and return a float.

    An empty array sums to 0.0.
    """
    a = np.asarray(values, dtype=float).ravel()
    if a.size == 0:
        return 0.0
    # cumsum is defined as a running accumulation, so its last entry is the
    # strict left-to-right total.
    return float(np.cumsum(a)[-1])


def ordered_sum_along(values: np.ndarray, axis: int) -> np.ndarray:
    """Left-to-right sum along one axis of a 2-D array."""
    a = np.asarray(values, dtype=float)
    if a.shape[axis] == 0:
        shape = list(a.shape)
        del shape[axis]
        return np.zeros(shape)
    return np.take(np.cumsum(a, axis=axis), -1, axis=axis)


def ordered_dot(a: np.ndarray, b: np.ndarray) -> float:
    """Inner product with left-to-right accumulation."""
    return ordered_sum(np.asarray(a, dtype=float) * np.asarray(b, dtype=float))


def logsumexp(values: np.ndarray) -> float:
    """log(sum(exp(values))) without overflow.

    The largest entry is factored out before exponentiating, which keeps the
    arguments of exp in [large negative, 0] and makes the result invariant
    (to rounding) under adding a constant to every entry.  Inputs must be
    finite and non-empty.
    """
    a = np.asarray(values, dtype=float).ravel()
    if a.size == 0:
        raise ValueError("logsumexp of an empty array")
    m = float(np.max(a))
    return m + float(np.log(ordered_sum(np.exp(a - m))))
