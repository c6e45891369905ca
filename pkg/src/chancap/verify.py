"""Independent checks on capacity claims.

brute_force_capacity evaluates mutual information on a dense simplex grid
with its own inline formula (orthogonal to the library's divergence path) so
it can serve as an oracle for the iterative solvers.  circumcenter_check
tests the optimality condition that all supported inputs sit at one common
divergence from the optimal output law, and converse_check certifies
capacity outright when every input does.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .channel import Channel, output_marginal, per_input_divergences
from .errors import DimensionMismatch, ParameterOutOfRange, TooManyInputs
from .numeric import ordered_dot, ordered_sum_along
from .probability import Distribution

__all__ = [
    "brute_force_capacity",
    "CircumcenterReport",
    "circumcenter_check",
    "converse_check",
]

_MAX_GRID_POINTS = 5_000_000


def _grid_blocks(n: int, steps: int):
    """Integer compositions of `steps` into n parts, lexicographic order.

    Yields 2-D blocks with the final two coordinates vectorized, so the whole
    grid is enumerated in a handful of numpy arrays.
    """
    if n == 1:
        yield np.array([[steps]], dtype=float)
        return

    def rec(prefix: list[int], budget: int):
        if len(prefix) == n - 2:
            k = np.arange(budget + 1, dtype=float)
            block = np.empty((budget + 1, n))
            block[:, : n - 2] = prefix
            block[:, n - 2] = k
            block[:, n - 1] = budget - k
            yield block
            return
        for v in range(budget + 1):
            yield from rec(prefix + [v], budget - v)

    yield from rec([], steps)


def brute_force_capacity(ch: Channel, grid_step: float) -> tuple[float, Distribution]:
    """Exhaustive capacity estimate over a simplex grid of pitch grid_step.

    Mutual information is evaluated as (output negentropy) minus (mean row
    negentropy), a formula independent of the divergence code the solvers
    use.  Ties break to the lexicographically first grid point.  Only
    channels with at most 4 inputs are accepted, and the grid must stay below
    five million points.
    """
    n = ch.num_inputs
    if n > 4:
        raise TooManyInputs(f"exhaustive search supports at most 4 inputs, got {n}")
    if not 0.0 < grid_step <= 0.1:
        raise ParameterOutOfRange(f"grid_step must be in (0, 0.1], got {grid_step!r}")
    steps = round(1.0 / grid_step)
    if comb(steps + n - 1, n - 1) > _MAX_GRID_POINTS:
        raise ParameterOutOfRange(
            f"grid_step {grid_step!r} with {n} inputs exceeds {_MAX_GRID_POINTS} points"
        )

    m = ch.matrix
    with np.errstate(divide="ignore"):
        row_terms = np.where(m > 0.0, m * np.log(np.where(m > 0.0, m, 1.0)), 0.0)
    row_negentropy = ordered_sum_along(row_terms, axis=1)

    best_value = -np.inf
    best_point: np.ndarray | None = None
    for block in _grid_blocks(n, steps):
        q_block = block / steps
        marg = q_block @ m
        with np.errstate(divide="ignore"):
            out_terms = np.where(marg > 0.0, marg * np.log(np.where(marg > 0.0, marg, 1.0)), 0.0)
        info = ordered_sum_along(q_block * row_negentropy[None, :], axis=1) - ordered_sum_along(
            out_terms, axis=1
        )
        info = np.maximum(info, 0.0)
        idx = int(np.argmax(info))
        if info[idx] > best_value:
            best_value = float(info[idx])
            best_point = q_block[idx]
    return best_value, Distribution(best_point)


@dataclass(frozen=True)
class CircumcenterReport:
    """Outcome of the equal-divergence optimality check.

    support marks inputs whose mass exceeds the support threshold; those must
    have divergences within tol of the capacity estimate, the rest must not
    exceed it by more than tol.
    """

    passed: bool
    capacity_estimate: float
    divergences: np.ndarray
    support: np.ndarray
    support_threshold: float
    tol: float
    max_support_deviation: float
    max_off_support_excess: float


def circumcenter_check(
    q: Distribution,
    ch: Channel,
    support_threshold: float = 1e-7,
    tol: float = 1e-6,
) -> CircumcenterReport:
    """Test whether q looks like a capacity achiever.

    At an optimum every supported input is at the same divergence from the
    optimal output law (that common value being capacity), and every
    unsupported input is at no more than that divergence.  Boundary inputs
    whose divergences are infinite are reported as failures rather than
    raised.
    """
    if q.alphabet_size != ch.num_inputs:
        raise DimensionMismatch(
            f"input distribution has {q.alphabet_size} symbols, channel has {ch.num_inputs}"
        )
    d = per_input_divergences(ch, output_marginal(q, ch).weights, infinite="inf")
    support = q.weights > support_threshold
    # Inputs with no mass contribute nothing to the weighted mean even when
    # their divergence is infinite, so mask them out before the dot product.
    masked = np.where(q.weights > 0.0, d, 0.0)
    estimate = ordered_dot(q.weights, masked) if np.all(np.isfinite(masked)) else np.inf

    if np.isfinite(estimate):
        support_deviation = (
            float(np.max(np.abs(d[support] - estimate))) if np.any(support) else 0.0
        )
        off = ~support
        off_excess = float(np.max(d[off] - estimate)) if np.any(off) else -np.inf
        off_excess = max(off_excess, 0.0) if np.any(off) else 0.0
    else:
        support_deviation = np.inf
        off_excess = np.inf
    passed = bool(np.isfinite(estimate) and support_deviation <= tol and off_excess <= tol)
    return CircumcenterReport(
        passed=passed,
        capacity_estimate=estimate,
        divergences=d,
        support=support,
        support_threshold=support_threshold,
        tol=tol,
        max_support_deviation=support_deviation,
        max_off_support_excess=off_excess,
    )


def converse_check(ch: Channel, q: Distribution, tol: float = 1e-6) -> float | None:
    """Certify capacity when all inputs share one divergence value.

    If every input's divergence from the output marginal of q lies within
    tol of every other, their midpoint value is capacity (the equal-distance
    point is simultaneously achievable and worst case) and is returned.
    Otherwise returns None; returning None is not a refutation, merely a
    failure to certify, since optima supported on a strict subset of inputs
    never satisfy the all-inputs hypothesis.
    """
    if q.alphabet_size != ch.num_inputs:
        raise DimensionMismatch(
            f"input distribution has {q.alphabet_size} symbols, channel has {ch.num_inputs}"
        )
    d = per_input_divergences(ch, output_marginal(q, ch).weights, infinite="inf")
    if not np.all(np.isfinite(d)):
        return None
    spread = float(np.max(d) - np.min(d))
    if spread > tol:
        return None
    return 0.5 * (float(np.max(d)) + float(np.min(d)))
