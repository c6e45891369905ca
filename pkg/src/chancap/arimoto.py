"""Capacity of a discrete memoryless channel by multiplicative iteration.

One sweep computes, for the current input law q, the per-input divergences

    d(x) = D( p(.|x) || r_q ),    r_q = output marginal of q,

then reweights q(x) proportionally to q(x) * exp(d(x)).  Mutual information
never decreases along the iteration, and every sweep yields a certified
two-sided bracket on capacity:

    sum_x q(x) d(x)  <=  C  <=  max_x d(x).

The lower bound is the mutual information of the current iterate; the upper
bound is the minimax-redundancy bound (capacity is the smallest worst-case
divergence achievable by any output law, and r_q is one candidate).  The
solver stops when the bracket gap falls below the tolerance and reports the
bracket midpoint as capacity.

All updates run in log space so that extreme divergences cannot overflow;
a weight that still underflows is clamped to the smallest positive normal
float and the iterate renormalized, flagged on the trace record.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .channel import Channel, output_marginal, per_input_divergences
from .errors import NonInteriorInput, ParameterOutOfRange
from .numeric import logsumexp, ordered_dot
from .probability import Distribution

__all__ = [
    "Termination",
    "Bracket",
    "TraceRecord",
    "IterationTrace",
    "CapacityResult",
    "arimoto_step",
    "capacity_bracket",
    "solve_arimoto",
]

_TINY = float(np.finfo(np.float64).tiny)


class Termination(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"


class Bracket(NamedTuple):
    lower: float
    upper: float


@dataclass(frozen=True)
class TraceRecord:
    """State of the solver at one iteration, before stepping.

    mutual_info equals lower_bound (both are sum_x q(x) d(x)); the trace keeps
    both names because consumers of the CSV schema address them separately.
    step_status and inner_residual are populated only by solvers whose step
    has an inner loop; clamped marks an iterate that needed the underflow
    clamp when it was produced.
    """

    iteration: int
    mutual_info: float
    lower_bound: float
    upper_bound: float
    per_input_divergence: np.ndarray
    input_distribution: Distribution
    clamped: bool = False
    step_status: str | None = None
    inner_residual: float | None = None

    @property
    def gap(self) -> float:
        return self.upper_bound - self.lower_bound


@dataclass(frozen=True)
class IterationTrace:
    """The full bracket history of one solver run."""

    records: tuple[TraceRecord, ...]

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def validate(self) -> None:
        """Assert the structural trace invariants.

        Brackets must be ordered at every record and mutual information must
        be non-decreasing up to a 1e-12 rounding slack.
        """
        previous = -np.inf
        for rec in self.records:
            if rec.lower_bound > rec.upper_bound:
                raise AssertionError(
                    f"iteration {rec.iteration}: lower {rec.lower_bound!r} above upper {rec.upper_bound!r}"
                )
            if rec.mutual_info < previous - 1e-12:
                raise AssertionError(
                    f"iteration {rec.iteration}: mutual information fell by "
                    f"{previous - rec.mutual_info:.3e}"
                )
            previous = rec.mutual_info


@dataclass(frozen=True)
class CapacityResult:
    """Capacity estimate with its certificate bracket."""

    capacity: float
    bracket: Bracket
    optimal_input: Distribution
    iterations: int
    termination: Termination


def _require_interior_input(q: Distribution, ch: Channel) -> None:
    if q.alphabet_size != ch.num_inputs:
        from .errors import DimensionMismatch

        raise DimensionMismatch(
            f"input distribution has {q.alphabet_size} symbols, channel has {ch.num_inputs}"
        )
    if not q.is_interior:
        raise NonInteriorInput("the iteration requires strictly positive input weights")


def _multiplicative_update(weights: np.ndarray, divergences: np.ndarray) -> tuple[np.ndarray, bool]:
    """q(x) * exp(d(x)), normalized in log space.

    Returns the new weights and whether any of them underflowed and had to be
    clamped to the smallest positive normal float.
    """
    logits = np.log(weights) + divergences
    fresh = np.exp(logits - logsumexp(logits))
    clamped = bool(np.any(fresh == 0.0))
    if clamped:
        fresh = np.maximum(fresh, _TINY)
        fresh = fresh / np.cumsum(fresh)[-1]
    return fresh, clamped


def arimoto_step(q: Distribution, ch: Channel) -> Distribution:
    """One multiplicative reweighting of the input law.

    Requires an interior q.  The exponent is invariant under shifting all
    divergences by a constant, which the normalization absorbs.
    """
    _require_interior_input(q, ch)
    d = per_input_divergences(ch, output_marginal(q, ch).weights)
    fresh, _ = _multiplicative_update(q.weights, d)
    return Distribution(fresh)


def capacity_bracket(q: Distribution, ch: Channel) -> Bracket:
    """Certified capacity bracket at the input law q.

    lower is the mutual information of q; upper is the worst-case divergence
    against r_q.  The weighted mean of the divergences can land a few ulp
    above their maximum when all of them coincide, so upper is floored at
    lower to keep the bracket ordered.
    """
    _require_interior_input(q, ch)
    d = per_input_divergences(ch, output_marginal(q, ch).weights)
    lower = ordered_dot(q.weights, d)
    return Bracket(lower, max(lower, float(np.max(d))))


# grows the trace one record per iteration; shared with the backward solver,
# whose step function reports an inner status alongside the new iterate.
Stepper = Callable[[Distribution, np.ndarray], tuple[Distribution, bool, str | None, float | None]]


def _iterate(
    ch: Channel,
    tol: float,
    max_iters: int,
    initial: Distribution | None,
    stepper: Stepper,
) -> tuple[CapacityResult, IterationTrace]:
    if tol <= 0.0:
        raise ParameterOutOfRange(f"tolerance must be positive, got {tol!r}")
    if max_iters < 1:
        raise ParameterOutOfRange(f"max_iters must be at least 1, got {max_iters!r}")
    q = Distribution.uniform(ch.num_inputs) if initial is None else initial
    _require_interior_input(q, ch)

    records: list[TraceRecord] = []
    clamped = False
    status: str | None = None
    residual: float | None = None
    termination = Termination.MAX_ITERATIONS
    for iteration in range(1, max_iters + 1):
        d = per_input_divergences(ch, output_marginal(q, ch).weights)
        lower = ordered_dot(q.weights, d)
        upper = max(lower, float(np.max(d)))
        records.append(
            TraceRecord(
                iteration=iteration,
                mutual_info=lower,
                lower_bound=lower,
                upper_bound=upper,
                per_input_divergence=d,
                input_distribution=q,
                clamped=clamped,
                step_status=status,
                inner_residual=residual,
            )
        )
        if upper - lower <= tol:
            termination = Termination.CONVERGED
            break
        if iteration == max_iters:
            break
        q, clamped, status, residual = stepper(q, d)

    trace = IterationTrace(tuple(records))
    trace.validate()
    last = records[-1]
    result = CapacityResult(
        capacity=0.5 * (last.lower_bound + last.upper_bound),
        bracket=Bracket(last.lower_bound, last.upper_bound),
        optimal_input=last.input_distribution,
        iterations=len(records),
        termination=termination,
    )
    return result, trace


def _arimoto_stepper(q: Distribution, d: np.ndarray):
    fresh, clamped = _multiplicative_update(q.weights, d)
    return Distribution(fresh), clamped, None, None


def solve_arimoto(
    ch: Channel,
    tol: float = 1e-9,
    max_iters: int = 100000,
    initial: Distribution | None = None,
) -> tuple[CapacityResult, IterationTrace]:
    """Iterate multiplicative sweeps until the bracket gap is at most tol.

    Starts from the uniform input unless an interior initial law is given.
    The divergence vector of each iterate is computed once and reused for the
    update, the bracket, and the trace record.
    """
    return _iterate(ch, tol, max_iters, initial, _arimoto_stepper)
