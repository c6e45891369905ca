"""Discrete memoryless channels.

A channel is a row-stochastic matrix: entry (x, y) is the probability of
output y given input x.  Rows follow the same construction tolerances as
Distribution (sum within 1e-9 of one, renormalized; sums within 1e-12 kept
bit for bit).  Output symbols that no input can ever produce (all-zero
columns) are removed at construction with a warning, which guarantees that
every output marginal of an interior input is strictly positive.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    AbsoluteContinuityViolation,
    DimensionMismatch,
    DroppedOutputColumnWarning,
    InvalidDistribution,
    NegativeEntry,
    ParameterOutOfRange,
    ParseError,
    RowNotStochastic,
)
from .numeric import ordered_sum, ordered_sum_along
from .probability import _SUM_KEEP, _SUM_REJECT, Distribution, JointDistribution

__all__ = [
    "Channel",
    "load_channel",
    "save_channel",
    "joint",
    "output_marginal",
    "per_input_divergences",
    "bsc",
    "bec",
    "z_channel",
    "noisy_typewriter",
    "identity_channel",
    "uniform_rows",
    "canonical",
    "CANONICAL_KINDS",
]


@dataclass(frozen=True, eq=False)
class Channel:
    """An immutable conditional distribution matrix, rows indexed by input."""

    matrix: np.ndarray
    input_labels: tuple[str, ...] | None = None
    output_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.size == 0:
            raise InvalidDistribution(f"channel matrix must be 2-dimensional, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidDistribution("channel matrix entries must be finite")
        negative = np.argwhere(m < 0.0)
        if negative.size:
            x, y = (int(v) for v in negative[0])
            raise NegativeEntry(f"matrix entry ({x}, {y}) is negative: {m[x, y]!r}")
        for x in range(m.shape[0]):
            deviation = abs(ordered_sum(m[x]) - 1.0)
            if deviation > _SUM_REJECT:
                raise RowNotStochastic(x, deviation)
        # Normalize rows only when needed, so a matrix saved by this package
        # reloads without any bit changing.
        for x in range(m.shape[0]):
            total = ordered_sum(m[x])
            if abs(total - 1.0) > _SUM_KEEP:
                m[x] = m[x] / total

        dead = np.all(m == 0.0, axis=0)
        out_labels = self.output_labels
        if np.any(dead):
            kept = ~dead
            dropped = [int(y) for y in np.flatnonzero(dead)]
            warnings.warn(
                f"dropping all-zero output column(s) {dropped}",
                DroppedOutputColumnWarning,
                stacklevel=2,
            )
            m = np.ascontiguousarray(m[:, kept])
            if out_labels is not None:
                out_labels = tuple(lab for lab, keep in zip(out_labels, kept) if keep)

        if self.input_labels is not None:
            labels = tuple(str(s) for s in self.input_labels)
            if len(labels) != m.shape[0]:
                raise DimensionMismatch(
                    f"{len(labels)} input labels for {m.shape[0]} inputs"
                )
            object.__setattr__(self, "input_labels", labels)
        if out_labels is not None:
            labels = tuple(str(s) for s in out_labels)
            if len(labels) != m.shape[1]:
                raise DimensionMismatch(
                    f"{len(labels)} output labels for {m.shape[1]} outputs"
                )
            object.__setattr__(self, "output_labels", labels)

        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def num_inputs(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_outputs(self) -> int:
        return self.matrix.shape[1]

    def row(self, x: int) -> Distribution:
        """The output distribution of input symbol x."""
        return Distribution(self.matrix[x])

    def __repr__(self):
        return f"Channel({self.num_inputs}x{self.num_outputs})"


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def save_channel(ch: Channel) -> bytes:
    """Serialize a channel to its JSON document form.

    Floats are written with repr precision, so load_channel(save_channel(ch))
    reproduces the matrix bit for bit.
    """
    doc: dict = {"matrix": [[float(v) for v in row] for row in ch.matrix]}
    if ch.input_labels is not None:
        doc["input_labels"] = list(ch.input_labels)
    if ch.output_labels is not None:
        doc["output_labels"] = list(ch.output_labels)
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def _as_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def load_channel(source, format: str = "json") -> Channel:
    """Parse a channel from bytes, text, or a readable stream.

    JSON documents are objects with a required "matrix" key (list of rows)
    and optional "input_labels" / "output_labels".  CSV is one row per input
    symbol, comma-separated probabilities, no header.  Validation failures
    raise the same errors as the Channel constructor; malformed syntax raises
    ParseError.
    """
    try:
        text = _as_text(source)
    except UnicodeDecodeError as exc:
        raise ParseError(f"channel file is not valid UTF-8: {exc}") from None
    if format == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict) or "matrix" not in doc:
            raise ParseError('JSON channel must be an object with a "matrix" key')
        matrix = doc["matrix"]
        if not isinstance(matrix, list) or not all(isinstance(r, list) for r in matrix):
            raise ParseError('"matrix" must be a list of rows')
        widths = {len(r) for r in matrix}
        if len(widths) > 1:
            raise ParseError("matrix rows have unequal lengths")
        labels_in = doc.get("input_labels")
        labels_out = doc.get("output_labels")
        return Channel(
            np.asarray(matrix, dtype=float),
            tuple(labels_in) if labels_in is not None else None,
            tuple(labels_out) if labels_out is not None else None,
        )
    if format == "csv":
        rows = []
        try:
            for line in csv.reader(io.StringIO(text)):
                if not line:
                    continue
                rows.append([float(cell) for cell in line])
        except (csv.Error, ValueError) as exc:
            raise ParseError(f"invalid CSV: {exc}") from None
        if not rows:
            raise ParseError("CSV channel file is empty")
        if len({len(r) for r in rows}) > 1:
            raise ParseError("CSV rows have unequal lengths")
        return Channel(np.asarray(rows, dtype=float))
    raise ParseError(f"unknown channel format {format!r}")


# ---------------------------------------------------------------------------
# channel operations
# ---------------------------------------------------------------------------

def joint(q: Distribution, ch: Channel) -> JointDistribution:
    """The joint distribution q(x) * p(y|x)."""
    if q.alphabet_size != ch.num_inputs:
        raise DimensionMismatch(
            f"input distribution has {q.alphabet_size} symbols, channel has {ch.num_inputs}"
        )
    return JointDistribution(q.weights[:, None] * ch.matrix)


def output_marginal(q: Distribution, ch: Channel) -> Distribution:
    """The output distribution induced by feeding q through the channel."""
    if q.alphabet_size != ch.num_inputs:
        raise DimensionMismatch(
            f"input distribution has {q.alphabet_size} symbols, channel has {ch.num_inputs}"
        )
    return Distribution(ordered_sum_along(q.weights[:, None] * ch.matrix, axis=0))


def per_input_divergences(
    ch: Channel, reference: np.ndarray, infinite: str = "raise"
) -> np.ndarray:
    """D(row_x || reference) for every input symbol x, as an array of nats.

    reference is a raw weight vector over the channel outputs.  Where a row
    has mass on a symbol with zero reference weight the divergence is
    infinite; infinite="raise" raises AbsoluteContinuityViolation, while
    infinite="inf" records +inf for that row (useful for diagnostic checks
    that must not throw).
    """
    r = np.asarray(reference, dtype=float)
    if r.shape != (ch.num_outputs,):
        raise DimensionMismatch(
            f"reference has shape {r.shape}, channel has {ch.num_outputs} outputs"
        )
    m = ch.matrix
    mask = m > 0.0
    violated = mask & (r == 0.0)[None, :]
    bad_rows = np.any(violated, axis=1)
    if np.any(bad_rows):
        if infinite == "raise":
            raise AbsoluteContinuityViolation(
                f"row {int(np.flatnonzero(bad_rows)[0])} has mass outside the reference support"
            )
        if infinite != "inf":
            raise ValueError(f"infinite must be 'raise' or 'inf', got {infinite!r}")
    with np.errstate(divide="ignore"):
        log_ref = np.log(np.where(r > 0.0, r, 1.0))
        terms = np.where(mask, m * (np.log(np.where(mask, m, 1.0)) - log_ref[None, :]), 0.0)
    d = ordered_sum_along(terms, axis=1)
    d = np.maximum(d, 0.0)
    if np.any(bad_rows):
        d = np.where(bad_rows, np.inf, d)
    return d


# ---------------------------------------------------------------------------
# canonical channels
# ---------------------------------------------------------------------------

def bsc(p: float) -> Channel:
    """Binary symmetric channel with crossover probability p."""
    if not 0.0 <= p <= 1.0:
        raise ParameterOutOfRange(f"crossover probability must be in [0, 1], got {p!r}")
    return Channel(np.array([[1.0 - p, p], [p, 1.0 - p]]))


def bec(eps: float) -> Channel:
    """Binary erasure channel; the middle output symbol is the erasure."""
    if not 0.0 <= eps <= 1.0:
        raise ParameterOutOfRange(f"erasure probability must be in [0, 1], got {eps!r}")
    return Channel(np.array([[1.0 - eps, eps, 0.0], [0.0, eps, 1.0 - eps]]))


def z_channel(p: float) -> Channel:
    """Z channel: input 0 is noiseless, input 1 flips to 0 with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ParameterOutOfRange(f"flip probability must be in [0, 1], got {p!r}")
    return Channel(np.array([[1.0, 0.0], [p, 1.0 - p]]))


def noisy_typewriter(n: int) -> Channel:
    """Each of n symbols maps to itself or its cyclic successor, half and half."""
    n = int(n)
    if n < 2:
        raise ParameterOutOfRange(f"typewriter needs at least 2 symbols, got {n}")
    m = np.zeros((n, n))
    for x in range(n):
        m[x, x] = 0.5
        m[x, (x + 1) % n] = 0.5
    return Channel(m)


def identity_channel(n: int) -> Channel:
    """A noiseless channel on n symbols."""
    n = int(n)
    if n < 1:
        raise ParameterOutOfRange(f"identity channel needs at least 1 symbol, got {n}")
    return Channel(np.eye(n))


def uniform_rows(n: int, m: int) -> Channel:
    """The useless channel: every input induces the uniform output law."""
    n, m = int(n), int(m)
    if n < 1 or m < 1:
        raise ParameterOutOfRange(f"uniform channel needs positive dimensions, got {n}x{m}")
    return Channel(np.full((n, m), 1.0 / m))


CANONICAL_KINDS = ("bsc", "bec", "z", "typewriter", "identity", "uniform")


def canonical(kind: str, *params) -> Channel:
    """Dispatch to a canonical channel family by name.

    Kinds: bsc(p), bec(eps), z(p), typewriter(n), identity(n), uniform(n, m).
    """
    try:
        if kind == "bsc":
            return bsc(*params)
        if kind == "bec":
            return bec(*params)
        if kind == "z":
            return z_channel(*params)
        if kind == "typewriter":
            return noisy_typewriter(*params)
        if kind == "identity":
            return identity_channel(*params)
        if kind == "uniform":
            return uniform_rows(*params)
    except TypeError as exc:
        raise ParameterOutOfRange(f"bad parameters for {kind!r}: {exc}") from None
    raise ParameterOutOfRange(f"unknown channel kind {kind!r} (known: {', '.join(CANONICAL_KINDS)})")
