"""Projections between joint laws and product laws.

The two families in play are the products q x r (input law times output law,
independence) and the laws q(x) p(y|x) obtained by pushing an input law
through a fixed channel.  Projecting a joint onto the products in divergence
(an m-projection) just takes its marginals; projecting a product point back
onto the channel family in the opposite divergence order (an e-projection)
has the closed form implemented here.  Mutual information is exactly the
divergence from a joint to its m-projection, which is what makes capacity a
maximal distance from the independence family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Channel, joint, per_input_divergences
from .errors import DimensionMismatch, NonInteriorInput
from .numeric import logsumexp
from .probability import Distribution, JointDistribution, marginals, mutual_information

__all__ = [
    "ProductPoint",
    "m_project_to_independence",
    "e_project_to_channel",
    "capacity_distance",
]


@dataclass(frozen=True)
class ProductPoint:
    """A product law stored by its two factors.

    The expanded matrix is never stored; materialize it on demand with
    to_joint() when a computation genuinely needs all n*m entries.
    """

    input_factor: Distribution
    output_factor: Distribution

    def to_joint(self) -> JointDistribution:
        return JointDistribution(
            np.outer(self.input_factor.weights, self.output_factor.weights)
        )


def m_project_to_independence(p: JointDistribution) -> ProductPoint:
    """Divergence-minimizing product law for a joint: the pair of marginals."""
    q, r = marginals(p)
    return ProductPoint(q, r)


def e_project_to_channel(point: ProductPoint, ch: Channel) -> Distribution:
    """Input law minimizing D(q_hat * p(y|x) || q x r) over q_hat.

    Expanding the objective gives D(q_hat || q) + sum_x q_hat(x) d(x) with
    d(x) = D(p(.|x) || r), whose unique minimizer is

        q_hat(x) proportional to q(x) * exp(-d(x)).

    Computed in log space.  The base input law must be interior, and r must
    carry mass wherever some channel row does (else some d(x) is infinite and
    AbsoluteContinuityViolation is raised).
    """
    q = point.input_factor
    if q.alphabet_size != ch.num_inputs:
        raise DimensionMismatch(
            f"input factor has {q.alphabet_size} symbols, channel has {ch.num_inputs}"
        )
    if not q.is_interior:
        raise NonInteriorInput("e-projection requires an interior input factor")
    d = per_input_divergences(ch, point.output_factor.weights)
    logits = np.log(q.weights) - d
    return Distribution(np.exp(logits - logsumexp(logits)))


def capacity_distance(q: Distribution, ch: Channel) -> float:
    """Divergence from the joint of (q, ch) to the independence family.

    Delegates to mutual_information so the two quantities share one code path
    and agree bit for bit.
    """
    return mutual_information(joint(q, ch))
