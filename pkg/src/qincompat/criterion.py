"""Closed-form compatibility decisions for pairs of binary qubit measurements.

The general verdict compares

    (1 - h_A^2 - h_B^2) * (1 - a0^2/h_A^2 - b0^2/h_B^2)   vs   (<a,b> - a0
    b0)^2

with ``h(x0, x) = (sqrt((1+x0)^2 - x^2) + sqrt((1-x0)^2 - x^2)) / 2``;
the pair is compatible iff the left side does not exceed the right.  For
unbiased measurements this reduces to ``f(a, b) <= 1`` and, equivalently,
to the Busch sum ``|a+b| + |a-b| <= 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import DomainError
from .operators import TOL_VALID, BlochPovm


@dataclass(frozen=True)
class CompatVerdict:
    """Two sides of the compatibility inequality and their difference."""

    compatible: bool
    lhs: float
    rhs: float
    margin: float  # rhs - lhs; >= 0 counts as compatible (boundary included)

    def to_dict(self) -> dict:
        return {
            "compatible": self.compatible,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
        }


def _radicand(value: float) -> float:
    if value < -TOL_VALID:
        raise DomainError(f"negative radicand {value:.3g} in h")
    return max(value, 0.0)


def criterion_h(bias: float, sharp: float) -> float:
    """Auxiliary scale entering the compatibility inequality.

    Defined for ``sharp >= 0`` and ``|bias| + sharp <= 1``; values lie in
    [0, 1], reaching 0 only at the sharp unbiased point (0, 1).
    """
    if sharp < 0:
        raise DomainError(f"sharpness must be nonnegative, got {sharp}")
    lo = _radicand((1.0 - bias) * (1.0 - bias) - sharp * sharp)
    hi = _radicand((1.0 + bias) * (1.0 + bias) - sharp * sharp)
    return 0.5 * (sqrt(hi) + sqrt(lo))


def check_compatible(a: BlochPovm, b: BlochPovm) -> CompatVerdict:
    """Decide joint measurability of two binary qubit measurements."""
    a.validate()
    b.validate()
    dot = float(a.vec @ b.vec)
    rhs = (dot - a.bias * b.bias) ** 2
    # A fully biased measurement is trivial and compatible with anything;
    # the inequality then ties exactly, which floating point cannot resolve.
    if abs(a.bias) == 1.0 or abs(b.bias) == 1.0:
        return CompatVerdict(compatible=True, lhs=rhs, rhs=rhs, margin=0.0)
    ha2 = criterion_h(a.bias, a.sharpness) ** 2
    hb2 = criterion_h(b.bias, b.sharpness) ** 2
    ta = 0.0 if a.bias == 0.0 else a.bias * a.bias / ha2
    tb = 0.0 if b.bias == 0.0 else b.bias * b.bias / hb2
    lhs = (1.0 - ha2 - hb2) * (1.0 - ta - tb)
    margin = rhs - lhs
    return CompatVerdict(compatible=bool(margin >= 0.0), lhs=lhs, rhs=rhs, margin=margin)


def unbiased_f(a_vec, b_vec) -> float:
    """Quadratic incompatibility functional; unbiased pairs are incompatible iff f > 1."""
    a_vec = np.asarray(a_vec, dtype=np.float64)
    b_vec = np.asarray(b_vec, dtype=np.float64)
    dot = float(a_vec @ b_vec)
    return float(a_vec @ a_vec + b_vec @ b_vec - dot * dot)


def busch_g(a_vec, b_vec) -> float:
    """Busch sum |a+b| + |a-b|; unbiased pairs are compatible iff it is <= 2."""
    a_vec = np.asarray(a_vec, dtype=np.float64)
    b_vec = np.asarray(b_vec, dtype=np.float64)
    return float(np.linalg.norm(a_vec + b_vec) + np.linalg.norm(a_vec - b_vec))


def region_membership(a: float, b: float, s: float) -> bool:
    """Whether the sharpness pair (a, b) with direction cosine s is incompatible.

    Membership in the open incompatibility region: ``a^2 + b^2 - (a b s)^2
    > 1``, the radial form of ``f > 1``.  Zero sharpness on either side is
    never a member.
    """
    return bool(a * a + b * b - (a * b * s) ** 2 > 1.0)
