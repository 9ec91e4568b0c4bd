"""Random measurement generation under the library's exact measures.

Three pair measures are supported:

* ``unbiased``: both biases zero, Bloch vectors uniform in the unit ball
  (radius density proportional to r^2, direction uniform on the sphere).
* ``general``: (bias, vector) uniform over the full validity region
  ``|bias| + |vec| <= 1``; the bias marginal has density proportional to
  ``(1 - |bias|)^3``.
* ``section``: biases fixed, vectors uniform in balls of radius
  ``1 - |bias|``.

All draws are counter-based (see :mod:`qincompat.rng`), so a sample is a
pure function of (seed, stream_id, sample index).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .errors import DomainError, ValidityError
from .kernels import KIND_GENERAL, KIND_SECTION, active_backend
from .operators import BlochPovm
from .rng import RngStream, normals_at, uniform_at

_U64 = np.uint64

UNBIASED = "unbiased"
GENERAL = "general"
SECTION = "section"


@dataclass(frozen=True)
class MeasureSpec:
    """Which pair measure to draw from, plus section biases when fixed."""

    kind: str
    section_bias_a: float = 0.0
    section_bias_b: float = 0.0

    def __post_init__(self):
        if self.kind not in (UNBIASED, GENERAL, SECTION):
            raise ValidityError(f"unknown measure kind {self.kind!r}")
        if not (abs(self.section_bias_a) <= 1.0 and abs(self.section_bias_b) <= 1.0):
            raise ValidityError("section biases must lie in [-1, 1]")

    @classmethod
    def unbiased(cls) -> "MeasureSpec":
        return cls(UNBIASED)

    @classmethod
    def general(cls) -> "MeasureSpec":
        return cls(GENERAL)

    @classmethod
    def section(cls, a0: float, b0: float) -> "MeasureSpec":
        return cls(SECTION, section_bias_a=float(a0), section_bias_b=float(b0))

    def kernel_args(self) -> tuple[int, float, float]:
        """(kind code, fixed bias a, fixed bias b) for the kernel backends."""
        if self.kind == GENERAL:
            return KIND_GENERAL, 0.0, 0.0
        if self.kind == UNBIASED:
            return KIND_SECTION, 0.0, 0.0
        return KIND_SECTION, self.section_bias_a, self.section_bias_b


def sphere_slots(m: int) -> int:
    """Counter slots consumed per uniform point on the (m-1)-sphere."""
    return 2 * ((m + 1) // 2)


def sample_unit_spheres(rng: RngStream, m: int, n: int) -> np.ndarray:
    """n independent uniform points on the unit sphere in R^m, shape (n, m).

    Sample i consumes the ``sphere_slots(m)`` counters starting at
    ``rng.counter + i * sphere_slots(m)`` (normalized Box-Muller normals).
    """
    if m < 2:
        raise DomainError(f"sphere dimension must be at least 2, got m={m}")
    slots = sphere_slots(m)
    key = rng.key
    counters = (
        _U64(rng.counter)
        + _U64(slots) * np.arange(n, dtype=np.uint64)[:, None]
        + np.arange(slots, dtype=np.uint64)[None, :]
    )
    g = normals_at(key, counters)[:, :m]
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_unit_sphere(rng: RngStream, m: int) -> np.ndarray:
    """One uniform point on the unit sphere in R^m."""
    return sample_unit_spheres(rng, m, 1)[0]


def sample_sharpnesses(rng: RngStream, cap: float, n: int) -> np.ndarray:
    """n radii in [0, cap] with density proportional to r^2 (one slot each)."""
    if cap <= 0.0:
        raise DomainError(f"cap must be positive, got {cap}")
    u = uniform_at(rng.key, _U64(rng.counter) + np.arange(n, dtype=np.uint64))
    return cap * u ** (1.0 / 3.0)


def sample_sharpness(rng: RngStream, cap: float) -> float:
    """One radius in [0, cap] with density proportional to r^2."""
    return float(sample_sharpnesses(rng, cap, 1)[0])


def sample_pairs(rng: RngStream, spec: MeasureSpec, n: int):
    """Arrays (a0, avec, b0, bvec) for n measurement pairs.

    Pair i occupies counters ``rng.counter + i * PAIR_SLOTS`` onward; the
    unbiased measure is the section measure at biases (0, 0), drawn through
    the identical generator path.
    """
    kind, a0f, b0f = spec.kernel_args()
    return active_backend().sample_pair_arrays(rng.key, rng.counter, n, kind, a0f, b0f)


def sample_pair(rng: RngStream, spec: MeasureSpec) -> tuple[BlochPovm, BlochPovm]:
    """One measurement pair drawn from ``spec`` (consumes PAIR_SLOTS counters)."""
    a0, av, b0, bv = sample_pairs(rng, spec, 1)
    return BlochPovm(float(a0[0]), av[0]), BlochPovm(float(b0[0]), bv[0])


def _inner_product_coeff(m: int) -> float:
    """Normalization of the inner-product density.

    Equals Gamma(m/2) / (sqrt(pi) Gamma((m-1)/2)), evaluated through the
    two-step Gamma recurrence so that small-m values are exact: C_2 = 1/pi,
    C_3 = 1/2, C_m = C_{m-2} (m-2)/(m-3).
    """
    if m < 2:
        raise DomainError(f"density defined for m >= 2, got {m}")
    c = 1.0 / math.pi if m % 2 == 0 else 0.5
    for k in range(4 if m % 2 == 0 else 5, m + 1, 2):
        c *= (k - 2) / (k - 3)
    return c


def density_inner_product(s, m: int):
    """Density of the inner product of two independent uniform unit vectors in R^m.

    ``C_m (1 - s^2)^((m-3)/2)`` on [-1, 1]; for m = 2 the endpoints carry
    an integrable singularity and evaluate to +inf.
    """
    c = _inner_product_coeff(m)
    s = np.asarray(s, dtype=np.float64)
    if np.any(np.abs(s) > 1.0):
        raise DomainError("inner product must lie in [-1, 1]")
    expo = 0.5 * (m - 3)
    with np.errstate(divide="ignore"):
        out = c * (1.0 - s * s) ** expo
    return float(out) if out.ndim == 0 else out


def cdf_inner_product(s, m: int):
    """CDF of the inner-product density (regularized incomplete beta)."""
    if m < 2:
        raise DomainError(f"density defined for m >= 2, got {m}")
    s = np.asarray(s, dtype=np.float64)
    alpha = 0.5 * (m - 1)
    out = betainc(alpha, alpha, np.clip(0.5 * (1.0 + s), 0.0, 1.0))
    return float(out) if out.ndim == 0 else out


def norm_constant(m: int) -> float:
    """Surface measure of the unit sphere in R^m: 2 pi^(m/2) / Gamma(m/2)."""
    if m < 1:
        raise DomainError(f"surface measure defined for m >= 1, got {m}")
    return 2.0 * math.pi ** (0.5 * m) / math.gamma(0.5 * m)
