"""Explicit joint-measurement construction and feasibility checks.

Given n measurements with outcome counts (k_1, ..., k_n), probability
vectors p^(l), and a noise tensor T whose marginals are p^(l) times the
identity, the candidate joint measurement is

    M = (prod_l p^(l)_{i_l}) * sum_l A^(l)_{i_l} / p^(l)_{i_l} - (n-1) T.

Its marginals always equal the inputs and its elements always sum to the
identity; the inputs are compatible iff some admissible T makes every
element positive semidefinite.  For qubit pairs the search space of T is a
real 4-vector (x0, x) and positivity is four explicit inequalities.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import ShapeError, ValidityError
from .operators import (
    ID2,
    PAULI,
    TOL_SUM,
    BlochPovm,
    PovmTensor,
    ProbabilityVector,
    _frozen,
    effect_from_bloch,
)


def marginal(t: PovmTensor, axis: int) -> PovmTensor:
    """Single-index measurement obtained by summing out all other axes."""
    if not 0 <= axis < t.n_axes:
        raise ShapeError(f"axis {axis} out of range for {t.n_axes} axes")
    cube = t.elements.reshape(*t.shape, t.dim, t.dim)
    other = tuple(i for i in range(t.n_axes) if i != axis)
    summed = cube.sum(axis=other) if other else cube
    return PovmTensor(shape=(t.shape[axis],), elements=summed)


@dataclass(frozen=True)
class NoiseTensor:
    """Tensor whose marginals are trivial: p^(l) times the identity."""

    tensor: PovmTensor
    p_vectors: tuple[ProbabilityVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "p_vectors", tuple(self.p_vectors))
        if len(self.p_vectors) != self.tensor.n_axes:
            raise ShapeError("one probability vector per tensor axis required")
        eye = np.eye(self.tensor.dim)
        for axis, p in enumerate(self.p_vectors):
            p.validate()
            if len(p) != self.tensor.shape[axis]:
                raise ShapeError(f"axis {axis}: {len(p)} weights for {self.tensor.shape[axis]} outcomes")
            got = marginal(self.tensor, axis).elements
            want = p.weights[:, None, None] * eye
            if np.abs(got - want).max() > TOL_SUM:
                raise ValidityError(f"axis {axis} marginal is not proportional to the identity")


def build_T_product(p_vectors, dim: int) -> NoiseTensor:
    """Canonical product noise tensor: (prod_l p^(l)_{i_l}) times the identity."""
    p_vectors = tuple(p_vectors)
    if not p_vectors:
        raise ShapeError("at least one probability vector required")
    for p in p_vectors:
        p.validate()
    weights = p_vectors[0].weights
    for p in p_vectors[1:]:
        weights = np.multiply.outer(weights, p.weights)
    shape = tuple(len(p) for p in p_vectors)
    eye = np.eye(dim, dtype=np.complex128)
    elements = weights.reshape(-1)[:, None, None] * eye
    return NoiseTensor(PovmTensor(shape=shape, elements=elements), p_vectors)


def _scaled_sum(marginals, p_vectors) -> tuple[np.ndarray, tuple[int, ...], int]:
    """(prod_l p_{i_l}) * sum_l A^(l)_{i_l} / p^(l)_{i_l}, flattened row-major."""
    marginals = tuple(marginals)
    p_vectors = tuple(p_vectors)
    if not marginals or len(marginals) != len(p_vectors):
        raise ShapeError("need one probability vector per input measurement")
    dim = marginals[0].dim
    shape = []
    for m, p in zip(marginals, p_vectors):
        p.validate()
        if m.n_axes != 1:
            raise ShapeError("inputs must be single-index measurements")
        if m.dim != dim:
            raise ShapeError("all inputs must share one Hilbert-space dimension")
        if len(p) != m.shape[0]:
            raise ShapeError("weight count must match outcome count")
        shape.append(m.shape[0])
    shape = tuple(shape)
    n = len(marginals)
    total = np.zeros((*shape, dim, dim), dtype=np.complex128)
    for l, (m, p) in enumerate(zip(marginals, p_vectors)):
        scaled = m.elements / p.weights[:, None, None]  # (k_l, d, d)
        idx = [None] * n
        idx[l] = slice(None)
        total += scaled[tuple(idx)]
    weights = p_vectors[0].weights
    for p in p_vectors[1:]:
        weights = np.multiply.outer(weights, p.weights)
    flat = (weights[..., None, None] * total).reshape(-1, dim, dim)
    return flat, shape, dim


def build_G_mixture(marginals, p_vectors) -> PovmTensor:
    """The noise-free average tensor; a valid POVM for any inputs."""
    flat, shape, _ = _scaled_sum(marginals, p_vectors)
    return PovmTensor(shape=shape, elements=flat / len(tuple(marginals)))


def build_M_joint(marginals, p_vectors, noise: NoiseTensor) -> PovmTensor:
    """Candidate joint measurement for the given inputs and noise tensor.

    Marginals and completeness hold unconditionally; positivity does not,
    so callers decide with :func:`~qincompat.operators.validate_povm`.
    """
    flat, shape, dim = _scaled_sum(marginals, p_vectors)
    marginals = tuple(marginals)
    if noise.tensor.shape != shape or noise.tensor.dim != dim:
        raise ShapeError("noise tensor shape does not match the inputs")
    for p, q in zip(noise.p_vectors, p_vectors):
        if not np.array_equal(p.weights, np.asarray(q.weights, dtype=np.float64)):
            raise ValidityError("noise tensor was built for different probability vectors")
    n = len(marginals)
    return PovmTensor(shape=shape, elements=flat - (n - 1) * noise.tensor.elements)


@dataclass(frozen=True)
class QubitNoiseParam:
    """Real 4-vector (x0, x) parametrizing qubit-pair noise tensors.

    The generating block is ``X = 0.5 * ((1 - x0) I - x . sigma)``.
    """

    x0: float
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x0", float(self.x0))
        v = np.asarray(self.x, dtype=np.float64).reshape(-1)
        if v.shape != (3,):
            raise ShapeError("noise vector must have 3 components")
        object.__setattr__(self, "x", _frozen(v))


@dataclass(frozen=True)
class ConstraintSlack:
    """Right minus left side of the four positivity inequalities."""

    slacks: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.slacks, dtype=np.float64).reshape(-1)
        if s.shape != (4,):
            raise ShapeError("exactly four slacks expected")
        object.__setattr__(self, "slacks", _frozen(s))

    @property
    def min_slack(self) -> float:
        return float(self.slacks.min())

    @property
    def feasible(self) -> bool:
        return bool(self.min_slack >= 0.0)


def qubit_noise_tensor(param: QubitNoiseParam, p: float, q: float) -> NoiseTensor:
    """Noise tensor for a qubit pair from its 4-vector parametrization."""
    x_block = 0.5 * ((1.0 - param.x0) * ID2 - np.einsum("i,ijk->jk", param.x, PAULI))
    elements = np.stack(
        [
            x_block,
            p * ID2 - x_block,
            q * ID2 - x_block,
            x_block + (1.0 - q - p) * ID2,
        ]
    )
    pv = (ProbabilityVector([p, 1.0 - p]), ProbabilityVector([q, 1.0 - q]))
    return NoiseTensor(PovmTensor(shape=(2, 2), elements=elements), pv)


def qubit_constraints(
    a: BlochPovm, b: BlochPovm, p: float, q: float, noise: QubitNoiseParam
) -> ConstraintSlack:
    """Slacks of the four positivity inequalities for a qubit pair.

    Each slack equals twice the smallest eigenvalue of the corresponding
    candidate joint-measurement element, in row-major outcome order.
    """
    a.validate()
    b.validate()
    a0, av = a.bias, a.vec
    b0, bv = b.bias, b.vec
    x0, x = noise.x0, noise.x
    s1 = (q + p - 1.0) - (q * a0 + p * b0 - x0) - np.linalg.norm(q * av + p * bv - x)
    s2 = (2.0 - q - p) - (x0 + (1.0 - q) * a0 - p * b0) - np.linalg.norm(x + (1.0 - q) * av - p * bv)
    s3 = (2.0 - q - p) - (x0 - q * a0 + (1.0 - p) * b0) - np.linalg.norm(x - q * av + (1.0 - p) * bv)
    s4 = (q + p - 1.0) + (x0 + (1.0 - q) * a0 + (1.0 - p) * b0) - np.linalg.norm(
        (1.0 - q) * av + (1.0 - p) * bv + x
    )
    return ConstraintSlack(np.array([s1, s2, s3, s4]))


def _bloch_marginals(a: BlochPovm, b: BlochPovm) -> list[PovmTensor]:
    out = []
    for m in (a, b):
        e1 = effect_from_bloch(m, 1).entries
        e2 = effect_from_bloch(m, 2).entries
        out.append(PovmTensor(shape=(2,), elements=np.stack([e1, e2])))
    return out


def build_qubit_joint(
    a: BlochPovm, b: BlochPovm, p: float, q: float, param: QubitNoiseParam
) -> PovmTensor:
    """Candidate joint measurement for a qubit pair at the given noise parameter."""
    pv = (ProbabilityVector([p, 1.0 - p]), ProbabilityVector([q, 1.0 - q]))
    return build_M_joint(_bloch_marginals(a, b), pv, qubit_noise_tensor(param, p, q))


def construct_unbiased_witness(
    a: BlochPovm, b: BlochPovm
) -> tuple[QubitNoiseParam, PovmTensor] | None:
    """Closed-form joint measurement for an unbiased compatible pair.

    Uses the midpoint of the feasible interval for robustness: with u = a
    + b and v = a - b, sets x = 0 and x0 = (|u| + 2 - |v|) / 4.  Returns
    None iff |u| > 2 - |v| (the pair is incompatible).
    """
    if a.bias != 0.0 or b.bias != 0.0:
        raise ValidityError("closed-form witness requires unbiased measurements")
    a.validate()
    b.validate()
    norm_u = float(np.linalg.norm(a.vec + b.vec))
    norm_v = float(np.linalg.norm(a.vec - b.vec))
    if norm_u > 2.0 - norm_v:
        return None
    param = QubitNoiseParam(x0=0.25 * (norm_u + 2.0 - norm_v), x=np.zeros(3))
    return param, build_qubit_joint(a, b, 0.5, 0.5, param)


def feasibility_oracle(
    a: BlochPovm,
    b: BlochPovm,
    p: float = 0.5,
    q: float = 0.5,
    resolution: int = 32,
    margin: float = 0.0,
) -> QubitNoiseParam | None:
    """Brute-force scan for a noise parameter making the joint candidate a POVM.

    Scans (x0, x) over a regular inclusive grid of [-1, 1]^4 with
    ``resolution`` points per axis in row-major order and returns the
    first point whose minimum slack is >= ``margin``.  A returned point is
    a genuine witness; None is not a proof of infeasibility.
    """
    if resolution < 8:
        raise ValueError(f"resolution must be at least 8, got {resolution}")
    a.validate()
    b.validate()
    from .kernels import active_backend

    flat = active_backend().feasibility_scan(
        a.bias, np.asarray(a.vec), b.bias, np.asarray(b.vec), p, q, resolution, margin
    )
    if flat < 0:
        return None
    grid = np.linspace(-1.0, 1.0, resolution)
    i0, i1, i2, i3 = np.unravel_index(flat, (resolution,) * 4)
    return QubitNoiseParam(x0=grid[i0], x=np.array([grid[i1], grid[i2], grid[i3]]))
