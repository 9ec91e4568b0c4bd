"""Binary qubit measurements in Bloch form, Hermitian operators, and measurement tensors.

A binary qubit measurement is stored as a bias scalar and a 3-vector; its
two effects are ``0.5 * ((1 +- bias) * I +- vec . sigma)``.  Validity means
``|vec| <= 1 - |bias|``.  General measurements (any outcome structure, any
dimension) are stored as flat arrays of Hermitian matrices indexed by a
row-major multi-index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod, sqrt
from typing import Sequence

import numpy as np

from .errors import CompletenessError, ShapeError, ValidityError

TOL_VALID = 1e-10
TOL_HERM = 1e-10
TOL_SUM = 1e-10
TOL_PSD = 1e-9

ID2 = np.eye(2, dtype=np.complex128)
PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BlochPovm:
    """A binary qubit measurement: bias scalar plus Bloch 3-vector.

    ``|vec|`` is the sharpness, ``|bias|`` the biasedness; ``bias == 0``
    means unbiased.
    """

    bias: float
    vec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bias", float(self.bias))
        v = np.asarray(self.vec, dtype=np.float64).reshape(-1)
        if v.shape != (3,):
            raise ShapeError(f"Bloch vector must have 3 components, got {v.shape}")
        object.__setattr__(self, "vec", _frozen(v))

    @property
    def sharpness(self) -> float:
        return float(np.linalg.norm(self.vec))

    @property
    def biasedness(self) -> float:
        return abs(self.bias)

    def validate(self, tol: float = TOL_VALID) -> "BlochPovm":
        if abs(self.bias) > 1.0 + tol:
            raise ValidityError(f"bias {self.bias} outside [-1, 1]")
        if self.sharpness > 1.0 - abs(self.bias) + tol:
            raise ValidityError(
                f"sharpness {self.sharpness:.6g} exceeds 1 - |bias| = {1 - abs(self.bias):.6g}"
            )
        return self

    def to_dict(self) -> dict:
        return {"bias": self.bias, "vec": [float(x) for x in self.vec]}

    @classmethod
    def from_dict(cls, d: dict) -> "BlochPovm":
        return cls(bias=float(d["bias"]), vec=np.asarray(d["vec"], dtype=np.float64))


@dataclass(frozen=True)
class HermitianOp:
    """A d x d complex Hermitian matrix."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"expected a square matrix, got shape {m.shape}")
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def validate(self, tol: float = TOL_HERM) -> "HermitianOp":
        defect = np.abs(self.entries - self.entries.conj().T).max()
        if defect > tol:
            raise ValidityError(f"matrix deviates from Hermitian by {defect:.3g}")
        return self

    def pauli_coeffs(self) -> tuple[float, np.ndarray]:
        """Identity and Pauli coefficients of a 2x2 Hermitian matrix.

        The x and y coefficients are read off exactly; the identity and z
        coefficients round once each.
        """
        if self.dim != 2:
            raise ShapeError("Pauli coefficients are defined for 2x2 matrices only")
        m = self.entries
        c0 = 0.5 * (m[0, 0].real + m[1, 1].real)
        c = np.array([m[1, 0].real, m[1, 0].imag, 0.5 * (m[0, 0].real - m[1, 1].real)])
        return c0, c

    @classmethod
    def from_pauli(cls, c0: float, c: Sequence[float]) -> "HermitianOp":
        c = np.asarray(c, dtype=np.float64)
        return cls(c0 * ID2 + np.einsum("i,ijk->jk", c, PAULI))


def eig_range_hermitian(entries: np.ndarray) -> tuple[float, float]:
    """(min, max) eigenvalue of a Hermitian matrix.

    Uses the closed form ``(tr +- sqrt(tr^2 - 4 det)) / 2`` for d = 2 and a
    symmetric eigensolver otherwise.
    """
    m = np.asarray(entries)
    if m.shape == (2, 2):
        tr = m[0, 0].real + m[1, 1].real
        det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
        disc = sqrt(max(tr * tr - 4.0 * det, 0.0))
        return 0.5 * (tr - disc), 0.5 * (tr + disc)
    w = np.linalg.eigvalsh(m)
    return float(w[0]), float(w[-1])


@dataclass(frozen=True)
class ProbabilityVector:
    """Strictly positive weights summing to one."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "weights", _frozen(w))

    def __len__(self) -> int:
        return self.weights.shape[0]

    def validate(self, tol: float = TOL_SUM) -> "ProbabilityVector":
        if self.weights.size == 0:
            raise ShapeError("empty probability vector")
        if (self.weights <= 0).any():
            raise ValidityError("probability vector components must be strictly positive")
        if abs(self.weights.sum() - 1.0) > tol:
            raise ValidityError(f"weights sum to {self.weights.sum()!r}, not 1")
        return self


@dataclass(frozen=True)
class PovmTensor:
    """Multi-index collection of Hermitian operators on one Hilbert space.

    ``elements`` is flat with row-major multi-index order over ``shape``;
    entry ``(i_1, ..., i_n)`` sits at ``ravel_multi_index`` position.
    Positivity and completeness are checked by :func:`validate_povm`, not
    at construction, because intermediate tensors are allowed to be
    non-positive.
    """

    shape: tuple[int, ...]
    elements: np.ndarray  # (prod(shape), d, d) complex

    def __post_init__(self):
        shape = tuple(int(k) for k in self.shape)
        if not shape or any(k < 1 for k in shape):
            raise ShapeError(f"invalid outcome shape {shape}")
        el = np.asarray(self.elements, dtype=np.complex128)
        if el.ndim != 3 or el.shape[1] != el.shape[2]:
            raise ShapeError(f"elements must be a stack of square matrices, got {el.shape}")
        if el.shape[0] != prod(shape):
            raise ShapeError(
                f"{el.shape[0]} elements inconsistent with outcome shape {shape}"
            )
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "elements", _frozen(el))

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    @property
    def n_axes(self) -> int:
        return len(self.shape)

    def element(self, *index: int) -> HermitianOp:
        flat = int(np.ravel_multi_index(index, self.shape))
        return HermitianOp(self.elements[flat])

    def total(self) -> np.ndarray:
        """Sum of all elements."""
        return self.elements.sum(axis=0)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "shape": list(self.shape),
            "elements": [
                [[[z.real, z.imag] for z in row] for row in m] for m in self.elements
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PovmTensor":
        raw = np.asarray(d["elements"], dtype=np.float64)
        dim = int(d["dim"])
        if raw.ndim != 4 or raw.shape[1:] != (dim, dim, 2):
            raise ShapeError(f"elements payload has shape {raw.shape}, expected (N, {dim}, {dim}, 2)")
        return cls(
            shape=tuple(int(k) for k in d["shape"]),
            elements=raw[..., 0] + 1j * raw[..., 1],
        )


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a POVM validity check."""

    ok: bool
    min_eigenvalue: float
    completeness_defect: float
    tol: float

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "min_eigenvalue": self.min_eigenvalue,
            "completeness_defect": self.completeness_defect,
            "tol": self.tol,
        }


def effect_from_bloch(p: BlochPovm, outcome: int) -> HermitianOp:
    """Effect of a binary qubit measurement for ``outcome`` in {1, 2}.

    The two effects sum to the identity exactly by construction.
    """
    p.validate()
    if outcome not in (1, 2):
        raise ShapeError(f"outcome must be 1 or 2, got {outcome}")
    sgn = -1.0 if outcome == 1 else 1.0
    return HermitianOp.from_pauli(0.5 * (1.0 + sgn * p.bias), 0.5 * sgn * p.vec)


def bloch_from_effects(a1: HermitianOp, a2: HermitianOp) -> BlochPovm:
    """Inverse of :func:`effect_from_bloch`; round-trips exactly."""
    if a1.dim != 2 or a2.dim != 2:
        raise ShapeError("Bloch form exists for 2x2 effects only")
    a1.validate()
    a2.validate()
    if np.abs(a1.entries + a2.entries - ID2).max() > TOL_SUM:
        raise CompletenessError("effects do not sum to the identity")
    c0, c = a2.pauli_coeffs()
    return BlochPovm(bias=2.0 * c0 - 1.0, vec=2.0 * c)


def validate_povm(t: PovmTensor, tol: float = TOL_PSD) -> ValidationReport:
    """Check positivity of every element and completeness of the sum.

    ``ok`` iff the smallest eigenvalue over all elements is >= -tol and
    the max-norm distance of the element sum from the identity is <= tol.
    """
    min_eig = min(eig_range_hermitian(m)[0] for m in t.elements)
    defect = float(np.abs(t.total() - np.eye(t.dim)).max())
    return ValidationReport(
        ok=bool(min_eig >= -tol and defect <= tol),
        min_eigenvalue=float(min_eig),
        completeness_defect=defect,
        tol=float(tol),
    )
