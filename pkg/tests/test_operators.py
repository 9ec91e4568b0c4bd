import json

import numpy as np
import pytest
from helpers import random_bloch_arrays

from qincompat.errors import CompletenessError, ShapeError, ValidityError
from qincompat.operators import (
    ID2,
    BlochPovm,
    HermitianOp,
    PovmTensor,
    ProbabilityVector,
    bloch_from_effects,
    effect_from_bloch,
    eig_range_hermitian,
    validate_povm,
)


def test_sharp_z_outcome_two_is_projector():
    eff = effect_from_bloch(BlochPovm(0.0, [0, 0, 1]), 2)
    assert np.allclose(eff.entries, np.diag([1.0, 0.0]), atol=0)


def test_fully_biased_is_trivial():
    p = BlochPovm(1.0, [0, 0, 0])
    assert np.allclose(effect_from_bloch(p, 1).entries, 0.0, atol=0)
    assert np.allclose(effect_from_bloch(p, 2).entries, ID2, atol=0)


def test_biased_effect_eigenvalues():
    eff = effect_from_bloch(BlochPovm(0.2, [0.3, 0.0, 0.4]), 2)
    lo, hi = eig_range_hermitian(eff.entries)
    # direct 2x2 eigendecomposition: 0.5 * (1.2 +- 0.5)
    assert np.allclose(sorted(np.linalg.eigvalsh(eff.entries)), [0.35, 0.85], atol=1e-14)
    assert abs(lo - 0.35) < 1e-14 and abs(hi - 0.85) < 1e-14


def test_invalid_bloch_rejected():
    with pytest.raises(ValidityError):
        effect_from_bloch(BlochPovm(0.5, [0.8, 0, 0]), 1)
    with pytest.raises(ValidityError):
        BlochPovm(1.2, [0, 0, 0]).validate()
    with pytest.raises(ShapeError):
        BlochPovm(0.0, [1, 0])
    with pytest.raises(ShapeError):
        effect_from_bloch(BlochPovm(0.0, [0, 0, 1]), 3)


def test_effects_sum_to_identity():
    rng = np.random.default_rng(11)
    biases, vecs = random_bloch_arrays(rng, 200, biased=True)
    for b, v in zip(biases, vecs):
        p = BlochPovm(b, v)
        total = effect_from_bloch(p, 1).entries + effect_from_bloch(p, 2).entries
        assert np.abs(total - ID2).max() <= 1e-15


def test_effect_eigenvalues_in_unit_interval_mass():
    rng = np.random.default_rng(12)
    biases, vecs = random_bloch_arrays(rng, 100_000, biased=True)
    sharp = np.linalg.norm(vecs, axis=1)
    for sgn in (-1.0, 1.0):
        lo = 0.5 * (1.0 + sgn * biases) - 0.5 * sharp
        hi = 0.5 * (1.0 + sgn * biases) + 0.5 * sharp
        assert (lo >= -1e-15).all() and (hi <= 1.0 + 1e-15).all()
    # spot check the matrix route against the arithmetic one
    for i in rng.integers(0, 100_000, 500):
        p = BlochPovm(biases[i], vecs[i])
        lo, hi = eig_range_hermitian(effect_from_bloch(p, 2).entries)
        assert -1e-12 <= lo <= hi <= 1.0 + 1e-12


def test_bloch_roundtrip():
    rng = np.random.default_rng(13)
    biases, vecs = random_bloch_arrays(rng, 500, biased=True)
    for b, v in zip(biases, vecs):
        p = BlochPovm(b, v)
        q = bloch_from_effects(effect_from_bloch(p, 1), effect_from_bloch(p, 2))
        assert abs(q.bias - p.bias) <= 1e-12
        assert np.abs(q.vec - p.vec).max() <= 1e-12


def test_trivial_pair_maps_to_zero_vector():
    half = HermitianOp(0.5 * ID2)
    q = bloch_from_effects(half, half)
    assert q.bias == 0.0 and np.all(q.vec == 0.0)


def test_bloch_from_effects_errors():
    e = HermitianOp(np.diag([1.0, 0.0]))
    with pytest.raises(CompletenessError):
        bloch_from_effects(e, e)
    big = HermitianOp(np.eye(3))
    with pytest.raises(ShapeError):
        bloch_from_effects(big, big)


def test_validate_povm_trivial_pair():
    t = PovmTensor(shape=(2,), elements=np.stack([0.5 * ID2, 0.5 * ID2]))
    report = validate_povm(t)
    assert report.ok
    assert abs(report.min_eigenvalue - 0.5) < 1e-15
    assert report.completeness_defect == 0.0


def test_validate_povm_flags_negative_eigenvalue():
    vec = np.array([1.2, 0.0, 0.0])
    e1 = HermitianOp.from_pauli(0.5, -0.5 * vec).entries
    e2 = HermitianOp.from_pauli(0.5, 0.5 * vec).entries
    report = validate_povm(PovmTensor(shape=(2,), elements=np.stack([e1, e2])))
    assert not report.ok
    assert abs(report.min_eigenvalue - (-0.1)) < 1e-12
    assert report.completeness_defect <= 1e-15


def test_probability_vector_validation():
    ProbabilityVector([0.5, 0.5]).validate()
    with pytest.raises(ValidityError):
        ProbabilityVector([0.0, 1.0]).validate()
    with pytest.raises(ValidityError):
        ProbabilityVector([0.6, 0.6]).validate()


def test_hermitian_validation():
    with pytest.raises(ValidityError):
        HermitianOp(np.array([[0.0, 1.0], [0.0, 0.0]])).validate()
    HermitianOp(np.array([[1.0, 1j], [-1j, 0.0]])).validate()


def test_pauli_coeff_roundtrip():
    rng = np.random.default_rng(14)
    for _ in range(100):
        c0 = rng.normal()
        c = rng.normal(size=3)
        op = HermitianOp.from_pauli(c0, c)
        d0, d = op.pauli_coeffs()
        # off-diagonal coefficients are read back exactly; the diagonal pair
        # (identity, z) suffers one add/sub rounding each way
        assert c[0] == d[0] and c[1] == d[1]
        assert d0 == pytest.approx(c0, rel=1e-15, abs=1e-15)
        assert d[2] == pytest.approx(c[2], rel=1e-15, abs=1e-15)


def test_bloch_json_roundtrip():
    p = BlochPovm(0.25, [0.1, -0.2, 0.3])
    q = BlochPovm.from_dict(json.loads(json.dumps(p.to_dict())))
    assert q.bias == p.bias and np.array_equal(q.vec, p.vec)


def test_tensor_json_roundtrip():
    rng = np.random.default_rng(15)
    raw = rng.normal(size=(4, 2, 2)) + 1j * rng.normal(size=(4, 2, 2))
    herm = raw + raw.conj().transpose(0, 2, 1)
    t = PovmTensor(shape=(2, 2), elements=herm)
    back = PovmTensor.from_dict(json.loads(json.dumps(t.to_dict())))
    assert back.shape == t.shape and back.dim == 2
    assert np.array_equal(back.elements, t.elements)


def test_tensor_shape_checks():
    with pytest.raises(ShapeError):
        PovmTensor(shape=(3,), elements=np.zeros((2, 2, 2), dtype=complex))
    with pytest.raises(ShapeError):
        PovmTensor(shape=(2,), elements=np.zeros((2, 2, 3), dtype=complex))
    t = PovmTensor(shape=(2, 2), elements=np.zeros((4, 2, 2), dtype=complex))
    assert t.element(1, 0).dim == 2
