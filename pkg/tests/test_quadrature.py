import numpy as np
import pytest

from qincompat.quadrature import QuadratureBudgetError, adaptive_gl, adaptive_gl_batch


def test_polynomial_is_exact():
    value, nodes = adaptive_gl(lambda x: 3 * x**2, 0.0, 1.0, 1e-12)
    assert value == pytest.approx(1.0, abs=1e-14)
    assert nodes <= 63  # one panel plus its two halves


def test_sqrt_endpoint():
    value, _ = adaptive_gl(np.sqrt, 0.0, 1.0, 1e-11)
    assert value == pytest.approx(2 / 3, abs=1e-10)


def test_oscillatory():
    value, _ = adaptive_gl(lambda x: np.sin(10 * x), 0.0, np.pi, 1e-12)
    assert value == pytest.approx((1 - np.cos(10 * np.pi)) / 10, abs=1e-11)


def test_empty_interval():
    value, nodes = adaptive_gl(np.sqrt, 1.0, 1.0, 1e-10)
    assert value == 0.0 and nodes == 0


def test_budget_error():
    with pytest.raises(QuadratureBudgetError):
        adaptive_gl(lambda x: np.abs(x - 1 / np.pi) ** 0.51, 0.0, 1.0, 1e-14, node_limit=500)


def test_batch_matches_scalar():
    coeffs = np.array([1.0, 2.0, 3.0])

    def fam(x):
        return coeffs[:, None] * np.sqrt(x)[None, :]

    vals, _ = adaptive_gl_batch(fam, 0.0, 1.0, 1e-11)
    for c, v in zip(coeffs, vals):
        ref, _ = adaptive_gl(lambda x: c * np.sqrt(x), 0.0, 1.0, 1e-11)
        assert v == pytest.approx(ref, abs=1e-10)


def test_batch_empty_interval():
    vals, _ = adaptive_gl_batch(lambda x: np.ones((4, x.size)), 0.5, 0.5, 1e-10)
    assert vals.shape == (4,) and np.all(vals == 0.0)
