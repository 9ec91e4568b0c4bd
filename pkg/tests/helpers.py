"""Shared generators for the test suite (numpy RNG side, independent of the library's streams)."""

import numpy as np

from qincompat.operators import BlochPovm, PovmTensor, ProbabilityVector


def random_bloch_arrays(rng, n, biased=False, bias=None):
    """Arrays (bias, vec) of n valid measurements.

    ``biased=False`` gives unbiased ones; ``bias`` fixes the bias scalar;
    otherwise biases are drawn uniformly in (-1, 1).
    """
    if bias is not None:
        b = np.full(n, float(bias))
    elif biased:
        b = rng.uniform(-1.0, 1.0, n)
    else:
        b = np.zeros(n)
    g = rng.normal(size=(n, 3))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = (1.0 - np.abs(b)) * rng.random(n) ** (1.0 / 3.0)
    return b, g * r[:, None]


def random_bloch(rng, biased=False, bias=None) -> BlochPovm:
    b, v = random_bloch_arrays(rng, 1, biased=biased, bias=bias)
    return BlochPovm(float(b[0]), v[0])


def random_povm(rng, dim, k) -> PovmTensor:
    """Random k-outcome POVM on C^dim: PSD parts whitened by the inverse root of their sum."""
    raw = rng.normal(size=(k, dim, dim)) + 1j * rng.normal(size=(k, dim, dim))
    parts = raw @ raw.conj().transpose(0, 2, 1)
    total = parts.sum(axis=0)
    w, u = np.linalg.eigh(total)
    inv_root = (u / np.sqrt(w)) @ u.conj().T
    return PovmTensor(shape=(k,), elements=inv_root @ parts @ inv_root)


def random_prob_vector(rng, k) -> ProbabilityVector:
    w = rng.uniform(0.1, 1.0, k)
    return ProbabilityVector(w / w.sum())
