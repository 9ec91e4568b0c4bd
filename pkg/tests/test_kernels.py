"""Contracts shared by the two kernel backends, and their mutual agreement."""

import numpy as np
import pytest

from qincompat.kernels import KIND_GENERAL, KIND_SECTION, numpy_backend
from qincompat.rng import PAIR_SLOTS, stream_key

try:
    from qincompat.kernels import numba_backend

    BACKENDS = [numpy_backend, numba_backend]
except ImportError:  # pragma: no cover
    numba_backend = None
    BACKENDS = [numpy_backend]

KEY = stream_key(101, 0)


@pytest.fixture(params=BACKENDS, ids=lambda b: b.NAME)
def backend(request):
    return request.param


def test_count_is_additive_over_counter_ranges(backend):
    n, k = 30_000, 11_111
    whole = backend.count_incompatible(KEY, 0, n, KIND_GENERAL)
    head = backend.count_incompatible(KEY, 0, k, KIND_GENERAL)
    tail = backend.count_incompatible(KEY, k * PAIR_SLOTS, n - k, KIND_GENERAL)
    assert whole == head + tail


def test_sample_arrays_reproduce(backend):
    a = backend.sample_pair_arrays(KEY, 0, 1000, KIND_SECTION, 0.2, -0.3)
    b = backend.sample_pair_arrays(KEY, 0, 1000, KIND_SECTION, 0.2, -0.3)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_section_samples_respect_caps(backend):
    a0, av, b0, bv = backend.sample_pair_arrays(KEY, 0, 5000, KIND_SECTION, 0.9, -0.4)
    assert (a0 == 0.9).all() and (b0 == -0.4).all()
    assert np.linalg.norm(av, axis=1).max() <= 0.1 + 1e-12
    assert np.linalg.norm(bv, axis=1).max() <= 0.6 + 1e-12


def test_general_samples_are_valid(backend):
    a0, av, b0, bv = backend.sample_pair_arrays(KEY, 0, 5000, KIND_GENERAL)
    assert (np.abs(a0) + np.linalg.norm(av, axis=1)).max() <= 1 + 1e-12
    assert (np.abs(b0) + np.linalg.norm(bv, axis=1)).max() <= 1 + 1e-12


def test_margins_match_scalar_criterion(backend):
    from qincompat.criterion import check_compatible
    from qincompat.operators import BlochPovm

    a0, av, b0, bv = backend.sample_pair_arrays(KEY, 0, 300, KIND_GENERAL)
    margins = numpy_backend.compat_margins(a0, av, b0, bv)
    for i in range(300):
        verdict = check_compatible(BlochPovm(a0[i], av[i]), BlochPovm(b0[i], bv[i]))
        assert margins[i] == pytest.approx(verdict.margin, abs=1e-13)


@pytest.mark.skipif(numba_backend is None, reason="numba unavailable")
class TestBackendAgreement:
    def test_samples_agree_to_rounding(self):
        for kind, a0, b0 in [(KIND_SECTION, 0.0, 0.0), (KIND_SECTION, 0.3, -0.6), (KIND_GENERAL, 0.0, 0.0)]:
            r1 = numpy_backend.sample_pair_arrays(KEY, 0, 50_000, kind, a0, b0)
            r2 = numba_backend.sample_pair_arrays(KEY, 0, 50_000, kind, a0, b0)
            for x, y in zip(r1, r2):
                np.testing.assert_allclose(x, y, rtol=0, atol=5e-15)

    def test_counts_agree(self):
        for kind in (KIND_SECTION, KIND_GENERAL):
            c1 = numpy_backend.count_incompatible(KEY, 0, 300_000, kind)
            c2 = numba_backend.count_incompatible(KEY, 0, 300_000, kind)
            # the paths differ by last-ulp transcendentals; verdict flips
            # require a pair within ~1e-15 of the boundary
            assert abs(c1 - c2) <= 2

    def test_sums_agree(self):
        s1 = numpy_backend.sum_unbiased_fg(KEY, 0, 200_000)
        s2 = numba_backend.sum_unbiased_fg(KEY, 0, 200_000)
        np.testing.assert_allclose(s1, s2, rtol=1e-12)

    def test_feasibility_scan_agrees(self):
        rng = np.random.default_rng(44)
        for _ in range(10):
            av = rng.normal(size=3)
            av *= 0.5 * rng.random() / np.linalg.norm(av)
            bv = rng.normal(size=3)
            bv *= 0.5 * rng.random() / np.linalg.norm(bv)
            args = (0.1, av, -0.2, bv, 0.5, 0.5, 12, 0.0)
            assert numpy_backend.feasibility_scan(*args) == numba_backend.feasibility_scan(*args)

    def test_thread_count_does_not_change_results(self):
        n = 250_000
        numba_backend.set_threads(1)
        c1 = numba_backend.count_incompatible(KEY, 0, n, KIND_GENERAL)
        s1 = numba_backend.sum_unbiased_fg(KEY, 0, n)
        applied = numba_backend.set_threads(2)
        c2 = numba_backend.count_incompatible(KEY, 0, n, KIND_GENERAL)
        s2 = numba_backend.sum_unbiased_fg(KEY, 0, n)
        assert c1 == c2
        assert s1 == s2  # bitwise: fixed-chunk partials summed in fixed order
        assert applied >= 1
