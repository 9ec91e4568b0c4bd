"""Pure-numpy reference implementations of the hot kernels.

Each kernel is a pure function of the stream key and counter range, and
accumulates in fixed chunks of ``CHUNK`` samples so results are identical
for any worker count and match the jit backend's partial-sum layout.
"""

from __future__ import annotations

import numpy as np

from ..rng import (
    PAIR_SLOTS,
    POVM_SLOTS,
    SLOT_BIAS,
    SLOT_DIR,
    SLOT_RADIUS,
    SLOT_SIGN,
    normals_at,
    raw_at,
    uniform_at,
)

NAME = "numpy"

KIND_SECTION = 0  # biases fixed (unbiased pairs use section with zero biases)
KIND_GENERAL = 1  # biases drawn from the flat measure over valid parameters

CHUNK = 1 << 16
ONE_THIRD = 1.0 / 3.0

_U64 = np.uint64


def _povm_block(key, base, kind, bias_fixed):
    """Bias and Bloch vector for one measurement, at counters ``base``."""
    if kind == KIND_GENERAL:
        u = uniform_at(key, base + _U64(SLOT_BIAS))
        mag = 1.0 - (1.0 - u) ** 0.25
        sign_bit = raw_at(key, base + _U64(SLOT_SIGN)) >> _U64(63)
        bias = np.where(sign_bit, -mag, mag)
        cap = 1.0 - mag
    else:
        bias = np.full(base.shape, float(bias_fixed))
        cap = 1.0 - abs(float(bias_fixed))
    dir_counters = base[:, None] + np.arange(SLOT_DIR, SLOT_DIR + 4, dtype=np.uint64)
    g = normals_at(key, dir_counters)
    norm = np.sqrt(g[:, 0] ** 2 + g[:, 1] ** 2 + g[:, 2] ** 2)
    radius = cap * uniform_at(key, base + _U64(SLOT_RADIUS)) ** ONE_THIRD
    vec = g[:, :3] * (radius / norm)[:, None]
    return bias, vec


def sample_pair_arrays(key, counter0, n, kind, a0_fixed=0.0, b0_fixed=0.0):
    """Arrays (a0, avec, b0, bvec) for samples 0..n-1 of one stream."""
    idx = np.arange(n, dtype=np.uint64)
    base = _U64(int(counter0) & 0xFFFFFFFFFFFFFFFF) + _U64(PAIR_SLOTS) * idx
    a0, av = _povm_block(key, base, kind, a0_fixed)
    b0, bv = _povm_block(key, base + _U64(POVM_SLOTS), kind, b0_fixed)
    return a0, av, b0, bv


def compat_margins(a0, av, b0, bv):
    """Vectorized right-minus-left side of the compatibility inequality.

    Uses the equivalent single-root form: with w = 1 + x0^2 - x^2 and
    R = sqrt(w^2 - 4 x0^2), one has h^2 = (w + R) / 2 and x0^2 / h^2 =
    (w - R) / 2 exactly, which avoids the 0/0 of the unbiased sharp case.
    """
    a2 = np.einsum("...i,...i->...", av, av)
    b2 = np.einsum("...i,...i->...", bv, bv)
    dot = np.einsum("...i,...i->...", av, bv)
    wa = 1.0 + a0 * a0 - a2
    wb = 1.0 + b0 * b0 - b2
    ra = np.sqrt(np.maximum(wa * wa - 4.0 * a0 * a0, 0.0))
    rb = np.sqrt(np.maximum(wb * wb - 4.0 * b0 * b0, 0.0))
    lhs = (1.0 - 0.5 * (wa + ra) - 0.5 * (wb + rb)) * (1.0 - 0.5 * (wa - ra) - 0.5 * (wb - rb))
    rhs = (dot - a0 * b0) ** 2
    return rhs - lhs


def _incompatible_mask(a0, av, b0, bv):
    # Fully biased measurements are trivial: the inequality ties exactly
    # and the pair is compatible regardless of floating-point noise.
    mask = compat_margins(a0, av, b0, bv) < 0.0
    mask &= np.abs(a0) != 1.0
    mask &= np.abs(b0) != 1.0
    return mask


def count_incompatible(key, counter0, n, kind, a0_fixed=0.0, b0_fixed=0.0):
    """Number of incompatible pairs among samples 0..n-1."""
    total = 0
    for start in range(0, n, CHUNK):
        stop = min(start + CHUNK, n)
        a0, av, b0, bv = sample_pair_arrays(
            key, counter0 + start * PAIR_SLOTS, stop - start, kind, a0_fixed, b0_fixed
        )
        total += int(np.count_nonzero(_incompatible_mask(a0, av, b0, bv)))
    return total


def sum_unbiased_fg(key, counter0, n):
    """Chunked sums of f, g, f^2, g^2 over unbiased pairs 0..n-1.

    Partial sums are taken per fixed-size chunk and combined in chunk
    order, so the result does not depend on how work is scheduled.
    """
    n_chunks = (n + CHUNK - 1) // CHUNK
    partials = np.zeros((n_chunks, 4))
    for c in range(n_chunks):
        start = c * CHUNK
        stop = min(start + CHUNK, n)
        a0, av, b0, bv = sample_pair_arrays(
            key, counter0 + start * PAIR_SLOTS, stop - start, KIND_SECTION, 0.0, 0.0
        )
        a2 = np.einsum("ij,ij->i", av, av)
        b2 = np.einsum("ij,ij->i", bv, bv)
        dot = np.einsum("ij,ij->i", av, bv)
        f = a2 + b2 - dot * dot
        g = np.sqrt(a2 + b2 + 2.0 * dot) + np.sqrt(a2 + b2 - 2.0 * dot)
        partials[c] = [f.sum(), g.sum(), (f * f).sum(), (g * g).sum()]
    sums = np.zeros(4)
    for c in range(n_chunks):
        sums += partials[c]
    return tuple(float(v) for v in sums)


def feasibility_scan(a0, av, b0, bv, p, q, resolution, margin):
    """First row-major grid index of [-1,1]^4 whose min slack >= margin, else -1.

    The four slack norms do not depend on x0, so they are evaluated once
    on the spatial grid and reused across the x0 sweep.
    """
    g = np.linspace(-1.0, 1.0, resolution)
    xg, yg, zg = np.meshgrid(g, g, g, indexing="ij")

    def dist(center):
        return np.sqrt((xg - center[0]) ** 2 + (yg - center[1]) ** 2 + (zg - center[2]) ** 2)

    n1 = dist(q * av + p * bv)
    n2 = dist(p * bv - (1.0 - q) * av)
    n3 = dist(q * av - (1.0 - p) * bv)
    n4 = dist(-(1.0 - q) * av - (1.0 - p) * bv)
    # x0-independent parts of the four right-hand sides
    r1 = (q + p - 1.0) - (q * a0 + p * b0)
    r2 = (2.0 - q - p) - ((1.0 - q) * a0 - p * b0)
    r3 = (2.0 - q - p) - (-q * a0 + (1.0 - p) * b0)
    r4 = (q + p - 1.0) + ((1.0 - q) * a0 + (1.0 - p) * b0)
    cube = resolution**3
    for i0, x0 in enumerate(g):
        feasible = (
            (n1 <= r1 + x0 - margin)
            & (n2 <= r2 - x0 - margin)
            & (n3 <= r3 - x0 - margin)
            & (n4 <= r4 + x0 - margin)
        ).reshape(-1)
        k = int(np.argmax(feasible))
        if feasible[k]:
            return i0 * cube + k
    return -1


def set_threads(n: int) -> int:
    """Single-threaded backend; thread requests are accepted and ignored."""
    return 1
