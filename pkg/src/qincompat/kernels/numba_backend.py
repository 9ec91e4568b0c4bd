"""Numba-jitted hot kernels; scalar twins of the numpy reference backend.

The counter layout, transforms, and chunked accumulation mirror
``numpy_backend`` exactly, so both paths draw the same variates and
produce thread-count-independent results.
"""

from __future__ import annotations

import math

import numba
import numpy as np
from numba import njit, prange

from ..rng import GAMMA, PAIR_SLOTS, POVM_SLOTS, TWO_PI
from .numpy_backend import CHUNK, KIND_GENERAL, KIND_SECTION, ONE_THIRD

NAME = "numba"

_INV53 = 1.0 / 9007199254740992.0
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_S63 = np.uint64(63)
_PAIR = np.uint64(PAIR_SLOTS)
_POVM = np.uint64(POVM_SLOTS)


@njit(inline="always")
def _mix64(z):
    z = (z ^ (z >> _S30)) * _MIX_A
    z = (z ^ (z >> _S27)) * _MIX_B
    return z ^ (z >> _S31)


@njit(inline="always")
def _raw(key, c):
    return _mix64(key + c * GAMMA)


@njit(inline="always")
def _u01(key, c):
    return np.float64(_raw(key, c) >> _S11) * _INV53


@njit(inline="always")
def _u01_open(key, c):
    return (np.float64(_raw(key, c) >> _S11) + 0.5) * _INV53


@njit(inline="always")
def _povm_scalar(key, base, kind, bias_fixed):
    if kind == KIND_GENERAL:
        u = _u01(key, base)
        mag = 1.0 - (1.0 - u) ** 0.25
        bias = -mag if (_raw(key, base + np.uint64(1)) >> _S63) else mag
        cap = 1.0 - mag
    else:
        bias = bias_fixed
        cap = 1.0 - abs(bias_fixed)
    u1 = _u01_open(key, base + np.uint64(2))
    u2 = _u01(key, base + np.uint64(3))
    r1 = math.sqrt(-2.0 * math.log(u1))
    t1 = TWO_PI * u2
    g0 = r1 * math.cos(t1)
    g1 = r1 * math.sin(t1)
    u3 = _u01_open(key, base + np.uint64(4))
    u4 = _u01(key, base + np.uint64(5))
    g2 = math.sqrt(-2.0 * math.log(u3)) * math.cos(TWO_PI * u4)
    norm = math.sqrt(g0 * g0 + g1 * g1 + g2 * g2)
    radius = cap * _u01(key, base + np.uint64(6)) ** ONE_THIRD
    s = radius / norm
    return bias, g0 * s, g1 * s, g2 * s


@njit(inline="always")
def _margin_scalar(a0, ax, ay, az, b0, bx, by, bz):
    a2 = ax * ax + ay * ay + az * az
    b2 = bx * bx + by * by + bz * bz
    dot = ax * bx + ay * by + az * bz
    wa = 1.0 + a0 * a0 - a2
    wb = 1.0 + b0 * b0 - b2
    ra = math.sqrt(max(wa * wa - 4.0 * a0 * a0, 0.0))
    rb = math.sqrt(max(wb * wb - 4.0 * b0 * b0, 0.0))
    lhs = (1.0 - 0.5 * (wa + ra) - 0.5 * (wb + rb)) * (
        1.0 - 0.5 * (wa - ra) - 0.5 * (wb - rb)
    )
    rhs = (dot - a0 * b0) ** 2
    return rhs - lhs


@njit(cache=True, parallel=True)
def _count_incompatible(key, counter0, n, kind, a0_fixed, b0_fixed):
    n_chunks = (n + CHUNK - 1) // CHUNK
    total = 0
    for c in prange(n_chunks):
        start = c * CHUNK
        stop = min(start + CHUNK, n)
        sub = 0
        for i in range(start, stop):
            base = counter0 + _PAIR * np.uint64(i)
            a0, ax, ay, az = _povm_scalar(key, base, kind, a0_fixed)
            b0, bx, by, bz = _povm_scalar(key, base + _POVM, kind, b0_fixed)
            if abs(a0) != 1.0 and abs(b0) != 1.0:
                if _margin_scalar(a0, ax, ay, az, b0, bx, by, bz) < 0.0:
                    sub += 1
        total += sub
    return total


@njit(cache=True, parallel=True)
def _sum_unbiased_fg(key, counter0, n):
    n_chunks = (n + CHUNK - 1) // CHUNK
    partials = np.zeros((n_chunks, 4))
    for c in prange(n_chunks):
        start = c * CHUNK
        stop = min(start + CHUNK, n)
        sf = 0.0
        sg = 0.0
        sf2 = 0.0
        sg2 = 0.0
        for i in range(start, stop):
            base = counter0 + _PAIR * np.uint64(i)
            _, ax, ay, az = _povm_scalar(key, base, KIND_SECTION, 0.0)
            _, bx, by, bz = _povm_scalar(key, base + _POVM, KIND_SECTION, 0.0)
            a2 = ax * ax + ay * ay + az * az
            b2 = bx * bx + by * by + bz * bz
            dot = ax * bx + ay * by + az * bz
            f = a2 + b2 - dot * dot
            g = math.sqrt(a2 + b2 + 2.0 * dot) + math.sqrt(a2 + b2 - 2.0 * dot)
            sf += f
            sg += g
            sf2 += f * f
            sg2 += g * g
        partials[c, 0] = sf
        partials[c, 1] = sg
        partials[c, 2] = sf2
        partials[c, 3] = sg2
    sums = np.zeros(4)
    for c in range(n_chunks):
        for j in range(4):
            sums[j] += partials[c, j]
    return sums


@njit(cache=True, parallel=True)
def _sample_pair_arrays(key, counter0, n, kind, a0_fixed, b0_fixed):
    a0 = np.empty(n)
    av = np.empty((n, 3))
    b0 = np.empty(n)
    bv = np.empty((n, 3))
    for i in prange(n):
        base = counter0 + _PAIR * np.uint64(i)
        a0[i], av[i, 0], av[i, 1], av[i, 2] = _povm_scalar(key, base, kind, a0_fixed)
        b0[i], bv[i, 0], bv[i, 1], bv[i, 2] = _povm_scalar(key, base + _POVM, kind, b0_fixed)
    return a0, av, b0, bv


@njit(cache=True)
def _feasibility_scan(a0, av, b0, bv, p, q, resolution, margin):
    g = np.linspace(-1.0, 1.0, resolution)
    c1x = q * av[0] + p * bv[0]
    c1y = q * av[1] + p * bv[1]
    c1z = q * av[2] + p * bv[2]
    c2x = p * bv[0] - (1.0 - q) * av[0]
    c2y = p * bv[1] - (1.0 - q) * av[1]
    c2z = p * bv[2] - (1.0 - q) * av[2]
    c3x = q * av[0] - (1.0 - p) * bv[0]
    c3y = q * av[1] - (1.0 - p) * bv[1]
    c3z = q * av[2] - (1.0 - p) * bv[2]
    c4x = -(1.0 - q) * av[0] - (1.0 - p) * bv[0]
    c4y = -(1.0 - q) * av[1] - (1.0 - p) * bv[1]
    c4z = -(1.0 - q) * av[2] - (1.0 - p) * bv[2]
    r1 = (q + p - 1.0) - (q * a0 + p * b0)
    r2 = (2.0 - q - p) - ((1.0 - q) * a0 - p * b0)
    r3 = (2.0 - q - p) - (-q * a0 + (1.0 - p) * b0)
    r4 = (q + p - 1.0) + ((1.0 - q) * a0 + (1.0 - p) * b0)
    flat = 0
    for i0 in range(resolution):
        x0 = g[i0]
        t1 = r1 + x0 - margin
        t2 = r2 - x0 - margin
        t3 = r3 - x0 - margin
        t4 = r4 + x0 - margin
        for i1 in range(resolution):
            x = g[i1]
            for i2 in range(resolution):
                y = g[i2]
                for i3 in range(resolution):
                    z = g[i3]
                    d1 = math.sqrt((x - c1x) ** 2 + (y - c1y) ** 2 + (z - c1z) ** 2)
                    if d1 <= t1:
                        d2 = math.sqrt((x - c2x) ** 2 + (y - c2y) ** 2 + (z - c2z) ** 2)
                        d3 = math.sqrt((x - c3x) ** 2 + (y - c3y) ** 2 + (z - c3z) ** 2)
                        d4 = math.sqrt((x - c4x) ** 2 + (y - c4y) ** 2 + (z - c4z) ** 2)
                        if d2 <= t2 and d3 <= t3 and d4 <= t4:
                            return flat
                    flat += 1
    return -1


def _key64(key) -> np.uint64:
    return np.uint64(int(key) & 0xFFFFFFFFFFFFFFFF)


def count_incompatible(key, counter0, n, kind, a0_fixed=0.0, b0_fixed=0.0):
    return int(
        _count_incompatible(_key64(key), _key64(counter0), int(n), int(kind), float(a0_fixed), float(b0_fixed))
    )


def sum_unbiased_fg(key, counter0, n):
    sums = _sum_unbiased_fg(_key64(key), _key64(counter0), int(n))
    return tuple(float(v) for v in sums)


def sample_pair_arrays(key, counter0, n, kind, a0_fixed=0.0, b0_fixed=0.0):
    return _sample_pair_arrays(
        _key64(key), _key64(counter0), int(n), int(kind), float(a0_fixed), float(b0_fixed)
    )


def feasibility_scan(a0, av, b0, bv, p, q, resolution, margin):
    return int(
        _feasibility_scan(
            float(a0),
            np.asarray(av, dtype=np.float64),
            float(b0),
            np.asarray(bv, dtype=np.float64),
            float(p),
            float(q),
            int(resolution),
            float(margin),
        )
    )


def compat_margins(a0, av, b0, bv):
    from .numpy_backend import compat_margins as _ref

    return _ref(a0, av, b0, bv)


def set_threads(n: int) -> int:
    """Clamp to the launched thread count and apply."""
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n
