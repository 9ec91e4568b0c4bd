"""Volumes, quadratures, and Monte Carlo estimates of incompatibility probabilities.

Reference values reproduced here: the unbiased incompatibility probability
is exactly 3/5; the full-measure expectations of the incompatibility
functionals are E[f] = 27/25 and E[g] = 72/35; the parameter-space volume
is (2 pi / 3)^2 and the incompatible subset has volume ~1.09662
(numerically close to pi^2/9, i.e. probability ~1/4).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from io import StringIO

import numpy as np

from .errors import DomainError
from .kernels import active_backend
from .quadrature import _Budget, adaptive_gl, adaptive_gl_batch
from .rng import stream_key
from .sampling import GENERAL, MeasureSpec

VOL_V = 2.0 * math.pi / 3.0


@dataclass(frozen=True)
class EstimateResult:
    """Point estimate with its uncertainty and provenance."""

    value: float
    stderr: float
    samples_or_nodes: int
    seed: int | None
    method: str  # "mc" | "quadrature" | "closed_form"

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "n": self.samples_or_nodes,
            "seed": self.seed,
            "method": self.method,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def vol_V() -> float:
    """Volume of the valid (bias, vector) parameter region: 2 pi / 3."""
    return VOL_V


def vol_theta() -> float:
    """Volume of the space of measurement pairs: vol_V squared."""
    return VOL_V * VOL_V


def vol_section(a0: float, b0: float) -> float:
    """Volume of the pair space at fixed biases: (4 pi/3)^2 (1-|a0|)^3 (1-|b0|)^3."""
    if abs(a0) > 1.0 or abs(b0) > 1.0:
        raise DomainError("biases must lie in [-1, 1]")
    return (4.0 * math.pi / 3.0) ** 2 * (1.0 - abs(a0)) ** 3 * (1.0 - abs(b0)) ** 3


def _s_halfwidth(a, b):
    """Half-length of the direction-cosine interval of the incompatible region."""
    return np.sqrt(np.maximum(a * a + b * b - 1.0, 0.0)) / (a * b)


def _nested_unbiased(weight, tol):
    """Nested (a, (b, (s))) integral of weight(a, b) over the incompatible region.

    The innermost level integrates the constant s-profile over
    (-s*, s*) mapped onto a fixed interval and shared across the b batch.
    """
    budget = _Budget(200_000_000)

    def outer(a_nodes):
        out = np.empty_like(a_nodes)
        for i, a in enumerate(a_nodes):
            lo_b = math.sqrt(max(1.0 - a * a, 0.0))

            def over_b(b_nodes, a=a):
                def over_s(t_nodes):
                    prof = np.broadcast_to(
                        weight(a, b_nodes)[:, None], (b_nodes.size, t_nodes.size)
                    )
                    return prof * _s_halfwidth(a, b_nodes)[:, None]

                return adaptive_gl_batch(over_s, -1.0, 1.0, 0.01 * tol, budget=budget)

            out[i] = adaptive_gl(over_b, lo_b, 1.0, 0.1 * tol, budget=budget)
        return out

    value = adaptive_gl(outer, 0.0, 1.0, tol, budget=budget)
    return value, budget.nodes


def prob_unbiased_quadrature(tol: float = 1e-8) -> EstimateResult:
    """Unbiased incompatibility probability by nested quadrature (exactly 3/5)."""
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    value, nodes = _nested_unbiased(lambda a, b: 4.5 * a * a * b * b, tol)
    return EstimateResult(value=value, stderr=0.0, samples_or_nodes=nodes, seed=None, method="quadrature")


def vol_unbiased_lebesgue(tol: float = 1e-10) -> tuple[float, float]:
    """(incompatible, total) Lebesgue volumes of the unbiased vector-pair region.

    The total ball-pair volume is (4 pi/3)^2 = (4 pi)^2 / 9 in closed form;
    the incompatible part integrates N_3^2 a^2 b^2 p_3(s) over the region
    and comes out to (4 pi)^2 / 15, an independent route to the 3/5 ratio.
    """
    weight = lambda a, b: (4.0 * math.pi) ** 2 * 0.5 * (a * a) * (b * b)
    value, _ = _nested_unbiased(weight, tol * (4.0 * math.pi) ** 2 / 15.0)
    return value, (4.0 * math.pi) ** 2 / 9.0


def _expectation_unbiased(func, tol) -> EstimateResult:
    """Expectation of func(a, b, s) under the full unbiased pair measure."""
    budget = _Budget(200_000_000)

    def outer(a_nodes):
        out = np.empty_like(a_nodes)
        for i, a in enumerate(a_nodes):

            def over_b(b_nodes, a=a):
                def over_s(s_nodes):
                    prof = func(a, b_nodes[:, None], s_nodes[None, :])
                    dens = 4.5 * (a * a) * (b_nodes * b_nodes)
                    return dens[:, None] * prof

                return adaptive_gl_batch(over_s, -1.0, 1.0, 0.01 * tol, budget=budget)

            out[i] = adaptive_gl(over_b, 0.0, 1.0, 0.1 * tol, budget=budget)
        return out

    value = adaptive_gl(outer, 0.0, 1.0, tol, budget=budget)
    return EstimateResult(value=value, stderr=0.0, samples_or_nodes=budget.nodes, seed=None, method="quadrature")


def expectation_f(tol: float = 1e-9) -> EstimateResult:
    """Full-measure expectation of f(a, b) = a^2 + b^2 - <a,b>^2; equals 27/25."""
    return _expectation_unbiased(lambda a, b, s: a * a + b * b - (a * b * s) ** 2, tol)


def expectation_g(tol: float = 1e-7) -> EstimateResult:
    """Full-measure expectation of g(a, b) = |a+b| + |a-b|; equals 72/35."""

    def g(a, b, s):
        q = a * a + b * b
        return np.sqrt(q + 2.0 * a * b * s) + np.sqrt(np.maximum(q - 2.0 * a * b * s, 0.0))

    return _expectation_unbiased(g, tol)


def _nested_region_expectation(func, tol) -> EstimateResult:
    """Integral of func(a, b, s) (9/2) a^2 b^2 over the incompatible region."""
    budget = _Budget(200_000_000)

    def outer(a_nodes):
        out = np.empty_like(a_nodes)
        for i, a in enumerate(a_nodes):
            lo_b = math.sqrt(max(1.0 - a * a, 0.0))

            def over_b(b_nodes, a=a):
                half = _s_halfwidth(a, b_nodes)[:, None]

                def over_s(t_nodes):
                    s_vals = half * t_nodes[None, :]
                    dens = 4.5 * (a * a) * (b_nodes * b_nodes)
                    return dens[:, None] * half * func(a, b_nodes[:, None], s_vals)

                return adaptive_gl_batch(over_s, -1.0, 1.0, 0.01 * tol, budget=budget)

            out[i] = adaptive_gl(over_b, lo_b, 1.0, 0.1 * tol, budget=budget)
        return out

    value = adaptive_gl(outer, 0.0, 1.0, tol, budget=budget)
    return EstimateResult(value=value, stderr=0.0, samples_or_nodes=budget.nodes, seed=None, method="quadrature")


def expectation_f_incompatible(tol: float = 1e-8) -> EstimateResult:
    """Diagnostic: integral of f against the measure restricted to the incompatible region.

    Strictly smaller than the full-measure 27/25 because the compatible
    region (probability 2/5) also carries positive f.  No closed form is
    asserted for this value.
    """
    return _nested_region_expectation(lambda a, b, s: a * a + b * b - (a * b * s) ** 2, tol)


def expectation_g_incompatible(tol: float = 1e-7) -> EstimateResult:
    """Diagnostic: integral of g against the measure restricted to the incompatible region."""

    def g(a, b, s):
        q = a * a + b * b
        return np.sqrt(np.maximum(q + 2.0 * a * b * s, 0.0)) + np.sqrt(np.maximum(q - 2.0 * a * b * s, 0.0))

    return _nested_region_expectation(g, tol)


def expectation_fg_mc(n: int, seed: int, stream_id: int = 0) -> tuple[EstimateResult, EstimateResult]:
    """Monte Carlo cross-check of the two expectations from one sample stream."""
    if n < 1:
        raise DomainError("need at least one sample")
    sf, sg, sf2, sg2 = active_backend().sum_unbiased_fg(stream_key(seed, stream_id), 0, n)
    out = []
    for s1, s2 in ((sf, sf2), (sg, sg2)):
        mean = s1 / n
        var = max(s2 / n - mean * mean, 0.0)
        out.append(
            EstimateResult(
                value=mean,
                stderr=math.sqrt(var / n),
                samples_or_nodes=n,
                seed=seed,
                method="mc",
            )
        )
    return out[0], out[1]


def _lambda_bounds(lam: float):
    """Bound callables (outer b, middle s, inner a) of the biased-section region."""
    l = abs(lam)
    l2 = l * l
    cap = 1.0 - l

    def s_max(b):
        b2 = b * b
        return np.sqrt(np.maximum((b2 - l) / (b2 * (1.0 - l)), 0.0))

    def a_low(b, s):
        b2 = b * b
        s2 = s * s
        num = (
            b2
            - b2 * b2
            - b2 * s2
            + b2 * b2 * s2
            - l2
            + b2 * l2
            + b2 * s2 * l2
            - b2 * b2 * s2 * l2
        )
        den = b2 * (1.0 - s2) * (1.0 - b2 * s2)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = num / den
        val = np.where(den > 0, val, np.inf)
        val = np.where(val < 0, np.where(val > -1e-12, 0.0, val), val)
        return np.sqrt(np.maximum(val, 0.0))

    return math.sqrt(l), cap, s_max, a_low


def prob_lambda_section(lam: float, tol: float = 1e-8) -> EstimateResult:
    """Incompatibility probability at biases (lam, 0) by nested quadrature.

    Integrates (9/2) (1-|lam|)^-3 a^2 b^2 over the region in the printed
    nesting order (b, (s, (a))); lam = 0 recovers the unbiased 3/5.
    """
    if not abs(lam) < 1.0:
        raise DomainError("lambda must satisfy |lambda| < 1")
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    b_low, cap, s_max, a_low = _lambda_bounds(lam)
    scale = 4.5 / (1.0 - abs(lam)) ** 3
    budget = _Budget(200_000_000)
    # value_tol applies to the unscaled integral
    inner_tol = tol / scale

    def outer(b_nodes):
        out = np.empty_like(b_nodes)
        for i, b in enumerate(b_nodes):
            sm = float(s_max(np.array(b)))

            def over_s(s_nodes, b=b):
                def over_a(t_nodes, s_nodes=s_nodes, b=b):
                    lo = a_low(b, s_nodes)[:, None]
                    hi = cap
                    width = np.maximum(hi - lo, 0.0)
                    a_vals = lo + 0.5 * width * (t_nodes[None, :] + 1.0)
                    return 0.5 * width * (b * b) * (a_vals * a_vals)

                return adaptive_gl_batch(over_a, -1.0, 1.0, 0.01 * inner_tol, budget=budget)

            out[i] = adaptive_gl(over_s, -sm, sm, 0.1 * inner_tol, budget=budget)
        return out

    raw = adaptive_gl(outer, b_low, 1.0, inner_tol, budget=budget)
    return EstimateResult(
        value=scale * raw, stderr=0.0, samples_or_nodes=budget.nodes, seed=None, method="quadrature"
    )


def prob_mc(spec: MeasureSpec, n: int, seed: int, stream_id: int = 0) -> EstimateResult:
    """Monte Carlo incompatibility probability under ``spec``.

    Deterministic in (seed, stream_id, n) regardless of worker count; the
    standard error is the binomial one.
    """
    if n < 1:
        raise DomainError("need at least one sample")
    kind, a0f, b0f = spec.kernel_args()
    count = active_backend().count_incompatible(stream_key(seed, stream_id), 0, n, kind, a0f, b0f)
    value = count / n
    return EstimateResult(
        value=value,
        stderr=math.sqrt(value * (1.0 - value) / n),
        samples_or_nodes=n,
        seed=seed,
        method="mc",
    )


def vol_njm_mc(n: int, seed: int) -> EstimateResult:
    """Volume of the incompatible pair set: probability estimate times vol_V^2."""
    prob = prob_mc(MeasureSpec(GENERAL), n, seed)
    scale = vol_theta()
    return EstimateResult(
        value=prob.value * scale,
        stderr=prob.stderr * scale,
        samples_or_nodes=n,
        seed=seed,
        method="mc",
    )


@dataclass(frozen=True)
class ProbabilityGrid:
    """Incompatibility probabilities over a rectangular (a0, b0) grid."""

    a0_nodes: np.ndarray
    b0_nodes: np.ndarray
    values: tuple  # tuple of tuples of EstimateResult, indexed [i][j]

    def to_csv(self) -> str:
        buf = StringIO()
        buf.write("a0,b0,prob,stderr,n\n")
        for i, a0 in enumerate(self.a0_nodes):
            for j, b0 in enumerate(self.b0_nodes):
                r = self.values[i][j]
                buf.write(f"{a0:.9g},{b0:.9g},{r.value:.9g},{r.stderr:.9g},{r.samples_or_nodes}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, seed: int | None = None) -> "ProbabilityGrid":
        lines = [ln for ln in text.strip().splitlines() if ln]
        if lines[0] != "a0,b0,prob,stderr,n":
            raise ValueError(f"unexpected header {lines[0]!r}")
        rows = [ln.split(",") for ln in lines[1:]]
        a0s = sorted({float(r[0]) for r in rows})
        b0s = sorted({float(r[1]) for r in rows})
        if len(rows) != len(a0s) * len(b0s):
            raise ValueError("grid is not rectangular")
        table = {}
        for r in rows:
            table[(float(r[0]), float(r[1]))] = EstimateResult(
                value=float(r[2]),
                stderr=float(r[3]),
                samples_or_nodes=int(r[4]),
                seed=seed,
                method="mc",
            )
        values = tuple(tuple(table[(a, b)] for b in b0s) for a in a0s)
        return cls(np.asarray(a0s), np.asarray(b0s), values)


def prob_grid(resolution: int, n_per_cell: int, seed: int) -> ProbabilityGrid:
    """Grid of section-measure estimates over (a0, b0) in [-1, 1]^2.

    Cell (i, j) uses its own stream (stream_id = i * resolution + j), so
    the grid is reproducible cell-by-cell and across worker counts.
    """
    if resolution < 3:
        raise DomainError("resolution must be at least 3")
    nodes = np.linspace(-1.0, 1.0, resolution)
    rows = []
    for i, a0 in enumerate(nodes):
        row = []
        for j, b0 in enumerate(nodes):
            spec = MeasureSpec.section(float(a0), float(b0))
            row.append(prob_mc(spec, n_per_cell, seed, stream_id=i * resolution + j))
        rows.append(tuple(row))
    return ProbabilityGrid(a0_nodes=nodes, b0_nodes=nodes, values=tuple(rows))
