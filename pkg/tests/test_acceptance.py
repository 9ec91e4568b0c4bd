"""Acceptance suite: every criterion at its stated tolerance, one line per check.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS/FAIL
report lines.
"""

import json
import math
import time

import numpy as np
import pytest
from helpers import random_povm, random_prob_vector

from qincompat import kernels
from qincompat.cli import main as cli_main
from qincompat.estimate import (
    expectation_f,
    expectation_fg_mc,
    expectation_g,
    prob_grid,
    prob_lambda_section,
    prob_mc,
    prob_unbiased_quadrature,
    vol_njm_mc,
    vol_theta,
    vol_unbiased_lebesgue,
)
from qincompat.joint import build_G_mixture, build_M_joint, build_T_product, feasibility_oracle, marginal
from qincompat.kernels.numpy_backend import compat_margins
from qincompat.operators import BlochPovm, validate_povm
from qincompat.rng import RngStream
from qincompat.sampling import (
    MeasureSpec,
    cdf_inner_product,
    density_inner_product,
    norm_constant,
    sample_pairs,
    sample_unit_spheres,
)


def report(ok: bool, label: str, detail: str = ""):
    print(f"{'PASS' if ok else 'FAIL'}  {label:<68} {detail}")
    return ok


def test_unbiased_probability():
    kernels.set_threads(1)
    prob_mc(MeasureSpec.unbiased(), 1000, seed=7)  # warm the kernel path
    t0 = time.perf_counter()
    quad = prob_unbiased_quadrature(1e-8)
    mc = prob_mc(MeasureSpec.unbiased(), 10**6, seed=7)
    elapsed = time.perf_counter() - t0
    tol_mc = 4 * math.sqrt(0.24 / 10**6)
    ok = report(abs(quad.value - 0.6) <= 1e-8, "unbiased probability, quadrature = 3/5 within 1e-8", f"value {quad.value:.10f}")
    ok &= report(abs(mc.value - 0.6) <= tol_mc, f"unbiased probability, MC(1e6, seed 7) within +-{tol_mc:.5f}", f"value {mc.value:.6f}")
    ok &= report(elapsed < 10.0, "unbiased probability runtime < 10 s single-threaded", f"{elapsed:.2f} s")
    assert ok


def test_expectations():
    f = expectation_f()
    g = expectation_g()
    ok = report(abs(f.value - 27 / 25) <= 1e-8, "E[f] = 27/25 within 1e-8 (quadrature)", f"value {f.value:.10f}")
    ok &= report(abs(g.value - 72 / 35) <= 1e-6, "E[g] = 72/35 within 1e-6 (quadrature)", f"value {g.value:.10f}")
    fm, gm = expectation_fg_mc(10**7, seed=7)
    ok &= report(abs(fm.value - 27 / 25) <= 4 * fm.stderr, "E[f] MC cross-check within 4 sigma at 1e7", f"value {fm.value:.6f} se {fm.stderr:.6f}")
    ok &= report(abs(gm.value - 72 / 35) <= 4 * gm.stderr, "E[g] MC cross-check within 4 sigma at 1e7", f"value {gm.value:.6f} se {gm.stderr:.6f}")
    assert ok


def test_volume_chain():
    vol_njm, vol_total = vol_unbiased_lebesgue()
    ratio = vol_njm / vol_total
    ok = report(
        abs(ratio - 0.6) <= 1e-12,
        "Lebesgue volume chain (4pi)^2/15 over (4pi)^2/9 equals 3/5 to 1e-12",
        f"ratio {ratio:.15f}",
    )
    ok &= report(
        abs(vol_total - (4 * math.pi) ** 2 / 9) <= 1e-12, "total ball-pair volume equals (4pi)^2/9", f"{vol_total:.12f}"
    )
    assert ok


def test_general_measure_results():
    applied = kernels.set_threads(8)
    prob_mc(MeasureSpec.general(), 1000, seed=7)  # warm
    t0 = time.perf_counter()
    vol = vol_njm_mc(10**7, seed=7)
    prob = prob_mc(MeasureSpec.general(), 10**7, seed=7)
    elapsed = time.perf_counter() - t0
    ok = report(abs(vol.value - 1.0966) <= 0.006, "incompatible-set volume, MC(1e7, seed 7) = 1.0966 +- 0.006", f"value {vol.value:.5f}")
    ok &= report(abs(prob.value - 0.25) <= 0.0014, "general probability, MC(1e7) = 0.2500 +- 0.0014", f"value {prob.value:.5f}")
    pi2_9 = math.pi**2 / 9
    report(True, "comparison against pi^2/9", f"volume {vol.value:.5f} vs pi^2/9 = {pi2_9:.5f} (diff {vol.value - pi2_9:+.5f})")
    ok &= report(elapsed < 60.0, f"general-measure runtime < 60 s ({applied} workers applied)", f"{elapsed:.2f} s")
    assert ok


def test_section_facts():
    ok = True
    for bias in (0.5, 0.7):
        r = prob_mc(MeasureSpec.section(bias, bias), 10**5, seed=7)
        ok &= report(r.value == 0.0, f"section({bias}, {bias}): 0 incompatible in 1e5 samples", f"count {int(r.value * 10**5)}")
    grid = prob_grid(resolution=5, n_per_cell=10**5, seed=7)
    worst = 0.0
    cells = 0
    for i, a0 in enumerate(grid.a0_nodes):
        for j, b0 in enumerate(grid.b0_nodes):
            if abs(a0) + abs(b0) >= 1.0:
                cells += 1
                worst = max(worst, grid.values[i][j].value)
    ok &= report(worst == 0.0, f"grid cells with |a0|+|b0| >= 1: exact zero over 1e5 each ({cells} cells)", f"max {worst}")
    assert ok


def test_lambda_monotonicity():
    lams = [round(0.1 * k, 1) for k in range(9)]
    values = [prob_lambda_section(lam, 1e-6).value for lam in lams]
    gaps = [values[i] - values[i + 1] for i in range(len(values) - 1)]
    ok = report(abs(values[0] - 0.6) <= 1e-6, "lambda section at 0 equals 3/5 within 1e-6", f"value {values[0]:.8f}")
    ok &= report(min(gaps) > 1e-4, "lambda section strictly decreasing on 0..0.8, gaps > 1e-4", f"min gap {min(gaps):.5f}")
    assert ok


def test_joint_construction_properties():
    rng = np.random.default_rng(7)
    worst_marg = worst_sum = 0.0
    g_failures = 0
    t0 = time.perf_counter()
    for _ in range(10_000):
        n = int(rng.integers(2, 4))
        d = int(rng.integers(2, 4))
        marginals = [random_povm(rng, d, int(rng.integers(2, 4))) for _ in range(n)]
        pvs = [random_prob_vector(rng, m.shape[0]) for m in marginals]
        m = build_M_joint(marginals, pvs, build_T_product(pvs, dim=d))
        worst_sum = max(worst_sum, np.abs(m.total() - np.eye(d)).max())
        for axis, target in enumerate(marginals):
            worst_marg = max(worst_marg, np.abs(marginal(m, axis).elements - target.elements).max())
        if not validate_povm(build_G_mixture(marginals, pvs)).ok:
            g_failures += 1
    elapsed = time.perf_counter() - t0
    ok = report(worst_marg <= 1e-12, "joint construction: marginals match inputs to 1e-12 (1e4 runs)", f"worst {worst_marg:.2e}")
    ok &= report(worst_sum <= 1e-12, "joint construction: element sums equal identity to 1e-12", f"worst {worst_sum:.2e}")
    ok &= report(g_failures == 0, "mixture tensor is always a valid measurement", f"failures {g_failures} ({elapsed:.0f} s)")
    assert ok


def _general_pairs_with_margin(n_target, threshold=0.05, seed=7):
    stream = RngStream(seed=seed, stream_id=50)
    collected = []
    offset = 0
    while len(collected) < n_target:
        a0, av, b0, bv = sample_pairs(stream.advanced(offset * 16), MeasureSpec.general(), 4000)
        margins = compat_margins(a0, av, b0, bv)
        for i in np.where(np.abs(margins) >= threshold)[0]:
            collected.append((a0[i], av[i], b0[i], bv[i], margins[i]))
            if len(collected) == n_target:
                break
        offset += 4000
    return collected


def test_criterion_cross_validation_unbiased():
    stream = RngStream(seed=7, stream_id=60)
    a0, av, b0, bv = sample_pairs(stream, MeasureSpec.unbiased(), 10**5)
    margins = compat_margins(a0, av, b0, bv)
    f = np.einsum("ij,ij->i", av, av) + np.einsum("ij,ij->i", bv, bv) - np.einsum("ij,ij->i", av, bv) ** 2
    g = np.linalg.norm(av + bv, axis=1) + np.linalg.norm(av - bv, axis=1)
    d1 = int(np.count_nonzero((margins >= 0) != (g <= 2.0)))
    d2 = int(np.count_nonzero((margins >= 0) != (f <= 1.0)))
    ok = report(d1 == 0 and d2 == 0, "criterion equivalences on 1e5 unbiased pairs: zero disagreements", f"{d1} vs g, {d2} vs f")
    assert ok


def test_oracle_never_certifies_incompatible_pairs():
    pairs = _general_pairs_with_margin(1000)
    false_hits = 0
    incompatible = 0
    for a0, av, b0, bv, m in pairs:
        if m < 0:
            incompatible += 1
            if feasibility_oracle(BlochPovm(a0, av), BlochPovm(b0, bv), resolution=32) is not None:
                false_hits += 1
    ok = report(
        false_hits == 0,
        f"grid search returns no witness for any of {incompatible} incompatible pairs",
        f"false hits {false_hits}",
    )
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason=(
        "unattainable as stated: compatible general-measure pairs with margin >= 0.05 "
        "can have maximal min-slack below 2e-3, far under the reach of a 32-point grid "
        "(spacing 0.065); measured hit rate is ~85-90%, and covering the 1% quantile of "
        "the max-min-slack distribution would need a grid resolution of order 2000"
    ),
)
def test_oracle_confirms_99_percent_of_compatible_pairs():
    pairs = _general_pairs_with_margin(1000)
    compatible = hits = 0
    for a0, av, b0, bv, m in pairs:
        if m >= 0:
            compatible += 1
            if feasibility_oracle(BlochPovm(a0, av), BlochPovm(b0, bv), resolution=32) is not None:
                hits += 1
    rate = hits / compatible
    ok = report(rate >= 0.99, f"grid search confirms >= 99% of {compatible} compatible pairs", f"rate {rate:.3f}")
    assert ok


def test_inner_product_distribution():
    ok = report(
        all(density_inner_product(s, 3) == 0.5 for s in (-1.0, -0.25, 0.0, 0.7, 1.0)),
        "inner-product density at m=3 equals 1/2 exactly",
    )
    ok &= report(abs(norm_constant(3) - 4 * math.pi) <= 1e-12, "sphere surface at m=3 equals 4 pi to 1e-12", f"{norm_constant(3):.12f}")
    n = 10**6
    for m in (2, 3, 4, 6):
        u = sample_unit_spheres(RngStream(seed=7, stream_id=70 + m), m, 2 * n)
        s = np.sort(np.einsum("ij,ij->i", u[:n], u[n:]))
        cdf = cdf_inner_product(s, m)
        i = np.arange(1, n + 1)
        ks = float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))
        ok &= report(ks < 0.002, f"KS distance of 1e6 inner products at m={m} below 0.002", f"ks {ks:.5f}")
    assert ok


def test_determinism_across_thread_counts(tmp_path):
    jobs = {
        "unbiased-mc": ["estimate", "--measure", "unbiased", "--samples", "1000000", "--seed", "7"],
        "general-mc": ["estimate", "--measure", "general", "--samples", "10000000", "--seed", "7"],
        "vol-njm": ["estimate", "--quantity", "vol-njm", "--samples", "1000000", "--seed", "7"],
        "section-mc": ["estimate", "--measure", "section", "--a0", "0.5", "--b0", "0.5", "--samples", "100000", "--seed", "7"],
        "grid": ["grid", "--resolution", "5", "--samples-per-cell", "100000", "--seed", "7"],
    }
    ok = True
    for name, args in jobs.items():
        blobs = []
        for threads in ("1", "2"):
            out = tmp_path / f"{name}-{threads}"
            assert cli_main(args + ["--threads", threads, "--out", str(out)]) == 0
            blobs.append(out.read_bytes())
        ok &= report(blobs[0] == blobs[1], f"thread count does not change output bytes: {name}")
    assert ok


def test_output_schemas(tmp_path):
    out = tmp_path / "est.json"
    assert cli_main(["estimate", "--measure", "unbiased", "--samples", "1000", "--seed", "1", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    ok = report(set(payload) == {"value", "stderr", "n", "seed", "method"}, "estimate JSON matches the documented schema")
    grid_out = tmp_path / "grid.csv"
    assert cli_main(["grid", "--resolution", "3", "--samples-per-cell", "100", "--seed", "1", "--out", str(grid_out)]) == 0
    header = grid_out.read_text().splitlines()[0]
    ok &= report(header == "a0,b0,prob,stderr,n", "grid CSV header matches the documented schema")
    assert ok
