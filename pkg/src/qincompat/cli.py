"""Command-line front end.

Subcommands: check, witness, validate, sample, estimate, grid, density.
Exit codes: 0 on success (compatible / witness found / POVM valid), 1 for
the negative physics outcome (incompatible / no witness / invalid POVM),
2 for usage or input errors.  Every randomized command requires --seed;
identical flags and seed reproduce identical output bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import kernels
from .criterion import check_compatible
from .errors import DomainError
from .estimate import (
    EstimateResult,
    expectation_f,
    expectation_fg_mc,
    expectation_g,
    prob_grid,
    prob_lambda_section,
    prob_mc,
    prob_unbiased_quadrature,
    vol_njm_mc,
)
from .joint import build_qubit_joint, construct_unbiased_witness, feasibility_oracle
from .operators import BlochPovm, PovmTensor, validate_povm
from .rng import RngStream
from .sampling import MeasureSpec, density_inner_product, sample_pairs


def _load_bloch(path: str) -> BlochPovm:
    with open(path) as fh:
        return BlochPovm.from_dict(json.load(fh)).validate()


def _emit(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _measure_from_args(args) -> MeasureSpec:
    if args.measure == "section":
        return MeasureSpec.section(args.a0, args.b0)
    return MeasureSpec(args.measure)


def _cmd_check(args) -> int:
    verdict = check_compatible(_load_bloch(args.povm_a), _load_bloch(args.povm_b))
    if args.format == "text":
        word = "compatible" if verdict.compatible else "incompatible"
        _emit(f"{word} (margin {verdict.margin:.9g})\n", args.out)
    else:
        _emit(json.dumps(verdict.to_dict()) + "\n", args.out)
    return 0 if verdict.compatible else 1


def _cmd_witness(args) -> int:
    a = _load_bloch(args.povm_a)
    b = _load_bloch(args.povm_b)
    if a.bias == 0.0 and b.bias == 0.0:
        found = construct_unbiased_witness(a, b)
        if found is None:
            sys.stderr.write("no joint measurement: pair is incompatible\n")
            return 1
        param, tensor = found
    else:
        param = feasibility_oracle(a, b, args.p, args.q, args.resolution, args.margin)
        if param is None:
            sys.stderr.write("no witness found on the search grid\n")
            return 1
        tensor = build_qubit_joint(a, b, args.p, args.q, param)
    report = validate_povm(tensor)
    if not report.ok:
        sys.stderr.write(f"constructed tensor failed validation: {report.to_dict()}\n")
        return 1
    payload = tensor.to_dict()
    payload["noise_param"] = {"x0": param.x0, "x": [float(v) for v in param.x]}
    _emit(json.dumps(payload) + "\n", args.out)
    return 0


def _cmd_validate(args) -> int:
    with open(args.tensor) as fh:
        tensor = PovmTensor.from_dict(json.load(fh))
    report = validate_povm(tensor, tol=args.tol)
    _emit(json.dumps(report.to_dict()) + "\n", args.out)
    return 0 if report.ok else 1


def _cmd_sample(args) -> int:
    spec = _measure_from_args(args)
    stream = RngStream(seed=args.seed)
    a0, av, b0, bv = sample_pairs(stream, spec, args.samples)
    if args.format == "json":
        pairs = [
            {
                "a": {"bias": float(a0[i]), "vec": [float(v) for v in av[i]]},
                "b": {"bias": float(b0[i]), "vec": [float(v) for v in bv[i]]},
            }
            for i in range(args.samples)
        ]
        _emit(json.dumps({"seed": args.seed, "measure": spec.kind, "pairs": pairs}) + "\n", args.out)
    else:
        lines = ["a0,ax,ay,az,b0,bx,by,bz"]
        for i in range(args.samples):
            row = [a0[i], av[i, 0], av[i, 1], av[i, 2], b0[i], bv[i, 0], bv[i, 1], bv[i, 2]]
            lines.append(",".join(f"{v:.17g}" for v in row))
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _require_seed(args, parser):
    if args.seed is None:
        parser.error("--seed is required for Monte Carlo runs")


def _cmd_estimate(args, parser) -> int:
    if args.threads is not None:
        kernels.set_threads(args.threads)
    if args.quantity == "expect-f":
        if args.method == "quadrature":
            result = expectation_f(args.tol)
        else:
            _require_seed(args, parser)
            result = expectation_fg_mc(args.samples, args.seed)[0]
    elif args.quantity == "expect-g":
        if args.method == "quadrature":
            result = expectation_g(args.tol)
        else:
            _require_seed(args, parser)
            result = expectation_fg_mc(args.samples, args.seed)[1]
    elif args.quantity == "vol-njm":
        _require_seed(args, parser)
        result = vol_njm_mc(args.samples, args.seed)
    elif args.measure == "lambda":
        if args.lam is None:
            parser.error("--lambda is required for the lambda measure")
        if args.method == "quadrature":
            result = prob_lambda_section(args.lam, args.tol)
        else:
            _require_seed(args, parser)
            result = prob_mc(MeasureSpec.section(args.lam, 0.0), args.samples, args.seed)
    elif args.method == "quadrature":
        if args.measure != "unbiased":
            parser.error("quadrature is available for the unbiased and lambda measures")
        result = prob_unbiased_quadrature(args.tol)
    else:
        _require_seed(args, parser)
        result = prob_mc(_measure_from_args(args), args.samples, args.seed)
    _emit(result.to_json() + "\n", args.out)
    return 0


def _cmd_grid(args) -> int:
    if args.threads is not None:
        kernels.set_threads(args.threads)
    grid = prob_grid(args.resolution, args.samples_per_cell, args.seed)
    _emit(grid.to_csv(), args.out)
    return 0


def _cmd_density(args) -> int:
    if args.at is not None:
        value = density_inner_product(args.at, args.m)
        _emit(json.dumps({"m": args.m, "s": args.at, "density": value}) + "\n", args.out)
        return 0
    s = np.linspace(-1.0, 1.0, args.points)
    dens = density_inner_product(s, args.m)
    lines = ["s,density"] + [f"{si:.9g},{di:.9g}" for si, di in zip(s, dens)]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qincompat",
        description="Joint measurability of binary qubit measurements and incompatibility probabilities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("check", help="decide compatibility of two Bloch measurement files")
    pc.add_argument("povm_a")
    pc.add_argument("povm_b")
    pc.add_argument("--format", choices=["json", "text"], default="json")
    pc.add_argument("--out", default=None)

    pw = sub.add_parser("witness", help="construct an explicit joint measurement")
    pw.add_argument("povm_a")
    pw.add_argument("povm_b")
    pw.add_argument("--out", default=None)
    pw.add_argument("--p", type=float, default=0.5)
    pw.add_argument("--q", type=float, default=0.5)
    pw.add_argument("--resolution", type=int, default=32)
    pw.add_argument("--margin", type=float, default=0.0)

    pv = sub.add_parser("validate", help="validate a measurement tensor file")
    pv.add_argument("tensor")
    pv.add_argument("--tol", type=float, default=1e-9)
    pv.add_argument("--out", default=None)

    ps = sub.add_parser("sample", help="draw random measurement pairs")
    ps.add_argument("--measure", choices=["unbiased", "general", "section"], default="unbiased")
    ps.add_argument("--samples", type=int, required=True)
    ps.add_argument("--seed", type=int, required=True)
    ps.add_argument("--a0", type=float, default=0.0)
    ps.add_argument("--b0", type=float, default=0.0)
    ps.add_argument("--format", choices=["csv", "json"], default="csv")
    ps.add_argument("--out", default=None)

    pe = sub.add_parser("estimate", help="estimate probabilities, volumes, and expectations")
    pe.add_argument("--quantity", choices=["prob", "vol-njm", "expect-f", "expect-g"], default="prob")
    pe.add_argument("--measure", choices=["unbiased", "general", "section", "lambda"], default="unbiased")
    pe.add_argument("--method", choices=["mc", "quadrature"], default="mc")
    pe.add_argument("--samples", type=int, default=1_000_000)
    pe.add_argument("--seed", type=int, default=None)
    pe.add_argument("--tol", type=float, default=1e-8)
    pe.add_argument("--a0", type=float, default=0.0)
    pe.add_argument("--b0", type=float, default=0.0)
    pe.add_argument("--lambda", dest="lam", type=float, default=None)
    pe.add_argument("--threads", type=int, default=None)
    pe.add_argument("--out", default=None)

    pg = sub.add_parser("grid", help="incompatibility probability grid over (a0, b0)")
    pg.add_argument("--resolution", type=int, default=81)
    pg.add_argument("--samples-per-cell", type=int, default=100_000)
    pg.add_argument("--seed", type=int, required=True)
    pg.add_argument("--threads", type=int, default=None)
    pg.add_argument("--out", default=None)

    pd = sub.add_parser("density", help="inner-product density of random unit vectors")
    pd.add_argument("--m", type=int, required=True)
    pd.add_argument("--at", type=float, default=None)
    pd.add_argument("--points", type=int, default=201)
    pd.add_argument("--out", default=None)

    return parser


_HANDLERS = {
    "check": lambda args, parser: _cmd_check(args),
    "witness": lambda args, parser: _cmd_witness(args),
    "validate": lambda args, parser: _cmd_validate(args),
    "sample": lambda args, parser: _cmd_sample(args),
    "estimate": _cmd_estimate,
    "grid": lambda args, parser: _cmd_grid(args),
    "density": lambda args, parser: _cmd_density(args),
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, parser)
    except (OSError, ValueError, KeyError, DomainError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
