"""Command-line surface: inversion, decomposition, RGA, verification and the
simulation experiment.

Exit codes: 0 success, 1 verification failure, 2 parse/usage error,
3 irrational spectrum under --backend exact, 4 chain failure.  Standard
output is machine-parseable JSON (CSV only for time series files); errors
produce a one-line machine-readable reason on standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import exact as ex
from . import floatcore as fc
from . import inverses as gi
from . import simlab
from . import verify as vf
from .exact import IrrationalSpectrum, RationalMatrix, format_rational
from .floatcore import ChainFailure, JordanOptions
from .inverses import InverseKind, RankMode
from .io import MatrixParseError, load_matrix, serialize_matrix

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_PARSE = 2
EXIT_IRRATIONAL = 3
EXIT_CHAIN = 4

KINDS = {
    "mp": InverseKind.MP,
    "uc": InverseKind.UC,
    "drazin": InverseKind.DRAZIN,
    "sc": InverseKind.SC_JORDAN,
    "sc-sym": InverseKind.SC_SYMMETRIC,
}


def _fail(code: int, reason: str, message: str) -> int:
    print(f"error:{reason}:{message}", file=sys.stderr)
    return code


def _residual_json(r):
    if isinstance(r, Fraction):
        return format_rational(r)
    return float(r)


def _parse_rank_mode(text: str):
    if text == "auto":
        return RankMode.threshold()
    if text.startswith("fixed:"):
        return RankMode.fixed(int(text.split(":", 1)[1]))
    if text.startswith("threshold:"):
        return RankMode.threshold(float(text.split(":", 1)[1]))
    raise ValueError(f"bad rank mode {text!r} (auto | fixed:K | threshold:T)")


def _jordan_opts(args) -> JordanOptions:
    return JordanOptions(
        cluster_tol=getattr(args, "cluster_tol", None),
        rank_tol=getattr(args, "rank_tol", None),
    )


def cmd_inv(args) -> int:
    try:
        m = load_matrix(args.matrix)
        kind = KINDS[args.kind]
        rank_mode = _parse_rank_mode(args.rank_mode)
    except (MatrixParseError, ValueError, KeyError) as e:
        return _fail(EXIT_PARSE, "parse", str(e))

    opts = _jordan_opts(args)
    backend = args.backend
    flags = []
    is_exact_input = isinstance(m, RationalMatrix)
    use_exact = backend == "exact" or (backend == "auto" and is_exact_input)
    if backend == "exact" and not is_exact_input:
        return _fail(EXIT_PARSE, "parse", "exact backend requires rational entries")
    # the UC and symmetric-form paths are float-only
    if kind in (InverseKind.UC, InverseKind.SC_SYMMETRIC):
        use_exact = False

    jordan_residual = None
    try:
        target = m if use_exact else gi._to_float(m)
        if use_exact and kind in (InverseKind.SC_JORDAN, InverseKind.DRAZIN):
            try:
                result = gi._inverse_by_kind(target, kind, "exact")
            except IrrationalSpectrum:
                if backend == "exact":
                    raise
                use_exact = False
                target = gi._to_float(m)
                flags.append("fell-back-to-float")
                result = _float_inverse(target, kind, rank_mode, opts)
        elif use_exact and kind is InverseKind.MP:
            result = ex.exact_mp_inverse(target)
        else:
            use_exact = False
            target = gi._to_float(m)
            result = _float_inverse(target, kind, rank_mode, opts)
        if not use_exact and kind in (InverseKind.SC_JORDAN, InverseKind.DRAZIN,
                                      InverseKind.SC_SYMMETRIC):
            jordan_residual = fc.numerical_jordan(np.asarray(target), opts).residual
    except IrrationalSpectrum as e:
        return _fail(EXIT_IRRATIONAL, "irrational-spectrum", str(e))
    except ChainFailure as e:
        return _fail(EXIT_CHAIN, "chain-failure", str(e))
    except ValueError as e:
        return _fail(EXIT_PARSE, "parse", str(e))

    report = gi.penrose_check(target, result)
    envelope = {
        "result": serialize_matrix(result),
        "backend": "exact" if use_exact else "float",
        "diagnostics": {
            "residual_axiom1": _residual_json(report.residual_axiom1),
            "residual_axiom2": _residual_json(report.residual_axiom2),
            "rank_in": report.rank_a,
            "rank_out": report.rank_x,
            "jordan_residual": jordan_residual,
            "flags": flags,
            "tolerances": {
                "rank_mode": args.rank_mode,
                "cluster_tol": opts.cluster_tol,
                "rank_tol": opts.rank_tol,
            },
        },
    }
    json.dump(envelope, sys.stdout)
    print()
    return EXIT_OK


def _float_inverse(target, kind, rank_mode, opts):
    if kind is InverseKind.MP:
        t = rank_mode.value if rank_mode.kind == "threshold" else None
        if rank_mode.kind == "fixed":
            return fc.mp_inverse_fixed_rank(target, int(rank_mode.value))
        return fc.mp_inverse(target, t)
    if kind is InverseKind.UC:
        return gi.uc_inverse(target)
    if kind is InverseKind.SC_JORDAN:
        return gi.sc_inverse(target, "float", rank_mode, opts)
    if kind is InverseKind.SC_SYMMETRIC:
        return gi.sc_inverse_symmetric(target, opts)
    if kind is InverseKind.DRAZIN:
        return gi.drazin_inverse(target, "float", opts)
    raise ValueError(f"unknown kind {kind}")


def cmd_jordan(args) -> int:
    try:
        m = load_matrix(args.matrix)
    except MatrixParseError as e:
        return _fail(EXIT_PARSE, "parse", str(e))
    is_exact_input = isinstance(m, RationalMatrix)
    use_exact = args.backend == "exact" or (args.backend == "auto" and is_exact_input)
    if args.backend == "exact" and not is_exact_input:
        return _fail(EXIT_PARSE, "parse", "exact backend requires rational entries")
    try:
        if use_exact:
            try:
                form = ex.exact_jordan(m)
            except IrrationalSpectrum:
                if args.backend == "exact":
                    raise
                use_exact = False
        if not use_exact:
            nform = fc.numerical_jordan(gi._to_float(m), _jordan_opts(args))
    except IrrationalSpectrum as e:
        return _fail(EXIT_IRRATIONAL, "irrational-spectrum", str(e))
    except ChainFailure as e:
        return _fail(EXIT_CHAIN, "chain-failure", str(e))
    except ValueError as e:
        return _fail(EXIT_PARSE, "parse", str(e))

    if use_exact:
        out = {
            "backend": "exact",
            "blocks": [[format_rational(lam), size] for lam, size in form.blocks],
            "P": serialize_matrix(form.p),
            "residual": "0",
        }
    else:
        out = {
            "backend": "float",
            "blocks": [[[lam.real, lam.imag], size] for lam, size in nform.blocks],
            "P": serialize_matrix(nform.p),
            "residual": nform.residual,
        }
    json.dump(out, sys.stdout)
    print()
    return EXIT_OK


def cmd_rga(args) -> int:
    try:
        m = load_matrix(args.matrix)
        result = gi.rga(m, KINDS[args.kind])
    except MatrixParseError as e:
        return _fail(EXIT_PARSE, "parse", str(e))
    except ValueError as e:
        return _fail(EXIT_PARSE, "parse", str(e))
    json.dump(serialize_matrix(result), sys.stdout)
    print()
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        if args.s_file:
            s = load_matrix(args.s_file)
            s = s.to_float().real if isinstance(s, RationalMatrix) else np.asarray(s).real
        else:
            s = simlab.random_nonsingular_s(args.seed)
        cfg = simlab.SimConfig(
            s_matrix=s,
            steps=args.steps,
            mode=args.mode,
            seed=args.seed,
            jordan_opts=_jordan_opts(args),
        )
    except (MatrixParseError, ValueError) as e:
        return _fail(EXIT_PARSE, "parse", str(e))
    records = simlab.run_experiment(cfg)
    simlab.write_csv(records, args.out)
    summary = simlab.summarize(records, args.spike_cutoff)
    json.dump(
        {
            "steps": cfg.steps,
            "mode": cfg.mode,
            "seed": args.seed,
            "out": args.out,
            "mean_err": summary.mean_err,
            "max_err": summary.max_err,
            "spike_count": summary.spike_count,
            "spike_cutoff": summary.spike_cutoff,
            "chain_failures": sum(r.chain_failed for r in records),
        },
        sys.stdout,
    )
    print()
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.trials < 1:
        return _fail(EXIT_PARSE, "usage", "--trials must be >= 1")
    names = list(vf.SUITES) if args.suite == "all" else [args.suite]
    results = vf.run_suites(names, args.trials, args.seed)
    ok = True
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"{status} suite={r.name} trials={r.trials} {r.detail}".rstrip())
        ok = ok and r.passed
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scinv",
        description="Generalized matrix inverses (MP, UC, Drazin, SC) with an "
        "exact rational oracle and a rotating fixed-rank experiment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_tols(p):
        p.add_argument("--cluster-tol", type=float, default=None)
        p.add_argument("--rank-tol", type=float, default=None)

    p = sub.add_parser("inv", help="compute a generalized inverse")
    p.add_argument("matrix")
    p.add_argument("--kind", choices=sorted(KINDS), default="sc")
    p.add_argument("--backend", choices=["auto", "exact", "float"], default="auto")
    p.add_argument("--rank-mode", default="auto",
                   help="auto | fixed:K | threshold:T")
    add_tols(p)
    p.set_defaults(func=cmd_inv)

    p = sub.add_parser("jordan", help="Jordan decomposition")
    p.add_argument("matrix")
    p.add_argument("--backend", choices=["auto", "exact", "float"], default="auto")
    add_tols(p)
    p.set_defaults(func=cmd_jordan)

    p = sub.add_parser("rga", help="relative gain array")
    p.add_argument("matrix")
    p.add_argument("--kind", choices=["mp", "uc"], default="uc")
    p.set_defaults(func=cmd_rga)

    p = sub.add_parser("simulate", help="rotating rank-2 experiment")
    p.add_argument("--steps", type=int, default=300)
    p.add_argument("--mode", choices=[simlab.MODE_THRESHOLD, simlab.MODE_FIXED_RANK],
                   default=simlab.MODE_FIXED_RANK)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--s-file", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--spike-cutoff", type=float, default=1e6)
    add_tols(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("--suite", choices=sorted(vf.SUITES) + ["all"], default="all")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse uses exit code 2 for usage errors already
        return int(e.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
