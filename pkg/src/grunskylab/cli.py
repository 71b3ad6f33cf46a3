"""Command-line entry point: ``grunskylab <command> ...``.

Exit codes: 0 all checks pass, 1 a theorem guard or verification failure,
2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

from . import bounds
from .coefficients import CoefficientError, grunsky_table, log_coefficients, odd_grunsky
from .scan import (
    ConfigError,
    CorpusSpec,
    TheoremGuardError,
    build_corpus,
    report,
    scan,
    summarize,
    theorem_guard,
    verify_corpus,
)
from .zoo import FAMILIES, FamilySpec, ZooError, realize

EXIT_OK, EXIT_GUARD, EXIT_USAGE = 0, 1, 2


def _family(args) -> FamilySpec:
    return FamilySpec(args.family, theta=args.theta, beta=args.beta)


def _write_csv(rows, header):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def cmd_logcoef(args) -> int:
    order = args.order if args.order is not None else args.n + 1
    lc = log_coefficients(realize(_family(args), order), args.n)
    _write_csv(
        [(n, repr(lc[n].real), repr(lc[n].imag), repr(abs(lc[n]))) for n in range(1, args.n + 1)],
        ["n", "re", "im", "abs"],
    )
    return EXIT_OK


def cmd_grunsky(args) -> int:
    fs = _family(args)
    if args.odd:
        if args.pmax % 2 == 0:
            raise CoefficientError("--pmax must be odd with --odd")
        table = odd_grunsky(realize(fs, args.pmax + 1), args.pmax)
    else:
        table = grunsky_table(realize(fs, 2 * args.pmax + 1), args.pmax)
    _write_csv(
        [(p, q, repr(w.real), repr(w.imag)) for p, q, w in table.entries()],
        ["p", "q", "re", "im"],
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = CorpusSpec.load(args.config)
    corpus = build_corpus(spec)
    records = verify_corpus(corpus, spec.order, args.tol, args.vectors, spec.seed)
    failed = [r for r in records if not r["pass"]]
    doc = {
        "functions": len(corpus),
        "order": spec.order,
        "tol": args.tol,
        "max_residual": max((r["residual"] for r in records), default=0.0),
        "passed": not failed,
        "records": records,
    }
    sys.stdout.write(json.dumps(doc, indent=1) + "\n")
    for r in failed:
        print(f"FAIL {r['function_id']} {r['relation_id']}: {r['residual']!r} > {r['tol']!r}",
              file=sys.stderr)
    return EXIT_OK if not failed else EXIT_GUARD


def cmd_maximize(args) -> int:
    res = bounds.maximize(args.objective, args.grid, args.rounds)
    sys.stdout.write(json.dumps({"objective": args.objective, **res.to_dict()}) + "\n")
    return EXIT_OK


def cmd_scan(args) -> int:
    spec = CorpusSpec.load(args.config)
    n_max = args.nmax if args.nmax is not None else spec.n_max
    if n_max != spec.n_max:
        spec = spec.replace(n_max=n_max)
    result = scan(build_corpus(spec), n_max, spec.order, workers=args.workers)
    data = report(result.records, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    for fid, reason in result.skipped:
        print(f"skipped {fid}: {reason}", file=sys.stderr)
    for n, s in summarize(result.records).items():
        tag = "proved" if s["proved"] else "conjecture"
        print(
            f"n={n} [{tag}] max d_n={s['max_d_n']!r} ({s['argmax']}) "
            f"bound={s['bound']!r} min slack={s['min_slack']!r}",
            file=sys.stderr,
        )
    try:
        theorem_guard(result.records)
    except TheoremGuardError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_GUARD
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grunskylab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def family_args(sp):
        sp.add_argument("--family", required=True, choices=FAMILIES)
        sp.add_argument("--theta", type=float, default=0.0, help="genKoebe angle (radians)")
        sp.add_argument("--beta", type=float, default=0.0, help="starlikePow exponent in [0, 1]")

    sp = sub.add_parser("logcoef", help="logarithmic coefficients of a family member")
    family_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--order", type=int, default=None)
    sp.set_defaults(func=cmd_logcoef)

    sp = sub.add_parser("grunsky", help="Grunsky coefficient table")
    family_args(sp)
    sp.add_argument("--pmax", type=int, required=True)
    sp.add_argument("--odd", action="store_true", help="odd-index table of sqrt(f(z^2))")
    sp.set_defaults(func=cmd_grunsky)

    sp = sub.add_parser("verify", help="identity and inequality residuals over a corpus")
    sp.add_argument("--config", required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--vectors", type=int, default=100, help="random Grunsky test vectors")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("maximize", help="maximize phi or psi over its domain")
    sp.add_argument("--objective", required=True, choices=("phi", "psi"))
    sp.add_argument("--grid", type=float, default=1e-3)
    sp.add_argument("--rounds", type=int, default=6)
    sp.set_defaults(func=cmd_maximize)

    sp = sub.add_parser("scan", help="consecutive-difference scan over a corpus")
    sp.add_argument("--config", required=True)
    sp.add_argument("--nmax", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_scan)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ZooError, CoefficientError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
