"""Command line front end: ``pairprob {compute,grid,slice,verify,simulate,bench}``.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 enumeration cap exceeded, 4 I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import sys
from typing import List, Optional

from . import bench, verification
from .closedform import closed_form_P, term_breakdown
from .model import Configuration
from .montecarlo import estimate_P
from .numerics import Backend, format_scalar
from .oracle import CapExceeded, oracle_P
from .recursion import MemoTable, memoized_P, recursive_P

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAP, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _evaluator(engine: str, backend: Backend):
    """A function (I, S) -> P for grid-like sweeps, sharing one memo table."""
    if engine == "recursive":
        return lambda I, S: recursive_P((I, S), backend)
    if engine == "memo":
        memo = MemoTable(backend)
        return lambda I, S: memoized_P((I, S), backend, memo)
    if engine == "closed":
        return lambda I, S: closed_form_P((I, S), backend)
    if engine == "oracle":
        def oracle(I, S):
            if S == 0:
                return backend.zero
            return backend.convert(oracle_P((I, S)))
        return oracle
    raise UsageError(f"engine {engine!r} cannot be used here")


@contextlib.contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        handle = open(path, "w", newline="")
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc
    with handle:
        yield handle


def cmd_compute(args) -> int:
    backend = Backend(args.backend)
    cfg = Configuration(args.I, args.S)
    if args.engine == "mc":
        if args.mc_samples is None:
            raise UsageError("--engine mc requires --mc-samples")
        if cfg.S == 0:
            raise UsageError("simulation needs at least one clean device")
        est = estimate_P(cfg, args.mc_samples, args.seed)
        value, text = est.estimate, repr(est.estimate)
        payload = {"I": cfg.I, "S": cfg.S, "engine": "mc", **est.to_json()}
    else:
        value = _evaluator(args.engine, backend)(cfg.I, cfg.S)
        text = format_scalar(value)
        payload = {"I": cfg.I, "S": cfg.S, "engine": args.engine, "backend": backend.value, "P": text}
    explain = None
    if args.explain:
        if cfg.I < 1 or cfg.S < 1:
            explain = []
        else:
            explain = [row.to_json() for row in term_breakdown(cfg, backend)]
    if args.format == "json":
        if explain is not None:
            payload["terms"] = explain
        print(json.dumps(payload))
    else:
        print(text)
        if explain is not None:
            print(json.dumps(explain, indent=2))
    return EXIT_OK


def cmd_grid(args) -> int:
    backend = Backend(args.backend)
    P = _evaluator(args.engine, backend)
    with _output(args.out) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["I", "S", "P"])
        for I in range(1, args.max + 1):
            for S in range(1, args.max + 1):
                writer.writerow([I, S, format_scalar(P(I, S))])
    return EXIT_OK


def _parse_range(text: str):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise UsageError(f"range must look like lo..hi, got {text!r}")
    lo, hi = int(lo), int(hi)
    if lo < 0 or hi < lo:
        raise UsageError(f"invalid range {text!r}")
    return lo, hi


def cmd_slice(args) -> int:
    backend = Backend(args.backend)
    P = _evaluator(args.engine, backend)
    lo, hi = _parse_range(args.range)
    if args.fix == "diagonal":
        point = lambda x: (x, x)  # noqa: E731
    else:
        which, _, n = args.fix.partition("=")
        if which not in ("infected", "clean") or not n.isdigit():
            raise UsageError(f"--fix must be infected=N, clean=N or diagonal, got {args.fix!r}")
        n = int(n)
        point = (lambda x: (n, x)) if which == "infected" else (lambda x: (x, n))
    with _output(args.out) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["x", "P"])
        for x in range(lo, hi + 1):
            writer.writerow([x, format_scalar(P(*point(x)))])
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = verification.run_all(args.max_exact, args.max_float, args.oracle_cap, args.ux_max)
    ok = all(r.passed for r in reports)
    if args.format == "json":
        print(json.dumps([r.to_json() for r in reports], indent=2))
    else:
        for r in reports:
            print(f"{r.status.upper():4}  {r.name:22} {r.range}  worst={r.discrepancy:g}")
            for line in r.failures[:5]:
                print(f"      {line}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_simulate(args) -> int:
    if args.S == 0:
        raise UsageError("simulation needs at least one clean device")
    est = estimate_P((args.I, args.S), args.samples, args.seed, workers=args.threads)
    if args.format == "plain":
        print(f"{est.estimate!r} +/- {est.std_error!r} ({est.hits}/{est.samples}, seed {est.seed})")
    else:
        print(json.dumps(est.to_json()))
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        sizes = bench.parse_sizes(args.sizes)
    except ValueError as exc:
        raise UsageError(f"bad --sizes: {exc}") from exc
    engines = [e for e in args.engines.split(",") if e]
    unknown = [e for e in engines if e not in bench.ENGINES]
    if unknown:
        raise UsageError(f"unknown engines {unknown}; choose from {sorted(bench.ENGINES)}")
    records: list = []
    with _output(args.out) as out:
        summaries = bench.bench_suite(sizes, engines, args.replicates, args.timeout, args.backend,
                                      records_out=records)
        bench.write_summaries(summaries, out)
    if args.raw_out:
        with _output(args.raw_out) as raw:
            bench.write_records(records, raw)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pairprob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats, default="plain"):
        p.add_argument("--backend", choices=[b.value for b in Backend], default="float")
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", default=None, help="output path, default stdout")

    p = sub.add_parser("compute", help="P(I,S) from one engine")
    p.add_argument("-I", type=_nonneg, required=True)
    p.add_argument("-S", type=_nonneg, required=True)
    p.add_argument("--engine", choices=["recursive", "memo", "closed", "oracle", "mc"], default="closed")
    p.add_argument("--mc-samples", type=_positive)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--explain", action="store_true", help="also print the per-j term breakdown")
    common(p, ["plain", "json"])
    p.set_defaults(func=cmd_compute, backend="exact")

    p = sub.add_parser("grid", help="CSV of P(I,S) on the square 1..max")
    p.add_argument("--max", type=_positive, required=True)
    p.add_argument("--engine", choices=["recursive", "memo", "closed", "oracle"], default="closed")
    common(p, ["plain", "csv"], "csv")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("slice", help="CSV of P along one line of the grid")
    p.add_argument("--fix", required=True, help="infected=N, clean=N or diagonal")
    p.add_argument("--range", required=True, help="lo..hi for the varying parameter")
    p.add_argument("--engine", choices=["recursive", "memo", "closed", "oracle"], default="closed")
    common(p, ["plain", "csv"], "csv")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("verify", help="run every equivalence and identity check")
    p.add_argument("--max-exact", type=_positive, default=30)
    p.add_argument("--max-float", type=_positive, default=50)
    p.add_argument("--oracle-cap", type=_positive, default=9)
    p.add_argument("--ux-max", type=_positive, default=20)
    common(p, ["plain", "json"], "json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of P(I,S)")
    p.add_argument("-I", type=_nonneg, required=True)
    p.add_argument("-S", type=_nonneg, required=True)
    p.add_argument("--samples", type=_positive, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive, default=1)
    common(p, ["plain", "json"], "json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="time engines on I=S sizes, CSV summary")
    p.add_argument("--sizes", default="5..30:5", help="lo..hi:step or comma list")
    p.add_argument("--engines", default="recursive,closed")
    p.add_argument("--replicates", type=_positive, default=10)
    p.add_argument("--timeout", type=float, default=60.0, help="seconds per run")
    p.add_argument("--raw-out", default=None, help="also write per-replicate records here")
    common(p, ["plain", "csv"], "csv")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pairprob: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"pairprob: error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(f"pairprob: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
