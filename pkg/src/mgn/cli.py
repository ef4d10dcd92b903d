"""Command-line front end.

    mgn eval "<kappa1^2 tau0 tau0>_g=1" [--breakdown]
    mgn table --max-dim 6 --format json
    mgn volume --genus 1 --npoints 2 [--at 1.0,2.0]
    mgn verify --suite all --tol 1e-8
    mgn gf --gmax 1 --dim-max 3

Results go to stdout, diagnostics to stderr.  Exit status: 0 success,
1 verification failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .engine import BaseCaseError, BoundExceededError, Engine
from .keys import CorrelatorKey, CorrelatorSyntaxError, EmptyPointsError, UnstableError, parse_key
from .suites import SUITES, run_suite
from .volumes import format_fraction, generating_function_coeffs, volume_polynomial

__all__ = ["parse_correlator", "run", "main"]

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def parse_correlator(text: str) -> CorrelatorKey:
    return parse_key(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mgn", description="Exact mixed kappa_1/psi intersection numbers.")
    parser.add_argument("--cache-file", default=os.environ.get("MGN_CACHE"), help="persistent memo file")
    parser.add_argument("--cache-cap", type=int, default=None, help="maximum cached entries (LRU)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate one correlator")
    p.add_argument("expr")
    p.add_argument("--breakdown", action="store_true")

    p = sub.add_parser("table", help="all dimension-matching correlators up to a bound")
    p.add_argument("--max-dim", type=int, required=True)
    p.add_argument("--gmax", type=int, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")

    p = sub.add_parser("volume", help="Weil-Petersson volume polynomial")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--npoints", type=int, required=True)
    p.add_argument("--at", default=None, help="comma-separated boundary lengths")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--quiet", action="store_true", help="only print failures and the summary")

    p = sub.add_parser("gf", help="generating function coefficients")
    p.add_argument("--gmax", type=int, required=True)
    p.add_argument("--dim-max", type=int, required=True)
    p.add_argument("--format", choices=("json", "text"), default="text")
    return parser


def _cmd_eval(args, engine: Engine, out) -> int:
    key = parse_correlator(args.expr)
    value = engine.intersection_number(key)
    print(format_fraction(value), file=out)
    if args.breakdown:
        try:
            terms = engine.recursion_terms(key)
        except (BaseCaseError, ValueError) as exc:
            print(f"no breakdown: {exc}", file=sys.stderr)
        else:
            print(f"lhs factor {format_fraction(terms.lhs_factor)}", file=out)
            for label, v in terms.boundary_terms:
                print(f"  {label}: {format_fraction(v)}", file=out)
    return EXIT_OK


def _table_rows(args, engine: Engine):
    g_max = args.gmax if args.gmax is not None else (args.max_dim + 3) // 3
    n_max = args.nmax if args.nmax is not None else args.max_dim + 3
    return engine.compute_table(args.max_dim, g_max, n_max)


def _cmd_table(args, engine: Engine, out) -> int:
    rows = _table_rows(args, engine)
    if args.format == "json":
        data = [{"g": k.g, "k0": k.k0, "ks": list(k.ks), "value": format_fraction(v)} for k, v in rows]
        print(json.dumps(data), file=out)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["g", "k0", "ks", "numerator", "denominator"])
        for k, v in rows:
            writer.writerow([k.g, k.k0, ";".join(map(str, k.ks)), v.numerator, v.denominator])
        out.write(buf.getvalue())
    else:
        for k, v in rows:
            print(f"{k} = {format_fraction(v)}", file=out)
    s = engine.stats
    print(
        f"{len(rows)} entries; cache hits={s.hits} misses={s.misses} "
        f"evictions={s.evictions} hit-rate={s.hit_rate:.3f}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_volume(args, engine: Engine, out) -> int:
    poly = volume_polynomial(args.genus, args.npoints, engine)
    if args.json:
        print(json.dumps(poly.to_json()), file=out)
    else:
        print(poly, file=out)
    if args.at is not None:
        try:
            lengths = [float(x) for x in args.at.split(",")]
        except ValueError:
            raise CorrelatorSyntaxError("bad length list", 0, args.at)
        print(repr(poly(lengths)), file=out)
    return EXIT_OK


def _cmd_verify(args, engine: Engine, out) -> int:
    failed = 0
    for report in run_suite(args.suite, args.tol, engine):
        for r in report.results:
            if not r.ok or not args.quiet:
                status = "PASS" if r.ok else "FAIL"
                line = f"{status} [{report.name}] {r.label}"
                if not r.ok and r.detail:
                    line += f" ({r.detail})"
                print(line, file=out)
        print(f"{report.name}: {report.passed} passed, {report.failed} failed", file=out)
        failed += report.failed
    print("OK" if not failed else f"FAILED ({failed})", file=out)
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


def _cmd_gf(args, engine: Engine, out) -> int:
    coeffs = generating_function_coeffs(args.gmax, args.dim_max, engine)
    if args.format == "json":
        data = [
            {"g": g, "s": k0, "t": list(mult), "coeff": format_fraction(c)} for g, k0, mult, c in coeffs
        ]
        print(json.dumps(data), file=out)
        return EXIT_OK
    for g, k0, mult, c in coeffs:
        mono = []
        if k0:
            mono.append("s" if k0 == 1 else f"s^{k0}")
        for a, m in enumerate(mult):
            if m:
                mono.append(f"t{a}" if m == 1 else f"t{a}^{m}")
        print(f"g={g} {'*'.join(mono)}: {format_fraction(c)}", file=out)
    return EXIT_OK


_COMMANDS = {
    "eval": _cmd_eval,
    "table": _cmd_table,
    "volume": _cmd_volume,
    "verify": _cmd_verify,
    "gf": _cmd_gf,
}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.cache_cap is not None and args.cache_cap < 0:
        print("mgn: error: --cache-cap must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    engine = Engine(cache_cap=args.cache_cap)
    if args.cache_file and os.path.exists(args.cache_file):
        try:
            engine.load(args.cache_file)
        except (OSError, ValueError) as exc:
            print(f"mgn: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        code = _COMMANDS[args.command](args, engine, out)
    except CorrelatorSyntaxError as exc:
        print(f"mgn: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnstableError, EmptyPointsError, BoundExceededError, ValueError) as exc:
        print(f"mgn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.cache_file:
        engine.save(args.cache_file)
    return code


def main() -> None:
    sys.exit(run())
