"""Command-line front end: ``pgtrans verify|decompose|pbw|sheaf``.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or parse error.
Reports are also written to $PGTRANS_REPORT_DIR when it is set.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import scenario as scenario_mod
from .sheaf import SheafModule, partition_check
from .suites import SUITES, run_suite
from .translate import TranslatedModule, spectral_decomposition
from .ugl2 import ParseError, format_element, parse, reduce_central

REPORT_ENV = "PGTRANS_REPORT_DIR"

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a rational number: %r" % text) from None


def _write_report(name, text):
    root = os.environ.get(REPORT_ENV)
    if not root:
        return None
    os.makedirs(root, exist_ok=True)
    path = os.path.join(root, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def _emit(text, report_name):
    print(text)
    _write_report(report_name, text + "\n")


def _load_scenario(ref):
    """A path, or the name of a bundled scenario."""
    if os.path.exists(ref):
        return scenario_mod.load(ref)
    if ref in scenario_mod.bundled_names():
        return scenario_mod.bundled(ref)
    raise UsageError("no such scenario file or bundled scenario: %s" % ref)


# -- subcommands ------------------------------------------------------------------

def cmd_verify(args):
    if args.suite not in SUITES:
        raise UsageError("unknown suite %r; choose from %s" % (args.suite, ", ".join(SUITES)))
    checks = run_suite(args.suite)
    failed = [c for c in checks if not c.passed]
    if args.json:
        text = json.dumps({"suite": args.suite, "passed": not failed, "checks": [c.as_record() for c in checks]},
                          indent=2)
    else:
        lines = [c.line() for c in checks]
        lines.append("%s: %d/%d checks passed" % (args.suite, len(checks) - len(failed), len(checks)))
        text = "\n".join(lines)
    _emit(text, "verify-%s.%s" % (args.suite, "json" if args.json else "txt"))
    return FAILED if failed else OK


def cmd_decompose(args):
    sc = _load_scenario(args.file)
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    D = sc.build(trunc=args.trunc, alpha=args.alpha)
    try:
        TM = TranslatedModule(D, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = spectral_decomposition(TM)
    if args.json:
        record = report.as_record()
        record["scenario"] = sc.name
        text = json.dumps(record, indent=2)
    else:
        text = report.table()
    _emit(text, "decompose-%s-k%d.%s" % (sc.name, args.k, "json" if args.json else "txt"))
    return OK if report.complete() else FAILED


def cmd_pbw(args):
    x = parse(args.expr)
    if args.central:
        parts = args.central.split(",")
        if len(parts) != 2:
            raise UsageError("--central expects zeta,mu")
        zeta, mu = (_rational(s.strip()) for s in parts)
        x = reduce_central(x, zeta, mu)
    text = format_element(x)
    if args.json:
        text = json.dumps({"input": args.expr, "central": args.central, "normal_form": text})
    print(text)
    return OK


def cmd_sheaf(args):
    sc = _load_scenario(args.scenario)
    if args.level < 0:
        raise UsageError("--level must be non-negative")
    D = sc.build(trunc=args.trunc)
    try:
        S = SheafModule(D)
        total, idem, orth = partition_check(D, args.level)
    except ValueError as exc:
        raise UsageError("%s (raise --trunc)" % exc) from None
    q = S.p ** args.level
    prec = D.trunc // q - args.level
    rows = [{"center": i, "level": args.level, "precision": prec, "idempotent": idem[i]} for i in range(q)]
    ok = total and orth and all(idem)
    if args.json:
        text = json.dumps({"scenario": sc.name, "prime": S.p, "level": args.level, "balls": rows,
                           "sum_is_identity": total, "orthogonal": orth, "passed": ok}, indent=2)
    else:
        lines = ["%s: p=%d, level %d, compared mod X^%d" % (sc.name, S.p, args.level, prec),
                 "%-8s %s" % ("ball", "Res^2=Res")]
        for r in rows:
            lines.append("%-8s %s" % ("%d+%dZp" % (r["center"], q) if args.level else "Zp",
                                      "yes" if r["idempotent"] else "no"))
        lines.append("sum of Res = id: %s" % ("yes" if total else "no"))
        lines.append("Res_i Res_j = 0 (i != j): %s" % ("yes" if orth else "no"))
        text = "\n".join(lines)
    _emit(text, "sheaf-%s-n%d.%s" % (sc.name, args.level, "json" if args.json else "txt"))
    return OK if ok else FAILED


# -- entry point ----------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="pgtrans", description="Exact checks for translated (phi, Gamma)-modules.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", help="one of: " + ", ".join(SUITES))
    v.add_argument("--json", action="store_true", help="machine-readable output")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", help="Casimir decomposition of D (x) V_k for a scenario")
    d.add_argument("file", help="scenario file (YAML) or bundled scenario name")
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--alpha", type=_rational, default=None, help="override the gl2 parameter")
    d.add_argument("--trunc", type=int, default=None, help="override the truncation N")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_decompose)

    p = sub.add_parser("pbw", help="PBW normal form of an element of U(gl2)")
    p.add_argument("expr")
    p.add_argument("--central", metavar="ZETA,MU", help="reduce modulo (z - ZETA, c - MU)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pbw)

    s = sub.add_parser("sheaf", help="ball-partition table for Res at a given level")
    s.add_argument("--scenario", required=True)
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--trunc", type=int, default=None)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_sheaf)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        return args.func(args)
    except (UsageError, scenario_mod.ScenarioError, argparse.ArgumentTypeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE
    except ParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        print("  " + args.expr, file=sys.stderr)
        print("  " + " " * exc.pos + "^", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
