"""Deterministic command-line front end: family configs in, certificates
and reports out.

Exit codes: 0 success, 2 config/input error, 3 search exhausted.  Data
files carry no timestamps; identical invocations write identical bytes.
Run metadata goes to stderr only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from decimal import Decimal
from pathlib import Path

from .curves import Curve, on_curve, parse_point
from .density import density_report
from .engine import (
    CSV_COLUMNS,
    billing_build,
    neron_check,
    scan,
)
from .errors import RankJumpError, SearchExhausted
from .families import WeierstrassPencil, family_from_json, validate_family
from .heights import canonical_height
from .polynomials import parse_poly
from .rationals import parse_rational


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode("ascii")


def _load_family(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return family_from_json(obj)


def _emit(payload: bytes, out: str | None) -> None:
    if out is None:
        sys.stdout.write(payload.decode("ascii"))
    else:
        Path(out).write_bytes(payload)


def cmd_validate(args) -> int:
    try:
        fam = _load_family(args.family)
    except (OSError, json.JSONDecodeError, RankJumpError) as exc:
        print(f"error: {exc}")
        return 2
    findings = validate_family(fam)
    for f in findings:
        print(f"{f.severity}: [{f.code}] {f.message}")
    if any(f.severity == "error" for f in findings):
        return 2
    if not findings:
        print("valid")
    return 0


def cmd_scan(args) -> int:
    fam = _load_family(args.family)
    errors = [f for f in validate_family(fam) if f.severity == "error"]
    if errors:
        for f in errors:
            print(f"error: [{f.code}] {f.message}", file=sys.stderr)
        return 2
    t0 = time.monotonic()
    report = scan(fam, args.bound, args.mode, Decimal(args.tol), jobs=args.jobs)
    params = report.certified_params()
    dens = density_report(fam, params)
    if args.format == "json":
        _emit(_json_bytes(report.to_json()), args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for cert in report.certificates:
            w.writerow(cert.csv_row())
        _emit(buf.getvalue().encode("ascii"), args.out)
    if args.out is not None:
        Path(args.out + ".density.json").write_bytes(_json_bytes(dens.to_json()))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_lo", "bin_hi", "count"])
        for row in dens.histogram.csv_rows():
            w.writerow(row)
        Path(args.out + ".histogram.csv").write_bytes(buf.getvalue().encode("ascii"))
    print(
        f"certified {report.certified} of {report.candidates} candidates, "
        f"{report.distinct_params} distinct params"
    )
    print(f"scan took {time.monotonic() - t0:.1f}s", file=sys.stderr)
    return 0


def cmd_billing(args) -> int:
    p = parse_poly(args.p.split(","))
    cert = billing_build(p, args.rank, args.bound, Decimal(args.tol))
    _emit(_json_bytes(cert.to_json()), args.out)
    return 0


def cmd_neron(args) -> int:
    fam = _load_family(args.family)
    if not isinstance(fam, WeierstrassPencil) or not fam.sections:
        print("error: neron needs a weierstrass_pencil family with sections", file=sys.stderr)
        return 2
    report = neron_check(fam, args.bound, Decimal(args.tol))
    _emit(_json_bytes(report.to_json()), args.out)
    return 0


def cmd_height(args) -> int:
    a_str, b_str = args.curve.split(",")
    C = Curve(parse_rational(a_str), parse_rational(b_str))
    P = parse_point(args.point)
    if not on_curve(C, P):
        print("error: point is not on the curve", file=sys.stderr)
        return 2
    est = canonical_height(C, P, Decimal(args.tol))
    sys.stdout.write(_json_bytes(est.to_json()).decode("ascii"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rankjump",
        description="Certified Mordell-Weil rank jumps on elliptic fibrations over Q.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a family JSON against its hypotheses")
    v.add_argument("family")
    v.set_defaults(fn=cmd_validate)

    s = sub.add_parser("scan", help="enumerate witnesses and certify rank jumps")
    s.add_argument("--family", required=True)
    s.add_argument("--bound", required=True, type=int)
    s.add_argument("--mode", choices=["total-first", "fiber-first"], default="total-first")
    s.add_argument("--tol", default="1e-4")
    s.add_argument("--out", default=None)
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(fn=cmd_scan)

    b = sub.add_parser("billing", help="multiquadratic rank-growth certificate")
    b.add_argument("--p", required=True, help="ascending coefficients, e.g. 0,-1,0,1 for x^3-x")
    b.add_argument("--rank", required=True, type=int)
    b.add_argument("--bound", required=True, type=int)
    b.add_argument("--tol", default="1e-4")
    b.add_argument("--out", default=None)
    b.set_defaults(fn=cmd_billing)

    n = sub.add_parser("neron", help="empirical specialization-injectivity check")
    n.add_argument("--family", required=True)
    n.add_argument("--bound", required=True, type=int)
    n.add_argument("--tol", default="1e-4")
    n.add_argument("--out", default=None)
    n.set_defaults(fn=cmd_neron)

    h = sub.add_parser("height", help="canonical height of one point")
    h.add_argument("--curve", required=True, help="A,B as rationals")
    h.add_argument("--point", required=True, help='"x,y" or "inf"')
    h.add_argument("--tol", default="1e-6")
    h.set_defaults(fn=cmd_height)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except SearchExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (RankJumpError, OSError, json.JSONDecodeError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
