"""``liftlab`` command line interface."""

from __future__ import annotations

import argparse
import logging
import sys

from .groebner import Ideal, ResourceLimitError, buchberger
from .polyring import QQ, PolyRing, PolySyntaxError, Zmod, ZZ, is_prime, parse, render, variables_in
from .pops import frobenius_trace_apply, phi
from . import verify

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="liftlab", description="characteristic-p lifting checks")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run registered checks")
    v.add_argument("check_id", help="check id or 'all'")
    v.add_argument("--p", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--m", type=int)
    v.add_argument("--kmax", type=int)
    v.add_argument("--bound", type=int)
    v.add_argument("--format", default="json")
    v.add_argument("--out")
    v.add_argument("--cert-dir")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--list", action="store_true", help="print the planned cells and exit")

    g = sub.add_parser("groebner", help="reduced Groebner basis of an ideal file")
    g.add_argument("--ideal", required=True)
    g.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
    g.add_argument("--modulus", default="q", help="a prime p, or q for the rationals")
    g.add_argument("--vars", help="variable order (default: order of first appearance)")

    d = sub.add_parser("pderive", help="phi_p of a polynomial over ZZ")
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--expr", required=True)

    t = sub.add_parser("trace", help="apply the e-th Frobenius trace of F_p[x]/(f)")
    t.add_argument("--f", required=True)
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--e", type=int, default=1)
    t.add_argument("--apply", required=True)
    return ap


def _usage(msg: str) -> int:
    sys.stderr.write(f"liftlab: error: {msg}\n")
    return EXIT_USAGE


def cmd_verify(args) -> int:
    if args.format not in ("json", "text"):
        return _usage(f"unknown format {args.format!r}")
    overrides = {"p": args.p, "n": args.n, "m": args.m, "kmax": args.kmax, "bound": args.bound}
    try:
        jobs = verify.plan(args.check_id, overrides)
        if args.list:
            for cid, params in jobs:
                print(cid, params)
            return EXIT_OK
        if not jobs:
            return _usage("no cells match the given parameters")
        reports = verify.run_many(jobs, max(1, args.workers), args.cert_dir)
    except verify.UsageError as exc:
        return _usage(str(exc))
    try:
        return verify.emit_report(reports, args.format, args.out)
    except OSError as exc:
        sys.stderr.write(f"liftlab: cannot write report: {exc}\n")
        return EXIT_USAGE


def cmd_groebner(args) -> int:
    try:
        with open(args.ideal) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        return _usage(str(exc))
    if args.modulus == "q":
        coeffs = QQ
    else:
        try:
            m = int(args.modulus)
        except ValueError:
            return _usage("--modulus must be a prime or q")
        if not is_prime(m):
            return _usage(f"modulus {m} is not prime")
        coeffs = Zmod(m)
    try:
        if args.vars:
            names = args.vars.replace(",", " ").split()
        else:
            names = []
            for ln in lines:
                for v in variables_in(ln):
                    if v not in names:
                        names.append(v)
        R = PolyRing(coeffs, tuple(names) or ("x",))
        gens = [R.parse(ln) for ln in lines]
    except (PolySyntaxError, ValueError) as exc:
        return _usage(str(exc))
    try:
        G = buchberger(Ideal(gens, R), args.order)
    except ResourceLimitError as exc:
        sys.stderr.write(f"liftlab: {exc}\n")
        return EXIT_RESOURCE
    for g in G.basis:
        print(render(g))
    return EXIT_OK


def cmd_pderive(args) -> int:
    if not is_prime(args.p):
        return _usage(f"{args.p} is not prime")
    try:
        f = parse(args.expr, coeffs=ZZ)
    except (PolySyntaxError, ValueError) as exc:
        return _usage(str(exc))
    print(render(phi(f, args.p)))
    return EXIT_OK


def cmd_trace(args) -> int:
    if not is_prime(args.p):
        return _usage(f"{args.p} is not prime")
    if args.e < 1:
        return _usage("--e must be positive")
    try:
        names = []
        for text in (args.f, args.apply):
            for v in variables_in(text):
                if v not in names:
                    names.append(v)
        R = PolyRing(Zmod(args.p), tuple(names) or ("x",))
        f, r = R.parse(args.f), R.parse(args.apply)
    except (PolySyntaxError, ValueError) as exc:
        return _usage(str(exc))
    print(render(frobenius_trace_apply(f, args.p, args.e, r)))
    return EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    handlers = {"verify": cmd_verify, "groebner": cmd_groebner, "pderive": cmd_pderive, "trace": cmd_trace}
    return handlers[args.cmd](args)


if __name__ == "__main__":
    sys.exit(main())
