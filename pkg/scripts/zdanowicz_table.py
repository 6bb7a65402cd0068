"""Zdanowicz verdicts for determinantal, Pfaffian and symmetric hypersurfaces.

    python scripts/zdanowicz_table.py --primes 2 3 5 --out zdanowicz.csv
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from liftlab.liftcheck import zdanowicz_check
from liftlab.matforms import MatrixOfVariables, determinant, pfaffian


@dataclass
class Config:
    primes: list = field(default_factory=lambda: [2, 3, 5])
    det_sizes: list = field(default_factory=lambda: [2, 3, 4])
    pf_sizes: list = field(default_factory=lambda: [4, 6])
    sym_sizes: list = field(default_factory=lambda: [3, 4])
    max_vars_p5: int = 10  # skip the 16-variable cells at p = 5 unless raised
    out: str | None = None


def hypersurfaces(cfg: Config):
    for n in cfg.det_sizes:
        yield "det", n, determinant(MatrixOfVariables.generic(n))
    for n in cfg.pf_sizes:
        yield "pf", n, pfaffian(MatrixOfVariables.alternating(n))
    for n in cfg.sym_sizes:
        yield "sym", n, determinant(MatrixOfVariables.symmetric(n))


def run(cfg: Config):
    rows = []
    for kind, n, f in hypersurfaces(cfg):
        for p in cfg.primes:
            if p >= 5 and f.ring.nvars > cfg.max_vars_p5:
                continue
            t0 = time.perf_counter()
            v = zdanowicz_check(f, p)
            rows.append({"family": kind, "n": n, "p": p, "verdict": v.outcome,
                         "seconds": round(time.perf_counter() - t0, 3)})
            print(f"{kind:4s} n={n} p={p}: {v.outcome:10s} {rows[-1]['seconds']:8.3f} s", flush=True)
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--max-vars-p5", type=int, default=10)
    ap.add_argument("--out")
    a = ap.parse_args(argv)
    run(Config(primes=a.primes, max_vars_p5=a.max_vars_p5, out=a.out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
