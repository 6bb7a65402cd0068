"""Run the trace-lifting obstruction over families and primes, printing the evidence."""

import argparse
import json
import sys
from dataclasses import dataclass, field

from liftlab import liftcheck as lc


@dataclass
class Config:
    cells: list = field(default_factory=lambda: [("quadratic", 3, 2), ("quadratic", 3, 3), ("pf", 4, 2), ("pf", 4, 3), ("det", 3, 2), ("sym", 3, 2)])
    kmax: int = 3


def family(kind, n):
    return {"quadratic": lc.quadratic_family, "pf": lc.pfaffian_family, "det": lc.determinant_family, "sym": lc.symmetric_family}[kind](n)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=3)
    a = ap.parse_args(argv)
    cfg = Config(kmax=a.kmax)
    for kind, n, p in cfg.cells:
        fam = family(kind, n)
        v = lc.trace_lift_obstruction(fam.f, p, k_max=cfg.kmax, family=fam)
        print(f"{kind} n={n} p={p}: {v.outcome}  {json.dumps(v.evidence, sort_keys=True)}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
