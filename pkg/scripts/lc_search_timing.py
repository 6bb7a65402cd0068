"""Time the bounded vanishing searches for the reduced obstruction classes.

For each family and prime, run lc_vanishing_search for k = 0..kmax and
record the outcome and wall time per k.  Outcomes are evidence only.
"""

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from liftlab import liftcheck as lc
from liftlab.groebner import ResourceLimitError

FAMILIES = {
    "quadratic3": lambda: lc.quadratic_family(3),
    "quadratic4": lambda: lc.quadratic_family(4),
    "pf4": lambda: lc.pfaffian_family(4),
    "det3": lambda: lc.determinant_family(3),
    "sym3": lambda: lc.symmetric_family(3),
}


@dataclass
class Config:
    families: list = field(default_factory=lambda: ["quadratic3", "pf4", "det3"])
    primes: list = field(default_factory=lambda: [2, 3])
    kmax: int = 3
    max_steps: int = 10**6


@dataclass
class Row:
    family: str
    p: int
    k: int
    outcome: str
    seconds: float


def run(cfg: Config) -> list[Row]:
    rows = []
    for name in cfg.families:
        fam = FAMILIES[name]()
        for p in cfg.primes:
            try:
                cls = lc.reduce_obstruction(fam.f, p, fam.zs)
            except ValueError as exc:
                # e.g. the symmetric split f = g + p h only exists at p = 2
                print(f"{name} p={p}: skipped ({exc})")
                continue
            for k in range(cfg.kmax + 1):
                t0 = time.perf_counter()
                try:
                    res = lc.lc_vanishing_search(cls, k, k_min=k, max_steps=cfg.max_steps)
                    out = res.outcome
                except ResourceLimitError:
                    out = "ResourceLimit"
                row = Row(name, p, k, out, round(time.perf_counter() - t0, 3))
                rows.append(row)
                print(f"{name:10s} p={p} k={k}: {out:12s} {row.seconds:8.3f} s", flush=True)
                if out != "NonzeroUpTo":
                    break
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description="bounded local cohomology search timings")
    ap.add_argument("--families", nargs="+", default=Config().families, choices=sorted(FAMILIES))
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--kmax", type=int, default=3)
    ap.add_argument("--json")
    a = ap.parse_args(argv)
    rows = run(Config(a.families, a.primes, a.kmax))
    if a.json:
        with open(a.json, "w") as fh:
            json.dump([asdict(r) for r in rows], fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
