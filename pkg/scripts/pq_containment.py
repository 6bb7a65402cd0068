"""Check p^2 q inside Delta over QQ and report basis size, timings and denominators.

Also runs the drop-one-generator negative controls.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass

from liftlab.verify import check_pq_containment


@dataclass
class Config:
    certify: bool = True
    controls: bool = True
    control_limit: int = 200


def run(cfg: Config) -> dict:
    t0 = time.perf_counter()
    out = check_pq_containment(certify=cfg.certify)
    result = {"verdict": out.verdict, **json.loads(out.certificate), "seconds": round(time.perf_counter() - t0, 2)}
    print(json.dumps(result))
    if cfg.controls:
        for drop in range(6):
            c = check_pq_containment(drop=drop, certify=False, limit=cfg.control_limit)
            info = json.loads(c.certificate)
            print(f"drop generator {drop}: {c.verdict} ({info['nonzero']}/{info['products']} nonzero)")
    return result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--no-certify", action="store_true", help="reduce only, skip cofactor lifting")
    ap.add_argument("--no-controls", action="store_true")
    a = ap.parse_args(argv)
    res = run(Config(certify=not a.no_certify, controls=not a.no_controls))
    return 0 if res["verdict"] == "IN" else 1


if __name__ == "__main__":
    sys.exit(main())
