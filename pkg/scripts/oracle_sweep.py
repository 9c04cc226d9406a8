#!/usr/bin/env python3
"""Numeric oracle over many seeds and nerve sizes; prints the worst residual per check.

    python scripts/oracle_sweep.py --seeds 50 --charts 3 4 5
"""
import argparse
import sys
from collections import defaultdict

from grauert_cert.grauert import build_model
from grauert_cert.oracle import TOL_EXACT, TOL_TRUNCATION, instantiate, run_checks


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--charts", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--order", type=int, default=3)
    args = ap.parse_args()

    all_ok = True
    for n in args.charts:
        m = build_model(n, 2, 1, args.order)
        worst, tol = defaultdict(float), {}
        for seed in range(args.seeds):
            for s in run_checks(instantiate(m, None, args.samples, seed), TOL_TRUNCATION, TOL_EXACT):
                worst[s.name] = max(worst[s.name], s.max_abs)
                tol[s.name] = s.tol
        for name, v in worst.items():
            ok = v < tol[name]
            all_ok &= ok
            print(f"n={n} {name:24s} max {v:.3e}  tol {tol[name]:.0e}  {'ok' if ok else 'FAIL'}")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
