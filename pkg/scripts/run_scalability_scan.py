#!/usr/bin/env python3
"""Check whether a growing code family can beat a bath's decoherence budget.

Runs the scalability verdict for several spectral exponents s on a
geometric grid of block lengths and prints one table per exponent: the
achieved correlated rate at geometry scale a = (n/n0)^y against the
shrinking per-block budget gamma_max(n).
"""

import argparse
import sys

from corrqec import ScalingScenario, geometric_grid, scalability_verdict


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s", type=float, action="append",
                    help="spectral exponent, repeatable (default: 1.0 2.0 2.5)")
    ap.add_argument("--coupling", type=float, default=0.002)
    ap.add_argument("--y", type=float, default=1.0 / 3.0,
                    help="growth exponent for spacing and cycle time")
    ap.add_argument("--n-max", type=float, default=1e9)
    ap.add_argument("--points", type=int, default=29)
    return ap.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    exponents = args.s if args.s else [1.0, 2.0, 2.5]
    grid = geometric_grid(100.0, args.n_max, args.points)
    for s in exponents:
        scen = ScalingScenario(
            s=s, y=args.y, r0=0.5, tau0=1.0, n0=100.0, T=1.0, Omega=10.0,
            q=0.05, mu=1.0, b=1.0, coupling=args.coupling,
        )
        report = scalability_verdict(scen, grid)
        print(f"# s = {s:g}: verdict = {report.verdict}", end="")
        if report.crossover_n is not None:
            print(f", first violation at n = {report.crossover_n:.6g}")
        else:
            print()
        print("n,scale,gamma_r,gamma_max,satisfied")
        for row in report.rows:
            print(f"{row.n:.6g},{row.a:.6g},{row.gamma_r:.17g},"
                  f"{row.budget:.17g},{row.satisfied}")
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
