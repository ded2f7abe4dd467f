#!/usr/bin/env python3
"""Scan the code-averaged residual error versus block length.

For each correlated rate gammaR the scan sweeps n at fixed correctable
fraction q (t = round(q n) - 1) and prints the residual next to its
large-n asymptote, as CSV on stdout.  With gammaR = 0 the asymptote
column is empty: the independent limit decays to zero instead of
saturating.
"""

import argparse
import sys

from corrqec import DecoherencePair, ResidualQuery, asymptotic_residual, code_avg_residual


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gamma0", type=float, default=0.01)
    ap.add_argument("--gammar", type=float, action="append",
                    help="correlated rate, repeatable (default: 0.01 0.005 0.0025 0.00125)")
    ap.add_argument("--q", type=float, default=0.05,
                    help="target correctable error fraction setting t")
    ap.add_argument("--n-min", type=int, default=100)
    ap.add_argument("--n-max", type=int, default=4000)
    ap.add_argument("--points", type=int, default=20)
    return ap.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    gammars = args.gammar if args.gammar else [0.01, 0.005, 0.0025, 0.00125]
    step = (args.n_max / args.n_min) ** (1.0 / (args.points - 1)) if args.points > 1 else 1.0
    ns = sorted({max(2, round(args.n_min * step**i)) for i in range(args.points)})
    print("gammaR,n,t,delta,delta_asymptote")
    for gr in gammars:
        pair = DecoherencePair(args.gamma0, gr)
        asym = asymptotic_residual(args.q, pair).exact if gr > 0.0 else None
        for n in ns:
            t = max(0, round(args.q * n) - 1)
            delta = code_avg_residual(ResidualQuery(n=n, t=t, pair=pair))
            tail = f"{asym:.17g}" if asym is not None else ""
            print(f"{gr:.17g},{n},{t},{delta:.17g},{tail}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
