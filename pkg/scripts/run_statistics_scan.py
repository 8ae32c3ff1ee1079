#!/usr/bin/env python3
"""Scan pure-state photon statistics across label modulus per sector.

Shows the crossover of the second-order correlation from its weak-label
plateau (m+1)/(m+2) to the Poissonian value 1, together with the Mandel
parameter (negative everywhere: these states are always sub-Poissonian):

    python3 scripts/run_statistics_scan.py --sectors 0,1,5
"""

import argparse
import math
import sys

from landau_bgcs.bgcs import CoherentLabel, g2, mandel_q, mean_n, snr


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sectors", default="0,1,5")
    ap.add_argument("--rho-min", type=float, default=1e-3)
    ap.add_argument("--rho-max", type=float, default=50.0)
    ap.add_argument("--points", type=int, default=12)
    args = ap.parse_args(argv)

    sectors = [int(s) for s in args.sectors.split(",")]
    lo, hi = math.log(args.rho_min), math.log(args.rho_max)
    n = max(args.points, 2)
    rhos = [math.exp(lo + i * (hi - lo) / (n - 1)) for i in range(n)]

    print(f"{'rho':>10} {'m':>3} {'mean_n':>12} {'g2':>10} "
          f"{'plateau':>9} {'mandel_q':>11} {'snr':>10}")
    for m in sectors:
        plateau = (m + 1.0) / (m + 2.0)
        for rho in rhos:
            lab = CoherentLabel.from_polar(rho, 0.0)
            print(f"{rho:10.4g} {m:3d} {mean_n(lab, m):12.6g} "
                  f"{g2(lab, m):10.6f} {plateau:9.6f} "
                  f"{mandel_q(lab, m):11.4g} {snr(lab, m):10.5g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
