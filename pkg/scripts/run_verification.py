#!/usr/bin/env python3
"""Run every verification suite and print a residual table.

Exit status is nonzero when any identity misses its tolerance, so the
script doubles as a cheap CI gate:

    python3 scripts/run_verification.py
    python3 scripts/run_verification.py --suite thermo --tol 1e-8
"""

import argparse
import sys
import time

from landau_bgcs.checks import SUITE_NAMES, run_suite


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", default="all", choices=SUITE_NAMES)
    ap.add_argument("--tol", type=float, default=None,
                    help="override every tolerance in the suite")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    results = run_suite(args.suite, tol=args.tol)
    elapsed = time.perf_counter() - t0

    width = max(len(c.name) for c in results)
    for c in results:
        mark = "ok  " if c.passed else "FAIL"
        print(f"{mark} {c.name:<{width}}  residual {c.residual:9.3e}  "
              f"tolerance {c.tolerance:g}")
    n_bad = sum(not c.passed for c in results)
    print(f"{len(results) - n_bad}/{len(results)} checks passed "
          f"in {elapsed:.1f} s")
    return 1 if n_bad else 0


if __name__ == "__main__":
    sys.exit(main())
