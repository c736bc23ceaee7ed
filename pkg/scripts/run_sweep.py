#!/usr/bin/env python3
"""Run the (alpha, beta) regime sweep and write the classification CSV.

Every grid point gets one forced cascade run; the row records the
analytic regime label next to the empirical one so the two columns can
be compared downstream (regime-map figures, consistency checks).
"""

from __future__ import annotations

import argparse
import os
import time

from tnslab.experiments import SweepConfig, run_sweep, write_sweep_csv


def parse_args() -> argparse.Namespace:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="artifacts/sweep.csv",
                    help="output CSV path (default: %(default)s)")
    ap.add_argument("--alpha-count", type=int, default=32)
    ap.add_argument("--beta-count", type=int, default=32)
    ap.add_argument("--alpha-min", type=float, default=0.2)
    ap.add_argument("--alpha-max", type=float, default=2.0)
    ap.add_argument("--beta-min", type=float, default=1.05)
    ap.add_argument("--beta-max", type=float, default=3.5)
    ap.add_argument("--nu", type=float, default=1.0)
    ap.add_argument("--g1", type=float, default=8.0)
    ap.add_argument("--n-modes", type=int, default=32)
    ap.add_argument("--t-end", type=float, default=6.0)
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    return ap.parse_args()


def main() -> None:
    args = parse_args()
    cfg = SweepConfig(
        alpha_min=args.alpha_min, alpha_max=args.alpha_max,
        alpha_count=args.alpha_count,
        beta_min=args.beta_min, beta_max=args.beta_max,
        beta_count=args.beta_count,
        nu=args.nu, g1=args.g1, n_modes=args.n_modes, t_end=args.t_end)
    t0 = time.perf_counter()
    result = run_sweep(cfg, threads=args.threads)
    write_sweep_csv(result, args.out)
    n = len(result.rows)
    print(f"sweep: {n} points in {time.perf_counter() - t0:.1f}s "
          f"-> {args.out}")


if __name__ == "__main__":
    main()
