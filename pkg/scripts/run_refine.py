#!/usr/bin/env python3
"""Run the truncation-refinement study and write the scaling CSV.

Two presets cover the dichotomy: `runaway` (the default forced cascade
whose diagnostic-norm peak grows without bound as modes are added) and
`regular` (a contracting point whose peaks saturate under refinement).
"""

from __future__ import annotations

import argparse
import time

from tnslab.experiments import RefineConfig, run_refine, write_refine_csv
from tnslab.integrator import IntegratorConfig

PRESETS = {
    "runaway": lambda args: RefineConfig(
        n_values=tuple(args.n_values), t_end=args.t_end),
    "regular": lambda args: RefineConfig(
        alpha=1.0, beta=1.5, nu=1.0, g1=8.0,
        n_values=tuple(args.n_values), t_end=args.t_end,
        crossing_level=None,
        integrator=IntegratorConfig(rel_tol=1e-6, blowup_threshold=1e9)),
}


def parse_args() -> argparse.Namespace:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="artifacts/refine.csv",
                    help="output CSV path (default: %(default)s)")
    ap.add_argument("--preset", choices=sorted(PRESETS), default="runaway")
    ap.add_argument("--n-values", type=int, nargs="+",
                    default=[16, 32, 64, 128])
    ap.add_argument("--t-end", type=float, default=2.0)
    return ap.parse_args()


def main() -> None:
    args = parse_args()
    cfg = PRESETS[args.preset](args)
    t0 = time.perf_counter()
    rows = run_refine(cfg)
    write_refine_csv(rows, args.out)
    print(f"refine[{args.preset}]: N in {list(cfg.n_values)} "
          f"in {time.perf_counter() - t0:.1f}s -> {args.out}")


if __name__ == "__main__":
    main()
