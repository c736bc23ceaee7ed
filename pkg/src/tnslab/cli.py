"""Command-line interface.

Subcommands: simulate, sweep, refine, attractor-probe, euler, examples,
verify.  Exit codes: 0 success, 1 invariant failure, 2 bad configuration,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments as exp
from . import verify as verify_mod
from .experiments import ConfigError
from .integrator import IntegrationError


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _cmd_simulate(args) -> int:
    d = _load_config(args.config)
    if args.seed is not None:
        d["seed"] = args.seed
    cfg = exp.run_config_from_dict(d)
    traj = exp.simulate_run(cfg)
    out = _out_dir(args)
    exp.write_trajectory_csv(traj, out / "trajectory.csv")
    summary = exp.run_summary(traj, cfg)
    _write_json(out / "summary.json", summary)
    print(f"simulate: {traj.terminated.value} at t={traj.t_end:g} "
          f"({len(traj)} samples) -> {out / 'trajectory.csv'}")
    return 0


def _cmd_euler(args) -> int:
    d = _load_config(args.config)
    if args.seed is not None:
        d["seed"] = args.seed
    d.setdefault("nu", 0.0)
    if float(d["nu"]) != 0.0:
        raise ConfigError("euler runs require nu = 0")
    d.setdefault("g", {"kind": "single_mode", "g1": 0.0})
    d.setdefault("u0", {"kind": "random_nonneg", "amplitude": 0.5})
    integ = d.setdefault("integrator", {})
    if isinstance(integ, dict):
        # conservation-grade default tolerances for inviscid runs
        integ.setdefault("rel_tol", 1e-9)
        integ.setdefault("abs_tol", 1e-14)
    cfg = exp.run_config_from_dict(d)
    traj = exp.simulate_run(cfg)
    out = _out_dir(args)
    exp.write_trajectory_csv(traj, out / "trajectory.csv")
    summary = exp.euler_summary(traj, cfg)
    _write_json(out / "summary.json", summary)
    drift = summary["euler"]["relative_energy_drift"]
    print(f"euler: {traj.terminated.value}, relative energy drift "
          f"{drift:.3e} -> {out / 'trajectory.csv'}")
    return 0


def _cmd_sweep(args) -> int:
    d = _load_config(args.config)
    if args.seed is not None:
        d["seed"] = args.seed
    cfg = exp.sweep_config_from_dict(d)
    result = exp.run_sweep(cfg, threads=args.threads)
    out = _out_dir(args)
    exp.write_sweep_csv(result, out / "sweep.csv")
    counts: dict[str, int] = {}
    for row in result.rows:
        counts[row.empirical.value] = counts.get(row.empirical.value, 0) + 1
    errors = [r.error for r in result.rows if r.error]
    _write_json(out / "sweep_summary.json", {
        "grid": [cfg.alpha_count, cfg.beta_count],
        "empirical_counts": counts,
        "errors": errors,
    })
    print(f"sweep: {len(result.rows)} points, {counts} "
          f"-> {out / 'sweep.csv'}")
    return 0


def _cmd_refine(args) -> int:
    d = _load_config(args.config)
    cfg = exp.refine_config_from_dict(d)
    rows = exp.run_refine(cfg, threads=args.threads)
    out = _out_dir(args)
    exp.write_refine_csv(rows, out / "refine.csv")
    for r in rows:
        peak = "error" if r.peak_blowup_norm is None \
            else f"{r.peak_blowup_norm:.6g}"
        print(f"refine: N={r.n_modes:4d} peak_blowup_norm={peak} "
              f"({r.terminated})")
    return 0


def _cmd_probe(args) -> int:
    d = _load_config(args.config)
    if args.seed is not None:
        d["seed"] = args.seed
    cfg = exp.probe_config_from_dict(d)
    report = exp.run_probe(cfg, threads=args.threads)
    out = _out_dir(args)
    _write_json(out / "probe.json", report)
    print(f"attractor-probe: min coordinate {report['min_coordinate']:.3e} "
          f"after burn-in {report['burn_in_levels'][-1]['burn_in']:g} "
          f"(stabilized={report['stabilized']})")
    return 0


def _cmd_examples(args) -> int:
    out = _out_dir(args)
    seed = args.seed if args.seed is not None else 0
    for kind in ("shift", "mode_decay", "frozen_first"):
        rows = exp.toy_radius_table(kind, seed=seed)
        exp.write_radius_csv(rows, out / f"{kind}.csv")
        print(f"examples: {kind} radii at {len(rows)} times "
              f"-> {out / (kind + '.csv')}")
    return 0


def _cmd_verify(args) -> int:
    results = verify_mod.run_battery(strict=args.strict)
    print(verify_mod.format_report(results))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tnslab",
        description="Numerical laboratory for tridiagonal cascade models")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--threads", type=int, default=1,
                       help="worker processes for parallel steps")

    for name, fn, doc in (
        ("simulate", _cmd_simulate, "run one simulation, write CSV+summary"),
        ("sweep", _cmd_sweep, "classify an (alpha, beta) grid"),
        ("refine", _cmd_refine, "peak-norm scaling across truncation levels"),
        ("attractor-probe", _cmd_probe,
         "ensemble probe of attractor nonnegativity"),
        ("euler", _cmd_euler, "inviscid run with conservation diagnostics"),
        ("examples", _cmd_examples, "toy-system attraction-radius tables"),
    ):
        p = sub.add_parser(name, help=doc)
        common(p)
        p.set_defaults(handler=fn)

    p = sub.add_parser("verify", help="run the invariant battery")
    p.add_argument("--strict", action="store_true",
                   help="tighten every error budget tenfold")
    p.set_defaults(handler=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except IntegrationError as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
