"""Experiment drivers, configuration, and output formats.

Everything the command line exposes lives here: single runs, the
(alpha, beta) regime-map sweep, N-refinement scaling studies, attractor
positivity probes, and the toy-system radius probes.  Outputs are CSV
files with 17-significant-digit numbers plus JSON run summaries; a fixed
seed makes every artifact byte-reproducible.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from . import diagnostics
from .integrator import IntegratorConfig, Termination, Trajectory, integrate
from .model import (Forcing, ModelParams, default_blowup_gamma, norms,
                    single_mode)
from . import toysystems as toys

__all__ = [
    "ConfigError",
    "AnalyticLabel",
    "EmpiricalLabel",
    "RegimeLabel",
    "RunConfig",
    "SweepConfig",
    "SweepRow",
    "SweepResult",
    "RefineConfig",
    "RiccatiStudyConfig",
    "ProbeConfig",
    "analytic_label",
    "run_config_from_dict",
    "sweep_config_from_dict",
    "refine_config_from_dict",
    "probe_config_from_dict",
    "build_initial_state",
    "simulate_run",
    "run_summary",
    "euler_summary",
    "write_trajectory_csv",
    "run_sweep",
    "write_sweep_csv",
    "run_refine",
    "write_refine_csv",
    "run_riccati_study",
    "run_probe",
    "toy_radius_table",
    "write_radius_csv",
    "fmt17",
]


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


def fmt17(x: float | None) -> str:
    """17-significant-digit decimal serialization; None becomes empty."""
    if x is None:
        return ""
    return f"{float(x):.17g}"


# ---------------------------------------------------------------------------
# regime labels


class AnalyticLabel(enum.Enum):
    GLOBAL_REGULAR = "global_regular"
    LOCAL_REGULAR = "local_regular"
    BLOWUP = "blowup"
    GAP = "gap"


class EmpiricalLabel(enum.Enum):
    BOUNDED_ENSTROPHY = "bounded_enstrophy"
    TRANSIENT_GROWTH = "transient_growth"
    QUASI_BLOWUP = "quasi_blowup"
    UNRESOLVED = "unresolved"


def analytic_label(alpha: float, beta: float) -> AnalyticLabel:
    """Classify (alpha, beta) by the three regularity inequalities.

    beta <= alpha+1 gives global regularity; else 2 beta < 3 alpha + 2
    gives local regularity; else 2 beta > 3 alpha + 3 gives blow-up; the
    remaining strip is an open question and reports "gap".
    """
    if beta <= alpha + 1:
        return AnalyticLabel.GLOBAL_REGULAR
    if 2.0 * beta < 3.0 * alpha + 2.0:
        return AnalyticLabel.LOCAL_REGULAR
    if 2.0 * beta > 3.0 * alpha + 3.0:
        return AnalyticLabel.BLOWUP
    return AnalyticLabel.GAP


@dataclass(frozen=True)
class RegimeLabel:
    point: tuple[float, float]
    analytic: AnalyticLabel
    empirical: EmpiricalLabel


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    """One simulation: model parameters, forcing, initial state, horizon."""

    params: ModelParams
    forcing: Forcing
    u0_kind: str = "zero"               # zero | single_mode | random_nonneg | explicit
    u0_mode: int = 1
    u0_amplitude: float = 1.0
    u0_values: tuple[float, ...] | None = None
    t_end: float = 10.0
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    seed: int = 0


def _require(cond: bool, msg: str):
    if not cond:
        raise ConfigError(msg)


def _integrator_from_dict(d: dict[str, Any]) -> IntegratorConfig:
    allowed = {"rel_tol", "abs_tol", "dt_init", "dt_min", "dt_max",
               "sample_interval", "blowup_threshold", "max_steps"}
    unknown = set(d) - allowed
    _require(not unknown, f"unknown integrator keys: {sorted(unknown)}")
    try:
        return IntegratorConfig(**d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad integrator config: {exc}") from exc


def _forcing_from_dict(d: dict[str, Any], n_modes: int) -> Forcing:
    kind = d.get("kind", "single_mode")
    try:
        if kind == "single_mode":
            g1 = float(d.get("g1", 1.0))
            mode = int(d.get("mode", 1))
            _require(1 <= mode <= n_modes, f"forcing mode {mode} out of range")
            if g1 == 0.0:
                return Forcing.zero(n_modes)
            return Forcing.single_mode(n_modes, g1, mode=mode)
        if kind == "explicit":
            values = np.asarray(d.get("values", []), dtype=float)
            _require(values.shape == (n_modes,),
                     f"forcing needs {n_modes} values, got {values.shape}")
            sb = d.get("support_bound")
            return Forcing(values, support_bound=None if sb is None else int(sb))
    except ValueError as exc:
        raise ConfigError(f"bad forcing: {exc}") from exc
    raise ConfigError(f"unknown forcing kind {kind!r}")


def run_config_from_dict(d: dict[str, Any]) -> RunConfig:
    """Parse the JSON experiment schema into a RunConfig.

    Unset fields fall back to a small viscous default run; gamma defaults
    to the midpoint of the admissible blow-up interval for (alpha, beta).
    """
    _require(isinstance(d, dict), "config must be a JSON object")
    known = {"alpha", "beta", "nu", "gamma", "n_modes", "t_end", "g",
             "u0", "integrator", "seed"}
    unknown = set(d) - known
    _require(not unknown, f"unknown config keys: {sorted(unknown)}")
    alpha = float(d.get("alpha", 2.0 / 3.0))
    beta = float(d.get("beta", 11.0 / 6.0))
    nu = float(d.get("nu", 1.0))
    n_modes = int(d.get("n_modes", 64))
    gamma = d.get("gamma")
    gamma = default_blowup_gamma(alpha, beta) if gamma is None else float(gamma)
    try:
        params = ModelParams(alpha=alpha, beta=beta, nu=nu, gamma=gamma,
                             n_modes=n_modes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    forcing = _forcing_from_dict(d.get("g", {}), n_modes)
    integrator = _integrator_from_dict(d.get("integrator", {}))
    t_end = float(d.get("t_end", 10.0))
    _require(t_end > 0, "t_end must be positive")

    u0 = d.get("u0", {"kind": "zero"})
    kind = u0.get("kind", "zero")
    _require(kind in ("zero", "single_mode", "random_nonneg", "explicit"),
             f"unknown u0 kind {kind!r}")
    u0_values = None
    if kind == "explicit":
        vals = np.asarray(u0.get("values", []), dtype=float)
        _require(vals.shape == (n_modes,),
                 f"u0 needs {n_modes} values, got {vals.shape}")
        u0_values = tuple(float(v) for v in vals)
    u0_mode = int(u0.get("mode", 1))
    if kind == "single_mode":
        _require(1 <= u0_mode <= n_modes, f"u0 mode {u0_mode} out of range")
    return RunConfig(
        params=params,
        forcing=forcing,
        u0_kind=kind,
        u0_mode=u0_mode,
        u0_amplitude=float(u0.get("amplitude", 1.0)),
        u0_values=u0_values,
        t_end=t_end,
        integrator=integrator,
        seed=int(d.get("seed", 0)),
    )


def build_initial_state(cfg: RunConfig) -> np.ndarray:
    """Resolve the configured initial state; random kinds use cfg.seed.

    random_nonneg draws uniformly from the nonnegative-orthant slice of
    the energy ball of radius |g|/nu (radius u0_amplitude when that scale
    is unavailable).
    """
    p = cfg.params
    if cfg.u0_kind == "zero":
        return np.zeros(p.n_modes)
    if cfg.u0_kind == "single_mode":
        return single_mode(p.n_modes, cfg.u0_mode, cfg.u0_amplitude)
    if cfg.u0_kind == "explicit":
        return np.asarray(cfg.u0_values, dtype=float)
    rng = np.random.default_rng(cfg.seed)
    direction = np.abs(rng.standard_normal(p.n_modes))
    nrm = float(np.linalg.norm(direction))
    if nrm == 0.0:
        direction[0] = 1.0
        nrm = 1.0
    radius = cfg.forcing.norm / p.nu if (p.nu > 0 and cfg.forcing.norm > 0) \
        else cfg.u0_amplitude
    r = radius * rng.uniform() ** (1.0 / p.n_modes)
    return direction * (r / nrm)


def simulate_run(cfg: RunConfig) -> Trajectory:
    """Integrate the configured run."""
    u0 = build_initial_state(cfg)
    return integrate(u0, cfg.params, cfg.forcing, cfg.t_end, cfg.integrator)


# ---------------------------------------------------------------------------
# trajectory serialization


def _theta_by_row(traj: Trajectory) -> dict[int, float]:
    """Theta value per sample index, empty when the run cannot support it."""
    try:
        series = diagnostics.theta(traj, traj.params.gamma)
    except ValueError:
        return {}
    idx = np.nonzero(traj.times + series.window
                     <= traj.times[-1] * (1.0 + 1e-12))[0]
    return {int(i): float(v) for i, v in zip(idx, series.values)}


def write_trajectory_csv(traj: Trajectory, path: str | Path) -> None:
    """Columns: t, energy, enstrophy, gamma_norm, blowup_norm, theta,
    min_coeff, energy_residual.  theta stays empty until t+1 is resolved;
    energy_residual is the signed balance defect against the previous
    sample (0 at the first sample)."""
    theta_map = _theta_by_row(traj)
    residuals = diagnostics.adjacent_energy_residuals(traj)
    min_coeff = traj.states.min(axis=1)
    lines = ["t,energy,enstrophy,gamma_norm,blowup_norm,theta,"
             "min_coeff,energy_residual"]
    for i, (t, rep) in enumerate(zip(traj.times, traj.diagnostics)):
        theta_cell = fmt17(theta_map[i]) if i in theta_map else ""
        lines.append(",".join((
            fmt17(t), fmt17(rep.energy), fmt17(rep.enstrophy),
            fmt17(rep.gamma_norm), fmt17(rep.blowup_norm), theta_cell,
            fmt17(min_coeff[i]), fmt17(residuals[i]),
        )))
    Path(path).write_text("\n".join(lines) + "\n")


def _peak_norms(traj: Trajectory) -> dict[str, float]:
    return {name: float(np.max(traj.norm_array(name)))
            for name in ("energy", "enstrophy", "gamma_norm", "blowup_norm")}


def _event_time(traj: Trajectory, kind: str) -> float | None:
    for t, k in traj.events:
        if k == kind:
            return float(t)
    return None


RISE_WINDOW = 1.0


def _rise_window_fit(series: diagnostics.ThetaSeries) -> diagnostics.RiccatiFit:
    """Fit the growth law on the window ending at the Theta peak.

    Runs that hit the amplitude event or pile up on the truncation spend
    most of their samples on the saturated plateau, where dTheta/dt is
    near zero and a whole-series fit says nothing about the growth phase.
    Anchoring the window at the running maximum keeps the fit on the
    rising stretch.  Falls back to the whole series when the window holds
    too few samples.
    """
    t_peak = float(series.times[int(np.argmax(series.values))])
    start = max(float(series.times[0]), t_peak - RISE_WINDOW)
    try:
        return diagnostics.riccati_fit(series,
                                       window=(start, start + RISE_WINDOW))
    except ValueError:
        return diagnostics.riccati_fit(series)


def run_summary(traj: Trajectory, cfg: RunConfig) -> dict[str, Any]:
    """JSON-ready digest: termination, peaks, diagnostic verdicts."""
    p = traj.params
    residual = diagnostics.energy_inequality_residual(traj)
    budget = diagnostics.energy_balance_budget(traj)
    summary: dict[str, Any] = {
        "params": {"alpha": p.alpha, "beta": p.beta, "nu": p.nu,
                   "gamma": p.gamma, "n_modes": p.n_modes},
        "seed": cfg.seed,
        "t_end": traj.t_end,
        "samples": len(traj),
        "terminated": traj.terminated.value,
        "events": [[t, k] for t, k in traj.events],
        "peak_norms": _peak_norms(traj),
        "min_coefficient": float(traj.states.min()),
        "energy_residual": {"worst": residual, "budget": budget,
                            "within_budget": bool(residual <= budget)},
    }
    if p.nu > 0:
        margin = diagnostics.absorbing_ball_margin(traj)
        summary["absorbing_ball"] = {
            "min_margin": float(np.min(margin)),
            "within_budget": bool(float(np.min(margin)) >= -budget),
        }
    try:
        theta_gamma = default_blowup_gamma(p.alpha, p.beta)
        series = diagnostics.theta(traj, theta_gamma)
        fit = _rise_window_fit(series)
        summary["theta_fit"] = {
            "gamma": theta_gamma,
            "c_estimate": fit.c_estimate,
            "residual": fit.residual,
            "window": [fit.window_start, fit.window_end],
        }
    except ValueError:
        pass  # run too short or too coarse for a Theta series
    return summary


def euler_summary(traj: Trajectory, cfg: RunConfig) -> dict[str, Any]:
    """Inviscid-run digest: conservation and monotonicity verdicts."""
    p = traj.params
    if p.nu != 0.0:
        raise ConfigError("euler runs require nu = 0")
    summary = run_summary(traj, cfg)
    energy = traj.norm_array("energy")
    base = float(energy[0])
    drift = float(np.max(np.abs(energy**2 - base**2)))
    rel_drift = drift / base**2 if base > 0 else drift
    gamma = min(p.gamma, 1.0)
    summary["euler"] = {
        "relative_energy_drift": rel_drift,
        "forced": bool(cfg.forcing.norm > 0),
        "gamma_used": gamma,
        "worst_gamma_norm_decrease": diagnostics.euler_monotonicity(traj, gamma),
        "late_pair_product_max": float(np.max(
            np.abs(traj.states[-1, :-1] * traj.states[-1, 1:]))),
    }
    return summary


# ---------------------------------------------------------------------------
# regime-map sweep


@dataclass(frozen=True)
class SweepConfig:
    """Grid and per-point run settings for the regime-map sweep.

    blowup_threshold (None = 1.5 g1/nu) always overrides the integrator's
    own threshold: it is the event level that separates runaway cascades
    from bounded responses at the sweep's forcing scale, and it doubles as
    the cost control, since runs that cross it terminate at the event
    instead of grinding on the stiff truncation plateau.
    """

    alpha_min: float = 0.2
    alpha_max: float = 2.0
    alpha_count: int = 32
    beta_min: float = 1.05
    beta_max: float = 3.5
    beta_count: int = 32
    nu: float = 1.0
    g1: float = 8.0
    n_modes: int = 32
    t_end: float = 6.0
    blowup_threshold: float | None = None
    integrator: IntegratorConfig = field(
        default_factory=lambda: IntegratorConfig(rel_tol=1e-5))
    seed: int = 0
    growth_factor: float = 1.5      # refined/base peak ratio calling blow-up
    saturation_rtol: float = 0.01   # peak agreement calling boundedness
    enstrophy_factor: float = 10.0  # times |g|/nu for the boundedness bar

    def alphas(self) -> np.ndarray:
        return np.linspace(self.alpha_min, self.alpha_max, self.alpha_count)

    def betas(self) -> np.ndarray:
        return np.linspace(self.beta_min, self.beta_max, self.beta_count)

    @property
    def effective_threshold(self) -> float:
        if self.blowup_threshold is not None:
            return self.blowup_threshold
        return 1.5 * self.g1 / self.nu


def sweep_config_from_dict(d: dict[str, Any]) -> SweepConfig:
    _require(isinstance(d, dict), "config must be a JSON object")
    kwargs: dict[str, Any] = {}
    plain = {"alpha_min", "alpha_max", "beta_min", "beta_max", "nu", "g1",
             "t_end", "growth_factor", "saturation_rtol", "enstrophy_factor",
             "blowup_threshold"}
    ints = {"alpha_count", "beta_count", "n_modes", "seed"}
    unknown = set(d) - plain - ints - {"integrator"}
    _require(not unknown, f"unknown sweep keys: {sorted(unknown)}")
    for k in plain & set(d):
        kwargs[k] = float(d[k])
    for k in ints & set(d):
        kwargs[k] = int(d[k])
    if "integrator" in d:
        kwargs["integrator"] = _integrator_from_dict(d["integrator"])
    cfg = SweepConfig(**kwargs)
    _require(cfg.alpha_count >= 1 and cfg.beta_count >= 1,
             "grid counts must be positive")
    _require(cfg.alpha_min > 0, "alpha must stay positive")
    _require(cfg.beta_min > 1, "beta must stay above 1")
    _require(cfg.n_modes >= 8, "sweep n_modes below 8 is under-resolved")
    _require(cfg.nu > 0, "the sweep classifier needs viscosity")
    _require(cfg.effective_threshold > 0, "blowup_threshold must be positive")
    return cfg


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    beta: float
    analytic: AnalyticLabel
    empirical: EmpiricalLabel
    peak_blowup_norm: float | None
    quasi_blowup_time: float | None
    riccati_c: float | None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow]
    config: SweepConfig

    @property
    def labels(self) -> list[RegimeLabel]:
        return [RegimeLabel(point=(r.alpha, r.beta), analytic=r.analytic,
                            empirical=r.empirical) for r in self.rows]


def _point_run(alpha: float, beta: float, n_modes: int,
               cfg: SweepConfig) -> Trajectory:
    gamma = default_blowup_gamma(alpha, beta)
    p = ModelParams(alpha=alpha, beta=beta, nu=cfg.nu, gamma=gamma,
                    n_modes=n_modes)
    g = Forcing.single_mode(n_modes, cfg.g1)
    icfg = replace(cfg.integrator, blowup_threshold=cfg.effective_threshold)
    return integrate(np.zeros(n_modes), p, g, cfg.t_end, icfg)


def _classify(base: Trajectory, refined: Trajectory,
              cfg: SweepConfig) -> EmpiricalLabel:
    """Finite-N decision rule for the empirical regime label.

    quasi_blowup needs the event at base N plus clear peak growth under
    refinement; bounded_enstrophy needs a modest peak that saturates in N;
    growth without the event is transient_growth; disagreeing runs are
    unresolved.
    """
    base_fired = base.terminated is Termination.QUASI_BLOWUP
    ref_fired = refined.terminated is Termination.QUASI_BLOWUP
    peak_b = float(np.max(base.norm_array("blowup_norm")))
    peak_r = float(np.max(refined.norm_array("blowup_norm")))
    if base_fired:
        if ref_fired or peak_r >= cfg.growth_factor * peak_b:
            return EmpiricalLabel.QUASI_BLOWUP
        return EmpiricalLabel.UNRESOLVED
    if ref_fired:
        return EmpiricalLabel.UNRESOLVED
    ens_base = float(np.max(base.norm_array("enstrophy")))
    ens_ref = float(np.max(refined.norm_array("enstrophy")))
    bound = cfg.enstrophy_factor * cfg.g1 / cfg.nu
    saturated = abs(ens_ref - ens_base) <= cfg.saturation_rtol * max(
        ens_base, 1e-30)
    if ens_base < bound and saturated:
        return EmpiricalLabel.BOUNDED_ENSTROPHY
    return EmpiricalLabel.TRANSIENT_GROWTH


def _sweep_point(task: tuple[int, float, float, SweepConfig]) -> tuple[int, SweepRow]:
    index, alpha, beta, cfg = task
    label = analytic_label(alpha, beta)
    try:
        base = _point_run(alpha, beta, cfg.n_modes, cfg)
        refined = _point_run(alpha, beta, 2 * cfg.n_modes, cfg)
        empirical = _classify(base, refined, cfg)
        peak = float(np.max(base.norm_array("blowup_norm")))
        qtime = _event_time(base, "quasi_blowup")
        riccati_c = None
        try:
            series = diagnostics.theta(base, base.params.gamma)
            riccati_c = _rise_window_fit(series).c_estimate
        except ValueError:
            pass
        row = SweepRow(alpha=alpha, beta=beta, analytic=label,
                       empirical=empirical, peak_blowup_norm=peak,
                       quasi_blowup_time=qtime, riccati_c=riccati_c)
    except Exception as exc:  # per-point failures must not kill the sweep
        row = SweepRow(alpha=alpha, beta=beta, analytic=label,
                       empirical=EmpiricalLabel.UNRESOLVED,
                       peak_blowup_norm=None, quasi_blowup_time=None,
                       riccati_c=None, error=f"{type(exc).__name__}: {exc}")
    return index, row


def run_sweep(cfg: SweepConfig, threads: int = 1) -> SweepResult:
    """Classify every grid point; rows come back in grid order regardless
    of completion order."""
    tasks = []
    index = 0
    for alpha in cfg.alphas():
        for beta in cfg.betas():
            tasks.append((index, float(alpha), float(beta), cfg))
            index += 1
    rows: list[SweepRow | None] = [None] * len(tasks)
    if threads <= 1:
        results: Iterable[tuple[int, SweepRow]] = map(_sweep_point, tasks)
        for i, row in results:
            rows[i] = row
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for i, row in pool.map(_sweep_point, tasks, chunksize=4):
                rows[i] = row
    return SweepResult(rows=rows, config=cfg)  # type: ignore[arg-type]


def write_sweep_csv(result: SweepResult, path: str | Path) -> None:
    """Columns: alpha, beta, analytic_label, empirical_label,
    peak_blowup_norm, quasi_blowup_time, riccati_c."""
    lines = ["alpha,beta,analytic_label,empirical_label,peak_blowup_norm,"
             "quasi_blowup_time,riccati_c"]
    for r in result.rows:
        lines.append(",".join((
            fmt17(r.alpha), fmt17(r.beta), r.analytic.value,
            r.empirical.value, fmt17(r.peak_blowup_norm),
            fmt17(r.quasi_blowup_time), fmt17(r.riccati_c),
        )))
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# N-refinement scaling study


@dataclass(frozen=True)
class RefineConfig:
    """Truncation-scaling study at one (alpha, beta) point.

    gamma picks the diagnostic norm whose peak is tabulated (None = the
    midpoint default used elsewhere).  The calibrated default 2.5 weights
    the tail modes strongly enough that the truncation pile-up, which is
    what diverges with N in the runaway regime, dominates the norm: the
    forced cascade then shows clear super-doubling growth per doubling of
    N, while regular-regime peaks still saturate.  The event threshold is
    effectively off so every run reports its full peak; crossing_level
    instead fills the crossing-time column post hoc from the samples.
    """

    alpha: float = 2.0 / 3.0
    beta: float = 3.0
    nu: float = 1.0
    g1: float = 40.0
    n_values: tuple[int, ...] = (16, 32, 64, 128)
    t_end: float = 2.5
    gamma: float | None = 2.5
    crossing_level: float | None = 100.0
    integrator: IntegratorConfig = field(
        default_factory=lambda: IntegratorConfig(rel_tol=1e-5,
                                                 blowup_threshold=1e9))

    def __post_init__(self):
        if any(n < 8 for n in self.n_values):
            raise ConfigError("n_values below 8 are under-resolved")
        if not self.n_values:
            raise ConfigError("n_values must be nonempty")


def refine_config_from_dict(d: dict[str, Any]) -> RefineConfig:
    _require(isinstance(d, dict), "config must be a JSON object")
    known = {"alpha", "beta", "nu", "g1", "n_values", "t_end", "gamma",
             "crossing_level", "integrator"}
    unknown = set(d) - known
    _require(not unknown, f"unknown refine keys: {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    for k in ("alpha", "beta", "nu", "g1", "t_end"):
        if k in d:
            kwargs[k] = float(d[k])
    for k in ("gamma", "crossing_level"):
        if k in d:
            kwargs[k] = None if d[k] is None else float(d[k])
    if "n_values" in d:
        kwargs["n_values"] = tuple(int(n) for n in d["n_values"])
    if "integrator" in d:
        kwargs["integrator"] = _integrator_from_dict(d["integrator"])
    return RefineConfig(**kwargs)


@dataclass(frozen=True)
class RefineRow:
    n_modes: int
    peak_blowup_norm: float | None
    peak_enstrophy: float | None
    quasi_blowup_time: float | None
    terminated: str
    error: str | None = None


def _crossing_time(traj: Trajectory, level: float) -> float | None:
    """First sample time at which blowup_norm reaches the level."""
    bn = traj.norm_array("blowup_norm")
    above = bn >= level
    if not above.any():
        return None
    return float(traj.times[int(np.argmax(above))])


def _refine_row(cfg: RefineConfig, n: int) -> RefineRow:
    gamma = (cfg.gamma if cfg.gamma is not None
             else default_blowup_gamma(cfg.alpha, cfg.beta))
    try:
        p = ModelParams(alpha=cfg.alpha, beta=cfg.beta, nu=cfg.nu,
                        gamma=gamma, n_modes=n)
        g = Forcing.single_mode(n, cfg.g1)
        traj = integrate(np.zeros(n), p, g, cfg.t_end, cfg.integrator)
        if cfg.crossing_level is not None:
            qtime = _crossing_time(traj, cfg.crossing_level)
        else:
            qtime = _event_time(traj, "quasi_blowup")
        return RefineRow(
            n_modes=n,
            peak_blowup_norm=float(np.max(traj.norm_array("blowup_norm"))),
            peak_enstrophy=float(np.max(traj.norm_array("enstrophy"))),
            quasi_blowup_time=qtime,
            terminated=traj.terminated.value,
        )
    except Exception as exc:  # one bad row must not abort the table
        return RefineRow(n_modes=n, peak_blowup_norm=None,
                         peak_enstrophy=None, quasi_blowup_time=None,
                         terminated="error",
                         error=f"{type(exc).__name__}: {exc}")


def run_refine(cfg: RefineConfig, threads: int = 1) -> list[RefineRow]:
    """Peak-norm scaling across truncation levels."""
    if threads <= 1:
        return [_refine_row(cfg, n) for n in cfg.n_values]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_refine_row, [cfg] * len(cfg.n_values),
                             cfg.n_values))


def write_refine_csv(rows: list[RefineRow], path: str | Path) -> None:
    """Columns: n_modes, peak_blowup_norm, peak_enstrophy,
    quasi_blowup_time, terminated."""
    lines = ["n_modes,peak_blowup_norm,peak_enstrophy,quasi_blowup_time,"
             "terminated"]
    for r in rows:
        lines.append(",".join((
            str(r.n_modes), fmt17(r.peak_blowup_norm),
            fmt17(r.peak_enstrophy), fmt17(r.quasi_blowup_time),
            r.terminated,
        )))
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# calibrated growth-law study


@dataclass(frozen=True)
class RiccatiStudyConfig:
    """Calibrated slow-ignition run for the Riccati growth diagnostic.

    In the runaway regime the cascade self-accelerates while it spreads
    down the mode ladder; once the front reaches the truncation, the
    Theta series saturates and no single power law holds.  Weak forcing
    and weak damping stretch the ignition phase over several time units,
    so a unit-width window fits dTheta/dt = c * Theta^(3/2) cleanly on a
    stretch where Theta grows severalfold.  The window below rides that
    stretch; the fitted c and residual are insensitive to n_modes and to
    integrator tolerance because the action is confined to the low modes.
    """

    alpha: float = 2.0 / 3.0
    beta: float = 3.0
    nu: float = 0.005
    g1: float = 0.02
    gamma: float = 0.5
    theta_gamma: float = 2.5
    n_modes: int = 32
    t_end: float = 5.0
    window: tuple[float, float] = (2.75, 3.75)
    integrator: IntegratorConfig = field(
        default_factory=lambda: IntegratorConfig(
            rel_tol=1e-5, abs_tol=1e-14, sample_interval=0.01,
            dt_max=0.05, blowup_threshold=1e9))

    def __post_init__(self):
        if analytic_label(self.alpha, self.beta) is not AnalyticLabel.BLOWUP:
            raise ConfigError(
                "growth study expects runaway-regime exponents")


def run_riccati_study(
        cfg: RiccatiStudyConfig | None = None) -> diagnostics.RiccatiFit:
    """Integrate the calibrated run and fit the growth law on its window."""
    cfg = cfg or RiccatiStudyConfig()
    p = ModelParams(alpha=cfg.alpha, beta=cfg.beta, nu=cfg.nu,
                    gamma=cfg.gamma, n_modes=cfg.n_modes)
    g = Forcing.single_mode(cfg.n_modes, cfg.g1)
    traj = integrate(np.zeros(cfg.n_modes), p, g, cfg.t_end, cfg.integrator)
    series = diagnostics.theta(traj, cfg.theta_gamma)
    return diagnostics.riccati_fit(series, window=cfg.window)


# ---------------------------------------------------------------------------
# attractor positivity probe


@dataclass(frozen=True)
class ProbeConfig:
    """Ensemble probe of the attractor's componentwise nonnegativity.

    The forcing must have finite support; sign-mixed initial states are
    drawn from the energy ball of radius |g|/nu.
    """

    params: ModelParams
    forcing: Forcing
    ensemble_size: int = 8
    t_end: float = 50.0
    burn_in: float | None = None       # default 5/nu, doubled to stabilize
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    seed: int = 0

    def __post_init__(self):
        if self.params.nu <= 0:
            raise ConfigError("the probe needs nu > 0 for a burn-in scale")
        if self.forcing.support_bound is None:
            raise ConfigError("probe forcing must declare finite support")
        if self.ensemble_size < 1:
            raise ConfigError("ensemble_size must be positive")


def probe_config_from_dict(d: dict[str, Any]) -> ProbeConfig:
    _require(isinstance(d, dict), "config must be a JSON object")
    known = {"alpha", "beta", "nu", "gamma", "n_modes", "g", "ensemble_size",
             "t_end", "burn_in", "integrator", "seed"}
    unknown = set(d) - known
    _require(not unknown, f"unknown probe keys: {sorted(unknown)}")
    alpha = float(d.get("alpha", 2.0 / 3.0))
    beta = float(d.get("beta", 11.0 / 6.0))
    gamma = d.get("gamma")
    gamma = default_blowup_gamma(alpha, beta) if gamma is None else float(gamma)
    try:
        params = ModelParams(alpha=alpha, beta=beta, nu=float(d.get("nu", 1.0)),
                             gamma=gamma, n_modes=int(d.get("n_modes", 64)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    forcing = _forcing_from_dict(d.get("g", {}), params.n_modes)
    if forcing.support_bound is None:
        raise ConfigError("probe forcing must declare finite support")
    burn_in = d.get("burn_in")
    return ProbeConfig(
        params=params,
        forcing=forcing,
        ensemble_size=int(d.get("ensemble_size", 8)),
        t_end=float(d.get("t_end", 50.0)),
        burn_in=None if burn_in is None else float(burn_in),
        integrator=_integrator_from_dict(d.get("integrator", {})),
        seed=int(d.get("seed", 0)),
    )


def _probe_member(task: tuple[ProbeConfig, int]) -> np.ndarray:
    cfg, k = task
    p = cfg.params
    rng = np.random.default_rng((cfg.seed, k))
    direction = rng.standard_normal(p.n_modes)   # sign-mixed on purpose
    nrm = float(np.linalg.norm(direction))
    radius = cfg.forcing.norm / p.nu if cfg.forcing.norm > 0 else 1.0
    u0 = direction * (radius * rng.uniform() / max(nrm, 1e-30))
    traj = integrate(u0, p, cfg.forcing, cfg.t_end, cfg.integrator)
    mins = traj.states.min(axis=1)
    return np.vstack([traj.times, mins])


def run_probe(cfg: ProbeConfig, threads: int = 1) -> dict[str, Any]:
    """Most negative post-burn-in coordinate across the ensemble.

    The burn-in doubles (up to the horizon) until the reported minimum
    stops changing, evidence that transient sign structure has died out.
    """
    tasks = [(cfg, k) for k in range(cfg.ensemble_size)]
    if threads <= 1:
        member_series = [_probe_member(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            member_series = list(pool.map(_probe_member, tasks))

    base_burn = cfg.burn_in if cfg.burn_in is not None else 5.0 / cfg.params.nu
    levels = []
    burn = base_burn
    while burn <= cfg.t_end / 2.0 + 1e-12:
        worst = math.inf
        for series in member_series:
            times, mins = series
            mask = times >= burn
            if np.any(mask):
                worst = min(worst, float(np.min(mins[mask])))
        if math.isfinite(worst):
            levels.append({"burn_in": burn, "min_coordinate": worst})
        burn *= 2.0
    if not levels:
        raise ConfigError("t_end too short for even one burn-in window")
    stabilized = len(levels) >= 2 and abs(
        levels[-1]["min_coordinate"] - levels[-2]["min_coordinate"]) <= 1e-10
    return {
        "params": {"alpha": cfg.params.alpha, "beta": cfg.params.beta,
                   "nu": cfg.params.nu, "n_modes": cfg.params.n_modes},
        "forcing_support_bound": cfg.forcing.support_bound,
        "ensemble_size": cfg.ensemble_size,
        "seed": cfg.seed,
        "t_end": cfg.t_end,
        "burn_in_levels": levels,
        "stabilized": stabilized,
        "min_coordinate": levels[-1]["min_coordinate"],
    }


# ---------------------------------------------------------------------------
# toy-system radius probes (the `examples` subcommand)


def toy_radius_table(kind: str, seed: int = 0) -> list[tuple[float, float, float]]:
    """Rows (t, radius_strong, radius_weak) for one toy system."""
    if kind == "shift":
        grid = toys.Grid()
        sys = toys.ToySystem.shift(grid)
        ensemble = toys.bump_ensemble(grid, 24, seed)
        candidate = toys.zero_set(grid.n_points)
        times = np.arange(0.0, 51.0, 5.0)
    elif kind == "mode_decay":
        n = 128
        sys = toys.ToySystem.mode_decay(n)
        ensemble = toys.basis_ensemble(n, 96) + toys.ball_ensemble(n, 32, seed)
        candidate = toys.zero_set(n)
        times = np.arange(0.0, 91.0, 5.0)
    elif kind == "frozen_first":
        n = 64
        sys = toys.ToySystem.frozen_first(n)
        ensemble = toys.basis_ensemble(n, 16) + toys.ball_ensemble(n, 32, seed)
        candidate = toys.frozen_first_limit_set(n)
        times = np.arange(0.0, 21.0, 1.0)
    else:
        raise ConfigError(f"unknown toy system {kind!r}")
    rows = []
    for t in times:
        rs = toys.attraction_radius(sys, candidate, float(t), "strong", ensemble)
        rw = toys.attraction_radius(sys, candidate, float(t), "weak", ensemble)
        rows.append((float(t), rs, rw))
    return rows


def write_radius_csv(rows: list[tuple[float, float, float]],
                     path: str | Path) -> None:
    """Columns: t, radius_strong, radius_weak."""
    lines = ["t,radius_strong,radius_weak"]
    for t, rs, rw in rows:
        lines.append(f"{fmt17(t)},{fmt17(rs)},{fmt17(rw)}")
    Path(path).write_text("\n".join(lines) + "\n")
