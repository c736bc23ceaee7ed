"""Self-contained invariant battery behind the `verify` subcommand.

Every check re-derives its expectation from first principles (closed
forms, telescoping identities, synthetic series) and reports one pass or
fail line.  Strict mode divides each error budget by 10; budgets carry
enough headroom that this must still pass on a healthy build, so a strict
failure means a real regression, not noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import diagnostics
from .integrator import (IntegratorConfig, Termination, Trajectory,
                         integrate, step)
from .model import (Forcing, ModelParams, apply_A, apply_B, c_b,
                    estimate_exponents, mode_weights, norms,
                    orthogonality_scale, rhs, sharp_estimate_ratio,
                    single_mode, weighted_norm)
from . import toysystems as toys

__all__ = ["CheckResult", "run_battery", "format_report"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _params(alpha=2.0 / 3.0, beta=11.0 / 6.0, nu=1.0, gamma=1.0, n=64):
    return ModelParams(alpha=alpha, beta=beta, nu=nu, gamma=gamma, n_modes=n)


def _check_orthogonality(f: float) -> tuple[bool, str]:
    rng = np.random.default_rng(101)
    worst = 0.0
    for n in (16, 128, 512):
        p = _params(n=n)
        for _ in range(200):
            u = rng.standard_normal(n)
            v = rng.standard_normal(n)
            resid = abs(float(np.dot(apply_B(u, v, p), v)))
            worst = max(worst, resid / orthogonality_scale(u, v, p))
    tol = 1e-12 / f
    return worst <= tol, f"worst scaled residual {worst:.3e} vs {tol:.1e}"


def _check_fault_detection(f: float) -> tuple[bool, str]:
    # flip the sign of one bilinear term; the orthogonality residual must
    # blow past the tolerance, proving the checker can see real faults
    rng = np.random.default_rng(102)
    p = _params(n=32)
    w = mode_weights(p.n_modes, p.beta)

    def broken_b(u, v):
        out = np.zeros(p.n_modes)
        out[1:] = w[1:] * u[:-1] * v[:-1]      # sign deliberately wrong
        out[:-1] += w[1:] * u[:-1] * v[1:]
        return out

    u = rng.standard_normal(p.n_modes)
    v = rng.standard_normal(p.n_modes)
    resid = abs(float(np.dot(broken_b(u, v), v)))
    scaled = resid / orthogonality_scale(u, v, p)
    tol = 1e-12 / f
    return scaled > tol, f"corrupted form leaks {scaled:.3e} (tol {tol:.1e})"


def _check_bilinearity(f: float) -> tuple[bool, str]:
    rng = np.random.default_rng(103)
    p = _params(n=64)
    worst = 0.0
    for _ in range(100):
        u, w2, v = (rng.standard_normal(64) for _ in range(3))
        a, b = rng.standard_normal(2)
        left = apply_B(a * u + b * w2, v, p)
        right = a * apply_B(u, v, p) + b * apply_B(w2, v, p)
        scale = 1.0 + np.max(np.abs(left)) + np.max(np.abs(right))
        worst = max(worst, float(np.max(np.abs(left - right))) / scale)
        left = apply_B(v, a * u + b * w2, p)
        right = a * apply_B(v, u, p) + b * apply_B(v, w2, p)
        scale = 1.0 + np.max(np.abs(left)) + np.max(np.abs(right))
        worst = max(worst, float(np.max(np.abs(left - right))) / scale)
    tol = 1e-12 / f
    return worst <= tol, f"worst scaled defect {worst:.3e} vs {tol:.1e}"


def _check_estimate_ratio(f: float) -> tuple[bool, str]:
    rng = np.random.default_rng(104)
    worst = 0.0
    for alpha, beta in ((2 / 3, 11 / 6), (1.0, 2.0), (0.5, 1.75)):
        p = _params(alpha=alpha, beta=beta, n=64)
        for _ in range(500):
            u = rng.standard_normal(64)
            worst = max(worst, sharp_estimate_ratio(u, p))
    bound = 1.0 + 1e-10 / f
    return worst <= bound, f"max ratio {worst:.12f} vs bound {bound}"


def _check_exponents(f: float) -> tuple[bool, str]:
    pexp, qexp = estimate_exponents(Fraction(2, 3), Fraction(11, 6))
    ok = pexp == Fraction(3, 2) and qexp == Fraction(3, 2)
    return ok, f"(p, q) = ({pexp}, {qexp}), expected (3/2, 3/2) exactly"


def _check_cb(f: float) -> tuple[bool, str]:
    cases = (
        (_params(alpha=2 / 3, beta=11 / 6), (2 / 3) * 2 ** (11 / 6)),
        (_params(alpha=1.0, beta=2.0), 4.0),
        (_params(alpha=2.0, beta=2.0), 16.0),
    )
    worst = max(abs(c_b(p) - want) / want for p, want in cases)
    tol = 1e-12 / f
    return worst <= tol, f"worst relative error {worst:.3e} vs {tol:.1e}"


def _check_energy_identity(f: float) -> tuple[bool, str]:
    rng = np.random.default_rng(105)
    p = _params(n=48)
    g = Forcing(np.abs(rng.standard_normal(48)))
    worst = 0.0
    for _ in range(200):
        u = rng.standard_normal(48)
        lhs = float(np.dot(rhs(u, p, g), u))
        want = float(np.dot(g.values, u)) - p.nu * weighted_norm(u, p.alpha) ** 2
        scale = orthogonality_scale(u, u, p) + abs(want)
        worst = max(worst, abs(lhs - want) / scale)
    tol = 1e-10 / f
    return worst <= tol, f"worst scaled defect {worst:.3e} vs {tol:.1e}"


def _check_zero_fixed_point(f: float) -> tuple[bool, str]:
    p = _params(n=16)
    traj = integrate(np.zeros(16), p, Forcing.zero(16), 1.0)
    ok = (traj.terminated is Termination.COMPLETED
          and float(np.max(np.abs(traj.states))) == 0.0)
    return ok, f"max |state| {float(np.max(np.abs(traj.states))):.1e}"


def _check_linear_contraction(f: float) -> tuple[bool, str]:
    p = _params(alpha=1.0, beta=2.0, n=16)
    u0 = single_mode(16, 1, 1e-6)
    dt = 0.01
    u1, _ = step(u0, dt, p, Forcing.zero(16))
    want = 1e-6 * math.exp(-dt)
    rel = abs(u1[0] - want) / want
    tol = 1e-6 / f
    return rel <= tol, f"mode-1 contraction off by {rel:.3e} vs {tol:.1e}"


def _check_error_order(f: float) -> tuple[bool, str]:
    p = _params(n=32)
    u = 1.0 / np.arange(1, 33)
    g = Forcing.single_mode(32, 1.0)
    _, e1 = step(u, 2e-2, p, g)
    _, e2 = step(u, 1e-2, p, g)
    ratio = e1 / e2
    ok = 20.0 <= ratio <= 45.0
    return ok, f"estimate ratio under halving {ratio:.2f} (expect near 32)"


def _check_determinism(f: float) -> tuple[bool, str]:
    p = _params(n=32)
    rng = np.random.default_rng(106)
    u0 = np.abs(rng.standard_normal(32))
    g = Forcing.single_mode(32, 2.0)
    t1 = integrate(u0, p, g, 3.0)
    t2 = integrate(u0, p, g, 3.0)
    ok = (np.array_equal(t1.times, t2.times)
          and np.array_equal(t1.states, t2.states))
    return ok, "bit-identical trajectories" if ok else "trajectories differ"


def _viscous_run() -> tuple[Trajectory, Forcing]:
    rng = np.random.default_rng(107)
    p = _params(n=32)
    g = Forcing.single_mode(32, 2.0)
    u0 = np.abs(rng.standard_normal(32)) * 0.5
    return integrate(u0, p, g, 8.0), g


def _check_energy_balance(f: float) -> tuple[bool, str]:
    traj, _ = _viscous_run()
    resid = diagnostics.energy_inequality_residual(traj)
    budget = diagnostics.energy_balance_budget(traj) / f
    return resid <= budget, f"residual {resid:.3e} vs budget {budget:.3e}"


def _check_absorbing_ball(f: float) -> tuple[bool, str]:
    traj, _ = _viscous_run()
    margin = float(np.min(diagnostics.absorbing_ball_margin(traj)))
    budget = diagnostics.energy_balance_budget(traj) / f
    return margin >= -budget, f"min margin {margin:.3e} vs -{budget:.3e}"


def _check_positivity(f: float) -> tuple[bool, str]:
    traj, _ = _viscous_run()
    amp = float(np.max(np.abs(traj.states)))
    low = float(traj.states.min())
    tol = 1e-8 * amp / f
    return low >= -tol, f"min coefficient {low:.3e} vs -{tol:.1e}"


def _check_riccati_oracle(f: float) -> tuple[bool, str]:
    c = 0.5
    t = np.arange(0.0, 1.2, 1e-3)
    vals = (1.0 - c * t / 2.0) ** -2.0
    series = diagnostics.ThetaSeries(times=t, values=vals, gamma=0.5)
    fit = diagnostics.riccati_fit(series)
    rel = abs(fit.c_estimate - c) / c
    tol = 1e-2 / f
    return rel <= tol, f"c recovered to {rel:.2e} vs {tol:.1e}"


def _synthetic_constant_trajectory() -> Trajectory:
    p = _params(alpha=1.0, beta=2.0, gamma=0.5, n=8)
    times = np.arange(0.0, 2.0 + 1e-12, 0.01)
    states = np.tile(single_mode(8, 1, 1.0), (len(times), 1))
    diags = [norms(s, p) for s in states]
    return Trajectory(params=p, forcing=Forcing.zero(8), times=times,
                      states=states, diagnostics=diags)


def _check_theta_constant(f: float) -> tuple[bool, str]:
    traj = _synthetic_constant_trajectory()
    series = diagnostics.theta(traj, 0.5)
    err = float(np.max(np.abs(series.values - 1.0)))
    tol = 1e-12 / f
    return err <= tol, f"constant-state Theta off by {err:.3e} vs {tol:.1e}"


def _check_windowed_energy(f: float) -> tuple[bool, str]:
    traj = _synthetic_constant_trajectory()
    val = diagnostics.windowed_energy(traj, 0.5)
    err = abs(val - 1.0)
    tol = 1e-12 / f
    return err <= tol, f"unit window integral off by {err:.3e} vs {tol:.1e}"


def _check_balance_flags_nonsolution(f: float) -> tuple[bool, str]:
    # a constant nonzero viscous "trajectory" violates the energy
    # inequality; the residual must exceed its budget decisively
    traj = _synthetic_constant_trajectory()
    resid = diagnostics.energy_inequality_residual(traj)
    budget = diagnostics.energy_balance_budget(traj)
    return resid > 10.0 * budget, (
        f"constant state leaks residual {resid:.3e} vs budget {budget:.3e}")


def _check_euler_conservation(f: float) -> tuple[bool, str]:
    p = ModelParams(alpha=1.0, beta=2.0, nu=0.0, gamma=0.5, n_modes=48)
    rng = np.random.default_rng(108)
    u0 = np.abs(rng.standard_normal(48)) / 8.0
    cfg = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-16)
    traj = integrate(u0, p, Forcing.zero(48), 5.0, cfg)
    e2 = traj.norm_array("energy") ** 2
    drift = float(np.max(np.abs(e2 - e2[0]))) / e2[0]
    tol = 1e-9 / f
    mono = diagnostics.euler_monotonicity(traj, 0.5)
    budget = diagnostics.trapezoid_budget(
        traj.times, np.array([weighted_norm(s, 0.5) ** 2
                              for s in traj.states]))
    ok = drift <= tol and mono <= budget / f
    return ok, (f"energy drift {drift:.3e} vs {tol:.1e}; "
                f"gamma-norm dip {mono:.3e} vs {budget / f:.3e}")


def _check_toy_metrics(f: float) -> tuple[bool, str]:
    rng = np.random.default_rng(109)
    pair = toys.sequence_metrics()
    tol = 1e-12 / f
    worst_sym = worst_tri = worst_ident = 0.0
    worst_weak = -math.inf
    for _ in range(200):
        u, v, w = (rng.standard_normal(24) for _ in range(3))
        for d in (pair.strong, pair.weak):
            worst_sym = max(worst_sym, abs(d(u, v) - d(v, u)))
            worst_tri = max(worst_tri, d(u, w) - d(u, v) - d(v, w))
            worst_ident = max(worst_ident, d(u, u))
        worst_weak = max(worst_weak,
                         pair.weak(u, v) - pair.strong(u, v)
                         - toys.weak_tail_bound(24))
    ok = (worst_sym <= tol and worst_tri <= tol and worst_ident <= tol
          and worst_weak <= tol)
    return ok, (f"symmetry {worst_sym:.1e}, triangle slack {worst_tri:.1e}, "
                f"identity {worst_ident:.1e}, weak-vs-strong {worst_weak:.1e}")


def _check_toy_semigroup(f: float) -> tuple[bool, str]:
    rng = np.random.default_rng(110)
    tol = 1e-12 / f
    worst = 0.0
    grid = toys.Grid(n_points=512, length=16.0)
    systems = [toys.ToySystem.mode_decay(24), toys.ToySystem.frozen_first(24),
               toys.ToySystem.shift(grid)]
    for sys in systems:
        for _ in range(100):
            u0 = rng.standard_normal(sys.state_dim)
            if sys.kind is toys.ToyKind.SHIFT:
                t = rng.integers(0, 40) * grid.dx
                s = rng.integers(0, 40) * grid.dx
            else:
                t, s = rng.uniform(0.0, 3.0, size=2)
            once = sys.flow(t + s, u0)
            twice = sys.flow(t, sys.flow(s, u0))
            scale = 1.0 + float(np.max(np.abs(u0)))
            worst = max(worst, float(np.max(np.abs(once - twice))) / scale)
    return worst <= tol, f"worst semigroup defect {worst:.3e} vs {tol:.1e}"


_CHECKS = (
    ("orthogonality", _check_orthogonality),
    ("fault_detection", _check_fault_detection),
    ("bilinearity", _check_bilinearity),
    ("estimate_ratio", _check_estimate_ratio),
    ("estimate_exponents", _check_exponents),
    ("estimate_constant", _check_cb),
    ("energy_identity", _check_energy_identity),
    ("zero_fixed_point", _check_zero_fixed_point),
    ("linear_contraction", _check_linear_contraction),
    ("error_order", _check_error_order),
    ("determinism", _check_determinism),
    ("energy_balance", _check_energy_balance),
    ("balance_flags_nonsolution", _check_balance_flags_nonsolution),
    ("absorbing_ball", _check_absorbing_ball),
    ("positivity", _check_positivity),
    ("riccati_oracle", _check_riccati_oracle),
    ("theta_constant", _check_theta_constant),
    ("windowed_energy", _check_windowed_energy),
    ("euler_conservation", _check_euler_conservation),
    ("toy_metrics", _check_toy_metrics),
    ("toy_semigroup", _check_toy_semigroup),
)


def run_battery(strict: bool = False) -> list[CheckResult]:
    """Run every invariant check; strict divides error budgets by 10."""
    f = 10.0 if strict else 1.0
    results = []
    for name, fn in _CHECKS:
        try:
            ok, detail = fn(f)
        except Exception as exc:
            ok, detail = False, f"exception {type(exc).__name__}: {exc}"
        results.append(CheckResult(name=name, passed=ok, detail=detail))
    return results


def format_report(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    n_bad = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_bad}/{len(results)} checks passed")
    return "\n".join(lines)
