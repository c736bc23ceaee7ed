"""Post-hoc trajectory analysis.

All checks work on the sampled grid with trapezoid quadrature and report
violations against a quadrature budget derived from observed second
differences, so every verdict carries an explicit error allowance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .integrator import Trajectory
from .model import mode_weights, weighted_norm

__all__ = [
    "ThetaSeries",
    "RiccatiFit",
    "trapezoid_budget",
    "energy_inequality_residual",
    "energy_balance_budget",
    "absorbing_ball_margin",
    "theta",
    "riccati_fit",
    "windowed_energy",
    "euler_monotonicity",
]

#: multiplies the raw second-difference estimate; roughly 50x the
#: asymptotic trapezoid constant 1/12, so budgets survive a 10x tightening
BUDGET_SAFETY = 4.0


@dataclass(frozen=True)
class ThetaSeries:
    """Windowed Lyapunov functional sampled along a trajectory.

    values[k] = int_{t_k}^{t_k + window} ||u||_gamma^2
              + (2 gamma / (3 + (3/2)^beta)) *
                int_{t_k}^{t_k + window} sum_n (n+1)^(gamma-1) u_n u_{n+1},
    defined for every sample time with t_k + window inside the run.
    """

    times: np.ndarray
    values: np.ndarray
    gamma: float
    window: float = 1.0


@dataclass(frozen=True)
class RiccatiFit:
    """Least-squares growth coefficient of d(Theta)/dt = c * Theta^(3/2)."""

    c_estimate: float
    window_start: float
    window_end: float
    residual: float


def _cumtrapz(t: np.ndarray, f: np.ndarray) -> np.ndarray:
    out = np.zeros_like(f)
    out[1:] = np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(t))
    return out


def trapezoid_budget(times: np.ndarray, values: np.ndarray,
                     safety: float = BUDGET_SAFETY) -> float:
    """Error allowance for trapezoid integrals of the sampled series.

    safety * h * sum |second differences| plus a tiny floor; scales as
    h^2 times the observed curvature, like the true trapezoid error.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(times) < 3:
        return 1e-12 * (1.0 + float(np.max(np.abs(values), initial=0.0)))
    h = float(np.max(np.diff(times)))
    second = np.abs(values[2:] - 2.0 * values[1:-1] + values[:-2])
    span = float(times[-1] - times[0])
    floor = 1e-12 * (1.0 + float(np.max(np.abs(values)))) * (1.0 + span)
    return safety * h * float(np.sum(second)) + floor


def _balance_integrand(traj: Trajectory) -> np.ndarray:
    # F = 2 nu ||u||^2 - 2 (g, u); the energy identity reads
    # |u(t)|^2 - |u(t0)|^2 + int F = 0 along the exact truncated flow
    p = traj.params
    ens2 = traj.norm_array("enstrophy") ** 2
    gu = traj.states @ traj.forcing.values
    return 2.0 * p.nu * ens2 - 2.0 * gu


def energy_inequality_residual(traj: Trajectory) -> float:
    """Worst positive violation of the energy inequality over sample pairs.

    For t0 <= t computes |u(t)|^2 + 2 nu int ||u||^2 - |u(t0)|^2
    - 2 int (g, u) with trapezoid integrals and returns the largest value
    (0 if the inequality holds everywhere).  Should stay below
    energy_balance_budget(traj).
    """
    energy2 = traj.norm_array("energy") ** 2
    phi = energy2 + _cumtrapz(traj.times, _balance_integrand(traj))
    running_min = np.minimum.accumulate(phi)
    worst = float(np.max(phi - running_min))
    return max(worst, 0.0)


def energy_balance_budget(traj: Trajectory, safety: float = BUDGET_SAFETY) -> float:
    """Quadrature allowance matching energy_inequality_residual."""
    return trapezoid_budget(traj.times, _balance_integrand(traj), safety)


def adjacent_energy_residuals(traj: Trajectory) -> np.ndarray:
    """Signed per-sample energy-balance residual against the previous sample."""
    energy2 = traj.norm_array("energy") ** 2
    phi = energy2 + _cumtrapz(traj.times, _balance_integrand(traj))
    out = np.zeros_like(phi)
    out[1:] = np.diff(phi)
    return out


def absorbing_ball_margin(traj: Trajectory) -> np.ndarray:
    """Slack of |u(t)|^2 under e^(-nu t)|u(0)|^2 + (|g|/nu)^2 (1 - e^(-nu t)).

    Nonnegative (within integrator error) for every viscous run; raises on
    inviscid trajectories where the bound is void.
    """
    p = traj.params
    if p.nu == 0.0:
        raise ValueError("absorbing ball bound requires nu > 0")
    energy2 = traj.norm_array("energy") ** 2
    decay = np.exp(-p.nu * traj.times)
    radius2 = (traj.forcing.norm / p.nu) ** 2
    return decay * energy2[0] + radius2 * (1.0 - decay) - energy2


def _pair_sum_series(traj: Trajectory, gamma: float) -> np.ndarray:
    # sum_n (n+1)^(gamma-1) u_n u_{n+1} per sample
    n_modes = traj.params.n_modes
    w = mode_weights(n_modes, gamma - 1.0)[1:]  # (n+1)^(gamma-1), n = 1..N-1
    return (traj.states[:, :-1] * traj.states[:, 1:]) @ w


def theta(traj: Trajectory, gamma: float, window: float = 1.0) -> ThetaSeries:
    """Windowed Lyapunov functional of the blow-up argument.

    Requires the run to span more than one window and at least 20 samples
    per unit window so the trapezoid window integrals are meaningful.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    t = traj.times
    if t[-1] - t[0] <= window:
        raise ValueError("trajectory shorter than one window")
    max_h = float(np.max(np.diff(t)))
    if max_h > window / 20.0:
        raise ValueError(
            f"sample grid too coarse: dt={max_h} exceeds window/20")
    beta = traj.params.beta
    coef = 2.0 * gamma / (3.0 + 1.5 ** beta)
    gnorm2 = np.array([weighted_norm(s, gamma) ** 2 for s in traj.states])
    pair = _pair_sum_series(traj, gamma)
    integrand = gnorm2 + coef * pair
    cum = _cumtrapz(t, integrand)
    mask = t + window <= t[-1] * (1.0 + 1e-12)
    t0 = t[mask]
    vals = np.interp(t0 + window, t, cum) - cum[mask]
    return ThetaSeries(times=t0, values=vals, gamma=gamma, window=window)


def riccati_fit(series: ThetaSeries,
                window: tuple[float, float] | None = None) -> RiccatiFit:
    """Fit c in d(Theta)/dt = c Theta^(3/2) by least squares.

    Derivatives are centered differences on the Theta grid; only samples
    with Theta > 0 (and inside the optional time window) enter the fit.
    residual is the relative l2 misfit of the fitted law.
    """
    t = series.times
    v = series.values
    if len(t) < 3:
        raise ValueError("need at least 3 Theta samples")
    dv = (v[2:] - v[:-2]) / (t[2:] - t[:-2])
    tm = t[1:-1]
    vm = v[1:-1]
    use = vm > 0.0
    if window is not None:
        use &= (tm >= window[0]) & (tm <= window[1])
    if int(np.sum(use)) < 5:
        raise ValueError("fewer than 5 usable samples for the Riccati fit")
    x = vm[use] ** 1.5
    y = dv[use]
    c = float(np.dot(x, y) / np.dot(x, x))
    signal = float(np.linalg.norm(y))
    misfit = float(np.linalg.norm(y - c * x))
    residual = misfit / signal if signal > 0 else 0.0
    return RiccatiFit(c_estimate=c,
                      window_start=float(tm[use][0]),
                      window_end=float(tm[use][-1]),
                      residual=residual)


def windowed_energy(traj: Trajectory, t: float, window: float = 1.0) -> float:
    """Trapezoid value of int_t^(t+window) |u|^2."""
    times = traj.times
    if t < times[0] - 1e-12 or t + window > times[-1] * (1.0 + 1e-12):
        raise ValueError(f"window [{t}, {t + window}] outside the run")
    energy2 = traj.norm_array("energy") ** 2
    cum = _cumtrapz(times, energy2)
    return float(np.interp(t + window, times, cum) - np.interp(t, times, cum))


def euler_monotonicity(traj: Trajectory, gamma: float) -> float:
    """Worst decrease of ||u||_gamma^2 over ordered sample pairs.

    In the inviscid model with nonnegative data the gamma norm is
    nondecreasing for 0 < gamma <= 1, so the result should not exceed the
    integrator error allowance.  Raises unless nu = 0.
    """
    if traj.params.nu != 0.0:
        raise ValueError("inviscid diagnostic: requires nu = 0")
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    psi = np.array([weighted_norm(s, gamma) ** 2 for s in traj.states])
    running_max = np.maximum.accumulate(psi)
    return float(np.max(running_max - psi))
