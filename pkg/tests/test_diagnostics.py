"""Energy-balance residuals, Theta series, Riccati fits: closed-form oracles."""

import math

import numpy as np
import pytest

from tnslab.diagnostics import (ThetaSeries, absorbing_ball_margin,
                                adjacent_energy_residuals,
                                energy_balance_budget,
                                energy_inequality_residual,
                                euler_monotonicity, riccati_fit, theta,
                                trapezoid_budget, windowed_energy)
from tnslab.integrator import Termination, Trajectory
from tnslab.model import Forcing, ModelParams, norms


def make_traj(params, forcing, times, states):
    return Trajectory(params=params, forcing=forcing,
                      times=np.asarray(times, dtype=float),
                      states=np.asarray(states, dtype=float),
                      diagnostics=[norms(s, params) for s in states],
                      events=[], terminated=Termination.COMPLETED)


def last_mode_decay(nu=1.0, amplitude=2.0, n=8, t_end=3.0, h=0.005):
    """Exact solution u(t) = a e^(-nu N^alpha t) e_N of the unforced system.

    The last mode has no transfer partner, so the nonlinearity vanishes on
    this ray and the trajectory is a pure closed-form decay.
    """
    p = ModelParams(alpha=2 / 3, beta=11 / 6, nu=nu, gamma=1.0, n_modes=n)
    times = np.arange(0.0, t_end + h / 2, h)
    rate = nu * n ** p.alpha
    states = np.zeros((len(times), n))
    states[:, -1] = amplitude * np.exp(-rate * times)
    return make_traj(p, Forcing.zero(n), times, states)


def constant_two_mode(value=(1.0, 1.0), gamma=0.7, beta=11 / 6, n=8,
                      t_end=3.0, h=0.01):
    p = ModelParams(alpha=2 / 3, beta=beta, nu=1.0, gamma=gamma, n_modes=n)
    times = np.arange(0.0, t_end + h / 2, h)
    states = np.zeros((len(times), n))
    states[:, 0] = value[0]
    states[:, 1] = value[1]
    return make_traj(p, Forcing.zero(n), times, states)


class TestTrapezoidBudget:
    def test_covers_known_quadrature_error(self):
        # int_0^1 t^3 = 1/4; budget must dominate the actual trapezoid error
        t = np.linspace(0.0, 1.0, 41)
        f = t ** 3
        actual = float(np.trapezoid(f, t)) - 0.25
        assert abs(actual) <= trapezoid_budget(t, f)

    def test_linear_data_costs_only_floor(self):
        t = np.linspace(0.0, 2.0, 21)
        f = 3.0 * t + 1.0
        assert trapezoid_budget(t, f) <= 1e-10

    def test_short_series_floor(self):
        t = np.array([0.0, 1.0])
        assert trapezoid_budget(t, np.array([0.0, 100.0])) > 0.0


class TestEnergyBalance:
    def test_exact_decay_within_budget(self):
        traj = last_mode_decay()
        resid = energy_inequality_residual(traj)
        assert resid <= energy_balance_budget(traj)

    def test_flags_energy_from_nowhere(self):
        # |u| grows with no forcing: inequality must fail beyond budget
        p = ModelParams(alpha=2 / 3, beta=11 / 6, nu=1.0, gamma=1.0, n_modes=4)
        times = np.linspace(0.0, 2.0, 201)
        states = np.zeros((201, 4))
        states[:, 0] = 1.0 + times
        traj = make_traj(p, Forcing.zero(4), times, states)
        assert energy_inequality_residual(traj) > \
            10.0 * energy_balance_budget(traj)

    def test_adjacent_residuals_signed_and_anchored(self):
        traj = last_mode_decay()
        r = adjacent_energy_residuals(traj)
        assert r[0] == 0.0
        assert len(r) == len(traj)
        assert np.max(np.abs(r)) <= energy_balance_budget(traj)


class TestAbsorbingBall:
    def test_exact_decay_has_nonnegative_margin(self):
        # last-mode decay rate nu N^alpha beats the ball's e^(-nu t)
        traj = last_mode_decay(amplitude=3.0)
        assert absorbing_ball_margin(traj).min() >= -1e-12

    def test_forced_rest_state_margin_formula(self):
        # u stays 0 under zero initial data: margin = (g/nu)^2 (1 - e^(-nu t))
        p = ModelParams(alpha=1.0, beta=2.0, nu=2.0, gamma=1.0, n_modes=4)
        g = Forcing.single_mode(4, 3.0)
        times = np.linspace(0.0, 1.0, 11)
        traj = make_traj(p, g, times, np.zeros((11, 4)))
        want = (3.0 / 2.0) ** 2 * (1.0 - np.exp(-2.0 * times))
        np.testing.assert_allclose(absorbing_ball_margin(traj), want,
                                   rtol=1e-12)

    def test_inviscid_rejected(self):
        p = ModelParams(alpha=1.0, beta=2.0, nu=0.0, gamma=1.0, n_modes=4)
        traj = make_traj(p, Forcing.zero(4), [0.0, 1.0], np.zeros((2, 4)))
        with pytest.raises(ValueError):
            absorbing_ball_margin(traj)


class TestTheta:
    def test_constant_single_mode_is_one(self):
        traj = constant_two_mode(value=(1.0, 0.0), gamma=0.7)
        series = theta(traj, gamma=0.7)
        np.testing.assert_allclose(series.values, 1.0, rtol=1e-12)
        assert series.times[0] == 0.0
        assert series.times[-1] <= traj.times[-1] - series.window + 1e-9

    def test_constant_two_mode_hand_value(self):
        gamma, beta = 0.7, 11 / 6
        traj = constant_two_mode(value=(1.0, 1.0), gamma=gamma, beta=beta)
        gamma_norm2 = 1.0 + 2.0 ** gamma
        pair = 2.0 ** (gamma - 1.0)
        coef = 2.0 * gamma / (3.0 + 1.5 ** beta)
        want = gamma_norm2 + coef * pair
        series = theta(traj, gamma=gamma)
        np.testing.assert_allclose(series.values, want, rtol=1e-12)

    def test_short_run_rejected(self):
        traj = constant_two_mode(t_end=0.8)
        with pytest.raises(ValueError):
            theta(traj, gamma=0.7)

    def test_coarse_sampling_rejected(self):
        traj = constant_two_mode(t_end=3.0, h=0.2)
        with pytest.raises(ValueError):
            theta(traj, gamma=0.7, window=1.0)


class TestRiccatiFit:
    def closed_form(self, c, theta0=1.0, t_end=1.5, h=1e-3):
        # d(Theta)/dt = c Theta^(3/2) has solution
        # Theta(t) = (Theta0^(-1/2) - c t / 2)^(-2)
        t = np.arange(0.0, t_end + h / 2, h)
        v = (theta0 ** -0.5 - 0.5 * c * t) ** -2.0
        return ThetaSeries(times=t, values=v, gamma=0.5, window=1.0)

    def test_recovers_riccati_constant(self):
        for c in (0.1, 0.5, 2.0):
            fit = riccati_fit(self.closed_form(c, t_end=min(1.5, 1.6 / (c + 1))))
            assert fit.c_estimate == pytest.approx(c, rel=0.01)
            assert fit.residual <= 0.01

    def test_window_restricts_samples(self):
        fit = riccati_fit(self.closed_form(0.5), window=(0.5, 1.0))
        assert fit.window_start >= 0.5 - 1e-9
        assert fit.window_end <= 1.0 + 1e-9

    def test_too_few_samples_raises(self):
        s = ThetaSeries(times=np.array([0.0, 0.1]),
                        values=np.array([1.0, 1.1]), gamma=0.5, window=1.0)
        with pytest.raises(ValueError):
            riccati_fit(s)

    def test_negative_drift_gives_negative_c(self):
        t = np.linspace(0.0, 1.0, 101)
        s = ThetaSeries(times=t, values=2.0 - t, gamma=0.5, window=1.0)
        assert riccati_fit(s).c_estimate < 0.0


class TestWindowedEnergy:
    def test_constant_state_integral(self):
        traj = constant_two_mode(value=(2.0, 0.0))  # |u|^2 = 4
        assert windowed_energy(traj, 0.5, 1.0) == pytest.approx(4.0, rel=1e-12)

    def test_window_outside_run_rejected(self):
        traj = constant_two_mode(t_end=2.0)
        with pytest.raises(ValueError):
            windowed_energy(traj, 1.5, 1.0)


class TestEulerMonotonicity:
    def euler_traj(self, series):
        p = ModelParams(alpha=2 / 3, beta=11 / 6, nu=0.0, gamma=0.5, n_modes=4)
        times = np.linspace(0.0, 1.0, len(series))
        states = np.zeros((len(series), 4))
        states[:, 0] = series
        return make_traj(p, Forcing.zero(4), times, states)

    def test_nondecreasing_series_passes(self):
        traj = self.euler_traj(np.linspace(1.0, 2.0, 50))
        assert euler_monotonicity(traj, gamma=0.5) == 0.0

    def test_decrease_is_measured(self):
        vals = np.concatenate([np.linspace(1.0, 2.0, 25),
                               np.linspace(2.0, 1.5, 25)])
        traj = self.euler_traj(vals)
        # gamma-norm drop of 2^2 - 1.5^2 = 1.75 in the squared norm
        assert euler_monotonicity(traj, gamma=0.5) == pytest.approx(1.75,
                                                                    rel=1e-12)

    def test_viscous_rejected(self):
        traj = constant_two_mode()
        with pytest.raises(ValueError):
            euler_monotonicity(traj, gamma=0.7)
