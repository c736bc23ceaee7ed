"""Adaptive integrating-factor stepper and trajectory bookkeeping."""

import math

import numpy as np
import pytest

from tnslab.integrator import (IntegrationError, IntegratorConfig, Termination,
                               check_positivity, integrate, step)
from tnslab.model import Forcing, ModelParams, norms, rhs, single_mode


def params(alpha=2 / 3, beta=11 / 6, nu=1.0, gamma=1.0, n=16):
    return ModelParams(alpha=alpha, beta=beta, nu=nu, gamma=gamma, n_modes=n)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            IntegratorConfig(rel_tol=0.0)
        with pytest.raises(ValueError):
            IntegratorConfig(dt_min=0.0)
        with pytest.raises(ValueError):
            IntegratorConfig(dt_min=1.0, dt_max=0.5)
        with pytest.raises(ValueError):
            IntegratorConfig(sample_interval=-1.0)
        with pytest.raises(ValueError):
            IntegratorConfig(blowup_threshold=0.0)


class TestStep:
    def test_last_mode_decays_exactly(self):
        # the final mode has no outgoing transfer partner, so a pure
        # last-mode state evolves by the diagonal factor alone
        p = params(n=8)
        u0 = single_mode(8, 8, 3.0)
        dt = 0.37
        out, err = step(u0, dt, p, Forcing.zero(8))
        want = 3.0 * math.exp(-p.nu * 8 ** p.alpha * dt)
        assert out[7] == pytest.approx(want, rel=1e-15)
        assert not out[:7].any()
        assert err <= 1e-15

    def test_error_estimate_scales_like_order_five(self):
        p = params(alpha=1.0, beta=2.0, n=12)
        g = Forcing.single_mode(12, 1.0)
        rng = np.random.default_rng(7)
        u0 = np.abs(rng.standard_normal(12)) * 0.5
        _, e_full = step(u0, 0.02, p, g)
        _, e_half = step(u0, 0.01, p, g)
        assert 20.0 <= e_full / e_half <= 45.0

    def test_small_step_matches_rhs(self):
        # one tiny step is u + dt*rhs + O(dt^2)
        p = params(n=10)
        g = Forcing.single_mode(10, 2.0)
        u0 = np.full(10, 0.3)
        dt = 1e-6
        out, _ = step(u0, dt, p, g)
        lin = u0 + dt * rhs(u0, p, g)
        np.testing.assert_allclose(out, lin, atol=1e-11)


class TestIntegrate:
    def test_sampling_grid_and_endpoint(self):
        p = params(n=8)
        g = Forcing.single_mode(8, 1.0)
        cfg = IntegratorConfig(sample_interval=0.25)
        traj = integrate(np.zeros(8), p, g, 1.1, cfg)
        np.testing.assert_allclose(
            traj.times, [0.0, 0.25, 0.5, 0.75, 1.0, 1.1], atol=1e-12)
        assert traj.terminated is Termination.COMPLETED
        assert traj.t_end == traj.times[-1]

    def test_diagnostics_recomputable(self):
        p = params(n=8)
        g = Forcing.single_mode(8, 1.5)
        traj = integrate(np.zeros(8), p, g, 1.0, IntegratorConfig())
        for i in (0, len(traj) // 2, len(traj) - 1):
            again = norms(traj.states[i], p)
            assert traj.diagnostics[i].enstrophy == again.enstrophy
            assert traj.diagnostics[i].blowup_norm == again.blowup_norm

    def test_determinism(self):
        p = params(n=12)
        g = Forcing.single_mode(12, 2.0)
        a = integrate(np.zeros(12), p, g, 2.0, IntegratorConfig())
        b = integrate(np.zeros(12), p, g, 2.0, IntegratorConfig())
        assert a.times.tobytes() == b.times.tobytes()
        assert a.states.tobytes() == b.states.tobytes()

    def test_energy_conserved_without_forcing_or_viscosity(self):
        p = params(nu=0.0, n=24)
        rng = np.random.default_rng(3)
        u0 = np.abs(rng.standard_normal(24))
        traj = integrate(u0, p, Forcing.zero(24), 2.0,
                         IntegratorConfig(rel_tol=1e-10, abs_tol=1e-14))
        e = traj.norm_array("energy")
        assert np.max(np.abs(e - e[0])) <= 1e-9 * e[0]

    def test_decay_run_approaches_rest(self):
        p = params(n=8)
        u0 = single_mode(8, 1, 0.5)
        traj = integrate(u0, p, Forcing.zero(8), 12.0, IntegratorConfig())
        assert traj.norm_array("energy")[-1] <= 1e-5

    def test_galerkin_consistency_when_regular(self):
        # resolved regular runs agree across truncation levels
        cfg = IntegratorConfig(rel_tol=1e-8, abs_tol=1e-12)
        energies = {}
        for n in (16, 32):
            p = params(alpha=1.0, beta=1.5, n=n)
            g = Forcing.single_mode(n, 2.0)
            traj = integrate(np.zeros(n), p, g, 5.0, cfg)
            tail = np.abs(traj.states[:, -1]).max()
            assert tail <= 1e-6 * traj.norm_array("energy").max()
            energies[n] = traj.norm_array("energy")
        assert np.max(np.abs(energies[16] - energies[32])) <= \
            10 * cfg.rel_tol * energies[32].max()

    def test_quasi_blowup_termination(self):
        n = 16
        p = ModelParams(alpha=2 / 3, beta=3.0, nu=1.0, gamma=0.5, n_modes=n)
        g = Forcing.single_mode(n, 40.0)
        cfg = IntegratorConfig(blowup_threshold=20.0, rel_tol=1e-5)
        traj = integrate(np.zeros(n), p, g, 5.0, cfg)
        assert traj.terminated is Termination.QUASI_BLOWUP
        assert traj.events and traj.events[-1][1] == "quasi_blowup"
        assert traj.norm_array("blowup_norm")[-1] >= 20.0
        assert traj.t_end < 5.0

    def test_step_underflow_termination(self):
        # the floor equals the initial step, so the first rejected step
        # already pushes the controller below dt_min
        p = params(alpha=1.0, beta=2.0, n=12)
        g = Forcing.single_mode(12, 3.0)
        cfg = IntegratorConfig(rel_tol=1e-13, abs_tol=1e-16,
                               dt_min=5e-2, dt_init=5e-2)
        traj = integrate(np.zeros(12), p, g, 2.0, cfg)
        assert traj.terminated is Termination.STEP_UNDERFLOW
        assert traj.events and traj.events[-1][1] == "step_underflow"
        assert traj.t_end < 2.0

    def test_max_steps_raises(self):
        p = params(n=8)
        g = Forcing.single_mode(8, 1.0)
        with pytest.raises(IntegrationError):
            integrate(np.zeros(8), p, g, 10.0,
                      IntegratorConfig(max_steps=5))

    def test_initial_state_length_checked(self):
        p = params(n=8)
        with pytest.raises(ValueError):
            integrate(np.zeros(7), p, Forcing.zero(8), 1.0, IntegratorConfig())

    def test_positivity_preserved_from_nonnegative_data(self):
        p = params(n=16)
        g = Forcing.single_mode(16, 4.0)
        rng = np.random.default_rng(11)
        u0 = np.abs(rng.standard_normal(16)) * 0.2
        traj = integrate(u0, p, g, 4.0, IntegratorConfig())
        assert check_positivity(traj) >= -1e-8 * traj.norm_array("energy").max()
