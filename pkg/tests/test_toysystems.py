"""Toy flows, metric pair, and empirical attraction radii."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tnslab.toysystems import (BoxSet, Grid, ToySystem, attraction_radius,
                               ball_ensemble, basis_ensemble, bump_ensemble,
                               frozen_first_limit_set, sequence_metrics,
                               weak_decay_horizon, weak_tail_bound, zero_set)

seq_vec = st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=32)


def seq_triple():
    return st.integers(1, 32).flatmap(
        lambda n: st.tuples(*(st.lists(st.floats(-1e3, 1e3),
                                       min_size=n, max_size=n)
                              for _ in range(3))))


class TestSequenceMetrics:
    def test_first_basis_weak_distance(self):
        m = sequence_metrics()
        e1 = np.zeros(8)
        e1[0] = 1.0
        assert m.weak(e1, np.zeros(8)) == pytest.approx(0.25, rel=1e-15)
        assert m.strong(e1, np.zeros(8)) == 1.0

    def test_length_mismatch(self):
        m = sequence_metrics()
        with pytest.raises(ValueError):
            m.strong(np.zeros(3), np.zeros(5))

    @given(seq_triple())
    def test_metric_axioms(self, triple):
        u, v, w = (np.array(t) for t in triple)
        m = sequence_metrics()
        for dist in (m.strong, m.weak):
            assert dist(u, u) == 0.0
            duv = dist(u, v)
            assert duv == dist(v, u)
            assert duv >= 0.0
            assert duv <= dist(u, w) + dist(w, v) + 1e-12 * (1 + duv)

    @given(seq_vec)
    def test_weak_below_strong_and_one(self, vals):
        u = np.array(vals)
        z = np.zeros_like(u)
        m = sequence_metrics()
        dw = m.weak(u, z)
        assert dw <= m.strong(u, z) * (1 + 1e-12)
        assert dw < 1.0

    def test_tail_bound_value(self):
        assert weak_tail_bound(10) == 2.0 ** -10


class TestGrid:
    def test_validation(self):
        with pytest.raises(ValueError):
            Grid(n_points=1)
        with pytest.raises(ValueError):
            Grid(length=0.0)

    def test_quadrature_total_mass(self):
        g = Grid(n_points=129, length=64.0)
        ones = np.ones(129)
        # integral of 1 over [-64, 0] is 64; trapezoid is exact for constants
        assert g.strong_distance(ones, np.zeros(129)) == pytest.approx(
            math.sqrt(64.0), rel=1e-12)

    def test_weak_weight_decays_left(self):
        g = Grid(n_points=257, length=16.0)
        spike_right = np.zeros(257)
        spike_right[-10] = 1.0
        spike_left = np.zeros(257)
        spike_left[10] = 1.0
        z = np.zeros(257)
        assert g.weak_distance(spike_left, z) < g.weak_distance(spike_right, z)


class TestFlows:
    def test_negative_time_rejected(self):
        sys = ToySystem.mode_decay(4)
        with pytest.raises(ValueError):
            sys.flow(-0.1, np.zeros(4))

    def test_shape_checked(self):
        sys = ToySystem.mode_decay(4)
        with pytest.raises(ValueError):
            sys.flow(1.0, np.zeros(5))

    def test_mode_decay_halving_times(self):
        # mode n halves in time n ln 2
        sys = ToySystem.mode_decay(16)
        for n in (1, 4, 16):
            e = np.zeros(16)
            e[n - 1] = 1.0
            out = sys.flow(n * math.log(2.0), e)
            assert out[n - 1] == pytest.approx(0.5, rel=1e-14)
            assert np.count_nonzero(out) == 1

    def test_frozen_first_hand_value(self):
        sys = ToySystem.frozen_first(8)
        u0 = np.zeros(8)
        u0[0] = u0[1] = 1.0
        out = sys.flow(3.0, u0)
        assert out[0] == 1.0
        assert out[1] == pytest.approx(math.exp(-3.0), rel=1e-14)
        assert not out[2:].any()

    def test_shift_moves_whole_cells(self):
        g = Grid(n_points=64, length=63.0)   # dx = 1
        sys = ToySystem.shift(g)
        u0 = np.zeros(64)
        u0[40] = 2.5
        out = sys.flow(3.0, u0)
        assert out[37] == 2.5
        assert np.count_nonzero(out) == 1
        # shifting past the left edge empties the grid
        assert not sys.flow(100.0, u0).any()

    def test_shift_time_quantization(self):
        g = Grid(n_points=64, length=63.0)
        sys = ToySystem.shift(g)
        u0 = np.arange(64.0)
        np.testing.assert_array_equal(sys.flow(2.4, u0), sys.flow(2.0, u0))

    @given(st.integers(0, 2 ** 32 - 1), st.floats(0, 50), st.floats(0, 50))
    @settings(max_examples=40, deadline=None)
    def test_sequence_semigroup(self, seed, t, s):
        rng = np.random.default_rng(seed)
        u0 = rng.standard_normal(16)
        for sys in (ToySystem.mode_decay(16), ToySystem.frozen_first(16)):
            one_hop = sys.flow(t + s, u0)
            two_hop = sys.flow(t, sys.flow(s, u0))
            np.testing.assert_allclose(one_hop, two_hop, atol=1e-12, rtol=1e-12)

    @given(st.integers(0, 2 ** 32 - 1), st.integers(0, 300), st.integers(0, 300))
    @settings(max_examples=40, deadline=None)
    def test_shift_semigroup_on_cell_times(self, seed, kt, ks):
        g = Grid(n_points=512, length=16.0)
        sys = ToySystem.shift(g)
        rng = np.random.default_rng(seed)
        u0 = rng.standard_normal(512)
        t, s = kt * g.dx, ks * g.dx
        np.testing.assert_array_equal(sys.flow(t + s, u0),
                                      sys.flow(t, sys.flow(s, u0)))


class TestCandidateSets:
    def test_box_validation(self):
        with pytest.raises(ValueError):
            BoxSet(lower=np.ones(3), upper=np.zeros(3))

    def test_zero_set_projection(self):
        s = zero_set(4)
        np.testing.assert_array_equal(s.project(np.arange(4.0)), np.zeros(4))

    def test_frozen_first_segment(self):
        s = frozen_first_limit_set(4)
        got = s.project(np.array([3.0, -2.0, 0.5, 0.0]))
        np.testing.assert_array_equal(got, [1.0, 0.0, 0.0, 0.0])

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_projection_is_nearest_point(self, seed):
        rng = np.random.default_rng(seed)
        lo = rng.uniform(-1, 0, 8)
        hi = rng.uniform(0, 1, 8)
        box = BoxSet(lower=lo, upper=hi)
        u = rng.uniform(-3, 3, 8)
        other = rng.uniform(lo, hi)
        m = sequence_metrics()
        proj = box.project(u)
        for dist in (m.strong, m.weak):
            assert dist(u, proj) <= dist(u, other) * (1 + 1e-12)


class TestAttractionRadius:
    def test_input_validation(self):
        sys = ToySystem.mode_decay(4)
        with pytest.raises(ValueError):
            attraction_radius(sys, zero_set(4), 1.0, "strong", [])
        with pytest.raises(ValueError):
            attraction_radius(sys, zero_set(4), 1.0, "fast",
                              basis_ensemble(4, 2))

    def test_mode_decay_radius_shrinks(self):
        sys = ToySystem.mode_decay(32)
        ens = basis_ensemble(32, 32) + ball_ensemble(32, 16, seed=3)
        cand = zero_set(32)
        radii = [attraction_radius(sys, cand, t, "strong", ens)
                 for t in (0.0, 10.0, 40.0)]
        assert radii[0] > radii[1] > radii[2]
        # the slow tail mode keeps the strong radius large for a long time
        assert radii[2] >= math.exp(-40.0 / 32.0) * 0.2

    def test_frozen_first_uniform_rate(self):
        n = 24
        sys = ToySystem.frozen_first(n)
        ens = basis_ensemble(n, n) + ball_ensemble(n, 16, seed=5)
        cand = frozen_first_limit_set(n)
        for t in (1.0, 5.0, 12.0):
            r = attraction_radius(sys, cand, t, "strong", ens)
            # tail of any unit-ball state decays like e^(-t)
            assert r <= math.exp(-t) * (1 + 1e-12)
        assert attraction_radius(sys, cand, 5.0, "strong", ens) > 0.0

    def test_shift_weak_decay_strong_stall(self):
        grid = Grid(n_points=2 ** 12, length=64.0)
        sys = ToySystem.shift(grid)
        ens = bump_ensemble(grid, 8, seed=11)
        cand = zero_set(grid.n_points)
        w0 = attraction_radius(sys, cand, 0.0, "weak", ens)
        w1 = attraction_radius(sys, cand, 30.0, "weak", ens)
        assert w1 < 1e-3 * w0
        s1 = attraction_radius(sys, cand, 30.0, "strong", ens)
        # translation preserves the profile, so no strong attraction
        assert s1 >= math.exp(-1.0) * 1.0

    def test_weak_horizon_certificate(self):
        eps = 1e-3
        horizon = weak_decay_horizon(eps)
        assert horizon == pytest.approx(11 * math.log(2000.0), rel=1e-12)
        n = 256
        sys = ToySystem.mode_decay(n)
        ens = basis_ensemble(n, 64) + ball_ensemble(n, 32, seed=7)
        r = attraction_radius(sys, zero_set(n), horizon, "weak", ens)
        assert r <= eps + weak_tail_bound(n)

    def test_horizon_validation(self):
        with pytest.raises(ValueError):
            weak_decay_horizon(0.0)
        with pytest.raises(ValueError):
            weak_decay_horizon(1.5)


class TestEnsembles:
    def test_basis_count_checked(self):
        with pytest.raises(ValueError):
            basis_ensemble(4, 8)

    def test_ball_seeded_and_bounded(self):
        a = ball_ensemble(16, 8, seed=2)
        b = ball_ensemble(16, 8, seed=2)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)
        for x in a:
            assert 0.2 - 1e-12 <= np.linalg.norm(x) <= 1.0 + 1e-12

    def test_bumps_unit_norm_inside_window(self):
        grid = Grid(n_points=2 ** 11, length=64.0)
        z = np.zeros(grid.n_points)
        for prof in bump_ensemble(grid, 6, seed=9):
            assert grid.strong_distance(prof, z) == pytest.approx(1.0, rel=1e-12)
            # mass concentrated in the support window, nothing at the far edge
            assert abs(prof[0]) < 1e-10
