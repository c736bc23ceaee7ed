"""Closed-form toy evolutionary systems and the weak/strong metric pair.

Three miniature flows with known attractor behavior serve as executable
instances of the abstract attraction framework:

  shift         left translation u(x, t) = u0(x + t) of grid functions on
                [-L, 0]; weak convergence to 0 without strong convergence
  mode_decay    u_n(t) = u_n(0) e^(-t/n) on sequences; strong convergence
                that is not uniform over the unit ball
  frozen_first  u_1 frozen, u_n(t) = u_n(0) e^(-t) for n >= 2; uniform
                strong attraction to the segment {u_1 in [-1, 1], tail 0}

The strong metric is (discrete) l2 / L2; the weak metric damps mode n by
2^(-n) (or position x by 2^(-|x|)) and saturates large differences through
x/(1+x), so escaping tails become invisible.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "MetricPair",
    "Grid",
    "ToyKind",
    "ToySystem",
    "BoxSet",
    "sequence_metrics",
    "weak_tail_bound",
    "zero_set",
    "frozen_first_limit_set",
    "attraction_radius",
    "basis_ensemble",
    "ball_ensemble",
    "bump_ensemble",
    "weak_decay_horizon",
]


@dataclass(frozen=True)
class MetricPair:
    """A strong and a weak distance on a common state representation."""

    strong: Callable[[np.ndarray, np.ndarray], float]
    weak: Callable[[np.ndarray, np.ndarray], float]


def _pair(u, v) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    return u, v


def _scaled_l2(d: np.ndarray, weights: np.ndarray | None = None) -> float:
    """l2 norm scaled by the largest entry.

    Squaring tiny components directly can underflow to zero, which would
    report distance 0 for distinct points and break the metric axioms.
    """
    m = float(np.max(np.abs(d), initial=0.0))
    if m == 0.0 or not np.isfinite(m):
        return m
    r = d / m
    if weights is None:
        return m * math.sqrt(float(np.sum(r * r)))
    return m * math.sqrt(float(np.sum(weights * r * r)))


def _sequence_strong(u, v) -> float:
    u, v = _pair(u, v)
    return _scaled_l2(u - v)


def _sequence_weak(u, v) -> float:
    u, v = _pair(u, v)
    d = np.abs(u - v)
    pw = 2.0 ** -np.arange(1, len(d) + 1)
    return float(np.sum(pw * d / (1.0 + d)))


def sequence_metrics() -> MetricPair:
    """l2 distance and the 2^(-n)-damped saturating distance on sequences."""
    return MetricPair(strong=_sequence_strong, weak=_sequence_weak)


def weak_tail_bound(n_modes: int) -> float:
    """Upper bound 2^(-N) on the truncated tail of the weak sum.

    Every term of the infinite weak metric is below 2^(-n), so cutting the
    representation at N modes misstates the distance by at most this much.
    Add it to any tolerance that compares weak distances.
    """
    return 2.0 ** -n_modes


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [-length, 0] carrying the translation example.

    Distances use trapezoid quadrature weights, so the strong metric is
    the discrete L2 norm and the weak metric is the discrete version of
    integrating 2^(-|x|) |u-v|/(1+|u-v|).
    """

    n_points: int = 2 ** 14
    length: float = 64.0

    def __post_init__(self):
        if self.n_points < 2:
            raise ValueError("grid needs at least 2 points")
        if self.length <= 0:
            raise ValueError("length must be positive")

    @property
    def dx(self) -> float:
        return self.length / (self.n_points - 1)

    @cached_property
    def x(self) -> np.ndarray:
        pts = np.linspace(-self.length, 0.0, self.n_points)
        pts.setflags(write=False)
        return pts

    @cached_property
    def _quad(self) -> np.ndarray:
        w = np.full(self.n_points, self.dx)
        w[0] = 0.5 * self.dx
        w[-1] = 0.5 * self.dx
        w.setflags(write=False)
        return w

    @cached_property
    def _weak_weight(self) -> np.ndarray:
        w = self._quad * 2.0 ** (-np.abs(self.x))
        w.setflags(write=False)
        return w

    def strong_distance(self, a, b) -> float:
        a, b = _pair(a, b)
        return _scaled_l2(a - b, self._quad)

    def weak_distance(self, a, b) -> float:
        a, b = _pair(a, b)
        d = np.abs(a - b)
        return float(np.sum(self._weak_weight * d / (1.0 + d)))

    def metrics(self) -> MetricPair:
        return MetricPair(strong=self.strong_distance, weak=self.weak_distance)


class ToyKind(enum.Enum):
    SHIFT = "shift"
    MODE_DECAY = "mode_decay"
    FROZEN_FIRST = "frozen_first"


@dataclass(frozen=True)
class ToySystem:
    """One toy flow: a kind plus its state representation.

    Sequence systems carry n_modes; the shift system carries a Grid.  The
    shift flow moves by whole grid cells, so times are quantized to the
    grid resolution (t and round(t/dx)*dx produce the same state).
    """

    kind: ToyKind
    n_modes: int = 0
    grid: Grid | None = None

    @classmethod
    def shift(cls, grid: Grid | None = None) -> "ToySystem":
        return cls(kind=ToyKind.SHIFT, grid=grid if grid is not None else Grid())

    @classmethod
    def mode_decay(cls, n_modes: int) -> "ToySystem":
        return cls(kind=ToyKind.MODE_DECAY, n_modes=n_modes)

    @classmethod
    def frozen_first(cls, n_modes: int) -> "ToySystem":
        return cls(kind=ToyKind.FROZEN_FIRST, n_modes=n_modes)

    @property
    def state_dim(self) -> int:
        if self.kind is ToyKind.SHIFT:
            return self.grid.n_points
        return self.n_modes

    def metrics(self) -> MetricPair:
        if self.kind is ToyKind.SHIFT:
            return self.grid.metrics()
        return sequence_metrics()

    def flow(self, t: float, u0) -> np.ndarray:
        """Closed-form state at time t >= 0 from initial state u0."""
        if t < 0:
            raise ValueError("toy flows run forward only (t >= 0)")
        u0 = np.asarray(u0, dtype=float)
        if u0.shape != (self.state_dim,):
            raise ValueError(
                f"state has shape {u0.shape}, expected ({self.state_dim},)")
        if self.kind is ToyKind.SHIFT:
            cells = int(round(t / self.grid.dx))
            out = np.zeros_like(u0)
            if cells < len(u0):
                # value at x comes from u0 at x + t; beyond the right edge
                # the profile is zero by the x > 0 convention
                out[:len(u0) - cells] = u0[cells:]
            return out
        if self.kind is ToyKind.MODE_DECAY:
            n = np.arange(1, self.n_modes + 1)
            return u0 * np.exp(-t / n)
        out = u0 * math.exp(-t)
        out[0] = u0[0]
        return out


@dataclass(frozen=True)
class BoxSet:
    """Candidate attracting set of product form prod_n [lo_n, hi_n].

    Both metrics sum independent per-coordinate penalties that increase
    with |u_n - v_n|, so the componentwise clip is the exact nearest point
    of the set in either metric.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if lo.shape != hi.shape or np.any(lo > hi):
            raise ValueError("invalid box bounds")

    def project(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return np.clip(u, self.lower, self.upper)


def zero_set(dim: int) -> BoxSet:
    """The singleton {0}."""
    z = np.zeros(dim)
    return BoxSet(lower=z, upper=z)


def frozen_first_limit_set(n_modes: int) -> BoxSet:
    """The segment {u: u_1 in [-1, 1], u_n = 0 for n >= 2}."""
    lo = np.zeros(n_modes)
    hi = np.zeros(n_modes)
    lo[0] = -1.0
    hi[0] = 1.0
    return BoxSet(lower=lo, upper=hi)


def attraction_radius(sys: ToySystem, candidate: BoxSet, t: float,
                      metric: str, ensemble: Sequence[np.ndarray]) -> float:
    """Empirical uniform-attraction radius at time t.

    sup over the ensemble of the chosen distance from flow(t, u0) to the
    candidate set.  A finite ensemble and horizon can only upper-bound the
    true radius; nothing here certifies an attractor.
    """
    if metric not in ("strong", "weak"):
        raise ValueError("metric must be 'strong' or 'weak'")
    if len(ensemble) == 0:
        raise ValueError("ensemble must be nonempty")
    pair = sys.metrics()
    dist = pair.strong if metric == "strong" else pair.weak
    worst = 0.0
    for u0 in ensemble:
        ut = sys.flow(t, u0)
        worst = max(worst, dist(ut, candidate.project(ut)))
    return worst


def basis_ensemble(dim: int, count: int) -> list[np.ndarray]:
    """Unit basis vectors e_1 .. e_count."""
    if count > dim:
        raise ValueError("count exceeds dimension")
    out = []
    for n in range(count):
        e = np.zeros(dim)
        e[n] = 1.0
        out.append(e)
    return out


def ball_ensemble(dim: int, count: int, seed: int,
                  nonneg: bool = False) -> list[np.ndarray]:
    """Seeded random states in the unit ball (radius in [0.2, 1])."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        v = rng.standard_normal(dim)
        if nonneg:
            v = np.abs(v)
        v *= rng.uniform(0.2, 1.0) / np.linalg.norm(v)
        out.append(v)
    return out


def bump_ensemble(grid: Grid, count: int, seed: int,
                  support: tuple[float, float] = (-10.0, -1.0)) -> list[np.ndarray]:
    """Seeded unit-norm Gaussian bump profiles for the shift system.

    Centers stay in the given window near the right end of the grid, so
    translations up to about length - |support| lose nothing off the left
    edge and the strong norm is exactly preserved.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        center = rng.uniform(*support)
        width = rng.uniform(0.2, 1.0)
        prof = np.exp(-((grid.x - center) / width) ** 2)
        nrm = grid.strong_distance(prof, np.zeros_like(prof))
        out.append(prof / nrm)
    return out


def weak_decay_horizon(eps: float) -> float:
    """Time by which every mode_decay unit-ball state is weakly within eps.

    Split the weak sum at M: modes above M contribute at most 2^(-M), the
    rest decay at least like e^(-t/M).  Choosing 2^(-M) <= eps/2 and
    solving e^(-t/M) = eps/2 gives the horizon.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    m = math.ceil(math.log2(2.0 / eps))
    return m * math.log(2.0 / eps)
