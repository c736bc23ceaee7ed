"""Algebra of the tridiagonal cascade model.

The model lives on truncated mode vectors u = (u_1, ..., u_N) with the
conventions u_0 = 0 and u_{N+1} = 0.  It is driven by

    du_n/dt + nu * n^alpha * u_n - n^beta * u_{n-1}^2
            + (n+1)^beta * u_n * u_{n+1} = g_n,

i.e.  du/dt + nu*A(u) + B(u, u) = g  with the diagonal operator
(A u)_n = n^alpha u_n and the tridiagonal bilinear form

    (B(u, v))_n = -n^beta u_{n-1} v_{n-1} + (n+1)^beta u_n v_{n+1}.

Everything here is pure: no mutation, safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "ModelParams",
    "Forcing",
    "NormReport",
    "mode_weights",
    "apply_A",
    "apply_B",
    "rhs",
    "norms",
    "weighted_norm",
    "c_b",
    "estimate_exponents",
    "sharp_estimate_ratio",
    "two_mode_sharpness_search",
    "single_mode",
]


@dataclass(frozen=True)
class ModelParams:
    """Parameter tuple (alpha, beta, nu, gamma) plus truncation level.

    alpha   exponent of the diagonal operator A, alpha > 0
    beta    exponent of the bilinear form B, beta > 1
    nu      viscosity, nu >= 0 (nu = 0 is the inviscid model)
    gamma   exponent of the diagnostic weighted norm, gamma > 0
    n_modes truncation level N >= 2
    """

    alpha: float
    beta: float
    nu: float
    gamma: float
    n_modes: int

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.beta > 1:
            raise ValueError(f"beta must exceed 1, got {self.beta}")
        if self.nu < 0 or not math.isfinite(self.nu):
            raise ValueError(f"nu must be finite and nonnegative, got {self.nu}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.n_modes < 2:
            raise ValueError(f"n_modes must be at least 2, got {self.n_modes}")

    @property
    def global_regular(self) -> bool:
        """Strong solutions exist globally: beta <= alpha + 1."""
        return self.beta <= self.alpha + 1

    @property
    def local_regular(self) -> bool:
        """Strong solutions exist locally: 2*beta < 3*alpha + 2."""
        return 2 * self.beta < 3 * self.alpha + 2

    @property
    def blowup_regime(self) -> bool:
        """Forced solutions lose the strong norm in finite time: 2*beta > 3*alpha + 3."""
        return 2 * self.beta > 3 * self.alpha + 3

    @property
    def blowup_norm_exponent(self) -> float:
        """Weight exponent 2*(beta + gamma - 1)/3 of the blow-up norm."""
        return 2.0 * (self.beta + self.gamma - 1.0) / 3.0

    @classmethod
    def for_dimension(cls, d: int, nu: float = 1.0, gamma: float = 1.0,
                      n_modes: int = 64) -> "ModelParams":
        """Exponent pair alpha = 2/d, beta = 3/2 + 1/d mimicking the
        d-dimensional incompressible equations.  Exponent matching only;
        nothing deeper is claimed."""
        if d < 1:
            raise ValueError("dimension must be positive")
        return cls(alpha=2.0 / d, beta=1.5 + 1.0 / d, nu=nu, gamma=gamma,
                   n_modes=n_modes)


def default_blowup_gamma(alpha: float, beta: float) -> float:
    """Midpoint of the admissible interval (0, min{2*beta - 3*alpha - 3, 1})
    when it is nonempty, else 1.0."""
    width = 2.0 * beta - 3.0 * alpha - 3.0
    if width > 0:
        return min(width, 1.0) / 2.0
    return 1.0


@dataclass(frozen=True)
class Forcing:
    """Nonnegative forcing vector g, optionally with finite support.

    support_bound, when set, asserts g_n = 0 for all modes n >= support_bound
    (1-indexed, matching the mode numbering).
    """

    values: np.ndarray
    support_bound: int | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1:
            raise ValueError("forcing must be a 1-d vector")
        if not np.all(np.isfinite(vals)):
            raise ValueError("forcing entries must be finite")
        if np.any(vals < 0):
            raise ValueError("forcing entries must be nonnegative")
        if self.support_bound is not None:
            k = self.support_bound
            if k < 1:
                raise ValueError("support_bound is a 1-indexed mode number")
            if np.any(vals[k - 1:] != 0.0):
                raise ValueError(
                    f"forcing must vanish for modes n >= {k}")

    @classmethod
    def zero(cls, n_modes: int) -> "Forcing":
        return cls(np.zeros(n_modes), support_bound=1)

    @classmethod
    def single_mode(cls, n_modes: int, amplitude: float, mode: int = 1) -> "Forcing":
        g = np.zeros(n_modes)
        g[mode - 1] = amplitude
        return cls(g, support_bound=mode + 1)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True)
class NormReport:
    """The four norms tracked along a trajectory."""

    energy: float        # |u|, plain l2
    enstrophy: float     # ||u|| = |A^{1/2} u|, weights n^alpha
    gamma_norm: float    # ||u||_gamma, weights n^gamma
    blowup_norm: float   # ||u||_{2(beta+gamma-1)/3}


@lru_cache(maxsize=256)
def _cached_weights(n_modes: int, exponent: float) -> np.ndarray:
    w = np.arange(1, n_modes + 1, dtype=float) ** exponent
    w.setflags(write=False)
    return w


def mode_weights(n_modes: int, exponent: float) -> np.ndarray:
    """Index weights (1^e, 2^e, ..., N^e), cached per (N, e).  Read-only."""
    return _cached_weights(int(n_modes), float(exponent))


def _check_state(u: np.ndarray, p: ModelParams) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (p.n_modes,):
        raise ValueError(
            f"state has shape {u.shape}, expected ({p.n_modes},)")
    return u


def single_mode(n_modes: int, mode: int, amplitude: float = 1.0) -> np.ndarray:
    """Basis state amplitude * e_mode (1-indexed)."""
    u = np.zeros(n_modes)
    u[mode - 1] = amplitude
    return u


def apply_A(u: np.ndarray, p: ModelParams) -> np.ndarray:
    """(A u)_n = n^alpha u_n."""
    u = _check_state(u, p)
    return mode_weights(p.n_modes, p.alpha) * u


def apply_B(u: np.ndarray, v: np.ndarray, p: ModelParams) -> np.ndarray:
    """(B(u, v))_n = -n^beta u_{n-1} v_{n-1} + (n+1)^beta u_n v_{n+1}.

    Truncation closes both ends: u_0 = v_0 = 0 and u_{N+1} = v_{N+1} = 0,
    so the n = N output keeps only the -N^beta term.  This makes the
    orthogonality (B(u, v), v) = 0 an exact telescoping identity.
    """
    u = _check_state(u, p)
    v = _check_state(v, p)
    w = mode_weights(p.n_modes, p.beta)  # w[i] = (i+1)^beta
    out = np.zeros(p.n_modes)
    out[1:] = -w[1:] * u[:-1] * v[:-1]
    out[:-1] += w[1:] * u[:-1] * v[1:]
    return out


def orthogonality_scale(u: np.ndarray, v: np.ndarray, p: ModelParams) -> float:
    """1 + sum of the absolute trilinear terms entering (B(u, v), v).

    The natural yardstick for round-off in the telescoping cancellation.
    """
    u = _check_state(u, p)
    v = _check_state(v, p)
    w = mode_weights(p.n_modes, p.beta)
    terms = w[1:] * np.abs(u[:-1]) * np.abs(v[:-1]) * np.abs(v[1:])
    return 1.0 + 2.0 * float(np.sum(terms))


def rhs(u: np.ndarray, p: ModelParams, g: Forcing) -> np.ndarray:
    """Right-hand side g - nu*A(u) - B(u, u) of the evolution equation."""
    u = _check_state(u, p)
    if g.values.shape != (p.n_modes,):
        raise ValueError("forcing length does not match n_modes")
    out = g.values - apply_B(u, u, p)
    if p.nu != 0.0:
        out -= p.nu * apply_A(u, p)
    return out


def weighted_norm(u: np.ndarray, exponent: float) -> float:
    """(sum n^exponent u_n^2)^(1/2) on the truncated vector."""
    u = np.asarray(u, dtype=float)
    w = mode_weights(u.shape[0], exponent)
    return float(np.sqrt(np.sum(w * u * u)))


def norms(u: np.ndarray, p: ModelParams) -> NormReport:
    """Energy, enstrophy, gamma and blow-up norms of one state."""
    u = _check_state(u, p)
    return NormReport(
        energy=float(np.linalg.norm(u)),
        enstrophy=weighted_norm(u, p.alpha),
        gamma_norm=weighted_norm(u, p.gamma),
        blowup_norm=weighted_norm(u, p.blowup_norm_exponent),
    )


def c_b(p: ModelParams) -> float:
    """Constant in the  |(B(u,u), Au)| <= c_b |Au|^p ||u||^q  estimate.

    alpha * 2^beta for alpha <= 1, alpha * 2^(alpha + beta - 1) above.
    Taken as given; no tightness is claimed.
    """
    if p.alpha <= 1.0:
        return p.alpha * 2.0 ** p.beta
    return p.alpha * 2.0 ** (p.alpha + p.beta - 1.0)


def estimate_exponents(alpha, beta):
    """Exponent pair (p, q) of |Au| and ||u|| in the nonlinear-term estimate.

    p = 2*beta/alpha - 2/alpha - 1,  q = -2*beta/alpha + 2/alpha + 4.
    Exact under rational inputs (fractions.Fraction passes through).
    """
    pexp = 2 * beta / alpha - 2 / alpha - 1
    qexp = -2 * beta / alpha + 2 / alpha + 4
    return pexp, qexp


def _in_estimate_window(alpha: float, beta: float) -> bool:
    # closed interval: endpoints are accepted
    return alpha / 2 + 1 <= beta <= 3 * alpha / 2 + 1


def sharp_estimate_ratio(u: np.ndarray, p: ModelParams) -> float:
    """|(B(u,u), Au)| / (c_b |Au|^p ||u||^q), which is <= 1 for every u.

    Valid only for beta in [alpha/2 + 1, 3*alpha/2 + 1]; raises outside
    the window and on the zero state.
    """
    if not _in_estimate_window(p.alpha, p.beta):
        raise ValueError(
            f"beta={p.beta} outside the estimate window "
            f"[{p.alpha / 2 + 1}, {3 * p.alpha / 2 + 1}] for alpha={p.alpha}")
    u = _check_state(u, p)
    if not np.any(u):
        raise ValueError("ratio undefined on the zero state")
    pexp, qexp = estimate_exponents(p.alpha, p.beta)
    numer = abs(float(np.dot(apply_B(u, u, p), apply_A(u, p))))
    au_norm = weighted_norm(u, 2.0 * p.alpha)   # |Au|
    ens = weighted_norm(u, p.alpha)             # ||u||
    denom = c_b(p) * au_norm ** pexp * ens ** qexp
    return numer / denom


def two_mode_sharpness_search(p: ModelParams,
                              max_mode: int = 64,
                              log2_ratio_range: int = 8,
                              ratios_per_octave: int = 4) -> float:
    """Supremum of the estimate ratio over two-consecutive-mode states.

    Scans u = e_n + r*e_{n+1} for n = 1..max_mode and log-spaced amplitude
    ratios r in [2^-log2_ratio_range, 2^log2_ratio_range].  The ratio is
    scale invariant, so a unit leading amplitude loses nothing.
    """
    if max_mode + 1 > p.n_modes:
        raise ValueError("n_modes too small for the requested mode scan")
    ratios = 2.0 ** np.linspace(-log2_ratio_range, log2_ratio_range,
                                2 * log2_ratio_range * ratios_per_octave + 1)
    best = 0.0
    for n in range(1, max_mode + 1):
        for r in ratios:
            u = np.zeros(p.n_modes)
            u[n - 1] = 1.0
            u[n] = r
            best = max(best, sharp_estimate_ratio(u, p))
    return best
