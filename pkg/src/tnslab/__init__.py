"""Numerical laboratory for tridiagonal cascade models.

Simulates the Galerkin-truncated viscous/inviscid system, checks the
algebraic identities and estimates it satisfies, detects quasi-blow-up
through a windowed Lyapunov functional, and maps the (alpha, beta) plane
into regularity regimes.  Toy evolutionary systems with closed-form flows
exercise the weak/strong attraction machinery.
"""

from .model import (
    Forcing,
    ModelParams,
    NormReport,
    apply_A,
    apply_B,
    c_b,
    default_blowup_gamma,
    estimate_exponents,
    mode_weights,
    norms,
    rhs,
    sharp_estimate_ratio,
    single_mode,
    two_mode_sharpness_search,
    weighted_norm,
)
from .integrator import (
    IntegrationError,
    IntegratorConfig,
    Termination,
    Trajectory,
    check_positivity,
    integrate,
    step,
)
from .diagnostics import (
    RiccatiFit,
    ThetaSeries,
    absorbing_ball_margin,
    energy_balance_budget,
    energy_inequality_residual,
    euler_monotonicity,
    riccati_fit,
    theta,
    trapezoid_budget,
    windowed_energy,
)
from .experiments import (
    AnalyticLabel,
    ConfigError,
    EmpiricalLabel,
    RegimeLabel,
    analytic_label,
    run_config_from_dict,
    simulate_run,
)
from .toysystems import (
    Grid,
    MetricPair,
    ToyKind,
    ToySystem,
    attraction_radius,
    sequence_metrics,
    weak_decay_horizon,
)

__version__ = "0.1.0"

__all__ = [
    "Forcing", "ModelParams", "NormReport", "apply_A", "apply_B", "c_b",
    "default_blowup_gamma", "estimate_exponents", "mode_weights", "norms",
    "rhs", "sharp_estimate_ratio", "single_mode", "two_mode_sharpness_search",
    "weighted_norm",
    "IntegrationError", "IntegratorConfig", "Termination", "Trajectory",
    "check_positivity", "integrate", "step",
    "RiccatiFit", "ThetaSeries", "absorbing_ball_margin",
    "energy_balance_budget", "energy_inequality_residual",
    "euler_monotonicity", "riccati_fit", "theta", "trapezoid_budget",
    "windowed_energy",
    "AnalyticLabel", "ConfigError", "EmpiricalLabel", "RegimeLabel",
    "analytic_label", "run_config_from_dict", "simulate_run",
    "Grid", "MetricPair", "ToyKind", "ToySystem", "attraction_radius",
    "sequence_metrics", "weak_decay_horizon",
    "__version__",
]
