"""Spectral analysis and exact simulation of dtheta/dt = -k theta(t - tau).

The scalar linear feedback loop with a pure delay is fully characterized by
the dimensionless product k*tau.  This package computes its characteristic
roots through a multi-branch Lambert W solver, classifies the stability
regime against the two thresholds k*tau = 1/e (critical damping) and
k*tau = pi/2 (marginal stability), re-derives the same results by
elementary curve intersections as an independent check, and integrates the
equation exactly by the method of steps.
"""

from .charroots import (
    CLASSIFY_EPS,
    CRITICAL_PRODUCT,
    MARGINAL_PRODUCT,
    CharacteristicRoot,
    Regime,
    StabilityReport,
    SystemParams,
    characteristic_residual,
    characteristic_roots,
    classify,
    critical_gain,
    dominant_root,
    growth_bound_check,
    marginal_gain,
    roots_degenerate,
)
from .graphical import (
    Curve,
    DampingIntersections,
    InstabilityWitness,
    curve_data,
    damping_intersections,
    fastest_decay,
    instability_bounds,
    solve_real_system,
    xexpx_minimum,
)
from .lambertw import (
    BRANCH_POINT,
    ConvergenceError,
    canonical_branch,
    lambert_w,
    real_branch_pair,
)
from .simulator import (
    HORIZON_CAP_RATIO,
    HorizonCapError,
    ModalFit,
    PolynomialSegment,
    Trajectory,
    extremum_times,
    fit_decay_rate,
    modal_fit,
    sample,
    sample_derivative,
    simulate,
    zero_crossings,
)

__version__ = "0.1.0"

__all__ = [
    "BRANCH_POINT",
    "CLASSIFY_EPS",
    "CRITICAL_PRODUCT",
    "HORIZON_CAP_RATIO",
    "MARGINAL_PRODUCT",
    "CharacteristicRoot",
    "ConvergenceError",
    "Curve",
    "DampingIntersections",
    "HorizonCapError",
    "InstabilityWitness",
    "ModalFit",
    "PolynomialSegment",
    "Regime",
    "StabilityReport",
    "SystemParams",
    "Trajectory",
    "canonical_branch",
    "characteristic_residual",
    "characteristic_roots",
    "classify",
    "critical_gain",
    "curve_data",
    "damping_intersections",
    "dominant_root",
    "extremum_times",
    "fastest_decay",
    "fit_decay_rate",
    "growth_bound_check",
    "instability_bounds",
    "lambert_w",
    "marginal_gain",
    "modal_fit",
    "real_branch_pair",
    "roots_degenerate",
    "sample",
    "sample_derivative",
    "simulate",
    "solve_real_system",
    "xexpx_minimum",
    "zero_crossings",
]
