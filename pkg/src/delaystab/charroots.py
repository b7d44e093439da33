"""Characteristic roots and stability regimes of dtheta/dt = -k theta(t - tau).

The exponential ansatz theta = exp(lambda t) reduces the delay equation to
the transcendental characteristic equation lambda = -k exp(-lambda tau),
solved branch by branch through lambda tau = W_b(-k tau).  Everything is
organized by the dimensionless product k*tau and its two thresholds:

* k*tau = 1/e: the two real roots merge at lambda = -1/tau, the fastest
  possible decay (critical damping).
* k*tau = pi/2: the dominant pair reaches the imaginary axis at
  lambda = +/- i k (marginal oscillation); beyond it solutions grow.

The growth rate of unstable solutions is itself bounded: the dominant real
part always stays below k, so no solution grows faster than exp(k t).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .lambertw import lambert_w

__all__ = [
    "CLASSIFY_EPS",
    "CRITICAL_PRODUCT",
    "DEGENERACY_RTOL",
    "MARGINAL_PRODUCT",
    "RESIDUAL_BOUND",
    "CharacteristicRoot",
    "Regime",
    "StabilityReport",
    "SystemParams",
    "characteristic_residual",
    "characteristic_roots",
    "classify",
    "critical_gain",
    "dominant_root",
    "growth_bound_check",
    "marginal_gain",
    "roots_degenerate",
]

CRITICAL_PRODUCT = math.exp(-1.0)   # k*tau at critical damping
MARGINAL_PRODUCT = math.pi / 2.0    # k*tau at marginal stability
CLASSIFY_EPS = 1e-9                 # classification tolerance on k*tau
RESIDUAL_BOUND = 1e-10              # ceiling on any returned root's residual
DEGENERACY_RTOL = 1e-6              # relative root coincidence => degenerate pair

# Branch query order: principal first, then the second real branch, then the
# conjugate-pair representatives in order of decreasing real part.
_BRANCH_ORDER = (0, -1, 1, 2, 3, 4, 5, 6, 7, 8)
_SCAN_BRANCHES = (0, -1, 1, -2, 2)


class Regime(Enum):
    """Stability regime of the delayed feedback loop."""

    OVERDAMPED = "overdamped"
    CRITICALLY_DAMPED = "critically_damped"
    UNDERDAMPED = "underdamped"
    MARGINAL = "marginal"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class SystemParams:
    """Feedback gain k (1/time) and delay tau (time).

    k = 0 is allowed (no feedback, single root at 0).  tau = 0 is rejected:
    it degenerates to an ordinary differential equation and breaks the
    lambda*tau = W(-k*tau) formulation, so it is out of scope here.
    Negative k (anti-damping) is rejected as well.
    """

    k: float
    tau: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k) and self.k >= 0.0):
            raise ValueError(f"k must be finite and >= 0, got {self.k!r}")
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise ValueError(f"tau must be finite and positive, got {self.tau!r}")
        if not math.isfinite(self.k * self.tau):
            raise ValueError("product k*tau must be finite")

    @property
    def k_tau(self) -> float:
        return self.k * self.tau


@dataclass(frozen=True)
class CharacteristicRoot:
    """One eigenvalue with its Lambert W branch label and defect.

    The stored root is the representative with Im(lambda) >= 0; since the
    characteristic equation has real coefficients, the conjugate is a root
    as well and is left implicit.
    """

    branch: int
    lam: complex
    residual: float


@dataclass(frozen=True)
class StabilityReport:
    regime: Regime
    dominant: CharacteristicRoot
    k_tau: float
    critical_product: float = CRITICAL_PRODUCT
    marginal_product: float = MARGINAL_PRODUCT


def characteristic_residual(params: SystemParams, lam: complex) -> float:
    """Normalized defect |lambda + k exp(-lambda tau)| / max(k, |lambda|).

    Zero exactly when lambda solves the characteristic equation.
    """
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise ValueError(f"lambda must be finite, got {lam!r}")
    defect = abs(lam + params.k * cmath.exp(-lam * params.tau))
    return defect / max(params.k, abs(lam), 1e-30)


def _root_for_branch(params: SystemParams, branch: int) -> CharacteristicRoot:
    w = lambert_w(branch, complex(-params.k_tau))
    lam = w / params.tau
    if lam.imag < 0.0:
        lam = lam.conjugate()  # representative convention Im(lambda) >= 0
    residual = characteristic_residual(params, lam)
    if residual > RESIDUAL_BOUND:
        raise RuntimeError(
            f"branch {branch} root residual {residual:.3e} exceeds "
            f"{RESIDUAL_BOUND:.1e} for k={params.k}, tau={params.tau}"
        )
    return CharacteristicRoot(branch=branch, lam=lam, residual=residual)


def characteristic_roots(
    params: SystemParams, n_branches: int
) -> list[CharacteristicRoot]:
    """One representative root per branch 0, -1, 1, 2, ... (n_branches of them).

    Roots are sorted by descending real part.  At k*tau = 1/e the branch 0
    and branch -1 entries coincide at -1/tau; use :func:`roots_degenerate`
    to detect that double root.  For k = 0 the only root is lambda = 0 and a
    single entry is returned regardless of ``n_branches``.
    """
    if n_branches < 1:
        raise ValueError(f"n_branches must be >= 1, got {n_branches}")
    if params.k == 0.0:
        return [CharacteristicRoot(branch=0, lam=complex(0.0), residual=0.0)]
    if n_branches > len(_BRANCH_ORDER):
        raise ValueError(
            f"n_branches must be <= {len(_BRANCH_ORDER)}, got {n_branches}"
        )
    roots = [_root_for_branch(params, b) for b in _BRANCH_ORDER[:n_branches]]
    roots.sort(key=lambda r: -r.lam.real)  # stable: ties keep branch order
    return roots


def roots_degenerate(roots: list[CharacteristicRoot]) -> bool:
    """True when the two leading roots coincide to within DEGENERACY_RTOL.

    The separation is measured between the underlying roots, undoing the
    Im >= 0 representative convention (for a complex pair the second root
    is the conjugate of its stored representative, so stored values alone
    would always collide).  Root-space coincidence is better conditioned
    than testing k*tau against 1/e directly, because the pair separates
    like sqrt(|k*tau - 1/e|).
    """
    if len(roots) < 2:
        return False
    lam0, lam1 = roots[0].lam, roots[1].lam
    scale = max(abs(lam0), abs(lam1))
    return abs(lam0 - lam1.conjugate()) <= DEGENERACY_RTOL * scale


def dominant_root(params: SystemParams) -> CharacteristicRoot:
    """The root with maximal real part; it governs the long-time behavior.

    The principal branch always supplies it for this equation; that is
    asserted here against a five-branch scan on every call.
    """
    if params.k == 0.0:
        return CharacteristicRoot(branch=0, lam=complex(0.0), residual=0.0)
    scan = [_root_for_branch(params, b) for b in _SCAN_BRANCHES]
    best = max(scan, key=lambda r: r.lam.real)
    principal = scan[0]
    if best.lam.real > principal.lam.real + 1e-12 * max(1.0, abs(best.lam)):
        raise RuntimeError(
            "principal branch lost dominance in the five-branch scan for "
            f"k={params.k}, tau={params.tau}"
        )
    return principal


def classify(params: SystemParams) -> StabilityReport:
    """Assign the stability regime from k*tau and attach the dominant root.

    Thresholds are applied with tolerance CLASSIFY_EPS on k*tau.  k = 0 is
    classified overdamped by convention (its single root lambda = 0 sits on
    the axis, the only regime/root-sign exception).
    """
    kt = params.k_tau
    if abs(kt - CRITICAL_PRODUCT) <= CLASSIFY_EPS:
        regime = Regime.CRITICALLY_DAMPED
    elif abs(kt - MARGINAL_PRODUCT) <= CLASSIFY_EPS:
        regime = Regime.MARGINAL
    elif kt < CRITICAL_PRODUCT:
        regime = Regime.OVERDAMPED
    elif kt < MARGINAL_PRODUCT:
        regime = Regime.UNDERDAMPED
    else:
        regime = Regime.UNSTABLE
    return StabilityReport(regime=regime, dominant=dominant_root(params), k_tau=kt)


def critical_gain(tau: float) -> float:
    """Gain at which decay is fastest for the given delay: 1/(e*tau)."""
    _require_positive_tau(tau)
    return 1.0 / (math.e * tau)


def marginal_gain(tau: float) -> float:
    """Gain at which stability is lost for the given delay: pi/(2*tau)."""
    _require_positive_tau(tau)
    return math.pi / (2.0 * tau)


def growth_bound_check(params: SystemParams) -> tuple[bool, CharacteristicRoot]:
    """Verify 0 < Re(lambda_dominant) < k in the unstable regime.

    Returns (True, dominant root) when the bound holds.  A False return is
    a library defect, never a valid outcome.  Raises ValueError when the
    system is not unstable.
    """
    if params.k_tau <= MARGINAL_PRODUCT + CLASSIFY_EPS:
        raise ValueError(
            f"growth bound requires k*tau > pi/2, got k*tau = {params.k_tau!r}"
        )
    root = dominant_root(params)
    return (0.0 < root.lam.real < params.k), root


def _require_positive_tau(tau: float) -> None:
    if not (math.isfinite(tau) and tau > 0.0):
        raise ValueError(f"tau must be finite and positive, got {tau!r}")
