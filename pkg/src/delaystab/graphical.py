"""Elementary curve-intersection solvers for the delayed feedback spectrum.

This module re-derives the spectral results of :mod:`delaystab.charroots`
without touching the Lambert W function, by bisecting the two classical
pictures directly:

* The complex root pair (a, b) of lambda = a + i b solves the split system
  a = -k exp(-a tau) cos(b tau), b = k exp(-a tau) sin(b tau), equivalently
  the modulus relation a^2 + b^2 = k^2 exp(-2 a tau) together with the
  tangent relation -b/a = tan(b tau).  The solver bisects a on a bracket
  read off the modulus picture and, for each trial a, bisects the cleared
  tangent form b cos(b tau) + a sin(b tau) = 0 on the branch interval that
  carries the fundamental (smallest positive b) intersection.  The cleared
  form stays regular at a = 0 where the quotient -b/a blows up.

* The real root pair comes from intersecting y = x exp(x) with the level
  -k*tau, one bisection per monotone arm of the curve on either side of its
  minimum at x = -1.

Because no Lambert W evaluation is involved, agreement with the spectral
module is a genuine cross-check rather than a tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .charroots import CLASSIFY_EPS, CRITICAL_PRODUCT, MARGINAL_PRODUCT, SystemParams

__all__ = [
    "Curve",
    "DampingIntersections",
    "InstabilityWitness",
    "curve_data",
    "damping_intersections",
    "fastest_decay",
    "instability_bounds",
    "solve_real_system",
    "xexpx_minimum",
]

SYSTEM_RTOL = 1e-10        # witness must satisfy the split system this well
DEGENERACY_ATOL = 1e-6     # |x1 - x2| below this marks the double real root
LEVEL_ATOL = 1e-12         # |x e^x + k*tau| on returned intersections
SINGULARITY_ATOL = 1e-6    # tangent samples dropped this close to b*tau = (n+1/2)*pi
GOLDEN_XTOL = 1e-10        # x-resolution of the curve-minimum search

_BT_MARGIN = 1e-6          # widen tangent brackets past pi/2 (cos(pi/2) rounds to 6e-17)
_BISECT_STEPS = 64


@dataclass(frozen=True)
class InstabilityWitness:
    """A complex-pair solution (a, b) with the bounds read off the curves.

    b0 = pi/(2*tau) is the left edge of the tangent branch carrying the
    fundamental intersection.  Whenever a > 0 the chain b0 < b < k holds,
    which is what forces k*tau > pi/2 for any unstable solution.
    """

    a: float
    b: float
    b0: float
    k: float

    def __post_init__(self) -> None:
        tau = math.pi / (2.0 * self.b0)
        decay = self.k * math.exp(-self.a * tau)
        modulus = abs(self.a**2 + self.b**2 - decay**2)
        if modulus > SYSTEM_RTOL * max(decay**2, self.a**2 + self.b**2):
            raise ValueError(f"modulus relation violated by {modulus:.3e}")
        bt = self.b * tau
        tangent = abs(self.b * math.cos(bt) + self.a * math.sin(bt))
        if tangent > SYSTEM_RTOL * max(abs(self.a), abs(self.b), self.k):
            raise ValueError(f"tangent relation violated by {tangent:.3e}")
        if self.a > 0.0 and not (self.b0 < self.b < self.k):
            raise ValueError(
                f"unstable witness must satisfy {self.b0} < b < {self.k}, "
                f"got b = {self.b}"
            )


@dataclass(frozen=True)
class DampingIntersections:
    """Dimensionless real intersections x1 <= -1 <= x2 of x e^x with -k*tau."""

    x1: float
    x2: float
    degenerate: bool

    def __post_init__(self) -> None:
        if not (self.x1 <= -1.0 <= self.x2 < 0.0):
            raise ValueError(
                f"intersections must straddle -1, got ({self.x1}, {self.x2})"
            )
        if self.degenerate != (abs(self.x1 - self.x2) <= DEGENERACY_ATOL):
            raise ValueError("degenerate flag inconsistent with separation")


class Curve(Enum):
    """Curves behind the two intersection pictures."""

    MODULUS = "modulus"    # a |-> k^2 exp(-2 a tau)
    TANGENT = "tangent"    # b |-> tan(b tau)
    XEXPX = "xexpx"        # x |-> x exp(x)


def _bisect(f, lo: float, hi: float, steps: int = _BISECT_STEPS) -> float:
    """Plain bisection; endpoints may sit exactly on the root."""
    flo = f(lo)
    if flo == 0.0:
        return lo
    fhi = f(hi)
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise RuntimeError(f"no sign change on bracket [{lo}, {hi}]")
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo > 0.0) == (fm > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_real_system(params: SystemParams) -> InstabilityWitness:
    """Fundamental complex root (a, b), b > 0, by nested bisection.

    Requires k*tau > 1/e (below it the roots are real and b = 0) and
    k*tau at least CLASSIFY_EPS away from pi/2 (at the marginal point the
    solution sits exactly on the bracket corner a = 0).  The result matches
    the Lambert-W dominant root; that equivalence is asserted by the test
    suite, not here, to keep the two routes independent.
    """
    k, tau = params.k, params.tau
    kt = params.k_tau
    if kt <= CRITICAL_PRODUCT:
        raise ValueError(
            f"complex pair requires k*tau > 1/e, got k*tau = {kt!r} (roots real)"
        )
    if abs(kt - MARGINAL_PRODUCT) <= CLASSIFY_EPS:
        raise ValueError(
            "k*tau is marginal within tolerance; the fundamental pair is "
            "exactly (0, k) there"
        )
    unstable = kt > MARGINAL_PRODUCT
    if unstable:
        a_lo, a_hi = 0.0, k                       # 0 <= a <= a0 < k
        bt_lo, bt_hi = math.pi / 2.0 - _BT_MARGIN, math.pi
    else:
        a_lo, a_hi = -1.0 / tau, 0.0              # fastest decay bounds a from below
        bt_lo, bt_hi = 1e-12, math.pi / 2.0 + _BT_MARGIN

    def tangent_cleared(a: float, bt: float) -> float:
        return (bt / tau) * math.cos(bt) + a * math.sin(bt)

    def frequency_for(a: float) -> float:
        # Fundamental b > 0 solving the tangent relation at this trial a.
        if not unstable and 1.0 + a * tau <= 0.0:
            return 0.0  # no oscillatory intersection left of the decay bound
        f_lo = tangent_cleared(a, bt_lo)
        f_hi = tangent_cleared(a, bt_hi)
        if (f_lo > 0.0) == (f_hi > 0.0) and f_lo != 0.0 and f_hi != 0.0:
            return 0.0
        return _bisect(lambda bt: tangent_cleared(a, bt), bt_lo, bt_hi) / tau

    def modulus_gap(a: float) -> float:
        b = frequency_for(a)
        return a * a + b * b - k * k * math.exp(-2.0 * a * tau)

    a = _bisect(modulus_gap, a_lo, a_hi)
    b = frequency_for(a)
    return InstabilityWitness(a=a, b=b, b0=math.pi / (2.0 * tau), k=k)


def instability_bounds(params: SystemParams) -> InstabilityWitness:
    """Witness for the unstable inequality chain pi/(2 tau) < b < k, 0 < a < k."""
    if params.k_tau <= MARGINAL_PRODUCT + CLASSIFY_EPS:
        raise ValueError(
            f"instability bounds require k*tau > pi/2, got {params.k_tau!r}"
        )
    witness = solve_real_system(params)
    if not 0.0 < witness.a < params.k:
        raise RuntimeError(
            f"growth rate bound 0 < a < k violated: a = {witness.a}, k = {params.k}"
        )
    if not witness.b0 < witness.b < params.k:
        raise RuntimeError(
            f"frequency chain pi/(2 tau) < b < k violated: b = {witness.b}"
        )
    return witness


def damping_intersections(k_tau: float) -> DampingIntersections:
    """Both intersections of y = x e^x with the level -k_tau, by bisection.

    One bisection per monotone arm of the curve (split at its minimum,
    x = -1); no Lambert W evaluation anywhere.  Requires 0 < k_tau <= 1/e;
    above 1/e the level line misses the curve and the roots are complex.
    """
    if not math.isfinite(k_tau) or k_tau <= 0.0:
        raise ValueError(f"k_tau must be positive and finite, got {k_tau!r}")
    if k_tau > CRITICAL_PRODUCT:
        raise ValueError(
            f"no real intersections for k_tau = {k_tau!r} > 1/e (underdamped)"
        )
    if abs(k_tau - CRITICAL_PRODUCT) <= 1e-14:
        return DampingIntersections(x1=-1.0, x2=-1.0, degenerate=True)

    def level_gap(x: float) -> float:
        return x * math.exp(x) + k_tau

    x2 = _bisect(level_gap, -1.0, 0.0, steps=90)
    left = -2.0
    while level_gap(left) <= 0.0:
        left *= 2.0
    x1 = _bisect(level_gap, left, -1.0, steps=120)
    return DampingIntersections(
        x1=x1, x2=x2, degenerate=abs(x1 - x2) <= DEGENERACY_ATOL
    )


def xexpx_minimum() -> tuple[float, float]:
    """Minimizer and minimum of y = x e^x, located numerically.

    A coarse grid brackets the minimum, then golden-section refines it to
    GOLDEN_XTOL.  The curvature at the bottom is quadratic, so the y value
    is far more accurate than the x location.
    """
    xs = [-3.0 + 3.0 * i / 64.0 for i in range(65)]
    ys = [x * math.exp(x) for x in xs]
    i = min(range(len(ys)), key=ys.__getitem__)
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, len(xs) - 1)]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc = c * math.exp(c)
    fd = d * math.exp(d)
    while hi - lo > GOLDEN_XTOL:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = c * math.exp(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = d * math.exp(d)
    x = 0.5 * (lo + hi)
    return x, x * math.exp(x)


def fastest_decay(tau: float) -> float:
    """Fastest possible decay rate for delay tau, namely -1/tau.

    The value is re-derived on every call by minimizing x e^x numerically
    (the dimensionless decay x = a*tau of a real mode satisfies
    x e^x = -k*tau, so the deepest reachable level sits at the curve's
    minimum) and checked against the analytic minimizer -1.
    """
    if not (math.isfinite(tau) and tau > 0.0):
        raise ValueError(f"tau must be finite and positive, got {tau!r}")
    x_c, _ = xexpx_minimum()
    if abs(x_c + 1.0) > 1e-8:
        raise RuntimeError(f"curve minimum strayed from -1: {x_c!r}")
    return -1.0 / tau


def _default_span(curve: Curve, params: SystemParams) -> tuple[float, float]:
    if curve is Curve.XEXPX:
        return (-4.0, 0.0)
    if curve is Curve.MODULUS:
        half = params.k if params.k > 0.0 else 1.0 / params.tau
        return (-half, half)
    return (0.0, 2.0 * math.pi / params.tau)


def curve_data(
    curve: Curve,
    params: SystemParams,
    grid: int,
    span: tuple[float, float] | None = None,
) -> list[np.ndarray]:
    """Uniformly sampled curve values as a list of (n, 2) segments.

    MODULUS samples a |-> k^2 exp(-2 a tau), XEXPX samples x |-> x e^x;
    both come back as a single segment.  TANGENT samples b |-> tan(b tau)
    split into one segment per branch, dropping samples within
    SINGULARITY_ATOL of the poles b*tau = (n + 1/2) pi.
    """
    if grid < 2:
        raise ValueError(f"grid must be >= 2, got {grid}")
    lo, hi = span if span is not None else _default_span(curve, params)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"span must be a finite increasing pair, got {(lo, hi)!r}")
    xs = np.linspace(lo, hi, grid)
    if curve is Curve.XEXPX:
        return [np.column_stack([xs, xs * np.exp(xs)])]
    if curve is Curve.MODULUS:
        ys = params.k**2 * np.exp(-2.0 * xs * params.tau)
        return [np.column_stack([xs, ys])]
    if curve is not Curve.TANGENT:
        raise ValueError(f"unknown curve {curve!r}")
    bt = xs * params.tau
    u = bt / math.pi + 0.5
    interval = np.floor(u).astype(int)            # pole-delimited branch id
    pole_distance = math.pi * np.abs(u - np.round(u))
    keep = pole_distance > SINGULARITY_ATOL
    segments: list[np.ndarray] = []
    start = 0
    for i in range(1, grid + 1):
        if i == grid or interval[i] != interval[start]:
            idx = np.arange(start, i)
            idx = idx[keep[idx]]
            if idx.size:
                segments.append(np.column_stack([xs[idx], np.tan(bt[idx])]))
            start = i
    return segments
