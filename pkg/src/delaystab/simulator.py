"""Exact method-of-steps integration of dtheta/dt = -k theta(t - tau).

With a constant history theta(t) = theta0 for t <= 0, the solution is
exactly polynomial on every delay interval [n tau, (n+1) tau]: integrating
the (known, polynomial) delayed term raises the degree by one per interval
and continuity fixes the constant.  Segments store their coefficients in
local time s = t - t_start, which keeps coefficient magnitudes controlled,
and are evaluated in Horner form.  There is no discretization error, so
trajectories serve as ground truth for the spectral modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charroots import CRITICAL_PRODUCT, SystemParams
from .lambertw import real_branch_pair

__all__ = [
    "HORIZON_CAP_RATIO",
    "HorizonCapError",
    "ModalFit",
    "PolynomialSegment",
    "Trajectory",
    "extremum_times",
    "fit_decay_rate",
    "modal_fit",
    "sample",
    "sample_derivative",
    "simulate",
    "zero_crossings",
]

HORIZON_CAP_RATIO = 200     # horizon <= 200 tau, i.e. polynomial degree <= 201
AMPLITUDE_FLOOR = 1e-300    # log-fit underflow guard
_MIN_OSC_EXTREMA = 4        # fewer extrema than this falls back to the monotone fit
_SUBDIVISIONS = 64          # per-segment derivative sign scan resolution


class HorizonCapError(ValueError):
    """Requested horizon exceeds the degree cap HORIZON_CAP_RATIO * tau."""


def _poly_eval(coefficients: tuple[float, ...], s: float) -> float:
    acc = 0.0
    for c in reversed(coefficients):
        acc = acc * s + c
    return acc


@dataclass(frozen=True)
class PolynomialSegment:
    """theta(t) = sum_j c_j (t - t_start)^j on one delay interval."""

    t_start: float
    coefficients: tuple[float, ...]

    def value(self, t: float) -> float:
        return _poly_eval(self.coefficients, t - self.t_start)

    def derivative(self, t: float) -> float:
        d = tuple(j * c for j, c in enumerate(self.coefficients) if j > 0)
        return _poly_eval(d, t - self.t_start)


@dataclass(frozen=True)
class Trajectory:
    """Piecewise-polynomial solution with constant history theta0."""

    params: SystemParams
    theta0: float
    segments: tuple[PolynomialSegment, ...]
    horizon: float


def simulate(params: SystemParams, theta0: float, horizon: float) -> Trajectory:
    """Exact trajectory on [0, horizon] for history theta(t <= 0) = theta0.

    Segment n covers [n tau, (n+1) tau] and has degree n + 1: the first
    segment is the straight line theta0 (1 - k t) and each successor is the
    term-wise antiderivative of -k times its predecessor, with the constant
    fixed by continuity.

    Raises HorizonCapError when horizon > HORIZON_CAP_RATIO * tau.
    """
    if not math.isfinite(theta0):
        raise ValueError(f"theta0 must be finite, got {theta0!r}")
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise ValueError(f"horizon must be positive, got {horizon!r}")
    tau = params.tau
    if horizon > HORIZON_CAP_RATIO * tau:
        raise HorizonCapError(
            f"horizon {horizon} exceeds {HORIZON_CAP_RATIO} tau = "
            f"{HORIZON_CAP_RATIO * tau}"
        )
    k = params.k
    n_segments = max(1, math.ceil(horizon / tau - 1e-12))
    coeffs = [theta0, -k * theta0]
    segments = [PolynomialSegment(t_start=0.0, coefficients=tuple(coeffs))]
    for n in range(1, n_segments):
        head = _poly_eval(tuple(coeffs), tau)   # continuity at the junction
        coeffs = [head] + [-k * c / (j + 1) for j, c in enumerate(coeffs)]
        segments.append(
            PolynomialSegment(t_start=n * tau, coefficients=tuple(coeffs))
        )
    return Trajectory(
        params=params, theta0=theta0, segments=tuple(segments), horizon=horizon
    )


def _segment_at(traj: Trajectory, t: float) -> PolynomialSegment:
    index = int(t // traj.params.tau)
    index = min(max(index, 0), len(traj.segments) - 1)
    return traj.segments[index]


def sample(traj: Trajectory, t: float) -> float:
    """theta(t); the constant history value for t < 0."""
    if t < 0.0:
        return traj.theta0
    if t > traj.horizon:
        raise ValueError(f"t = {t!r} beyond horizon {traj.horizon!r}")
    return _segment_at(traj, t).value(t)


def sample_derivative(traj: Trajectory, t: float) -> float:
    """Exact dtheta/dt at t in [0, horizon] (from the covering polynomial)."""
    if t < 0.0:
        return 0.0
    if t > traj.horizon:
        raise ValueError(f"t = {t!r} beyond horizon {traj.horizon!r}")
    return _segment_at(traj, t).derivative(t)


def _refine_root(f, lo: float, hi: float, f_lo: float) -> float:
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (f_lo > 0.0) == (fm > 0.0):
            lo, f_lo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sign_change_times(traj: Trajectory, f, t_min: float, t_max: float) -> list[float]:
    # Scan each covering segment on a uniform subdivision and bisect every
    # bracketed sign change of f; exact polynomials make this exhaustive for
    # the modest per-segment degrees used here.
    tau = traj.params.tau
    found: list[float] = []
    for segment in traj.segments:
        lo = max(segment.t_start, t_min)
        hi = min(segment.t_start + tau, t_max)
        if lo >= hi:
            continue
        ts = np.linspace(lo, hi, _SUBDIVISIONS + 1)
        vals = [f(t) for t in ts]
        for j in range(_SUBDIVISIONS):
            if vals[j] == 0.0:
                found.append(float(ts[j]))
            elif (vals[j] > 0.0) != (vals[j + 1] > 0.0):
                found.append(_refine_root(f, float(ts[j]), float(ts[j + 1]), vals[j]))
    found.sort()
    deduped: list[float] = []
    for t in found:
        if not deduped or t - deduped[-1] > 1e-12 * max(tau, abs(t)):
            deduped.append(t)
    return deduped


def extremum_times(traj: Trajectory, t_min: float, t_max: float) -> list[float]:
    """Times of the trajectory's interior extrema (derivative zeros)."""
    return _sign_change_times(
        traj, lambda t: sample_derivative(traj, t), t_min, t_max
    )


def zero_crossings(traj: Trajectory, t_min: float, t_max: float) -> list[float]:
    """Times where theta crosses zero inside the window."""
    return _sign_change_times(traj, lambda t: sample(traj, t), t_min, t_max)


def _monotone_rate(t: np.ndarray, theta: np.ndarray) -> float:
    # Dominant-mode model theta ~ (A + B t) e^(a t); B = 0 for a generic
    # overdamped tail, B != 0 at the critical double root where a bare
    # log-linear slope would be biased by the algebraic prefactor.  The rate
    # is found by golden-section on the profiled least-squares residual.
    log_amp = np.log(np.abs(theta))
    design = np.vstack([np.ones_like(t), t]).T
    slope = float(np.linalg.lstsq(design, log_amp, rcond=None)[0][1])
    t_mid = 0.5 * (t[0] + t[-1])

    def profiled_ssr(a: float) -> float:
        u = theta * np.exp(-a * (t - t_mid))
        resid = u - design @ np.linalg.lstsq(design, u, rcond=None)[0]
        return float(resid @ resid)

    scale = max(1.0, abs(slope))    # prefactor bias grows with the rate itself
    lo, hi = slope - 0.5 * scale, slope + 0.5 * scale
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = profiled_ssr(c), profiled_ssr(d)
    while hi - lo > 1e-11 * scale:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = profiled_ssr(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = profiled_ssr(d)
    return 0.5 * (lo + hi)


def fit_decay_rate(
    traj: Trajectory, t_min: float, t_max: float
) -> tuple[float, float]:
    """Estimate (a, b) of the dominant mode from the trajectory alone.

    Oscillatory window (at least four interior extrema): the rate comes
    from the least-squares line through log|theta| at the extremum times
    and the frequency from b = pi / (mean extremum spacing).  Monotone
    window: the rate comes from the profiled dominant-mode fit and b = 0.

    The window must span at least five delays inside the horizon.
    """
    tau = traj.params.tau
    if not (0.0 <= t_min < t_max <= traj.horizon):
        raise ValueError(
            f"window [{t_min}, {t_max}] must lie inside [0, {traj.horizon}]"
        )
    if t_max - t_min < 5.0 * tau:
        raise ValueError(
            f"window [{t_min}, {t_max}] shorter than five delays ({5.0 * tau})"
        )
    extrema = extremum_times(traj, t_min, t_max)
    values = np.array([sample(traj, t) for t in extrema])
    usable = np.abs(values) > AMPLITUDE_FLOOR
    extrema_t = np.array(extrema)[usable]
    extrema_v = values[usable]
    if extrema_t.size >= _MIN_OSC_EXTREMA:
        spacing = float(np.mean(np.diff(extrema_t)))
        b_est = math.pi / spacing
        design = np.vstack([np.ones_like(extrema_t), extrema_t]).T
        a_est = float(
            np.linalg.lstsq(design, np.log(np.abs(extrema_v)), rcond=None)[0][1]
        )
        return a_est, b_est
    t = np.linspace(t_min, t_max, 256)
    theta = np.array([sample(traj, x) for x in t])
    crossings = zero_crossings(traj, t_min, t_max)
    near_crossing = np.zeros(t.shape, dtype=bool)
    for tc in crossings:  # excise the log singularity around any sign change
        near_crossing |= np.abs(t - tc) < (t_max - t_min) / 512.0
    usable = (np.abs(theta) > AMPLITUDE_FLOOR) & ~near_crossing
    if np.count_nonzero(usable) < 16:
        raise ValueError("signal below the amplitude floor on the fit window")
    return _monotone_rate(t[usable], theta[usable]), 0.0


@dataclass(frozen=True)
class ModalFit:
    """Two-real-mode fit theta ~ A e^(a2 t) + B e^(a1 t), a1 <= a2 < 0.

    A multiplies the slow (dominant) mode.  The rms residual measures how
    much of the trajectory the two retained real modes fail to explain;
    the discarded complex modes make it small but not zero.
    """

    a1: float
    a2: float
    A: float
    B: float
    residual_rms: float


def modal_fit(traj: Trajectory, params: SystemParams) -> ModalFit:
    """Fit the overdamped trajectory against its two real modes.

    The rates are the two real characteristic roots x1/tau and x2/tau of
    x e^x = -k tau; only the amplitudes are fitted (linear least squares on
    [2 tau, horizon], past the worst of the startup transient).  Requires
    k*tau < 1/e - 1e-6, strictly inside the overdamped regime.
    """
    kt = params.k_tau
    if not kt < CRITICAL_PRODUCT - 1e-6:
        raise ValueError(
            f"modal fit requires the overdamped regime k*tau < 1/e - 1e-6, "
            f"got k*tau = {kt!r}"
        )
    pair = real_branch_pair(-kt)
    if pair is None:  # unreachable given the regime gate
        raise RuntimeError(f"no real root pair for k*tau = {kt!r}")
    a1, a2 = pair[0] / params.tau, pair[1] / params.tau
    t_lo = 2.0 * params.tau
    if traj.horizon <= t_lo + params.tau:
        raise ValueError(
            f"horizon {traj.horizon!r} too short for a fit window past 2 tau"
        )
    t = np.linspace(t_lo, traj.horizon, 512)
    theta = np.array([sample(traj, x) for x in t])
    design = np.vstack([np.exp(a2 * t), np.exp(a1 * t)]).T
    (amp_slow, amp_fast), *_ = np.linalg.lstsq(design, theta, rcond=None)
    resid = theta - design @ np.array([amp_slow, amp_fast])
    return ModalFit(
        a1=a1,
        a2=a2,
        A=float(amp_slow),
        B=float(amp_fast),
        residual_rms=float(math.sqrt(np.mean(resid**2))),
    )
