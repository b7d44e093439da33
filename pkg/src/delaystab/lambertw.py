"""Multi-branch Lambert W function in double precision.

W_b(z) is branch b of the inverse of w -> w * exp(w).  Branch 0 is the
principal branch, branch -1 the lower real branch; together they carry the
two real solutions of x * exp(x) = y for y in (-1/e, 0), which meet at the
branch point z = -1/e where both equal -1.

Values are computed by Halley's method started from regime-specific seeds:
a Taylor series near the origin, a square-root expansion near the branch
point, fixed Taylor anchors on the middle of the principal sheet, and the
log - log(log) asymptotic everywhere else.  Inputs in the lower half-plane
are folded onto the upper half-plane through the conjugate symmetry
W_b(conj(z)) = conj(W_{-b}(z)), so the branch cut along the negative real
axis takes its values from above.  Real inputs on real branch segments are
evaluated in real arithmetic and return an exactly zero imaginary part.
"""

from __future__ import annotations

import cmath
import math

__all__ = [
    "BRANCH_POINT",
    "ConvergenceError",
    "canonical_branch",
    "lambert_w",
    "real_branch_pair",
]

BRANCH_POINT = -math.exp(-1.0)  # z = -1/e, where W_0 and W_-1 meet at w = -1

RESIDUAL_RTOL = 1e-12       # contract: |w e^w - z| <= RESIDUAL_RTOL * max(1, |z|)
MAX_ITERATIONS = 64
BRANCH_POINT_SNAP = 1e-14   # |z + 1/e| below this returns w = -1 exactly

_TWO_PI = 2.0 * math.pi
_SQRT_2E = math.sqrt(2.0 * math.e)   # slope of the square-root expansion at -1/e
_TWO_E_THIRDS = 2.0 * math.e / 3.0


class ConvergenceError(RuntimeError):
    """Halley iteration failed to meet the residual tolerance."""


def _asymptotic(L1: complex) -> complex:
    # w ~ L1 - ln L1 + ln L1 / L1 + ln L1 (ln L1 - 2) / (2 L1^2); good for
    # large |L1|, i.e. large or tiny |z| and every branch with |b| >= 1.
    L2 = cmath.log(L1)
    return L1 - L2 + L2 / L1 + L2 * (L2 - 2.0) / (2.0 * L1 * L1)


def _seed_principal(z: complex) -> complex:
    x, y = z.real, z.imag
    if -1.0 < x < 2.5 and y < 4.0:
        # Fixed Taylor anchors keep the iterate on the principal sheet where
        # the series and asymptotic seeds are both unreliable.
        if y > 1.0:
            return (0.876 + 0.645j) + (0.118 - 0.174j) * (z - (0.75 + 2.5j))
        if y > 0.25:
            return (0.505 + 0.204j) + (0.375 - 0.132j) * (z - (0.75 + 0.5j))
        if x < -0.5:
            return (-0.318 + 1.34j) + (-0.697 - 0.593j) * (z + 1.0)
        if y == 0.0 and x > BRANCH_POINT:
            # stay on the real axis
            if x < -0.2:
                d = x - BRANCH_POINT
                return complex(-1.0 + _SQRT_2E * math.sqrt(d) - _TWO_E_THIRDS * d)
            if x < 0.5:
                return complex(x * (1.0 - x))
            return complex(0.2 + 0.3 * x)
        if x < -0.2:
            d = z - BRANCH_POINT
            return -1.0 + _SQRT_2E * cmath.sqrt(d) - _TWO_E_THIRDS * d
        if x < 0.5:
            return z * (1.0 - z)
        return 0.2 + 0.3 * z
    if y == 0.0 and x > 0.0:
        return _asymptotic(complex(math.log(x)))
    return _asymptotic(cmath.log(z))


def _seed_lower(z: complex) -> complex:
    # Branch -1, imag(z) >= 0 only (lower half-plane inputs are folded away).
    x, y = z.real, z.imag
    if y == 0.0 and BRANCH_POINT < x < 0.0:
        if x < -0.2:
            d = x - BRANCH_POINT
            return complex(-1.0 - _SQRT_2E * math.sqrt(d) - _TWO_E_THIRDS * d)
        L1 = math.log(-x)
        return complex(L1 - math.log(-L1))
    if y < 0.1 and -0.6 < x < -0.2:
        d = z - BRANCH_POINT
        return -1.0 - _SQRT_2E * cmath.sqrt(d) - _TWO_E_THIRDS * d
    return _asymptotic(cmath.log(z) - 2j * math.pi)


def _initial_guess(branch: int, z: complex) -> complex:
    if branch == 0:
        return _seed_principal(z)
    if branch == -1:
        return _seed_lower(z)
    return _asymptotic(cmath.log(z) + 2j * math.pi * branch)


def _halley(w: complex, z: complex) -> complex:
    inner_target = 1e-15 * max(1.0, abs(z))
    for _ in range(MAX_ITERATIONS):
        ew = cmath.exp(w)
        f = w * ew - z
        if abs(f) <= inner_target:
            return w
        wp1 = w + 1.0
        if wp1 == 0.0:
            wp1 = complex(1e-300)
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        step = f / denom
        w_next = w - step
        if w_next == w:  # fixed point at machine precision
            return w
        w = w_next
    if abs(w * cmath.exp(w) - z) <= RESIDUAL_RTOL * max(1.0, abs(z)):
        return w
    raise ConvergenceError(f"Lambert W iteration did not converge at z = {z!r}")


def canonical_branch(w: complex, z: complex) -> int:
    """Branch index whose canonical region contains ``w``, given z = w e^w.

    Uses the identity W_b + ln(W_b) = ln(z) + 2*pi*i*b with principal
    logarithms, whose single exception is branch -1 on the real segment
    [-1/e, 0) where the right-hand side carries no 2*pi*i offset.
    """
    if (
        w.imag == 0.0
        and z.imag == 0.0
        and w.real <= -1.0
        and BRANCH_POINT <= z.real < 0.0
    ):
        return -1
    delta = w + cmath.log(w) - cmath.log(z)
    return round(delta.imag / _TWO_PI)


def lambert_w(branch: int, z: complex) -> complex:
    """Evaluate W_branch(z) with |w e^w - z| <= 1e-12 * max(1, |z|).

    Parameters
    ----------
    branch : int
        Branch index; 0 for the principal branch, -1 for the lower real
        branch, other integers for the remaining complex branches.
    z : complex
        Argument.  Must be finite; z = 0 is only in the domain of branch 0
        (every other branch diverges there).

    Returns
    -------
    complex
        The branch-b value.  Real results carry a zero imaginary part.

    Raises
    ------
    ValueError
        If z is not finite, or z = 0 on a branch other than 0.
    ConvergenceError
        If the iteration cannot meet the residual tolerance.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"lambert_w argument must be finite, got {z!r}")
    if z.imag == 0.0:
        z = complex(z.real, 0.0)  # fold -0.0 onto the from-above cut convention
    if z == 0.0:
        if branch == 0:
            return complex(0.0)
        raise ValueError(f"branch {branch} of Lambert W diverges at z = 0")
    if branch in (0, -1) and abs(z - BRANCH_POINT) <= BRANCH_POINT_SNAP:
        return complex(-1.0)
    if z.imag < 0.0:
        return lambert_w(-branch, z.conjugate()).conjugate()
    w = _halley(_initial_guess(branch, z), z)
    if w != -1.0 and canonical_branch(w, z) != branch:
        raise ConvergenceError(
            f"iteration for branch {branch} of Lambert W at z={z!r} "
            f"converged on branch {canonical_branch(w, z)}"
        )
    return w


def real_branch_pair(y: float) -> tuple[float, float] | None:
    """Both real solutions of x * exp(x) = y, or None if they do not pair up.

    For y in (-1/e, 0) returns (x1, x2) with x1 < -1 < x2 < 0; at y = -1/e
    (within the branch-point snap window) the degenerate pair (-1.0, -1.0).
    For y >= 0 there is a single real solution and for y < -1/e none, so no
    two-root structure exists and None is returned.
    """
    if not math.isfinite(y):
        raise ValueError(f"real_branch_pair argument must be finite, got {y!r}")
    if abs(y - BRANCH_POINT) <= BRANCH_POINT_SNAP:
        return (-1.0, -1.0)
    if y >= 0.0 or y < BRANCH_POINT:
        return None
    zy = complex(y)
    x2 = lambert_w(0, zy)
    x1 = lambert_w(-1, zy)
    return (x1.real, x2.real)
