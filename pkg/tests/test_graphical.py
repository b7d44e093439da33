import math

import numpy as np
import pytest

from delaystab.charroots import (
    CRITICAL_PRODUCT,
    MARGINAL_PRODUCT,
    SystemParams,
    characteristic_roots,
    dominant_root,
)
from delaystab.graphical import (
    Curve,
    curve_data,
    damping_intersections,
    fastest_decay,
    instability_bounds,
    solve_real_system,
    xexpx_minimum,
)

# Frozen bisection oracle for x e^x = -0.2 (same values as the Lambert tests).
PAIR_AT_MINUS_02 = (-2.5426413577735264, -0.2591711018190737)
LAMBDA_K1 = complex(-0.3181315052047641, 1.3372357014306895)


class TestSolveRealSystem:
    def test_moderately_unstable(self):
        k = math.pi / 2 + 0.3
        witness = solve_real_system(SystemParams(k=k, tau=1.0))
        assert witness.a > 0.0
        assert math.pi / 2 < witness.b < k

    def test_unit_gain_matches_frozen_root(self):
        witness = solve_real_system(SystemParams(k=1.0, tau=1.0))
        assert witness.a == pytest.approx(LAMBDA_K1.real, abs=1e-10)
        assert witness.b == pytest.approx(LAMBDA_K1.imag, abs=1e-10)

    def test_overdamped_rejected(self):
        with pytest.raises(ValueError):
            solve_real_system(SystemParams(k=0.2, tau=1.0))

    def test_marginal_band_rejected(self):
        with pytest.raises(ValueError):
            solve_real_system(SystemParams(k=math.pi / 2, tau=1.0))

    def test_oracle_equivalence_with_the_lambert_route(self):
        # The elementary bisection picture and the Lambert W branch solver
        # must land on the same fundamental root.
        rng = np.random.default_rng(41)
        count = 0
        while count < 100:
            kt = rng.uniform(CRITICAL_PRODUCT + 1e-9, 10.0)
            if abs(kt - MARGINAL_PRODUCT) < 1e-3:
                continue
            tau = 10.0 ** rng.uniform(-1, 1)
            params = SystemParams(k=kt / tau, tau=tau)
            witness = solve_real_system(params)
            lam = dominant_root(params).lam
            assert abs(complex(witness.a, witness.b) - lam) <= 1e-8 * abs(lam)
            count += 1


class TestInstabilityBounds:
    def test_chain_for_k2(self):
        witness = instability_bounds(SystemParams(k=2.0, tau=1.0))
        assert witness.a > 0.0
        assert 1.5707963 < witness.b < 2.0

    def test_chain_and_growth_bound_for_k4(self):
        witness = instability_bounds(SystemParams(k=4.0, tau=1.0))
        assert 0.0 < witness.a < 4.0
        assert math.pi / 2 < witness.b < 4.0

    def test_marginal_rejected(self):
        with pytest.raises(ValueError):
            instability_bounds(SystemParams(k=math.pi / 2, tau=1.0))


class TestDampingIntersections:
    def test_degenerate_at_critical_product(self):
        result = damping_intersections(CRITICAL_PRODUCT)
        assert (result.x1, result.x2, result.degenerate) == (-1.0, -1.0, True)

    def test_frozen_pair(self):
        result = damping_intersections(0.2)
        assert result.x1 == pytest.approx(PAIR_AT_MINUS_02[0], abs=1e-12)
        assert result.x2 == pytest.approx(PAIR_AT_MINUS_02[1], abs=1e-12)
        assert not result.degenerate

    @pytest.mark.parametrize("bad", [0.5, 0.0, -0.1, float("nan")])
    def test_domain_errors(self, bad):
        with pytest.raises(ValueError):
            damping_intersections(bad)

    def test_matches_real_branch_roots(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            kt = rng.uniform(1e-4, CRITICAL_PRODUCT - 1e-12)
            result = damping_intersections(kt)
            roots = characteristic_roots(SystemParams(k=kt, tau=1.0), 2)
            by_branch = {r.branch: r.lam.real for r in roots}
            assert abs(result.x2 - by_branch[0]) <= 1e-10 * max(1.0, abs(by_branch[0]))
            assert abs(result.x1 - by_branch[-1]) <= 1e-10 * max(1.0, abs(by_branch[-1]))

    def test_level_residuals(self):
        for kt in np.linspace(1e-3, CRITICAL_PRODUCT - 1e-9, 50):
            result = damping_intersections(float(kt))
            assert abs(result.x1 * math.exp(result.x1) + kt) <= 1e-12
            assert abs(result.x2 * math.exp(result.x2) + kt) <= 1e-12

    def test_separation_scales_as_sqrt_of_the_gap(self):
        expected_slope = 2.0 * math.sqrt(2.0 * math.e)  # separation / sqrt(gap)
        for gap in (1e-4, 1e-6, 1e-8):
            result = damping_intersections(CRITICAL_PRODUCT - gap)
            ratio = (result.x2 - result.x1) / math.sqrt(gap)
            assert expected_slope / 2.0 < ratio < expected_slope * 2.0


class TestFastestDecay:
    @pytest.mark.parametrize("tau,expected", [(1.0, -1.0), (2.0, -0.5), (0.25, -4.0)])
    def test_values(self, tau, expected):
        assert fastest_decay(tau) == pytest.approx(expected, rel=1e-12)

    def test_minimizer_found_numerically(self):
        x_c, y_c = xexpx_minimum()
        assert x_c == pytest.approx(-1.0, abs=1e-8)
        assert y_c == pytest.approx(-math.exp(-1.0), rel=1e-12)

    def test_rejects_bad_tau(self):
        with pytest.raises(ValueError):
            fastest_decay(-1.0)


class TestCurveData:
    def test_xexpx_endpoints(self):
        params = SystemParams(k=1.0, tau=1.0)
        (segment,) = curve_data(Curve.XEXPX, params, 3, span=(-3.0, 0.0))
        assert segment[0] == pytest.approx([-3.0, -3.0 * math.exp(-3.0)])
        assert tuple(segment[-1]) == (0.0, 0.0)

    def test_xexpx_minimum_on_dense_grid(self):
        params = SystemParams(k=1.0, tau=1.0)
        (segment,) = curve_data(Curve.XEXPX, params, 401, span=(-2.0, 0.0))
        i = int(np.argmin(segment[:, 1]))
        assert segment[i, 0] == pytest.approx(-1.0, abs=1e-12)
        assert segment[i, 1] == pytest.approx(-math.exp(-1.0), rel=1e-12)

    def test_modulus_at_zero_is_gain_squared(self):
        params = SystemParams(k=2.0, tau=1.0)
        (segment,) = curve_data(Curve.MODULUS, params, 5, span=(-2.0, 2.0))
        middle = segment[2]
        assert middle[0] == 0.0
        assert middle[1] == pytest.approx(4.0, rel=1e-15)

    def test_tangent_splits_at_poles(self):
        params = SystemParams(k=1.0, tau=1.0)
        segments = curve_data(Curve.TANGENT, params, 1000)
        assert len(segments) == 3  # poles at pi/2 and 3 pi/2 inside (0, 2 pi)
        for segment in segments:
            assert np.all(
                np.abs(np.abs(segment[:, 0] % math.pi) - math.pi / 2) > 9e-7
            )

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            curve_data(Curve.XEXPX, SystemParams(1.0, 1.0), 1)

    def test_span_validation(self):
        with pytest.raises(ValueError):
            curve_data(Curve.XEXPX, SystemParams(1.0, 1.0), 8, span=(1.0, -1.0))
