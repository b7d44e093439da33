import cmath
import math

import numpy as np
import pytest

from delaystab.charroots import (
    CRITICAL_PRODUCT,
    MARGINAL_PRODUCT,
    RESIDUAL_BOUND,
    Regime,
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

# Frozen oracle values (bisection / 50-digit mpmath, computed up front).
LAMBDA_K1 = complex(-0.3181315052047641, 1.3372357014306895)
X2_AT_02 = -0.2591711018190737


class TestParams:
    @pytest.mark.parametrize("k,tau", [(1.0, 0.0), (1.0, -2.0), (-0.5, 1.0),
                                       (float("nan"), 1.0), (1.0, float("inf"))])
    def test_invalid_rejected(self, k, tau):
        with pytest.raises(ValueError):
            SystemParams(k=k, tau=tau)

    def test_zero_gain_allowed(self):
        assert SystemParams(k=0.0, tau=3.0).k_tau == 0.0


class TestResidual:
    def test_marginal_root_is_exact(self):
        params = SystemParams(k=math.pi / 2, tau=1.0)
        assert characteristic_residual(params, 1j * math.pi / 2) <= 1e-15

    def test_origin_for_unit_gain(self):
        params = SystemParams(k=1.0, tau=1.0)
        assert characteristic_residual(params, 0.0) == pytest.approx(1.0)

    def test_lambert_root_for_unit_gain(self):
        params = SystemParams(k=1.0, tau=1.0)
        assert characteristic_residual(params, LAMBDA_K1) <= 1e-12

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            characteristic_residual(SystemParams(1.0, 1.0), complex("nan"))


class TestCharacteristicRoots:
    def test_critical_pair_is_degenerate(self):
        params = SystemParams(k=CRITICAL_PRODUCT, tau=1.0)
        roots = characteristic_roots(params, 2)
        assert [r.branch for r in roots] == [0, -1]
        for root in roots:
            assert root.lam == pytest.approx(-1.0, rel=1e-12)
        assert roots_degenerate(roots)

    def test_marginal_root_purely_imaginary(self):
        params = SystemParams(k=math.pi / 2, tau=1.0)
        (root,) = characteristic_roots(params, 1)
        assert root.lam == pytest.approx(1j * math.pi / 2, rel=1e-12)

    def test_unit_gain_root(self):
        params = SystemParams(k=1.0, tau=1.0)
        (root,) = characteristic_roots(params, 1)
        assert root.lam == pytest.approx(LAMBDA_K1, abs=1e-12)

    def test_sorted_by_descending_real_part(self):
        roots = characteristic_roots(SystemParams(k=1.0, tau=1.0), 5)
        res = [r.lam.real for r in roots]
        assert res == sorted(res, reverse=True)
        assert not roots_degenerate(roots)  # conjugate pair, not a double root

    def test_near_critical_pair_flagged_by_root_distance(self):
        # Separation scales like sqrt(|k tau - 1/e|): within the window on
        # both sides of the threshold the pair reads as degenerate.
        for kt in (CRITICAL_PRODUCT - 1e-14, CRITICAL_PRODUCT + 1e-14):
            roots = characteristic_roots(SystemParams(k=kt, tau=1.0), 2)
            assert roots_degenerate(roots)
        for kt in (CRITICAL_PRODUCT - 1e-3, CRITICAL_PRODUCT + 1e-3):
            roots = characteristic_roots(SystemParams(k=kt, tau=1.0), 2)
            assert not roots_degenerate(roots)

    def test_all_roots_meet_residual_bound(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            params = SystemParams(k=rng.uniform(0.01, 5.0), tau=rng.uniform(0.1, 5.0))
            for root in characteristic_roots(params, 6):
                assert root.residual <= RESIDUAL_BOUND
                assert root.lam.imag >= 0.0  # representative convention

    def test_zero_gain_single_root(self):
        roots = characteristic_roots(SystemParams(k=0.0, tau=1.0), 4)
        assert len(roots) == 1
        assert roots[0].lam == 0.0

    def test_rejects_bad_branch_count(self):
        with pytest.raises(ValueError):
            characteristic_roots(SystemParams(1.0, 1.0), 0)


class TestDominantRoot:
    def test_overdamped_upper_real_root(self):
        root = dominant_root(SystemParams(k=0.2, tau=1.0))
        assert root.lam.imag == 0.0
        assert root.lam.real == pytest.approx(X2_AT_02, abs=1e-10)

    def test_critical_scaled_delay(self):
        root = dominant_root(SystemParams(k=critical_gain(2.0), tau=2.0))
        assert root.lam == pytest.approx(-0.5, rel=1e-12)

    def test_unstable_has_positive_real_part(self):
        root = dominant_root(SystemParams(k=2.0, tau=math.pi))
        assert root.lam.real > 0.0


class TestClassify:
    @pytest.mark.parametrize(
        "k,tau,regime",
        [
            (0.3, 1.0, Regime.OVERDAMPED),
            (CRITICAL_PRODUCT, 1.0, Regime.CRITICALLY_DAMPED),
            (1.0, 1.0, Regime.UNDERDAMPED),
            (math.pi / 2, 1.0, Regime.MARGINAL),
            (1.6, 1.0, Regime.UNSTABLE),
            (critical_gain(7.0), 7.0, Regime.CRITICALLY_DAMPED),
        ],
    )
    def test_regimes(self, k, tau, regime):
        report = classify(SystemParams(k=k, tau=tau))
        assert report.regime is regime
        assert report.critical_product == CRITICAL_PRODUCT
        assert report.marginal_product == MARGINAL_PRODUCT

    def test_dominant_sign_matches_regime(self):
        for kt in (0.1, 0.3, 0.5, 1.0, 1.4, 1.7, 2.5, 6.0):
            report = classify(SystemParams(k=kt, tau=1.0))
            if report.regime in (
                Regime.OVERDAMPED,
                Regime.CRITICALLY_DAMPED,
                Regime.UNDERDAMPED,
            ):
                assert report.dominant.lam.real < 0.0
            elif report.regime is Regime.MARGINAL:
                assert abs(report.dominant.lam.real) <= 1e-9 * kt
            else:
                assert report.dominant.lam.real > 0.0

    def test_zero_gain_convention(self):
        report = classify(SystemParams(k=0.0, tau=1.0))
        assert report.regime is Regime.OVERDAMPED
        assert report.dominant.lam == 0.0


class TestThresholdGains:
    def test_critical_gain_values(self):
        assert critical_gain(1.0) == pytest.approx(1.0 / math.e, rel=1e-15)
        assert critical_gain(1.0 / math.e) == pytest.approx(1.0, rel=1e-14)
        assert critical_gain(2.0) == pytest.approx(0.5 / math.e, rel=1e-15)

    def test_marginal_gain_values(self):
        assert marginal_gain(1.0) == pytest.approx(math.pi / 2, rel=1e-15)
        assert marginal_gain(math.pi) == pytest.approx(0.5, rel=1e-14)
        assert marginal_gain(0.5) == pytest.approx(math.pi, rel=1e-15)

    @pytest.mark.parametrize("func", [critical_gain, marginal_gain])
    def test_rejects_nonpositive_tau(self, func):
        with pytest.raises(ValueError):
            func(0.0)


class TestGrowthBound:
    @pytest.mark.parametrize("k", [2.0, 10.0])
    def test_bound_holds_when_unstable(self, k):
        ok, witness = growth_bound_check(SystemParams(k=k, tau=1.0))
        assert ok
        assert 0.0 < witness.lam.real < k

    def test_rejected_when_stable(self):
        with pytest.raises(ValueError):
            growth_bound_check(SystemParams(k=1.0, tau=1.0))


class TestInvariants:
    def test_conjugate_closure(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            params = SystemParams(k=rng.uniform(0.05, 4.0), tau=rng.uniform(0.1, 4.0))
            for root in characteristic_roots(params, 3):
                mirrored = characteristic_residual(params, root.lam.conjugate())
                assert mirrored <= RESIDUAL_BOUND

    def test_scaling_law(self):
        # Roots depend on (k, tau) only through the product: lambda*tau fixed.
        rng = np.random.default_rng(23)
        for kt in (0.2, 0.9, 2.0):
            reference = dominant_root(SystemParams(k=kt, tau=1.0)).lam
            for _ in range(20):
                tau = 10.0 ** rng.uniform(-2, 2)
                lam = dominant_root(SystemParams(k=kt / tau, tau=tau)).lam
                assert lam * tau == pytest.approx(reference, rel=1e-12)

    def test_principal_branch_dominates_everywhere(self):
        # Branch -1 is either the lower real root or the conjugate of the
        # principal root (equal real part up to one ulp of iteration noise);
        # dominance is strict only over the genuinely distinct modes.
        for kt in np.linspace(0.1, 20.0, 200):
            params = SystemParams(k=float(kt), tau=1.0)
            roots = {r.branch: r.lam.real for r in characteristic_roots(params, 5)}
            lead = roots[0]
            assert lead >= roots[-1] - 1e-13 * max(1.0, abs(lead))
            assert all(lead > roots[b] for b in (1, 2, 3))

    def test_single_zero_crossing_at_the_marginal_product(self):
        grid = np.linspace(0.5, 3.0, 2001)
        signs = np.sign(
            [dominant_root(SystemParams(k=float(kt), tau=1.0)).lam.real for kt in grid]
        )
        flips = np.nonzero(np.diff(signs))[0]
        assert len(flips) == 1
        assert grid[flips[0]] < MARGINAL_PRODUCT < grid[flips[0] + 1]

    def test_unstable_frequency_window(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            kt = rng.uniform(MARGINAL_PRODUCT + 1e-6, 10.0)
            tau = 10.0 ** rng.uniform(-1, 1)
            params = SystemParams(k=kt / tau, tau=tau)
            lam = dominant_root(params).lam
            assert math.pi / (2.0 * tau) < lam.imag < params.k
