import numpy as np
import pytest

from flatwave.symbols import (
    QTILDE,
    BilinearSymbol,
    SinftyResolutionError,
    depth_comparison,
    p1,
    p2,
    qij,
    qtilde_assembled,
    qtilde_closed,
    sinfty_estimate,
    weighted_exp_integral,
)


class TestWeightedExpIntegral:
    def test_exact_values(self):
        assert abs(weighted_exp_integral(1.0) - 1.0) < 1e-14  # (1 + 0*e)/1
        assert abs(weighted_exp_integral(0.0) - 0.5) < 1e-15
        assert abs(weighted_exp_integral(2.0) - (1 + np.exp(2.0)) / 4.0) < 1e-14

    def test_against_quadrature(self):
        from scipy.integrate import quad

        for a in [-3.0, -0.7, 0.3, 1.7, 4.0, 11.0]:
            ref, _ = quad(lambda s: (s + 1.0) * np.exp((s + 1.0) * a), -1.0, 0.0)
            assert abs(weighted_exp_integral(a) - ref) < 1e-12 * max(1.0, abs(ref))

    def test_continuity_at_switch(self):
        # both branches match a high-precision reference through the threshold
        import mpmath as mp

        mp.mp.dps = 40
        for a0 in [0.999e-3, 1.001e-3, -0.999e-3, -1.001e-3]:
            ref = float((1 + (mp.mpf(a0) - 1) * mp.e**mp.mpf(a0)) / mp.mpf(a0) ** 2)
            assert abs(weighted_exp_integral(a0) - ref) < 1e-12


def _qij_quadrature(i, j, zeta, eta):
    """Independent evaluation of the defining s-integrals (paper-free oracle:
    the integral forms are restated here and integrated numerically)."""
    from scipy.integrate import quad

    x = np.hypot(zeta[0] + eta[0], zeta[1] + eta[1])
    y = np.hypot(*eta)
    Cx, Cy = np.exp(x) + np.exp(-x), np.exp(y) + np.exp(-y)
    dots = {
        "xz": (zeta[0] + eta[0]) * zeta[0] + (zeta[1] + eta[1]) * zeta[1],
        "ze": zeta[0] * eta[0] + zeta[1] * eta[1],
    }
    ch = lambda t, s: np.exp((s + 1) * t) + np.exp(-(s + 1) * t)
    sh = lambda t, s: np.exp((s + 1) * t) - np.exp(-(s + 1) * t)
    if (i, j) == (1, 1):
        pre, fn = -dots["xz"] * y, lambda s: (s + 1) * ch(x, s) * sh(y, s)
    elif (i, j) == (1, 2):
        pre, fn = dots["ze"], lambda s: ch(x, s) * ch(y, s)
    elif (i, j) == (2, 1):
        pre, fn = -2 * x * y, lambda s: sh(x, s) * sh(y, s)
    else:
        pre, fn = x * dots["ze"], lambda s: (s + 1) * sh(x, s) * ch(y, s)
    val, _ = quad(fn, -1.0, 0.0, epsabs=1e-13, epsrel=1e-13)
    return pre * val / (Cx * Cy)


class TestQij:
    def test_integral_form(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            zeta = rng.uniform(-8, 8, 2)
            eta = rng.uniform(-8, 8, 2)
            for i in (1, 2):
                for j in (1, 2):
                    ref = _qij_quadrature(i, j, zeta, eta)
                    got = qij(i, j, zeta[0], zeta[1], eta[0], eta[1])
                    assert abs(got - ref) < 1e-10 * (1.0 + abs(ref)), (i, j, zeta, eta)

    def test_equal_radii_branch(self):
        # |xi| = |eta| hits the difference-denominator branch; compare with a
        # nearby regular point to confirm the limit is taken smoothly
        eta = np.array([1.3, 0.4])
        y = np.hypot(*eta)
        # choose zeta so that |zeta + eta| = |eta|
        zeta = np.array([-2 * eta[0], 0.0])  # xi = (-eta1, eta2), same radius
        exact = qij(2, 1, zeta[0], zeta[1], eta[0], eta[1])
        ref = _qij_quadrature(2, 1, zeta, eta)
        assert abs(exact - ref) < 1e-11

    def test_vanishing_at_eta_zero(self):
        for i in (1, 2):
            for j in (1, 2):
                assert abs(qij(i, j, 1.7, -0.3, 0.0, 0.0)) < 1e-14

    def test_near_branch_straddle(self):
        # both sides of the |xi| - |eta| series switch match the quadrature oracle
        eta = np.array([2.0, 0.0])
        for d in [0.0499, 0.0501, -0.0499, -0.0501, 1e-7, -1e-7]:
            zeta = np.array([d, 0.0])  # |xi| - |eta| = d exactly
            for i, j in [(1, 1), (2, 2), (2, 1)]:
                got = qij(i, j, zeta[0], zeta[1], eta[0], eta[1])
                ref = _qij_quadrature(i, j, zeta, eta)
                assert abs(got - ref) < 1e-11 * (1 + abs(ref)), (i, j, d)


class TestCancellation:
    def test_assembled_equals_closed_form(self):
        rng = np.random.default_rng(23)
        pts = rng.uniform(-10, 10, size=(10_000, 4))
        err = np.abs(
            qtilde_assembled(pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3])
            - qtilde_closed(pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3])
        ) / (1.0 + np.abs(qtilde_closed(pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3])))
        assert err.max() < 1e-10

    def test_straddling_equal_radii(self):
        rng = np.random.default_rng(29)
        worst = 0.0
        for _ in range(1000):
            eta = rng.uniform(-8, 8, 2)
            y = np.hypot(*eta)
            ang = rng.uniform(0, 2 * np.pi)
            r = y * (1.0 + rng.choice([-1, 1]) * 1e-6)
            xi = r * np.array([np.cos(ang), np.sin(ang)])
            zeta = xi - eta
            c = qtilde_closed(zeta[0], zeta[1], eta[0], eta[1])
            asm = qtilde_assembled(zeta[0], zeta[1], eta[0], eta[1])
            worst = max(worst, abs(asm - c) / (1.0 + abs(c)))
        assert worst < 1e-10

    def test_spec_point(self):
        # xi = eta = (1,0): sech^2(1) = 4/(e + 1/e)^2
        val = qtilde_closed(0.0, 0.0, 1.0, 0.0)
        assert abs(val - (1.0 - np.tanh(1.0) ** 2)) < 1e-14
        assert abs(val - 4.0 / (np.e + 1.0 / np.e) ** 2) < 1e-14

    def test_eta_zero(self):
        assert qtilde_assembled(0.5, 0.2, 0.0, 0.0) == pytest.approx(0.0, abs=1e-14)

    def test_symmetry_xi_eta(self):
        # closed form as a function of (|xi|, |eta|, xi.eta) is symmetric
        rng = np.random.default_rng(31)
        for _ in range(50):
            xi = rng.uniform(-5, 5, 2)
            eta = rng.uniform(-5, 5, 2)
            a = qtilde_closed(xi[0] - eta[0], xi[1] - eta[1], eta[0], eta[1])
            b = qtilde_closed(eta[0] - xi[0], eta[1] - xi[1], xi[0], xi[1])
            assert abs(a - b) < 1e-12 * (1 + abs(a))


class TestDepthComparison:
    def test_null_structure_contrast(self):
        flat, infinite = depth_comparison(np.array([1.0, 0.0]), np.array([1.0, 0.0]))
        assert infinite == 0.0
        assert abs(flat - 0.4199743416140261) < 1e-12

    def test_parallel_vectors(self):
        _, infinite = depth_comparison(np.array([2.0, 0.0]), np.array([1.0, 0.0]))
        assert infinite == 0.0

    def test_high_frequency_agreement(self):
        xi = np.array([20.0, 0.0])
        flat, infinite = depth_comparison(xi, xi)
        assert abs(flat - infinite) < 1e-15 * 400


class TestBulkSplit:
    def test_p1_plus_p2_identity(self):
        rng = np.random.default_rng(37)
        pts = rng.uniform(-10, 10, size=(10_000, 4))
        z1, z2, e1, e2 = pts.T
        lhs = p1(z1, z2, e1, e2) + p2(z1, z2, e1, e2)
        rhs = qtilde_closed(z1, z2, e1, e2)
        assert np.max(np.abs(lhs - rhs)) < 1e-10 * (1 + np.max(np.abs(rhs)))


class TestSinfty:
    def test_zero_symbol(self):
        zero = BilinearSymbol(lambda z1, z2, e1, e2: np.zeros_like(z1), "zero")
        assert sinfty_estimate(zero, 0, 1, 1) == 0.0

    def test_scaling_invariance(self):
        one = BilinearSymbol(lambda z1, z2, e1, e2: np.ones_like(z1), "one")
        a = sinfty_estimate(one, 0, 1, 1)
        b = sinfty_estimate(one, 2, 3, 3)
        assert a > 0
        assert abs(a - b) / a < 0.05

    def test_qtilde_band_bound(self):
        # the quadratic symbol's band norm behaves like 2^{k + k2}
        ratios = []
        for k, k2 in [(-3, -3), (-2, 0), (0, 0), (1, 2), (3, 3), (-4, 2), (2, -2)]:
            k1 = max(k, k2) + 1
            est = sinfty_estimate(QTILDE, k, k1, k2)
            ratios.append(est / 2.0 ** (k + k2))
        ratios = np.array(ratios)
        # bounded above and below: no band pair degenerates or blows up
        assert np.all(ratios < 150.0)
        assert np.all(ratios > 1.0)
        assert ratios.max() / ratios.min() < 10.0

    def test_resolution_error(self):
        one = BilinearSymbol(lambda z1, z2, e1, e2: np.ones_like(z1), "one")
        with pytest.raises(SinftyResolutionError):
            sinfty_estimate(one, -10, 10, 10)
