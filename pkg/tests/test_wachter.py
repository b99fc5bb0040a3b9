"""Limit-law module: parameter algebra, densities, quantiles, transforms.

Frozen reference values were computed with 50-digit mpmath arithmetic
(closed-form evaluation, adaptive quadrature, and bisection on the quadrature
cdf); quadrature cross-checks in the tests use scipy's adaptive integrator,
which is independent of the module's fixed Gauss-Legendre rule.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from cointspectra import wachter as w

GAMMA_GRID_20 = [
    (g1, g2)
    for g1 in (0.15, 0.35, 0.55, 0.75)
    for g2 in (0.1, 0.3, 0.5, 0.7, 0.9)
]

gammas = st.floats(min_value=0.02, max_value=0.98)


def quad_pdf_mass(params: w.WachterParams, upto: float | None = None) -> float:
    """Independent oracle: adaptive quadrature of the module density."""
    lo, hi = w.support(params)
    hi = min(hi, upto) if upto is not None else hi
    mass, _ = quad(lambda t: w.pdf(params, t), lo, hi, limit=500, epsabs=1e-12, epsrel=1e-12)
    return mass


class TestParams:
    def test_gamma_validation(self):
        for bad in [(0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0), (-0.1, 0.5), (0.5, float("nan"))]:
            with pytest.raises(ValueError):
                w.WachterParams(*bad)

    def test_coint_null_examples(self):
        p = w.coint_null_params(1 / 5)
        assert p.gamma1 == pytest.approx(1 / 6, rel=1e-15)
        assert p.gamma2 == pytest.approx(1 / 3, rel=1e-15)
        lo, hi = w.support(p)
        # published description of this support rounds it to [0.04, 0.74]
        assert abs(lo - 0.04) < 5e-3 and abs(hi - 0.74) < 5e-3
        assert lo == pytest.approx(0.0375247044257356, abs=1e-13)
        assert hi == pytest.approx(0.7402530733520421, abs=1e-13)

    def test_upper_edge_reaches_one_at_half(self):
        assert w.coint_null_params(0.5).b_plus == 1.0

    def test_atom_at_one_is_three_quarters(self):
        p = w.coint_null_params(4 / 5)
        assert p.gamma1 == pytest.approx(4 / 9, rel=1e-15)
        assert p.gamma2 == pytest.approx(8 / 9, rel=1e-15)
        assert p.atom1 == 0.75
        assert p.atom0 == 0.0

    def test_white_noise_params(self):
        p = w.white_noise_params(0.2)
        assert p.gamma1 == pytest.approx(0.2 / 1.8, rel=1e-15)
        assert p.gamma2 == pytest.approx(1 / 1.8, rel=1e-15)
        tiny = w.white_noise_params(1e-6)
        assert tiny.gamma1 < 1e-5 and tiny.gamma2 == pytest.approx(0.5, abs=1e-5)
        with pytest.raises(ValueError):
            w.white_noise_params(1.0)

    def test_coincidence_at_half_is_bitwise(self):
        assert w.coint_null_params(0.5) == w.white_noise_params(0.5)

    def test_aspect_ratio_validation(self):
        for bad in (0.0, -0.3, 1.2, math.nan):
            with pytest.raises(ValueError):
                w.coint_null_params(bad)

    def test_support_derived_case(self):
        p = w.WachterParams(1 / 3, 2 / 3)
        lo, hi = w.support(p)
        # hand arithmetic: (sqrt(1/9) - sqrt(4/9))^2 and (1/3 + 2/3)^2
        assert lo == pytest.approx(1 / 9, rel=1e-14)
        assert hi == pytest.approx(1.0, abs=2e-16)

    def test_support_symmetric_case_touches_zero(self):
        p = w.WachterParams(0.4, 0.4)  # gamma1(1-gamma2) == gamma2(1-gamma1)
        assert p.b_minus == 0.0

    @given(g1=gammas, g2=gammas)
    def test_support_stays_in_unit_interval(self, g1, g2):
        p = w.WachterParams(g1, g2)
        lo, hi = w.support(p)
        assert 0.0 <= lo <= hi <= 1.0
        assert 0.0 <= p.atom0 < 1.0 and 0.0 <= p.atom1 < 1.0


class TestDensityAndCdf:
    def test_pdf_outside_support_is_zero(self):
        p = w.coint_null_params(0.2)
        lo, hi = w.support(p)
        assert w.pdf(p, lo - 0.01) == 0.0
        assert w.pdf(p, hi + 0.01) == 0.0
        assert w.pdf(p, lo) == 0.0
        assert w.pdf(p, hi) == 0.0

    def test_pdf_frozen_value(self):
        # 50-digit closed-form evaluation at (1/6, 1/3), lambda = 0.3
        p = w.WachterParams(1 / 6, 1 / 3)
        assert w.pdf(p, 0.3) == pytest.approx(1.5457793533529971526, abs=1e-12)

    def test_pdf_vectorized(self):
        p = w.coint_null_params(0.2)
        grid = np.linspace(-0.1, 1.1, 7)
        vals = w.pdf(p, grid)
        assert vals.shape == grid.shape
        assert np.all(vals >= 0.0)

    def test_normalization_on_20_point_grid(self):
        for g1, g2 in GAMMA_GRID_20:
            p = w.WachterParams(g1, g2)
            total = p.atom0 + p.atom1 + quad_pdf_mass(p)
            assert total == pytest.approx(1.0, abs=1e-8), (g1, g2)

    def test_cdf_bounds(self):
        p = w.coint_null_params(0.3)
        assert w.cdf(p, -0.2) == 0.0
        assert w.cdf(p, 1.0) == 1.0
        assert w.cdf(p, 2.0) == 1.0

    def test_cdf_just_below_one_with_atom(self):
        p = w.WachterParams(4 / 9, 8 / 9)
        assert w.cdf(p, 1.0 - 1e-9) == pytest.approx(0.25, abs=1e-8)

    def test_cdf_monotone_on_grid(self):
        for params in (
            w.coint_null_params(0.2),
            w.WachterParams(4 / 9, 8 / 9),
            w.WachterParams(0.6, 0.3),
        ):
            grid = np.linspace(-0.1, 1.1, 1000)
            vals = w.cdf(params, grid)
            assert np.all(np.diff(vals) >= 0.0)

    def test_cdf_matches_adaptive_quadrature(self):
        p = w.coint_null_params(0.25)
        lo, hi = w.support(p)
        for x in np.linspace(lo + 0.01, hi - 0.01, 7):
            assert w.cdf(p, x) == pytest.approx(p.atom0 + quad_pdf_mass(p, x), abs=1e-10)


class TestQuantile:
    def test_domain(self):
        p = w.coint_null_params(0.2)
        for bad in (0.0, 1.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                w.quantile(p, bad)

    def test_atom_plateaus(self):
        lower = w.WachterParams(0.6, 0.3)  # atom0 = 0.5
        assert lower.atom0 == 0.5
        assert w.quantile(lower, 0.3) == 0.0
        assert w.quantile(lower, 0.5) == 0.0
        upper = w.WachterParams(4 / 9, 8 / 9)  # mass 3/4 at one
        assert w.quantile(upper, 0.30) == 1.0

    def test_frozen_median(self):
        # bisection on 50-digit quadrature cdf
        p = w.WachterParams(1 / 6, 1 / 3)
        assert w.quantile(p, 0.5) == pytest.approx(0.31185217711999946, abs=1e-10)

    def test_round_trip(self):
        for params in (
            w.WachterParams(1 / 6, 1 / 3),
            w.WachterParams(4 / 9, 8 / 9),
            w.WachterParams(0.6, 0.3),
        ):
            eps = 1e-3
            qs = np.linspace(params.atom0 + eps, 1.0 - params.atom1 - eps, 41)
            lam = w.quantile(params, qs)
            back = w.cdf(params, lam)
            assert np.max(np.abs(back - qs)) < 1e-9

    @given(g1=gammas, g2=gammas, q=st.floats(min_value=0.01, max_value=0.99))
    def test_round_trip_property(self, g1, g2, q):
        params = w.WachterParams(g1, g2)
        if not (params.atom0 + 1e-3 < q < 1.0 - params.atom1 - 1e-3):
            return
        assert w.cdf(params, w.quantile(params, q)) == pytest.approx(q, abs=1e-9)

    def test_vectorized_matches_scalar(self):
        p = w.coint_null_params(0.2)
        qs = np.array([0.1, 0.5, 0.9])
        vec = w.quantile(p, qs)
        assert vec.shape == (3,)
        for qi, vi in zip(qs, vec):
            assert w.quantile(p, float(qi)) == vi


class TestMomentFunctionals:
    def test_mean_identity_values(self):
        assert w.mean_identity(1.0) == pytest.approx(1.0, rel=1e-15)
        assert w.mean_identity(0.2) == pytest.approx(1 / 3, rel=1e-14)

    def test_mean_identity_matches_quadrature(self):
        # capped-identity expectation: bulk integral plus the atom at one
        for c in (0.1, 0.25, 0.4, 0.6, 0.8):
            p = w.coint_null_params(c)
            lo, hi = w.support(p)
            bulk, _ = quad(
                lambda t: t * w.pdf(p, t), lo, hi, limit=500, epsabs=1e-10, epsrel=1e-10
            )
            assert w.mean_identity(c) == pytest.approx(bulk + p.atom1, abs=1e-6), c

    def test_mean_neglog_domain(self):
        for bad in (0.5, 0.7, 1.0, 0.0):
            with pytest.raises(ValueError):
                w.mean_neglog(bad)

    def test_mean_neglog_matches_quadrature(self):
        for c in (0.1, 0.25, 0.3, 0.4):
            p = w.coint_null_params(c)
            lo, hi = w.support(p)
            val, _ = quad(
                lambda t: -math.log1p(-t) * w.pdf(p, t),
                lo,
                hi,
                limit=500,
                epsabs=1e-10,
                epsrel=1e-10,
            )
            assert w.mean_neglog(c) == pytest.approx(val, abs=1e-6), c

    def test_mean_neglog_small_c_series(self):
        # symbolic expansion: 2c + c^2 + (4/3)c^3 + O(c^4)
        for c in (1e-2, 1e-3, 1e-4):
            assert abs(w.mean_neglog(c) - (2.0 * c + c * c)) < 2.0 * c**3


class TestMarchenkoPastur:
    def test_support_constants(self):
        assert w.MP_A_MINUS == (1.0 - math.sqrt(2.0)) ** 2
        assert w.MP_A_PLUS == (1.0 + math.sqrt(2.0)) ** 2

    def test_pdf_center_frozen(self):
        # (1/2pi) sqrt((a+ - 3)(3 - a-))/3 = sqrt(2)/(3 pi)
        assert w.mp_pdf(3.0) == pytest.approx(math.sqrt(2.0) / (3.0 * math.pi), abs=1e-15)
        assert w.mp_pdf(0.1) == 0.0
        assert w.mp_pdf(6.0) == 0.0

    def test_cdf_normalizes(self):
        assert w.mp_cdf(w.MP_A_PLUS) == pytest.approx(1.0, abs=1e-8)
        assert w.mp_cdf(w.MP_A_MINUS) == 0.0

    def test_mean_is_two(self):
        assert w.mp_mean() == 2.0
        val, _ = quad(
            lambda t: t * w.mp_pdf(t),
            w.MP_A_MINUS,
            w.MP_A_PLUS,
            limit=500,
            epsabs=1e-10,
            epsrel=1e-10,
        )
        assert val == pytest.approx(2.0, abs=1e-8)

    def test_twice_general_mp_with_ratio_two(self):
        # general density with ratio kappa=2, scale 1, restricted to the bulk
        def f_mp(t):
            return math.sqrt((w.MP_A_PLUS - t) * (t - w.MP_A_MINUS)) / (2.0 * math.pi * 2.0 * t)

        for t in np.linspace(w.MP_A_MINUS + 0.05, w.MP_A_PLUS - 0.05, 13):
            assert w.mp_pdf(t) == pytest.approx(2.0 * f_mp(t), abs=1e-12)


class TestStieltjes:
    def test_rejects_real_axis(self):
        with pytest.raises(ValueError):
            w.stieltjes_limit(0.2, 1.0 + 0.0j)
        with pytest.raises(ValueError):
            w.stieltjes_limit(0.2, 1.0 - 0.5j)

    def test_quadratic_residual_on_grid(self):
        for c in (0.1, 0.3, 0.5, 0.9):
            for x in (-1.0, 0.0, 0.5, 1.5, 2.0):
                for y in (0.5, 1.0, 2.5, 4.0):
                    z = complex(x, y)
                    sol = w.stieltjes_limit(c, z)
                    res = (
                        c / (1.0 - c)
                        - (c + c * z - z) * sol.v
                        + z * (1.0 - z) * (1.0 - c) * sol.v**2
                    )
                    assert abs(res) < 1e-10, (c, z)
                    assert sol.m.imag >= 0.0
                    assert sol.v == sol.m * c / (1.0 - c)

    def test_residual_at_i_for_tenth(self):
        sol = w.stieltjes_limit(0.1, 1j)
        z = 1j
        res = 0.1 / 0.9 - (0.1 + 0.1 * z - z) * sol.v + z * (1 - z) * 0.9 * sol.v**2
        assert abs(res) < 1e-10

    def test_tail_behaves_like_probability_transform(self):
        for c in (0.1, 0.5, 1.0):
            z = 1e6j
            m = w.stieltjes_limit(c, z).m
            assert abs(m * (-z) - 1.0) < 1e-5

    def test_companion_root_degenerates_at_c_one(self):
        sol = w.stieltjes_limit(1.0, 1j)
        assert np.isfinite(sol.m.real) and np.isfinite(sol.m.imag)
        assert math.isnan(sol.v.real) and math.isnan(sol.v.imag)

    def test_empirical_single_point(self):
        assert w.empirical_stieltjes([0.5], 1j) == pytest.approx(0.4 + 0.8j, abs=1e-15)

    def test_empirical_two_points_frozen(self):
        # hand arithmetic: average of 1/(0.2 - 2i) and 1/(0.8 - 2i)
        val = w.empirical_stieltjes([0.2, 0.8], 2j)
        assert val == pytest.approx(0.11095937179924889 + 0.46304199385455786j, abs=1e-15)

    def test_empirical_accepts_spectrum_objects(self):
        from cointspectra.cca import CanonicalSpectrum

        spec = CanonicalSpectrum(lambdas=np.array([0.5]), p=1, T=10)
        assert w.empirical_stieltjes(spec, 1j) == w.empirical_stieltjes([0.5], 1j)

    def test_empirical_rejects_real_collision(self):
        with pytest.raises(ValueError):
            w.empirical_stieltjes([0.2, 0.5], 0.5 + 0j)

    @given(
        lams=st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=30),
        y=st.floats(min_value=0.1, max_value=5.0),
    )
    def test_empirical_imaginary_lower_bound(self, lams, y):
        # Im m >= Im z / (1 + Im z^2) for spectra inside [0, 1] and Re z = 0
        val = w.empirical_stieltjes(lams, complex(0.0, y))
        assert val.imag >= y / (1.0 + y * y) - 1e-12


class TestIntegralIdentity:
    def test_closed_form_points(self):
        lhs, rhs = w.integral_identity_check(2.0)
        assert rhs == pytest.approx(0.125, abs=1e-15)
        assert abs(lhs - rhs) < 1e-10
        lhs, rhs = w.integral_identity_check(1 + 1j)
        assert abs(lhs - rhs) < 1e-10

    def test_excluded_segment(self):
        for bad in (-1.0, -2.0, 0.0, -0.5 + 0j):
            with pytest.raises(ValueError):
                w.integral_identity_check(bad)

    def test_real_point_left_of_segment(self):
        lhs, rhs = w.integral_identity_check(-3.0)
        assert abs(lhs - rhs) < 1e-10
        assert rhs == pytest.approx(1.0 / 3.0, rel=1e-15)
