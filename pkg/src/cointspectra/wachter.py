"""Wachter and Marchenko-Pastur limit laws for squared canonical correlations.

Everything here is a pure function of its inputs: distribution parameters,
evaluation points, or an aspect ratio c (the limit of dimension/sample-size).
The continuous parts of both laws have square-root vanishing densities at the
support endpoints; all quadrature goes through the substitution
lambda = lo + (hi - lo) * sin(theta)^2, which makes the integrand analytic on
[0, pi/2] and lets a fixed-order Gauss-Legendre rule deliver near machine
precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "WachterParams",
    "StieltjesSolution",
    "coint_null_params",
    "white_noise_params",
    "support",
    "pdf",
    "cdf",
    "quantile",
    "mean_identity",
    "mean_neglog",
    "MP_A_MINUS",
    "MP_A_PLUS",
    "mp_pdf",
    "mp_cdf",
    "mp_mean",
    "stieltjes_limit",
    "empirical_stieltjes",
    "integral_identity_check",
]

# Fixed-order Gauss-Legendre rule, mapped to [0, 1].  Order 200 is far past
# the point of diminishing returns for the analytic integrands used here.
_GL_ORDER = 200
_gl_nodes, _gl_weights = np.polynomial.legendre.leggauss(_GL_ORDER)
_GL_U = 0.5 * (_gl_nodes + 1.0)
_GL_W = 0.5 * _gl_weights


def _check_aspect_ratio(c: float, upper: float = 1.0, upper_open: bool = False) -> float:
    c = float(c)
    if not math.isfinite(c) or c <= 0.0:
        raise ValueError(f"aspect ratio must satisfy c > 0, got {c}")
    if upper_open:
        if c >= upper:
            raise ValueError(f"aspect ratio must satisfy c < {upper}, got {c}")
    elif c > upper:
        raise ValueError(f"aspect ratio must satisfy c <= {upper}, got {c}")
    return c


@dataclass(frozen=True)
class WachterParams:
    """Parameter pair (gamma1, gamma2) of a Wachter distribution.

    The distribution lives on [0, 1]: a continuous part supported on
    [b_minus, b_plus] plus point masses ``atom0`` at zero and ``atom1`` at one.
    """

    gamma1: float
    gamma2: float

    def __post_init__(self) -> None:
        for name, g in (("gamma1", self.gamma1), ("gamma2", self.gamma2)):
            if not (isinstance(g, (int, float)) and math.isfinite(g) and 0.0 < g < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {g!r}")

    @cached_property
    def _endpoints(self) -> tuple[float, float]:
        a = self.gamma1 * (1.0 - self.gamma2)
        b = self.gamma2 * (1.0 - self.gamma1)
        sa, sb = math.sqrt(a), math.sqrt(b)
        return (sa - sb) ** 2, (sa + sb) ** 2

    @property
    def b_minus(self) -> float:
        return self._endpoints[0]

    @property
    def b_plus(self) -> float:
        return self._endpoints[1]

    @cached_property
    def atom0(self) -> float:
        # difference form of max{0, 1 - gamma2/gamma1}: one rounding fewer,
        # and exact whenever gamma1 - gamma2 is exact
        return max(0.0, (self.gamma1 - self.gamma2) / self.gamma1)

    @cached_property
    def atom1(self) -> float:
        # difference form of max{0, 1 - (1 - gamma2)/gamma1}; the fused
        # numerator avoids the cancellation that otherwise costs 2 ulp
        return max(0.0, (self.gamma2 - (1.0 - self.gamma1)) / self.gamma1)


@dataclass(frozen=True)
class StieltjesSolution:
    """Point evaluation of the limiting Stieltjes transform m(z) and its
    companion root v = m*c/(1-c) of the defining quadratic."""

    z: complex
    m: complex
    v: complex


def coint_null_params(c: float) -> WachterParams:
    """Wachter parameters of the limit law under the no-cointegration null.

    The empirical distribution of the squared sample canonical correlations
    between a p-dimensional random walk's lagged levels and its current
    differences converges a.s. to W(gamma1, gamma2) with gamma1 = c/(1+c),
    gamma2 = 2c/(1+c), where c = lim p/T in (0, 1].
    """
    c = _check_aspect_ratio(c)
    g1 = c / (1.0 + c)
    return WachterParams(gamma1=g1, gamma2=2.0 * g1)


def white_noise_params(c: float) -> WachterParams:
    """Wachter parameters of the limit law when the data are white noise.

    gamma1 = c/(2-c), gamma2 = 1/(2-c).  At c = 1/2 this coincides exactly
    with :func:`coint_null_params`, so the spectrum loses the ability to
    distinguish random-walk from white-noise data there.
    """
    c = _check_aspect_ratio(c, upper=1.0, upper_open=True)
    return WachterParams(gamma1=c / (2.0 - c), gamma2=1.0 / (2.0 - c))


def support(params: WachterParams) -> tuple[float, float]:
    """Endpoints (b_minus, b_plus) of the continuous bulk.

    b_pm = (sqrt(gamma1*(1-gamma2)) +- sqrt(gamma2*(1-gamma1)))**2, which
    stays inside [0, 1] without any numerical clamping.
    """
    return params._endpoints


def _bulk_mass(lo: float, hi: float, x, denom) -> np.ndarray:
    """integral_lo^min(x,hi) sqrt((hi-t)(t-lo)) / denom(t) dt.

    Uses t = lo + (hi-lo)sin(theta)^2; the square root times the Jacobian
    collapses to (hi-lo)^2 sin(2 theta)^2 / 2, analytic in theta, so partial
    masses are just Gauss-Legendre sums on [0, theta_x].
    """
    x = np.asarray(x, dtype=float)
    span = hi - lo
    frac = np.clip((x - lo) / span, 0.0, 1.0)
    theta_x = np.arcsin(np.sqrt(frac))
    theta = np.multiply.outer(theta_x, _GL_U)
    t = lo + span * np.sin(theta) ** 2
    integrand = 0.5 * span * span * np.sin(2.0 * theta) ** 2 / denom(t)
    # sum (not matmul): pairwise reduction is identical for every batch
    # shape, keeping scalar and vectorized evaluations bitwise consistent
    return (integrand * _GL_W).sum(axis=-1) * theta_x


def _wachter_denom(params: WachterParams):
    g1 = params.gamma1

    def denom(t):
        return 2.0 * math.pi * g1 * t * (1.0 - t)

    return denom


def _continuous_cdf(params: WachterParams, x) -> np.ndarray:
    lo, hi = params._endpoints
    return _bulk_mass(lo, hi, x, _wachter_denom(params))


def pdf(params: WachterParams, lam) -> float | np.ndarray:
    """Density of the continuous part; zero off (b_minus, b_plus).

    The atoms are not part of the density.  At the endpoints the square root
    vanishes, and the value 0 is returned even when b_plus = 1 makes the
    density blow up one-sidedly (the endpoint itself carries no mass).
    """
    lam_arr = np.asarray(lam, dtype=float)
    lo, hi = params._endpoints
    inside = (lam_arr > lo) & (lam_arr < hi)
    lam_in = np.where(inside, lam_arr, 0.5 * (lo + hi))
    prod = np.maximum((hi - lam_in) * (lam_in - lo), 0.0)
    dens = np.sqrt(prod) / (2.0 * math.pi * params.gamma1 * lam_in * (1.0 - lam_in))
    out = np.where(inside, dens, 0.0)
    return float(out) if np.isscalar(lam) or out.ndim == 0 else out


def cdf(params: WachterParams, lam) -> float | np.ndarray:
    """Distribution function: atom at 0, bulk mass, atom at 1."""
    lam_arr = np.asarray(lam, dtype=float)
    out = np.zeros_like(lam_arr)
    nonneg = lam_arr >= 0.0
    # cap at 1: the full bulk mass can overshoot 1 - atoms by a few ulp
    out = np.where(
        nonneg, np.minimum(params.atom0 + _continuous_cdf(params, lam_arr), 1.0), out
    )
    out = np.where(lam_arr >= 1.0, 1.0, out)
    return float(out) if np.isscalar(lam) or out.ndim == 0 else out


def quantile(params: WachterParams, q) -> float | np.ndarray:
    """Generalized inverse of the cdf: inf{lam : cdf(lam) >= q}.

    q <= atom0 lands on the atom at zero; q > 1 - atom1 lands on the atom at
    one; in between the bulk cdf is inverted by bisection to 1e-12 in lambda.
    """
    q_in = np.asarray(q, dtype=float)
    if np.any((q_in <= 0.0) | (q_in >= 1.0)):
        raise ValueError("quantile requires 0 < q < 1")
    q_arr = np.atleast_1d(q_in)
    lo_b, hi_b = params._endpoints
    out = np.empty_like(q_arr)
    at_zero = q_arr <= params.atom0
    at_one = q_arr > 1.0 - params.atom1
    mid = ~(at_zero | at_one)
    out[at_zero] = 0.0
    out[at_one] = 1.0
    if np.any(mid):
        target = q_arr[mid] - params.atom0
        lo = np.full(target.shape, lo_b)
        hi = np.full(target.shape, hi_b)
        denom = _wachter_denom(params)
        for _ in range(60):
            m = 0.5 * (lo + hi)
            ge = _bulk_mass(lo_b, hi_b, m, denom) >= target
            hi = np.where(ge, m, hi)
            lo = np.where(ge, lo, m)
        out[mid] = 0.5 * (lo + hi)
    if np.isscalar(q) or q_in.ndim == 0:
        return float(out[0])
    return out


def mean_identity(c: float) -> float:
    """a.s. limit of (1/p) * sum of the squared canonical correlations under
    the no-cointegration null, i.e. the Wachter expectation of the capped
    identity: it equals gamma2 = 2c/(1+c) on all of (0, 1].

    (The bulk mean is gamma2 - atom1, and the atom at one restores exactly
    atom1, so the expectation is gamma2 for every c, atoms included.)
    """
    c = _check_aspect_ratio(c)
    return 2.0 * c / (1.0 + c)


def mean_neglog(c: float) -> float:
    """a.s. lower bound (conjecturally the limit) of -(1/p) * sum of
    log(1 - lambda_i) under the no-cointegration null, for c < 1/2.

    For c >= 1/2 the upper support endpoint reaches 1 and the log moment
    diverges, so the value is undefined there.
    """
    c = _check_aspect_ratio(c, upper=0.5, upper_open=True)
    return (
        (1.0 + c) / c * math.log1p(c)
        - (1.0 - c) / c * math.log1p(-c)
        + (1.0 - 2.0 * c) / c * math.log1p(-2.0 * c)
    )


# Marchenko-Pastur limit of the scaled spectrum under sequential asymptotics
# (sample size first, then dimension): support endpoints (1 -+ sqrt(2))^2.
MP_A_MINUS = (1.0 - math.sqrt(2.0)) ** 2
MP_A_PLUS = (1.0 + math.sqrt(2.0)) ** 2


def mp_pdf(lam) -> float | np.ndarray:
    """Density sqrt((a_plus - t)(t - a_minus)) / (2 pi t) on the bulk.

    This is twice the Marchenko-Pastur density with ratio 2 and unit scale,
    renormalized because the MP point mass 1/2 at zero is not part of this
    law.
    """
    lam_arr = np.asarray(lam, dtype=float)
    inside = (lam_arr > MP_A_MINUS) & (lam_arr < MP_A_PLUS)
    lam_in = np.where(inside, lam_arr, 3.0)
    prod = np.maximum((MP_A_PLUS - lam_in) * (lam_in - MP_A_MINUS), 0.0)
    dens = np.sqrt(prod) / (2.0 * math.pi * lam_in)
    out = np.where(inside, dens, 0.0)
    return float(out) if np.isscalar(lam) or out.ndim == 0 else out


def mp_cdf(lam) -> float | np.ndarray:
    lam_arr = np.asarray(lam, dtype=float)
    out = _bulk_mass(MP_A_MINUS, MP_A_PLUS, lam_arr, lambda t: 2.0 * math.pi * t)
    out = np.minimum(out, 1.0)
    return float(out) if np.isscalar(lam) or out.ndim == 0 else out


def mp_mean() -> float:
    """First moment of the sequential limit law; equals 2 exactly."""
    return 2.0


def stieltjes_limit(c: float, z: complex) -> StieltjesSolution:
    """Closed-form limit of the Stieltjes transforms of the spectra.

    m(z) solves c*z*(1-z)*m^2 - (c + c*z - z)*m + 1 = 0; of the two roots the
    one with nonnegative imaginary part is the Stieltjes transform of a
    probability measure on [0, 1].  v = m*c/(1-c) then solves the companion
    quadratic c/(1-c) - (c + c*z - z)*v + z*(1-z)*(1-c)*v^2 = 0.
    """
    c = _check_aspect_ratio(c)
    z = complex(z)
    if not z.imag > 0.0:
        raise ValueError("stieltjes_limit requires Im z > 0")
    b = z - c - c * z
    disc = b * b - 4.0 * c * (1.0 - z) * z
    root = np.sqrt(complex(disc))
    den = 2.0 * z * (1.0 - z) * c
    m_plus = (-b + root) / den
    m_minus = (-b - root) / den
    m = m_plus if m_plus.imag >= m_minus.imag else m_minus
    if m.imag < -1e-12:
        raise ArithmeticError(f"no root with nonnegative imaginary part at z={z}")
    if c == 1.0:
        # the companion root degenerates as c -> 1; m itself is still fine
        v = complex(math.nan, math.nan)
    else:
        v = m * c / (1.0 - c)
    return StieltjesSolution(z=z, m=m, v=v)


def empirical_stieltjes(lambdas, z: complex) -> complex:
    """(1/p) * sum over 1/(lambda_i - z) for a spectrum given as an array."""
    lam = np.asarray(getattr(lambdas, "lambdas", lambdas), dtype=float)
    z = complex(z)
    if z.imag == 0.0 and np.any(lam == z.real):
        raise ValueError("real z coincides with a spectrum point")
    return complex(np.mean(1.0 / (lam - z)))


def integral_identity_check(x: complex) -> tuple[complex, complex]:
    """Self-test of the quadrature layer on a closed-form integral.

    Returns (lhs, rhs) with lhs = ((1/2pi) * int_0^{2pi} dphi/(x + 2 sin^2
    phi))^2 evaluated by the same Gauss-Legendre rule used elsewhere, and
    rhs = 1/(x(x+2)).  The two agree for any x off the segment [-2, 0].
    """
    x = complex(x)
    if x.imag == 0.0 and -2.0 <= x.real <= 0.0:
        raise ValueError("x must lie outside the segment [-2, 0]")
    # the integrand has period pi and is symmetric about pi/2, so the mean
    # over [0, 2pi] equals the mean over [0, pi/2]
    theta = 0.5 * math.pi * _GL_U
    vals = 1.0 / (x + 2.0 * np.sin(theta) ** 2)
    mean = complex((vals * _GL_W).sum())
    lhs = mean * mean
    rhs = 1.0 / (x * (x + 2.0))
    return lhs, rhs
