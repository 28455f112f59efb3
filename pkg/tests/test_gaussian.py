import math

import mpmath
import numpy as np
import pytest

from conftest import GAMMA
from qconv.errors import InsufficientDataError, RadiusError
from qconv.gaussian import (G_k, GaussianSeries, basis_convert, c_q, eq2_gaussian,
                            estimate_growth_type, g_m, g_m_hermite, gaussian_moments,
                            hermite2_gaussian, hermite2_poly, hermite_derivative,
                            reconstruct_from_moments, unit_u)
from qconv.lattice import lattice_window, q_derivative_n
from qconv.qcore import poch
from qconv.series import MomentSeries, moments_of


def mp_even_moment(q, gamma, k, dps=40):
    with mpmath.workdps(dps):
        q, g = mpmath.mpf(q), mpmath.mpf(gamma)
        s = mpmath.mpf(0)
        for j in range(-60, 300):
            x = g * q**j
            s += 2 * (1 - q) * x * x ** (2 * k) / mpmath.qp(-x * x, q * q)
        return float(q ** (2 * k * k + k) * s)


def test_hermite_polynomials(ctx):
    x = np.array([0.3, -1.2, 2.0])
    assert np.allclose(hermite2_poly(0, x, ctx), 1)
    assert np.allclose(hermite2_poly(1, x, ctx), x)
    # monic: the leading coefficient dominates for large x
    big = 1e6
    assert hermite2_poly(5, big, ctx) / big**5 == pytest.approx(1.0, rel=1e-9)


def test_basis_conversion(ctx):
    c = GaussianSeries([2.0, 0, 0], "monomial", ctx)
    assert np.allclose(c.hermite, c.monomial)
    x2 = GaussianSeries([0, 0, 1.0], "monomial", ctx)
    h = x2.hermite
    assert h[1] == 0 and h[2] == pytest.approx(1.0)
    assert np.allclose(x2(np.array([0.7])), (h[2] * hermite2_poly(2, 0.7, ctx) + h[0])
                       * eq2_gaussian(ctx)(np.array([0.7])))
    rng = np.random.default_rng(3)
    l = np.arange(21)
    for basis, other in (("hermite2", "monomial"), ("monomial", "hermite2")):
        # coefficients of the size the Gaussian class allows
        c = rng.normal(size=21) * ctx.q ** (l * l / 2)
        back = basis_convert(basis_convert(GaussianSeries(c, basis, ctx), other), basis)
        assert np.max(np.abs(back.coeffs - c) / np.abs(c)) < 1e-10
    # unscaled coefficients only survive at low order: the change of basis has
    # entries of size q^{-N²/4}
    c = rng.normal(size=7)
    back = basis_convert(basis_convert(GaussianSeries(c, "hermite2", ctx), "monomial"), "hermite2")
    assert np.max(np.abs(back.coeffs - c)) < 1e-10


def test_gaussian_even_moments_closed_form(ctx):
    q = ctx.q
    m = gaussian_moments(eq2_gaussian(ctx), GAMMA, 16, ctx).moments
    cq = c_q(GAMMA, ctx)
    for k in range(9):
        ref = mp_even_moment(q, GAMMA, k)
        assert abs(m[2 * k] - ref) < 1e-12 * ref
        closed = cq * q ** (k * k + k) * poch(q, k, ctx, base=q * q).real
        assert abs(closed - ref) < 1e-12 * ref
    assert np.max(np.abs(m[1::2])) < 1e-300


def test_odd_hermite_has_no_even_moments(ctx):
    m = gaussian_moments(hermite2_gaussian(3, ctx) + hermite2_gaussian(1, ctx), GAMMA, 10, ctx)
    assert np.max(np.abs(m.moments[0::2])) < 1e-15


def test_closed_moments_match_lattice(ctx):
    rng = np.random.default_rng(11)
    c = rng.normal(size=8) * 0.5 ** np.arange(8)
    g = GaussianSeries(np.concatenate([c, np.zeros(25)]), "hermite2", ctx, GAMMA)
    closed = gaussian_moments(g, GAMMA, 10, ctx).moments
    direct = moments_of(g, 10, ctx, GAMMA).moments
    scale = np.max(np.abs(closed))
    assert np.max(np.abs(closed - direct)) < 1e-9 * scale


@pytest.mark.parametrize("m", [1, 2, 3])
def test_g_m_moments(ctx, m):
    q = ctx.q
    mu = gaussian_moments(g_m_hermite(m, ctx), GAMMA, 12, ctx).moments
    cq = c_q(GAMMA, ctx)
    for k in range(6):
        ref = (cq * q ** (k * k + k) * poch(q, k, ctx, base=q * q)
               * poch(q ** (2 * m - 2 * k), math.inf, ctx, base=q * q)
               / poch(q ** (1 + 2 * m), math.inf, ctx, base=q * q)).real
        if k >= m:
            assert abs(mu[2 * k]) < 1e-15
        else:
            assert mu[2 * k] == pytest.approx(ref, rel=1e-12)


def test_g_m_routes_agree(ctx):
    for m in (1, 2, 3):
        a, b = g_m(m, ctx), g_m_hermite(m, ctx)
        assert a.max_coeff_diff(b) < 1e-12


def test_g0_second_derivative(ctx):
    q = ctx.q
    g0 = g_m(0, ctx, 40)
    xs = lattice_window(GAMMA, 0, 6, ctx)
    d2 = q_derivative_n(g0, xs, 2, ctx)
    assert np.max(np.abs(d2 + g0(xs) / (1 - q) ** 2)) < 1e-9


def test_G_k_basics(ctx):
    assert G_k(0, GAMMA, ctx).max_coeff_diff(unit_u(GAMMA, ctx)) < 1e-13
    q = ctx.q
    for k in range(6):
        m = moments_of(G_k(k, GAMMA, ctx), 10, ctx, GAMMA).moments
        target = np.zeros(11)
        target[k] = 1
        assert np.max(np.abs(m - target)) < 1e-9
        # ∫ G_k x^l = q^{-(l²+l)/2} μ_l = q^{-(k²+k)/2} δ_{kl}
        l = np.arange(11)
        raw = m * q ** (-(l * l + l) / 2)
        assert np.max(np.abs(raw - target * q ** (-(k * k + k) / 2)) * q ** ((l * l + l) / 2)) < 1e-9


def test_hermite_derivative(ctx):
    e = eq2_gaussian(ctx)
    assert np.allclose(hermite_derivative(e, 0).hermite, e.hermite)
    d = hermite_derivative(e, 1)
    target = np.zeros(d.order + 1)
    target[1] = -1 / (1 - ctx.q)
    assert np.allclose(d.hermite, target, atol=1e-14)
    g = hermite2_gaussian(2, ctx) + hermite2_gaussian(3, ctx) * 0.4 + e
    # Ryde's weights grow like x^{-t} q^{-t²/2}; stay where its round-off is below 1e-9
    xs = lattice_window(GAMMA, -2, 3, ctx)
    for t in range(1, 5):
        ryde = q_derivative_n(g, xs, t, ctx)
        exact = hermite_derivative(g, t)(xs)
        assert np.max(np.abs(ryde - exact)) < 1e-9 * max(1.0, np.max(np.abs(exact)))


def test_growth_type(ctx):
    q = ctx.q
    assert estimate_growth_type(g_m(1, ctx, 40)).s_estimate <= 1.1 * q**0.5
    assert estimate_growth_type(g_m(0, ctx, 40)).s_estimate == pytest.approx(q**-0.5, rel=0.15)
    poly = GaussianSeries(np.r_[1.0, 2.0, np.zeros(40)], "hermite2", ctx)
    small = estimate_growth_type(poly.truncate(20)).s_estimate
    large = estimate_growth_type(poly).s_estimate
    assert large <= small
    with pytest.raises(InsufficientDataError):
        estimate_growth_type(GaussianSeries([1.0, 0, 0], "hermite2", ctx))


def test_reconstruction(ctx):
    e = eq2_gaussian(ctx, gamma_hint=GAMMA)
    r = reconstruct_from_moments(gaussian_moments(e, GAMMA, 32, ctx), ctx)
    xs = lattice_window(GAMMA, -8, 20, ctx)
    assert np.max(np.abs(r(xs) - e(xs))) < 1e-8
    delta = np.zeros(33)
    delta[0] = 1
    u = reconstruct_from_moments(MomentSeries(GAMMA, delta), ctx)
    assert u.max_coeff_diff(unit_u(GAMMA, ctx)) < 1e-13
    g2 = g_m_hermite(2, ctx, gamma_hint=GAMMA)
    assert reconstruct_from_moments(gaussian_moments(g2, GAMMA, 32, ctx), ctx).max_coeff_diff(g2) < 1e-8


def test_reconstruction_radius_gate(ctx):
    k = np.arange(33)
    wild = MomentSeries(GAMMA, 5.0**k * np.array([float(mpmath.qfac(int(j), 0.5)) for j in k]))
    with pytest.raises(RadiusError):
        reconstruct_from_moments(wild, ctx)
