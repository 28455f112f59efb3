import numpy as np
import pytest

from conftest import GAMMA
from qconv.convolve import hermite_action
from qconv.errors import RadiusError, TypeGrowthError
from qconv.fourier import (convolution_theorem_twisted, estimate_left_type, fourier_formal,
                           fourier_formal_prime, fourier_inverse_G, fourier_inverse_kernel,
                           fourier_kernel, type_scaled_moments)
from qconv.gaussian import (G_k, b_q, c_q, eq2_gaussian, g_m_hermite, hermite2_gaussian,
                            reconstruct_from_moments, unit_u)
from qconv.qcore import E_q, poch_array
from qconv.series import PowerSeries


def qq(n, ctx):
    return poch_array(ctx.q, n, ctx).real


def test_formal_transform_of_unit_and_basis(ctx):
    img = fourier_formal(unit_u(GAMMA, ctx), GAMMA, ctx, 12).series.coeffs
    assert abs(img[0] - 1) < 1e-12 and np.max(np.abs(img[1:])) < 1e-12
    for k in range(6):
        img = fourier_formal(G_k(k, GAMMA, ctx), GAMMA, ctx, 12).series.coeffs
        target = np.zeros(13, dtype=complex)
        target[k] = (-1j) ** k / qq(k, ctx)[k]
        assert np.max(np.abs(img - target)) < 1e-9


def test_formal_transform_is_multiplicative(ctx):
    f = g_m_hermite(1, ctx, gamma_hint=GAMMA)
    g = hermite2_gaussian(2, ctx, gamma_hint=GAMMA) + eq2_gaussian(ctx, gamma_hint=GAMMA)
    prod = hermite_action(f, g, ctx, GAMMA)
    n = 12
    lhs = fourier_formal(prod, GAMMA, ctx, n).series
    rhs = fourier_formal(f, GAMMA, ctx, n).series * fourier_formal(g, GAMMA, ctx, n).series
    scale = np.max(np.abs(rhs.coeffs))
    assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) < 1e-8 * scale


def test_kernel_transform_matches_formal(ctx):
    e = eq2_gaussian(ctx, gamma_hint=GAMMA)
    series = fourier_formal(e, GAMMA, ctx, 32)
    for y in (0.1, 0.5, 1.0):
        k = fourier_kernel(e, GAMMA, y, ctx)
        assert abs(k - series(y)) < 1e-8 * abs(series(y))


def test_kernel_transform_parity_and_shape(ctx):
    assert abs(fourier_kernel(hermite2_gaussian(1, ctx, gamma_hint=GAMMA), GAMMA, 0.0, ctx)) < 1e-15
    q = ctx.q
    e = eq2_gaussian(ctx, gamma_hint=GAMMA)
    ys = np.array([0.2, 0.7, 1.3, 2.1])
    ratio = fourier_kernel(e, GAMMA, ys, ctx) / np.array([E_q(-q * q * y * y, ctx, base=q * q) for y in ys])
    assert np.max(np.abs(ratio - ratio[0])) < 1e-10 * abs(ratio[0])


def test_inverse_G(ctx):
    u = unit_u(GAMMA, ctx)
    assert fourier_inverse_G(PowerSeries([1.0]), GAMMA, ctx, check_radius=False).max_coeff_diff(u) < 1e-13
    g2 = g_m_hermite(2, ctx, gamma_hint=GAMMA)
    back = fourier_inverse_G(fourier_formal(g2, GAMMA, ctx), GAMMA, ctx)
    assert back.max_coeff_diff(g2) < 1e-8
    for k in range(5):
        c = np.zeros(13, dtype=complex)
        c[k] = (-1j) ** k / qq(k, ctx)[k]
        got = fourier_inverse_G(PowerSeries(c), GAMMA, ctx, check_radius=False)
        assert got.max_coeff_diff(G_k(k, GAMMA, ctx)) < 1e-13


def test_inverse_G_radius_gate(ctx):
    geometric = PowerSeries(np.full(33, 1.0))
    with pytest.raises(RadiusError):
        fourier_inverse_G(geometric, GAMMA, ctx)


def test_inverse_kernel(ctx):
    ys = np.array([0.3, 0.9, -1.4])
    for k in range(5):
        vals = fourier_inverse_kernel(lambda x, k=k: np.asarray(x) ** k, GAMMA, ys, ctx)
        got = vals * (-1j) ** k / qq(k, ctx)[k]
        assert np.max(np.abs(got - G_k(k, GAMMA, ctx)(ys))) < 1e-7
    # ∫_{-1}^{1} e_q(ixy) d_qx = b_q c_q(γ) u_γ(y)
    raw = fourier_inverse_kernel(1.0, GAMMA, ys, ctx) * c_q(GAMMA, ctx) * b_q(ctx)
    ref = b_q(ctx) * c_q(GAMMA, ctx) * unit_u(GAMMA, ctx)(ys)
    assert np.max(np.abs(raw - ref)) < 1e-8
    even = fourier_inverse_kernel(lambda x: np.asarray(x) ** 2, GAMMA, np.array([0.7, -0.7]), ctx)
    assert abs(even[0] - even[1]) < 1e-14


def test_left_type_estimator(ctx):
    for alpha in (1.5, 2.0, 3.0):
        m = type_scaled_moments(alpha, GAMMA, ctx, 16, scale=0.8)
        assert estimate_left_type(m, ctx) == pytest.approx(alpha)


def test_twisted_theorem(ctx):
    f = reconstruct_from_moments(type_scaled_moments(3.0, GAMMA, ctx), ctx, check_radius=False)
    g = reconstruct_from_moments(type_scaled_moments(3.0, GAMMA, ctx, scale=0.7), ctx,
                                 check_radius=False)
    rep = convolution_theorem_twisted(f, g, ctx, GAMMA, 10)
    assert rep.alpha == pytest.approx(3.0) and rep.beta == pytest.approx(3.0)
    assert rep.residual < 1e-7
    # g = u: both sides reduce to F̃'(f); compare in moment units, where the
    # round-off floor of tiny moments is not amplified by q^{-r(r+1)/2}
    lhs = fourier_formal_prime(hermite_action(f, unit_u(GAMMA, ctx), ctx, GAMMA), GAMMA, ctx, 10)
    ref = fourier_formal_prime(f, GAMMA, ctx, 10)
    r = np.arange(11)
    to_mu = qq(10, ctx) * ctx.q ** (r * (r + 1) / 2)
    assert np.max(np.abs((lhs.series.coeffs - ref.series.coeffs) * to_mu)) < 1e-12


def test_twisted_theorem_gate(ctx):
    e = eq2_gaussian(ctx, gamma_hint=GAMMA)
    with pytest.raises(TypeGrowthError):
        convolution_theorem_twisted(e, e, ctx, GAMMA, 10)
