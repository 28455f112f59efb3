import numpy as np
import pytest

from conftest import GAMMA
from qconv.errors import NotInvertibleError
from qconv.gaussian import G_k, b_q, big_gaussian_function, eq2_gaussian, unit_u
from qconv.lattice import DiscreteDelta
from qconv.qcore import poch, q_factorial
from qconv.series import (MomentSeries, PowerSeries, antipode_S, antipode_S_inverse, counit_eps,
                          generating_series, moment_distance, moment_valuation, moments_of,
                          psi_inverse_product, reciprocal)


def test_truncation_never_grows():
    a = PowerSeries([1, 2, 3], 2)
    b = PowerSeries([1, 1, 1, 1, 1], 4)
    assert (a + b).order == 2
    assert (a * b).order == 2
    assert np.allclose((a * b).coeffs, [1, 3, 6])


def test_gaussian_odd_moments_vanish(ctx):
    m = moments_of(eq2_gaussian(ctx, gamma_hint=GAMMA), 9, ctx, GAMMA)
    assert np.max(np.abs(m.moments[1::2])) < 1e-16


def test_big_gaussian_even_moments(ctx):
    q = ctx.q
    m = moments_of(big_gaussian_function(ctx), 12, ctx, 1.0)
    for k in range(7):
        ref = b_q(ctx) * q ** (2 * k * k + k) * poch(q, k, ctx, base=q * q).real
        assert abs(m.moments[2 * k] - ref) < 1e-11 * abs(ref)


def test_strict_moments_dominate(ctx):
    m = moments_of(G_k(1, GAMMA, ctx), 8, ctx, GAMMA, strict=True)
    assert np.all(m.strict_moments >= np.abs(m.moments) - 1e-18)


def test_generating_series(ctx):
    assert np.all(generating_series(MomentSeries(GAMMA, np.zeros(5)), ctx).coeffs == 0)
    gs = generating_series(moments_of(unit_u(GAMMA, ctx), 8, ctx, GAMMA), ctx)
    assert abs(gs.coeffs[0] - 1) < 1e-12 and np.max(np.abs(gs.coeffs[1:])) < 1e-12


def test_generating_series_of_delta(ctx):
    q, g = ctx.q, 1.0
    d = DiscreteDelta(1, 0, g)
    gs = generating_series(moments_of(d, 6, ctx, g), ctx)
    for k in range(7):
        ref = (1 - q) * g * q ** ((k * k + k) / 2) * g**k / q_factorial(k, ctx)
        assert gs.coeffs[k] == pytest.approx(ref, rel=1e-14)


def test_antipode_and_counit(ctx):
    assert np.allclose(antipode_S(PowerSeries([1]), ctx).coeffs, [1])
    assert np.allclose(antipode_S(PowerSeries([0, 1]), ctx).coeffs, [0, -1])
    assert np.allclose(antipode_S(PowerSeries([0, 0, 1]), ctx).coeffs, [0, 0, 0.5])
    p = PowerSeries(np.arange(1.0, 9.0))
    assert np.allclose(antipode_S_inverse(antipode_S(p, ctx), ctx).coeffs, p.coeffs)
    assert counit_eps(p) == 1


def test_reciprocal(ctx):
    assert np.allclose(reciprocal(PowerSeries([1.0])).coeffs, [1])
    r, q = 3, ctx.q
    sym = PowerSeries([1, 0, -q ** (2 * r)] + [0] * 9)
    inv = reciprocal(sym, ctx)
    ref = np.zeros(12)
    ref[::2] = q ** (2 * r * np.arange(6))
    assert np.allclose(inv.coeffs, ref, rtol=1e-15, atol=0)
    rng = np.random.default_rng(7)
    f = PowerSeries(np.concatenate([[1.0], rng.normal(size=16)]))
    one = (reciprocal(f, ctx) * f).coeffs
    assert abs(one[0] - 1) < 1e-12 and np.max(np.abs(one[1:])) < 1e-12
    with pytest.raises(NotInvertibleError):
        reciprocal(PowerSeries([0.0, 1.0]), ctx)


def test_psi_inverse_product(ctx):
    F = PowerSeries([1.0, 2.0, 3.0])
    one = PowerSeries([1.0, 0.0, 0.0])
    assert np.allclose(psi_inverse_product(F, one, ctx).coeffs, F.coeffs)
    assert np.allclose(psi_inverse_product(one, F, ctx).coeffs, F.coeffs)
    x = PowerSeries([0.0, 1.0, 0.0])
    assert psi_inverse_product(x, x, ctx).coeffs[2] == pytest.approx(2.0)


def test_moment_valuation_metric(ctx):
    a = MomentSeries(GAMMA, [1.0, 2.0, 3.0, 4.0])
    b = MomentSeries(GAMMA, [1.0, 2.0, 3.5, 4.0])
    assert moment_valuation(MomentSeries(GAMMA, [0.0, 0.0, 1.0]), ctx) == 2
    assert moment_distance(a, b, ctx) == pytest.approx(np.exp(-2))
    assert moment_distance(a, a, ctx) == pytest.approx(np.exp(-4))
