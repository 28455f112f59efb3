import mpmath
import numpy as np
import pytest

from conftest import GAMMA, mp_cq
from qconv.convolve import ConvolutionPlan, convolve
from qconv.errors import DomainError, MismatchError
from qconv.gaussian import eq2_gaussian_values
from qconv.lattice import (DiscreteDelta, LatticeFunction, LatticePoint, delta_convolve,
                           lattice_window, q_derivative, q_derivative_n, q_integral, q_shift)


def gaussian_fn(ctx, gamma):
    return LatticeFunction(gamma, lambda x: eq2_gaussian_values(x, ctx))


def test_point_validation():
    with pytest.raises(DomainError):
        LatticePoint(0, 1, 0.9)
    with pytest.raises(DomainError):
        LatticePoint(1, 1, -0.9)


def test_index_backed_rejects_off_lattice(ctx):
    f = LatticeFunction(GAMMA, index_rule=lambda s, k: np.ones(np.shape(k)))
    assert f.evaluate(GAMMA * ctx.q**3, ctx) == 1
    with pytest.raises(DomainError):
        f.evaluate(0.5, ctx)


def test_table_support_is_finite():
    f = LatticeFunction(GAMMA, table={(1, 0): 2.0, (-1, 3): 0.0})
    assert f.table == {(1, 0): 2.0}


def test_integral_of_odd_function_vanishes(ctx):
    f = LatticeFunction(GAMMA, lambda x: x * eq2_gaussian_values(x, ctx))
    assert abs(q_integral(f, ctx)) < 1e-17


@pytest.mark.parametrize("gamma", [1.0, GAMMA])
def test_gaussian_integral_matches_high_precision(ctx, gamma):
    ref = mp_cq(ctx.q, gamma)
    assert abs(q_integral(gaussian_fn(ctx, gamma), ctx) - ref) < 1e-13 * ref


def test_delta_integral(ctx):
    for p in (-2, 0, 3):
        d = DiscreteDelta(1, p, GAMMA)
        assert q_integral(d, ctx) == pytest.approx((1 - ctx.q) * ctx.q**p * GAMMA, rel=1e-15)


def test_q_derivatives(ctx):
    assert q_derivative(lambda x: x * x, 1.0, ctx) == pytest.approx(1.5)
    f = lambda x: np.asarray(x) ** 3
    assert q_derivative_n(f, 0.7, 0, ctx) == pytest.approx(0.343)
    assert q_derivative_n(f, 1.0, 2, ctx) == pytest.approx(2.625, rel=1e-13)
    # Ryde's formula against repeated single steps
    g = lambda x: np.sin(np.asarray(x))
    d1 = lambda x: q_derivative(g, x, ctx)
    d2 = lambda x: q_derivative(d1, x, ctx)
    assert q_derivative_n(g, 0.8, 2, ctx) == pytest.approx(d2(0.8), rel=1e-12)
    with pytest.raises(DomainError):
        q_derivative(g, 0.0, ctx)


def test_q_shift(ctx):
    d = DiscreteDelta(1, 4, GAMMA)
    assert q_shift(d, 1) == DiscreteDelta(1, 3, GAMMA)
    f = gaussian_fn(ctx, GAMMA)
    assert q_shift(f, 0) is f
    lhs = q_integral(q_shift(f, 1, ctx), ctx)
    assert lhs == pytest.approx(q_integral(f, ctx) / ctx.q, rel=1e-13)


def test_delta_convolve_zero_above_support(ctx):
    d1, d2 = DiscreteDelta(1, 2, GAMMA), DiscreteDelta(1, 1, GAMMA)
    assert delta_convolve(d1, d2, LatticePoint(1, 3, GAMMA), ctx) == 0


def test_delta_convolve_symmetric_form(ctx):
    q = ctx.q
    qq = float(mpmath.qp(q, q))
    t, s = 3, 2
    for l in (-1, 0, 1, 2):
        ref = (GAMMA * (1 - q) * q ** ((t + s - l) + (s - l) * (t - l)) * qq
               / (float(mpmath.qp(q, q, s - l)) * float(mpmath.qp(q, q, t - l))))
        got = delta_convolve(DiscreteDelta(1, t, GAMMA), DiscreteDelta(1, s, GAMMA),
                             LatticePoint(1, l, GAMMA), ctx)
        assert got == pytest.approx(ref, rel=1e-13)


def test_delta_spot_value_against_moment_route(ctx):
    d = DiscreteDelta(1, 0, 1.0)
    x = LatticePoint(1, 0, 1.0)
    closed = delta_convolve(d, d, x, ctx)
    assert closed == pytest.approx(0.5 * 0.2887880950866024, rel=1e-12)
    generic = convolve(d.as_function(), d.as_function(), ctx, 1.0,
                       ConvolutionPlan("moment_series", 40, 0)).evaluate(1.0, ctx)
    assert abs(generic - closed) < 1e-9


def test_delta_lattice_mismatch(ctx):
    with pytest.raises(MismatchError):
        delta_convolve(DiscreteDelta(1, 0, 0.9), DiscreteDelta(1, 0, 0.7),
                       LatticePoint(1, 0, 0.9), ctx)


def test_window_layout(ctx):
    w = lattice_window(GAMMA, -1, 1, ctx)
    assert np.allclose(w, [1.8, 0.9, 0.45, -1.8, -0.9, -0.45])
