import math

import numpy as np
import pytest

from conftest import GAMMA
from qconv.convolve import zero_free_radius
from qconv.errors import DomainError, NoRadiusError
from qconv.gaussian import eq2_gaussian
from qconv.qsolve import (QDiffOperator, apply_operator, operator_symbol, q_antiderivative,
                          solve)
from qconv.series import PowerSeries


def test_operator_construction():
    assert QDiffOperator([1, 2, 0, 0]).order == 1
    assert QDiffOperator([0, 0, 3]).valuation == 2
    with pytest.raises(DomainError):
        QDiffOperator([0, 0])


def test_symbols(ctx):
    q, r = ctx.q, 3
    assert np.allclose(operator_symbol(QDiffOperator([1])).coeffs, [1])
    assert np.allclose(operator_symbol(QDiffOperator([1, 0, -q ** (2 * r)])).coeffs,
                       [1, 0, -q ** (2 * r)])
    assert np.allclose(operator_symbol(QDiffOperator([0, 1])).coeffs, [0, -1])


def test_zero_free_radius():
    assert zero_free_radius(PowerSeries([1, 0, -0.5**6])) == pytest.approx(8.0)
    assert math.isinf(zero_free_radius(PowerSeries([3.0])))
    assert zero_free_radius(PowerSeries([1, -2])) == pytest.approx(0.5)


def test_q_antiderivative(ctx):
    assert np.allclose(q_antiderivative(PowerSeries([0.0]), ctx).coeffs, 0)
    assert np.allclose(q_antiderivative(PowerSeries([1.0]), ctx).coeffs, [0, 1])
    f = PowerSeries([1.0, -2.0, 0.5, 3.0])
    assert np.array_equal(q_antiderivative(f, ctx).q_derivative(ctx).coeffs, f.coeffs)


def test_worked_example(ctx):
    q, r = ctx.q, 3
    F = eq2_gaussian(ctx, gamma_hint=GAMMA)
    rep = solve([1, 0, -q ** (2 * r)], F, GAMMA, ctx)
    ref = np.zeros(33)
    for p in range(17):
        ref[2 * p] = q ** (2 * r * p) * q ** (2 * p * p - p) / (1 - q) ** (2 * p)
    assert np.max(np.abs(rep.solution.hermite[:21] - ref[:21])) < 1e-9
    assert rep.residual < 1e-7 and rep.shift_p == 0 and rep.rho == pytest.approx(8.0)
    assert not rep.approximate


def test_identity_operator(ctx):
    F = eq2_gaussian(ctx, gamma_hint=GAMMA) * 2.0
    rep = solve([1.0], F, GAMMA, ctx)
    assert rep.shift_p == 0 and rep.solution.max_coeff_diff(F) < 1e-14


def test_pure_derivative_on_polynomial(ctx):
    F = PowerSeries([1.0, 2.0, 3.0])
    rep = solve([0, 1], F, GAMMA, ctx)
    assert np.allclose(rep.solution.coeffs, [0, 1, 2 / 1.5, 3 / 1.75], rtol=1e-15, atol=0)
    assert rep.residual < 1e-12
    back = apply_operator(QDiffOperator([0, 1]), rep.solution, ctx)
    assert np.allclose(back.coeffs[:3], F.coeffs, rtol=1e-15, atol=0)


def test_polynomial_short_circuit(ctx):
    F = PowerSeries([1.0, 0.0, 0.0, 4.0])
    L = QDiffOperator([2.0, 1.0, 0.5])
    rep = solve(L, F, GAMMA, ctx)
    assert rep.residual == 0 or rep.residual < 1e-15
    assert np.allclose(apply_operator(L, rep.solution, ctx).coeffs[:4], F.coeffs)


def test_q_shift_path(ctx):
    F = PowerSeries(0.45 ** np.arange(31))
    L = QDiffOperator([1, -1])
    rep = solve(L, F, GAMMA, ctx)
    assert rep.shift_p == 3 and rep.rho == pytest.approx(1.0)
    assert rep.residual < 1e-12 and not rep.approximate
    LY = apply_operator(L, rep.solution, ctx)
    assert np.max(np.abs(LY.coeffs[:20] - F.coeffs[:20])) < 1e-12


def test_no_radius(ctx):
    with pytest.raises(NoRadiusError):
        solve([1, -1], PowerSeries(0.9 ** np.arange(31)), GAMMA, ctx)


def test_weak_regime_is_flagged(ctx):
    F = eq2_gaussian(ctx, gamma_hint=GAMMA)
    rep = solve([1, 0, -1.0], F, GAMMA, ctx)
    assert rep.approximate


def test_gaussian_rhs_needs_constant_term(ctx):
    with pytest.raises(DomainError):
        solve([0, 1], eq2_gaussian(ctx, gamma_hint=GAMMA), GAMMA, ctx)
