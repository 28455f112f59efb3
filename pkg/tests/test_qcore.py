import math

import mpmath
import pytest

from qconv import E_q, QContext, e_q, poch, q_binomial, q_factorial, q_number
from qconv.errors import DomainError, PoleError, TruncationError


@pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.5])
def test_context_rejects_bad_base(q):
    with pytest.raises(DomainError):
        QContext(q)


def test_context_rejects_bad_policy():
    with pytest.raises(DomainError):
        QContext(0.5, rel_tol=0.0)
    with pytest.raises(DomainError):
        QContext(0.5, max_terms=8)


def test_poch_finite(ctx):
    assert poch(0.3, 0, ctx) == 1
    assert poch(0.5, 2, ctx) == pytest.approx(0.375, abs=1e-15)


def test_poch_infinite_matches_mpmath(ctx):
    assert poch(1.0, math.inf, ctx) == 0
    for a in (0.5, -0.7, 0.3 + 0.2j):
        ref = complex(mpmath.qp(a, 0.5))
        assert abs(poch(a, math.inf, ctx) - ref) < 1e-14 * abs(ref)


def test_poch_truncation_cap():
    tight = QContext(0.999, max_terms=16)
    with pytest.raises(TruncationError):
        poch(0.5, math.inf, tight)


def test_q_numbers(ctx):
    assert q_number(0, ctx) == 0
    assert q_number(3, ctx) == pytest.approx(1.75)
    assert q_factorial(3, ctx) == pytest.approx(1 * 1.5 * 1.75)
    assert q_binomial(2, 1, ctx) == pytest.approx(1.5)
    assert q_binomial(5, 0, ctx) == 1 and q_binomial(5, 5, ctx) == 1


def test_q_binomial_pascal(ctx):
    q = ctx.q
    for n in range(1, 9):
        for k in range(1, n):
            rhs = q_binomial(n - 1, k - 1, ctx) + q**k * q_binomial(n - 1, k, ctx)
            assert q_binomial(n, k, ctx) == pytest.approx(rhs, rel=1e-14)


def test_exponentials(ctx):
    assert e_q(0, ctx) == 1 and E_q(0, ctx) == 1
    assert E_q(-1, ctx, base=ctx.q**2) == 0
    x = 0.3
    assert e_q(x, ctx) * (1 - x) == pytest.approx(e_q(ctx.q * x, ctx), rel=1e-14)
    assert e_q(0.4, ctx) * E_q(-0.4, ctx) == pytest.approx(1.0, rel=1e-14)


def test_e_q_pole(ctx):
    with pytest.raises(PoleError):
        e_q(1.0 / ctx.q**2, ctx)
