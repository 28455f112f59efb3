"""Constant-coefficient q-differential equations ``Σ c_n ∂^n Y = F``.

The operator's symbol ``s(t) = Σ (-1)^n c_n t^n`` is the moment generating
series of the kernel ``D_L``; a solution is ``g * F`` where ``g`` has moment
series ``1/s``.  When ``s`` has a zero too close to the origin the equation is
rescaled by ``Y = Q^p Y_p``, which moves every zero outward by ``q^{-p}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convolve import hermite_action, zero_free_radius
from .errors import DomainError, NoRadiusError
from .gaussian import GaussianSeries, hermite_derivative, radius_estimate
from .lattice import lattice_window
from .qcore import QContext, q_factorial, q_number
from .series import MomentSeries, PowerSeries, reciprocal

__all__ = [
    "QDiffOperator",
    "SolveReport",
    "operator_symbol",
    "zero_free_radius",
    "q_antiderivative",
    "apply_operator",
    "solve",
]

APPROXIMATE_RESIDUAL = 1e-6


class QDiffOperator:
    """``L = Σ_n c_n ∂^n``; trailing zero coefficients are dropped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).reshape(-1)
        nz = np.nonzero(c)[0]
        if len(nz) == 0:
            raise DomainError("the zero operator has no order")
        c = c[: nz[-1] + 1].copy()
        c.setflags(write=False)
        self.coeffs = c

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def valuation(self) -> int:
        """Index of the first nonzero coefficient."""
        return int(np.nonzero(self.coeffs)[0][0])

    def shifted(self, p: int, ctx: QContext) -> "QDiffOperator":
        """``Σ c_n q^{pn} ∂^n``, the operator acting on ``Y_p`` when ``Y = Q^p Y_p``."""
        n = np.arange(len(self.coeffs))
        return QDiffOperator(self.coeffs * ctx.q ** (p * n))

    def __repr__(self):
        return f"QDiffOperator({self.coeffs.tolist()})"


@dataclass(frozen=True)
class SolveReport:
    solution: object
    shift_p: int
    rho: float
    residual: float
    approximate: bool = False


def operator_symbol(L: QDiffOperator, order: int | None = None) -> PowerSeries:
    """``Σ (-1)^n c_n t^n``."""
    n = np.arange(len(L.coeffs))
    sym = L.coeffs * (-1.0) ** n
    return PowerSeries(sym, max(L.order, order or 0))


def q_antiderivative(f: PowerSeries, ctx: QContext, constant=0.0) -> PowerSeries:
    """``∫_0^x f(t) d_qt + constant``: ``a_n x^n -> a_n x^{n+1} / [n+1]_q``."""
    n = np.arange(f.order + 1)
    out = np.concatenate([[constant], f.coeffs / q_number(n + 1, ctx)])
    return PowerSeries(out, f.order + 1)


def apply_operator(L: QDiffOperator, Y, ctx: QContext):
    """``L Y`` for a :class:`PowerSeries` or :class:`GaussianSeries`."""
    if isinstance(Y, GaussianSeries):
        out = None
        for n, c in enumerate(L.coeffs):
            if c == 0:
                continue
            term = hermite_derivative(Y, n).padded(Y.order + L.order) * c
            out = term if out is None else out + term
        return out
    acc = PowerSeries.constant(0.0, Y.order)
    d = Y
    for n, c in enumerate(L.coeffs):
        if n:
            d = d.q_derivative(ctx)
        acc = acc + PowerSeries(d.coeffs * c, Y.order)
    return acc


def _inverse_moments(sym: PowerSeries, gamma: float, ctx: QContext, order: int) -> MomentSeries:
    inv = reciprocal(PowerSeries(sym.coeffs, order), ctx)
    fact = np.array([q_factorial(k, ctx) for k in range(order + 1)])
    return MomentSeries(gamma, inv.coeffs * fact)


def _window_residual(L, Y, F, gamma, ctx, kmin=-8, kmax=20):
    pts = lattice_window(gamma, kmin, kmax, ctx)
    return float(np.max(np.abs(apply_operator(L, Y, ctx)(pts) - F(pts))))


def _series_residual(L, Y, F, gamma, ctx):
    # power series are only trusted inside the unit disc here
    pts = lattice_window(min(gamma, 1.0), 0, 20, ctx)
    LY = apply_operator(L, Y, ctx)
    n = min(LY.order, F.order)
    return float(np.max(np.abs(LY.truncate(n)(pts) - F.truncate(n)(pts))))


def _solve_series(L: QDiffOperator, F: PowerSeries, gamma: float, ctx: QContext) -> SolveReport:
    q = ctx.q
    sym = operator_symbol(L)
    rho = zero_free_radius(sym, ctx.rel_tol)
    deg = F.degree(0.0)
    rho_f = radius_estimate(F, ctx.rel_tol)
    # short or visibly terminating series are taken as exact polynomials
    if F.order < 8 or math.isinf(rho_f):
        # ∂ is nilpotent on polynomials: Y = ν(-∂) F with ν = 1/s exactly
        nu = reciprocal(PowerSeries(sym.coeffs, max(deg, 0)), ctx)
        Y = PowerSeries.constant(0.0, F.order)
        d = F
        for e in range(max(deg, 0) + 1):
            if e:
                d = d.q_derivative(ctx)
            Y = Y + PowerSeries(d.coeffs * ((-1) ** e * nu.coeffs[e]), F.order)
        Y = PowerSeries(Y.coeffs, F.order)
        return SolveReport(Y, 0, rho, _series_residual(L, Y, F, gamma, ctx))
    if not rho_f > 1.0 / (rho * (1 - q)):
        raise NoRadiusError(
            f"right-hand side radius {rho_f:.4g} <= 1/(rho (1-q)) = {1.0 / (rho * (1 - q)):.4g}; "
            "no q-shift helps")
    p = _minimal_shift(rho, ctx)
    Lp = L.shifted(p, ctx)
    Fp = F.scale(q ** (-p))
    nu = reciprocal(PowerSeries(operator_symbol(Lp).coeffs, F.order), ctx)
    Yp = PowerSeries.constant(0.0, F.order)
    d = Fp
    for e in range(F.order + 1):
        if e:
            d = PowerSeries(d.q_derivative(ctx).coeffs, F.order)
        Yp = Yp + d * ((-1) ** e * nu.coeffs[e])
    Y = Yp.scale(q**p)
    res = _series_residual(L, Y, F, gamma, ctx)
    return SolveReport(Y, p, rho, res, res >= APPROXIMATE_RESIDUAL)


def _minimal_shift(rho: float, ctx: QContext) -> int:
    q = ctx.q
    need = 1.0 / (q * (1 - q))
    if rho > need:
        return 0
    return int(math.floor(math.log(need / rho) / -math.log(q))) + 1


def solve(L: QDiffOperator, F, gamma: float, ctx: QContext, order: int | None = None,
          approx_terms: int | None = None) -> SolveReport:
    """Solve ``L Y = F``.

    ``F`` may be a :class:`GaussianSeries` (the solution is one too) or a
    :class:`PowerSeries`.  An operator without constant term is reduced to
    ``L' Z = F`` with ``Z = ∂^l Y`` and ``Y`` recovered by ``l`` q-antiderivatives
    (power-series right-hand sides only).

    For a Gaussian right-hand side whose symbol has a zero inside
    ``|t| <= q^{-1}(1-q)^{-1}`` no rescaling stays in the family; the inverse
    kernel is then cut to its first ``approx_terms`` moments and the report is
    flagged approximate when the measured residual is large.
    """
    if not isinstance(L, QDiffOperator):
        L = QDiffOperator(L)
    q = ctx.q
    l = L.valuation
    if l > 0:
        if not isinstance(F, PowerSeries):
            raise DomainError("operators without constant term need a power-series right-hand side")
        inner = solve(QDiffOperator(L.coeffs[l:]), F, gamma, ctx, order)
        Y = inner.solution
        for _ in range(l):
            Y = q_antiderivative(Y, ctx)
        return SolveReport(Y, inner.shift_p, inner.rho, _series_residual(L, Y, F, gamma, ctx),
                           inner.approximate)
    if isinstance(F, PowerSeries):
        return _solve_series(L, F, gamma, ctx)
    if not isinstance(F, GaussianSeries):
        raise DomainError(f"unsupported right-hand side {type(F).__name__}")
    n = F.order if order is None else order
    F = F.padded(n) if F.order < n else F
    sym = operator_symbol(L)
    rho = zero_free_radius(sym, ctx.rel_tol)
    strong = rho > 1.0 / (q * (1 - q))
    m = _inverse_moments(sym, gamma, ctx, n)
    if strong:
        Y = hermite_action(m, F, ctx, gamma)
        res = _window_residual(L, Y, F, gamma, ctx)
        return SolveReport(Y, 0, rho, res, res >= APPROXIMATE_RESIDUAL)
    # truncated inverse kernels g_k = Σ_{j<=k} μ_j(g) G_j; keep the best one
    cuts = range(n + 1) if approx_terms is None else [approx_terms]
    best = None
    for k in cuts:
        mk = MomentSeries(gamma, np.concatenate([m.moments[: k + 1], np.zeros(max(0, n - k))]))
        Y = hermite_action(mk, F, ctx, gamma)
        res = _window_residual(L, Y, F, gamma, ctx)
        if best is None or res < best[1]:
            best = (Y, res)
    return SolveReport(best[0], 0, rho, best[1], True)
