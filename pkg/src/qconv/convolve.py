"""The q-convolution product and what is built on it.

Three evaluation routes:

``hermite_action``
    right operand is a :class:`GaussianSeries`; the product is again one,
    with Hermite coefficients ``Σ_{e<=p} q^{ep} (∫ f X^e) / (q;q)_e b_{p-e}``.
``moment_series``
    pointwise ``Σ_e (-1)^e μ_e(f) / [e]_q! ∂^e g(x)`` with iterated
    derivatives from the n+1 point q-difference formula.
``delta_closed_form``
    two discrete deltas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MismatchError, NotInvertibleError, RadiusError, TruncationError
from .gaussian import (GaussianSeries, gaussian_moments, radius_estimate,
                       reconstruct_from_moments)
from .lattice import (DiscreteDelta, LatticeFunction, LatticePoint, _same_lattice,
                      delta_convolve, q_integral, ryde_weights)
from .qcore import QContext, poch_array, q_factorial
from .series import MomentSeries, PowerSeries, generating_series, moments_of, reciprocal

__all__ = [
    "ConvolutionPlan",
    "plan_convolution",
    "convolve",
    "moments_any",
    "power_integrals",
    "moment_series_terms",
    "hermite_action",
    "approximate_identity_sequence",
    "leibniz_check",
    "zero_free_radius",
    "InverseReport",
    "convolution_inverse",
    "convolution_inverse_report",
]

MAX_MOMENT_ORDER = 40


@dataclass(frozen=True)
class ConvolutionPlan:
    path: str
    moment_order: int
    output_order: int


def _gamma_of(f, gamma):
    own = getattr(f, "gamma", None)
    if own is None and isinstance(f, GaussianSeries):
        own = f.gamma_hint
    if gamma is None:
        if own is None:
            raise DomainError("lattice gamma is required")
        return float(own)
    return float(gamma)


def moments_any(f, up_to: int, ctx: QContext, gamma: float | None = None) -> MomentSeries:
    """Moments by the cheapest exact route available for ``f``."""
    if isinstance(f, MomentSeries):
        return f.truncate(up_to)
    g = _gamma_of(f, gamma)
    if isinstance(f, GaussianSeries):
        return gaussian_moments(f, g, up_to, ctx)
    if isinstance(f, DiscreteDelta):
        if not _same_lattice(f.gamma, g, ctx.q):
            raise MismatchError("delta lives on another lattice")
        return MomentSeries(g, [f.moment(e, ctx) for e in range(up_to + 1)])
    return moments_of(f, up_to, ctx, gamma=g)


def power_integrals(m: MomentSeries, ctx: QContext) -> np.ndarray:
    """``∫_γ f X^e = q^{-(e²+e)/2} μ_e``."""
    e = np.arange(len(m))
    return m.moments * ctx.q ** (-(e * e + e) / 2.0)


def plan_convolution(f, g, ctx: QContext, moment_order: int | None = None) -> ConvolutionPlan:
    if isinstance(f, DiscreteDelta) and isinstance(g, DiscreteDelta):
        return ConvolutionPlan("delta_closed_form", 0, 0)
    if isinstance(g, GaussianSeries):
        return ConvolutionPlan("hermite_action", g.order, g.order)
    n = MAX_MOMENT_ORDER if moment_order is None else moment_order
    return ConvolutionPlan("moment_series", n, 0)


def hermite_action(f, g: GaussianSeries, ctx: QContext, gamma: float | None = None) -> GaussianSeries:
    """``f * g`` for ``g`` in the Gaussian family, exact up to ``g``'s order."""
    gam = _gamma_of(f, gamma) if not isinstance(f, MomentSeries) else f.gamma
    n = g.order
    m = moments_any(f, n, ctx, gam)
    I = power_integrals(m, ctx)
    q = ctx.q
    qq = poch_array(q, n, ctx).real
    b = g.hermite
    out = np.zeros(n + 1, dtype=complex)
    for p in range(n + 1):
        e = np.arange(p + 1)
        out[p] = np.sum(q ** (e * p) * I[: p + 1] / qq[: p + 1] * b[p - e])
    return GaussianSeries(out, "hermite2", ctx, gam)


def _sampler(g, ctx):
    if isinstance(g, LatticeFunction):
        return lambda x: g.evaluate(x, ctx)
    if isinstance(g, DiscreteDelta):
        fn = g.as_function()
        return lambda x: fn.evaluate(x, ctx)
    return lambda x: np.asarray(g(x), dtype=complex)


def moment_series_terms(f, g, x, ctx: QContext, gamma: float | None = None,
                        max_order: int | None = None, moments: MomentSeries | None = None,
                        derivatives: str = "auto"):
    """Terms ``(-1)^e μ_e(f)/[e]_q! ∂^e g(x)`` until the tail is negligible.

    ``derivatives="auto"`` uses ``g.q_derivative_values`` when ``g`` offers
    exact derivatives and the n+1 point difference formula otherwise;
    ``"ryde"`` forces the difference formula.  Returns an array of shape
    ``(n_terms,) + shape(x)``.
    """
    n_max = MAX_MOMENT_ORDER if max_order is None else max_order
    if moments is None:
        moments = moments_any(f, n_max, ctx, gamma)
    mu = moments.moments
    n_max = min(n_max, len(mu) - 1)
    x = np.asarray(x, dtype=float if not np.iscomplexobj(x) else complex)
    if np.any(x == 0):
        raise DomainError("pointwise convolution uses lattice derivatives; x = 0 excluded")
    sample = _sampler(g, ctx)
    exact = None
    if derivatives == "auto":
        exact = _series_derivatives(g) if isinstance(g, PowerSeries) else getattr(g, "q_derivative_values", None)
    q = ctx.q
    cache = {}

    def at(k):
        if k not in cache:
            cache[k] = np.asarray(sample(q**k * x), dtype=complex)
        return cache[k]

    terms = []
    absum = np.zeros(x.shape)
    run = 0
    for e in range(n_max + 1):
        if e == 0:
            d = at(0)
        elif exact is not None:
            d = np.asarray(exact(x, e, ctx), dtype=complex)
        else:
            w = ryde_weights(e, ctx)
            d = sum(w[k] * at(k) for k in range(e + 1)) / ((1 - q) ** e * x**e)
        t = (-1) ** e * mu[e] / q_factorial(e, ctx) * d
        terms.append(t)
        mag = np.abs(t)
        absum = absum + mag
        if np.all(mag <= ctx.rel_tol * absum):
            run += 1
            if run >= ctx.tail_window:
                return np.array(terms)
        else:
            run = 0
    raise TruncationError(f"moment series did not settle within {n_max} terms")


def _series_derivatives(p: PowerSeries):
    chain = [p]

    def values(x, e, ctx):
        while len(chain) <= e:
            chain.append(chain[-1].q_derivative(ctx))
        return chain[e](x)

    return values


def _neumaier(terms):
    s = np.zeros(terms.shape[1:], dtype=complex)
    c = np.zeros_like(s)
    for t in terms:
        tmp = s + t
        big = np.abs(s) >= np.abs(t)
        c += np.where(big, (s - tmp) + t, (t - tmp) + s)
        s = tmp
    return s + c


def _delta_product(d1: DiscreteDelta, d2: DiscreteDelta, ctx: QContext) -> LatticeFunction:
    gamma = d1.gamma

    def rule(sign, k):
        sign, k = np.broadcast_arrays(np.asarray(sign), np.asarray(k))
        out = np.empty(sign.shape, dtype=complex)
        for idx in np.ndindex(sign.shape):
            out[idx] = delta_convolve(d1, d2, LatticePoint(int(sign[idx]), int(k[idx]), gamma), ctx)
        return out

    return LatticeFunction(gamma, index_rule=rule, label="delta_product")


def convolve(f, g, ctx: QContext, gamma: float | None = None, plan: ConvolutionPlan | None = None,
             derivatives: str = "auto"):
    """``f *_γ g``.

    Returns a :class:`GaussianSeries` on the Hermite route and a
    :class:`LatticeFunction` otherwise.
    """
    plan = plan or plan_convolution(f, g, ctx)
    if plan.path == "delta_closed_form":
        return _delta_product(f, g, ctx)
    if plan.path == "hermite_action":
        return hermite_action(f, g, ctx, gamma)
    if plan.path != "moment_series":
        raise ValueError(f"unknown path {plan.path!r}")
    gam = _gamma_of(f, gamma)
    m = moments_any(f, plan.moment_order, ctx, gam)

    def rule(x):
        return _neumaier(moment_series_terms(f, g, x, ctx, gam, plan.moment_order, moments=m,
                                             derivatives=derivatives))

    return LatticeFunction(gam, rule, label="product")


def approximate_identity_sequence(f, k: int, ctx: QContext, gamma: float | None = None) -> LatticeFunction:
    """``f_k = q^{-k} Q^{-k} f`` after normalising ``∫_γ f = 1``."""
    gam = _gamma_of(f, gamma)
    fn = f.as_lattice_function(gam) if isinstance(f, GaussianSeries) else f
    total = q_integral(fn, ctx, gamma=gam)
    if abs(total) <= ctx.rel_tol:
        raise NotInvertibleError("cannot normalise a function with vanishing integral")
    scale = ctx.q ** (-k) / total
    shrink = ctx.q ** (-k)
    evaluate = _sampler(fn, ctx)
    return LatticeFunction(gam, lambda x: scale * evaluate(shrink * np.asarray(x)),
                           label=f"approx_identity_{k}")


def leibniz_check(h, f, x, ctx: QContext, gamma: float | None = None) -> float:
    """``|X(h*f) - q (hX * Qf) - h * (fX)|`` at ``x`` on the moment route."""
    gam = _gamma_of(h, gamma)
    hs = _sampler(h.as_lattice_function(gam) if isinstance(h, GaussianSeries) else h, ctx)
    fs = _sampler(f, ctx)
    q = ctx.q
    h_lat = LatticeFunction(gam, hs)
    hX = LatticeFunction(gam, lambda t: hs(t) * np.asarray(t))
    if isinstance(f, PowerSeries):
        # keep exact derivatives for polynomial right operands
        fs, Qf = f, f.scale(q)
        fX = PowerSeries(np.concatenate([[0.0], f.coeffs]), f.order + 1)
    elif isinstance(f, GaussianSeries):
        # e_{q²}(-q²x²) = (1+x²) e_{q²}(-x²) keeps Qf in the family
        a = f.monomial * q ** np.arange(f.order + 1)
        qa = np.concatenate([a, [0, 0]]) + np.concatenate([[0, 0], a])
        fs = f
        Qf = GaussianSeries(qa, "monomial", f.ctx, gam)
        fX = GaussianSeries(np.concatenate([[0], f.monomial]), "monomial", f.ctx, gam)
    else:
        Qf = lambda t: fs(q * np.asarray(t))
        fX = lambda t: fs(t) * np.asarray(t)

    def prod(a, b):
        return _neumaier(moment_series_terms(a, b, np.atleast_1d(x), ctx, gam))

    lhs = np.atleast_1d(x) * prod(h_lat, fs)
    rhs = q * prod(hX, Qf) + prod(h_lat, fX)
    return float(np.max(np.abs(lhs - rhs)))


def zero_free_radius(sym, tol: float = 1e-12) -> float:
    """Smallest modulus of a zero of the polynomial ``sym`` (``inf`` if none).

    Trailing coefficients below ``tol`` times the largest are dropped.
    """
    c = np.asarray(sym.coeffs if isinstance(sym, PowerSeries) else sym, dtype=complex)
    if len(c) == 0 or abs(c[0]) == 0:
        raise NotInvertibleError("symbol vanishes at 0")
    scale = float(np.max(np.abs(c)))
    nz = np.nonzero(np.abs(c) > tol * scale)[0]
    c = c[: nz[-1] + 1]
    if len(c) <= 1:
        return math.inf
    roots = np.roots(c[::-1])
    return float(np.min(np.abs(roots)))


def _is_polynomial(ps: PowerSeries, tol: float) -> bool:
    a = np.abs(ps.coeffs)
    scale = float(np.max(a)) if len(a) else 0.0
    nz = np.nonzero(a > tol * max(scale, 1e-300))[0]
    if len(nz) == 0:
        return True
    return nz[-1] <= len(a) // 2


@dataclass(frozen=True)
class InverseReport:
    inverse: GaussianSeries
    rho: float
    strong: bool
    symbol: PowerSeries


def convolution_inverse_report(f, ctx: QContext, gamma: float | None = None,
                               order: int | None = None) -> InverseReport:
    """Inverse via the reciprocal of the moment generating series.

    ``strong`` is true when the zero-free radius exceeds ``q^{-1}(1-q)^{-1}``,
    the regime where ``f * g = u_γ`` holds as functions.
    """
    n = ctx.order if order is None else order
    gam = _gamma_of(f, gamma) if not isinstance(f, MomentSeries) else f.gamma
    m = moments_any(f, n, ctx, gam)
    if abs(m.moments[0]) <= ctx.rel_tol:
        raise NotInvertibleError("∫ f = 0: no convolution inverse")
    sym = generating_series(m, ctx)
    if _is_polynomial(sym, ctx.rel_tol):
        rho = zero_free_radius(sym, ctx.rel_tol)
    else:
        rho = radius_estimate(sym, ctx.rel_tol)
    q = ctx.q
    if not rho > 1.0 / (1 - q):
        raise RadiusError(f"zero-free radius {rho:.6g} <= (1-q)^-1; try a q-shift")
    inv = reciprocal(sym, ctx)
    fact = np.array([q_factorial(k, ctx) for k in range(inv.order + 1)])
    g = reconstruct_from_moments(MomentSeries(gam, inv.coeffs * fact), ctx, n, check_radius=False)
    return InverseReport(g, rho, bool(rho > 1.0 / (q * (1 - q))), sym)


def convolution_inverse(f, ctx: QContext, gamma: float | None = None,
                        order: int | None = None) -> GaussianSeries:
    return convolution_inverse_report(f, ctx, gamma, order).inverse
