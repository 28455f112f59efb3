"""Named numerical identity checks.

Each check computes a measured error by two independent routes and compares
it with a tolerance.  The CLI ``check`` command and the acceptance tests both
run these.  Defaults follow the desk-scale setting ``q = 0.5``, ``γ = 0.9``,
truncation order 32.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .convolve import (ConvolutionPlan, approximate_identity_sequence, convolve, hermite_action,
                       moment_series_terms)
from .fourier import (convolution_theorem_twisted, fourier_formal, fourier_inverse_G,
                      fourier_inverse_kernel, type_scaled_moments)
from .errors import TypeGrowthError
from .gaussian import (G_k, b_q, c_q, eq2_gaussian, eq2_gaussian_values, exp_i_function, g_m_hermite, hermite2_gaussian, reconstruct_from_moments, taylor_series,
                       unit_u)
from .lattice import DiscreteDelta, LatticeFunction, LatticePoint, delta_convolve, lattice_window
from .qcore import E_q, QContext, e_q, poch, q_binomial
from .qsolve import QDiffOperator, solve
from .series import PowerSeries, generating_series, moments_of

__all__ = ["CheckResult", "CHECKS", "run_check", "default_context"]

WINDOW = (-8, 20)


@dataclass
class CheckResult:
    name: str
    measured: float
    tol: float
    detail: dict = field(default_factory=dict)
    passed: bool | None = None
    label: str = "measured"

    def __post_init__(self):
        if self.passed is None:
            self.passed = bool(self.measured < self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.label} {self.measured:.3e} (tol {self.tol:.1e})"


def default_context() -> QContext:
    return QContext(0.5, order=32)


def _window(gamma, ctx):
    return lattice_window(gamma, WINDOW[0], WINDOW[1], ctx)


def _family(ctx, gamma):
    """Members of the Gaussian family with ``s <= q^{1/2}``."""
    return {
        "eq2_gaussian": eq2_gaussian(ctx, gamma_hint=gamma),
        "g_1": g_m_hermite(1, ctx, gamma_hint=gamma),
        "g_2": g_m_hermite(2, ctx, gamma_hint=gamma),
        "h_1": hermite2_gaussian(1, ctx, gamma_hint=gamma),
        "h_2+e/2": hermite2_gaussian(2, ctx, gamma_hint=gamma) + eq2_gaussian(ctx, gamma_hint=gamma) * 0.5,
        "G_3": G_k(3, gamma, ctx),
    }


# ----------------------------------------------------------------------------
# moments


def _gaussian_moment_check(ctx, gamma, exponent):
    q = ctx.q
    e = LatticeFunction(gamma, lambda x: eq2_gaussian_values(x, ctx), label="eq2_gaussian")
    mu = moments_of(e, 17, ctx, gamma=gamma).moments
    cq = c_q(gamma, ctx)
    even, odd = [], []
    for k in range(9):
        ref = cq * q ** exponent(k) * poch(q, k, ctx, base=q * q).real
        even.append(abs(mu[2 * k] - ref) / abs(ref))
        odd.append(abs(mu[2 * k + 1]))
    return max(even), max(odd), even


def check_gaussian_moments(ctx, gamma):
    """Even moments against ``c_q q^{k²-k} (q;q²)_k`` as printed; odd moments vanish."""
    ev, od, per = _gaussian_moment_check(ctx, gamma, lambda k: k * k - k)
    ok = ev < 1e-10 and od < 1e-12
    return CheckResult("gaussian-moments", ev, 1e-10, {"odd_max": od, "per_k": per}, ok)


def check_gaussian_moments_corrected(ctx, gamma):
    """Even moments against ``c_q q^{k²+k} (q;q²)_k``."""
    ev, od, per = _gaussian_moment_check(ctx, gamma, lambda k: k * k + k)
    ok = ev < 1e-10 and od < 1e-12
    return CheckResult("gaussian-moments-corrected", ev, 1e-10, {"odd_max": od, "per_k": per}, ok)


def _homomorphism_error(lhs, rhs, ctx):
    # coefficients below rel_tol·scale on both sides count as numerically zero
    floor = ctx.rel_tol * max(1.0, float(np.max(np.abs(rhs))))
    both_zero = (np.abs(lhs) <= floor) & (np.abs(rhs) <= floor)
    rel = np.abs(lhs - rhs) / np.maximum(np.abs(rhs), floor)
    return float(np.max(np.where(both_zero, 0.0, rel)))


def check_moment_homomorphism(ctx, gamma):
    """``μ(f*g)`` against the product of generating series, 12 pairs, order 12.

    The product comes from the Hermite action; both sides then use closed-form
    moments from Hermite coefficients.  The same comparison with lattice
    (Jackson) moments is reported as ``jackson_worst``: there, vanishing
    moments of factors such as ``g_1`` carry round-off near ``1e-19``, which
    caps the attainable relative accuracy of coefficients near ``1e-12``.
    """
    e = eq2_gaussian(ctx, gamma_hint=gamma)
    members = {
        "e": e,
        "g_1": g_m_hermite(1, ctx, gamma_hint=gamma),
        "g_2": g_m_hermite(2, ctx, gamma_hint=gamma),
        "G_0": G_k(0, gamma, ctx), "G_1": G_k(1, gamma, ctx),
        "G_2": G_k(2, gamma, ctx), "G_3": G_k(3, gamma, ctx),
        "h_2": hermite2_gaussian(2, ctx, gamma_hint=gamma),
        "h_3": hermite2_gaussian(3, ctx, gamma_hint=gamma),
    }
    pairs = [("e", "g_1"), ("e", "e"), ("g_1", "g_2"), ("g_2", "h_2"), ("G_1", "G_2"),
             ("G_0", "h_3"), ("G_3", "e"), ("h_2", "h_3"), ("g_1", "G_1"), ("h_3", "g_2"),
             ("G_2", "G_2"), ("e", "h_3")]
    n = 12
    worst, jworst, per = 0.0, 0.0, {}
    for a, b in pairs:
        f, g = members[a], members[b]
        prod = hermite_action(f, g, ctx, gamma)
        lhs = generating_series(prod.moments(n, gamma), ctx).coeffs
        rhs = (generating_series(f.moments(n, gamma), ctx)
               * generating_series(g.moments(n, gamma), ctx)).coeffs
        err = _homomorphism_error(lhs, rhs, ctx)
        jl = generating_series(moments_of(prod, n, ctx, gamma=gamma), ctx).coeffs
        jr = (generating_series(moments_of(f, n, ctx, gamma=gamma), ctx)
              * generating_series(moments_of(g, n, ctx, gamma=gamma), ctx)).coeffs
        jworst = max(jworst, _homomorphism_error(jl, jr, ctx))
        per[f"{a}*{b}"] = err
        worst = max(worst, err)
    return CheckResult("moment-homomorphism", worst, 1e-8, {"pairs": per, "jackson_worst": jworst})


# ----------------------------------------------------------------------------
# G basis and unit


def check_g_basis(ctx, gamma):
    """``μ_r(G_k) = δ_{rk}`` by Jackson sums, ``r, k <= 10``."""
    worst = 0.0
    for k in range(11):
        mu = moments_of(G_k(k, gamma, ctx), 10, ctx, gamma=gamma).moments
        target = np.zeros(11)
        target[k] = 1.0
        worst = max(worst, float(np.max(np.abs(mu - target))))
    return CheckResult("g-basis", worst, 1e-9)


def check_gk_binomial(ctx, gamma):
    """``G_k * G_l = [k+l, l]_q G_{k+l}`` in Hermite coefficients, ``k + l <= 10``."""
    worst = 0.0
    for k in range(11):
        for l in range(11 - k):
            prod = convolve(G_k(k, gamma, ctx), G_k(l, gamma, ctx), ctx)
            ref = G_k(k + l, gamma, ctx) * q_binomial(k + l, l, ctx)
            worst = max(worst, prod.max_coeff_diff(ref))
    return CheckResult("gk-binomial", worst, 1e-9)


def check_gk_routes(ctx, gamma):
    """Closed-form ``G_k`` expansion against repeated differentiation of ``u_γ``."""
    worst = 0.0
    for k in range(11):
        a = G_k(k, gamma, ctx, method="expansion")
        b = G_k(k, gamma, ctx, method="derivative")
        worst = max(worst, a.max_coeff_diff(b))
    return CheckResult("gk-routes", worst, 1e-9)


def check_unit(ctx, gamma):
    """``u*F`` and ``F*u`` against ``F`` on the lattice window, six members."""
    u = unit_u(gamma, ctx)
    pts = _window(gamma, ctx)
    worst, per = 0.0, {}
    for name, F in _family(ctx, gamma).items():
        ref = F(pts)
        left = convolve(u, F, ctx)(pts)
        right = convolve(F, u, ctx, gamma)(pts)
        err = float(max(np.max(np.abs(left - ref)), np.max(np.abs(right - ref))))
        per[name] = err
        worst = max(worst, err)
    return CheckResult("unit", worst, 1e-8, per)


# ----------------------------------------------------------------------------
# zero product, deltas, approximation


def _zero_product(ctx, gamma, f):
    pts = _window(gamma, ctx)
    terms = moment_series_terms(f, exp_i_function(gamma, ctx), pts, ctx, gamma)
    partial = np.cumsum(terms, axis=0)
    sups = [float(np.max(np.abs(p))) for p in partial]
    return sups


def check_zero_product(ctx, gamma):
    """Partial sums of ``e_{q²}(-X²) * e_q(iX)`` over the window."""
    sups = _zero_product(ctx, gamma, eq2_gaussian(ctx, gamma_hint=gamma))
    return CheckResult("zero-product", sups[-1], 1e-8, {"partial_sups": sups})


def check_zero_product_shifted(ctx, gamma):
    """Partial sums of ``e_{q²}(-q²X²) * e_q(iX)`` over the window."""
    q = ctx.q
    f = LatticeFunction(gamma, lambda x: eq2_gaussian_values(q * np.asarray(x), ctx),
                        label="eq2_gaussian_shifted")
    sups = _zero_product(ctx, gamma, f)
    return CheckResult("zero-product-shifted", sups[-1], 1e-8, {"partial_sums": sups})


def check_delta_closed_form(ctx, gamma):
    """Closed-form delta products against the moment route on delta tables."""
    plan = ConvolutionPlan("moment_series", 40, 0)
    worst = 0.0
    witness = 0.0
    ls = range(-3, 5)
    for eta, eps in itertools.product((1, -1), repeat=2):
        for t, s in itertools.product(range(3), repeat=2):
            d1, d2 = DiscreteDelta(eta, t, gamma), DiscreteDelta(eps, s, gamma)
            generic = convolve(d1.as_function(), d2.as_function(), ctx, gamma, plan=plan)
            for theta in (1, -1):
                xs = np.array([theta * ctx.q**l * gamma for l in ls])
                ref = np.array([delta_convolve(d1, d2, LatticePoint(theta, l, gamma), ctx) for l in ls])
                worst = max(worst, float(np.max(np.abs(generic.evaluate(xs, ctx) - ref))))
                if eta != eps:
                    swap = np.array([delta_convolve(d2, d1, LatticePoint(theta, l, gamma), ctx)
                                     for l in ls])
                    witness = max(witness, float(np.max(np.abs(swap - ref))))
    ok = worst < 1e-9 and witness > 1e-3
    return CheckResult("delta-closed-form", worst, 1e-9, {"noncommutativity": witness}, ok)


def _approx_ratios(ctx, gamma, f):
    g = hermite2_gaussian(2, ctx, gamma_hint=gamma)
    errs = []
    for k in range(1, 11):
        fk = approximate_identity_sequence(f, k, ctx, gamma)
        errs.append(abs(convolve(fk, g, ctx, gamma)(0.3) - g(0.3)))
    return [errs[i] / errs[i - 1] for i in range(1, len(errs))]


def _ratio_result(name, ratios, q):
    lo, hi = 0.8 * q, 1.2 * q
    dev = max(max(0.0, lo - r, r - hi) for r in ratios)
    # measured: how far the worst ratio lies outside the band
    return CheckResult(name, dev, 0.0, {"ratios": ratios, "band": (lo, hi)},
                       all(lo <= r <= hi for r in ratios), label="outside band by")


def check_approximation(ctx, gamma):
    """``|f_k * g(0.3) - g(0.3)|`` ratios for ``f = e_{q²}(-X²)/c_q``; band ``[0.8q, 1.2q]``."""
    f = eq2_gaussian(ctx, gamma_hint=gamma) / c_q(gamma, ctx)
    return _ratio_result("approximation", _approx_ratios(ctx, gamma, f), ctx.q)


def check_approximation_odd_moment(ctx, gamma):
    """Same ratios for ``f = (1 + x) e_{q²}(-X²)``, whose first moment is nonzero."""
    f = eq2_gaussian(ctx, gamma_hint=gamma) + hermite2_gaussian(1, ctx, gamma_hint=gamma)
    return _ratio_result("approximation-odd-moment", _approx_ratios(ctx, gamma, f), ctx.q)


# ----------------------------------------------------------------------------
# Fourier


def check_fourier_roundtrip(ctx, gamma):
    """``𝒢_γ(F̃_γ f) = f`` in Hermite coefficients."""
    members = {
        "u": unit_u(gamma, ctx),
        "g_2": g_m_hermite(2, ctx, gamma_hint=gamma),
        "g_3": g_m_hermite(3, ctx, gamma_hint=gamma),
        "(1+x²)e": hermite2_gaussian(2, ctx, gamma_hint=gamma) + eq2_gaussian(ctx, gamma_hint=gamma),
    }
    per = {}
    for name, f in members.items():
        per[name] = fourier_inverse_G(fourier_formal(f, gamma, ctx), gamma, ctx).max_coeff_diff(f)
    return CheckResult("fourier-roundtrip", max(per.values()), 1e-8, per)


def check_fourier_kernel_inverse(ctx, gamma):
    """``F'_γ(x^k)`` by the bounded Jackson sum against ``𝒢_γ(y^k)``, ``k <= 8``."""
    pts = _window(gamma, ctx)
    per = {}
    for k in range(9):
        ref = fourier_inverse_G(PowerSeries.monomial(k, ctx.order), gamma, ctx)(pts)
        val = fourier_inverse_kernel(lambda x, k=k: np.asarray(x) ** k, gamma, pts, ctx)
        per[k] = float(np.max(np.abs(val - ref)))
    return CheckResult("fourier-kernel-inverse", max(per.values()), 1e-7, per)


def check_kernel_identity(ctx, gamma):
    """``∫_{-1}^1 e_q(ixy) d_qx = b_q c_q(γ) u_γ(y)`` at ten points."""
    ys = np.linspace(-2.0, 2.0, 10)
    scale = c_q(gamma, ctx) * b_q(ctx)
    lhs = fourier_inverse_kernel(lambda x: np.ones(np.shape(x)), gamma, ys, ctx) * scale
    rhs = scale * unit_u(gamma, ctx)(ys)
    return CheckResult("kernel-identity", float(np.max(np.abs(lhs - rhs))), 1e-8)


def _type3_pair(ctx, gamma):
    f = reconstruct_from_moments(type_scaled_moments(3, gamma, ctx), ctx)
    g = reconstruct_from_moments(type_scaled_moments(3, gamma, ctx, scale=0.7), ctx)
    return f, g


def check_twisted_theorem(ctx, gamma):
    """``F̃'(f*g) = m∘Ψ^{-1}(F̃'(f) ⊗ F̃'(g))`` on a type-3 pair, order 10."""
    f, g = _type3_pair(ctx, gamma)
    rep = convolution_theorem_twisted(f, g, ctx, gamma, 10, left="prime")
    return CheckResult("twisted-theorem", rep.residual, 1e-7, {"alpha": rep.alpha, "beta": rep.beta})


def check_twisted_theorem_formal_left(ctx, gamma):
    """As above with ``F̃`` instead of ``F̃'`` on the left factor."""
    f, g = _type3_pair(ctx, gamma)
    rep = convolution_theorem_twisted(f, g, ctx, gamma, 10, left="formal")
    return CheckResult("twisted-theorem-formal-left", rep.residual, 1e-7,
                       {"alpha": rep.alpha, "beta": rep.beta})


def check_twisted_gate(ctx, gamma):
    """The type precondition refuses ``e_{q²}(-X²)`` with itself."""
    e = eq2_gaussian(ctx, gamma_hint=gamma)
    try:
        convolution_theorem_twisted(e, e, ctx, gamma)
    except TypeGrowthError as exc:
        return CheckResult("twisted-gate", 0.0, 1.0, {"message": str(exc)}, True)
    return CheckResult("twisted-gate", 1.0, 1.0, {"message": "accepted"}, False)


# ----------------------------------------------------------------------------
# solver, reconstruction, symmetry


def check_solver_example(ctx, gamma, r: int = 3):
    """``(1 - q^{2r}∂²) Y = e_{q²}(-X²)`` against its closed-form Hermite series."""
    q = ctx.q
    L = QDiffOperator([1.0, 0.0, -q ** (2 * r)])
    rep = solve(L, eq2_gaussian(ctx, gamma_hint=gamma), gamma, ctx)
    ref = np.zeros(21)
    for p in range(11):
        ref[2 * p] = q ** (2 * r * p) * q ** (2 * p * p - p) / (1 - q) ** (2 * p)
    coeff = float(np.max(np.abs(rep.solution.hermite[:21] - ref)))
    ok = coeff < 1e-9 and rep.residual < 1e-7
    return CheckResult("solver-example", coeff, 1e-9,
                       {"residual": rep.residual, "rho": rep.rho, "shift_p": rep.shift_p}, ok)


def check_reconstruction(ctx, gamma):
    """``reconstruct_from_moments(moments_of(F)) = F`` on the lattice window."""
    pts = _window(gamma, ctx)
    per = {}
    for name, F in _family(ctx, gamma).items():
        m = moments_of(F, ctx.order, ctx, gamma=gamma)
        R = reconstruct_from_moments(m, ctx)
        per[name] = float(np.max(np.abs(R(pts) - F(pts))))
    return CheckResult("reconstruction", max(per.values()), 1e-7, per)


def check_gm_expansion(ctx, gamma):
    """``g_m = Σ_{r<=m} μ_{2r}(g_m) G_{2r}`` for ``m = 1, 2, 3``."""
    per = {}
    for m in (1, 2, 3):
        gm = g_m_hermite(m, ctx, gamma_hint=gamma)
        mu = moments_of(gm, 2 * m, ctx, gamma=gamma).moments
        acc = G_k(0, gamma, ctx) * mu[0]
        for r in range(1, m + 1):
            acc = acc + G_k(2 * r, gamma, ctx) * mu[2 * r]
        per[m] = acc.max_coeff_diff(gm)
    return CheckResult("gm-expansion", max(per.values()), 1e-8, per)


def _pair_integral(f, g, gamma, ctx, n=60):
    """``∫_γ f · Q(S g) = Σ_r (-1)^r b_r μ_r(f)`` with ``b`` the Taylor coefficients of ``g``."""
    b = taylor_series(g, n).coeffs
    mu = f.moments(n, gamma).moments
    r = np.arange(n + 1)
    return complex(np.sum((-1.0) ** r * b * mu))


def check_integral_symmetry(ctx, gamma):
    """``∫ f·QSg = ∫ QSf·g`` on six pairs; cross-checked against ``(f*g)(0)``."""
    fam = {
        "e": eq2_gaussian(ctx, gamma_hint=gamma),
        "g_1": g_m_hermite(1, ctx, gamma_hint=gamma),
        "g_2": g_m_hermite(2, ctx, gamma_hint=gamma),
        "h_1": hermite2_gaussian(1, ctx, gamma_hint=gamma),
        "h_2": hermite2_gaussian(2, ctx, gamma_hint=gamma),
        "u": unit_u(gamma, ctx),
    }
    pairs = [("e", "g_1"), ("g_1", "g_2"), ("h_1", "h_2"), ("e", "h_2"), ("u", "g_2"), ("h_1", "g_1")]
    worst, counit, per = 0.0, 0.0, {}
    for a, b in pairs:
        f, g = fam[a], fam[b]
        lhs = _pair_integral(f, g, gamma, ctx)
        rhs = _pair_integral(g, f, gamma, ctx)
        eps = hermite_action(f, g, ctx, gamma)(0.0)
        per[f"{a},{b}"] = abs(lhs - rhs)
        worst = max(worst, abs(lhs - rhs))
        counit = max(counit, abs(lhs - eps))
    return CheckResult("integral-symmetry", worst, 1e-8, {"pairs": per, "counit_gap": counit},
                       worst < 1e-8 and counit < 1e-8)


def check_functional_equations(ctx, gamma):
    """``(1-x) e_q(x) = e_q(qx)``, ``E_q(x) = (1+x) E_q(qx)``, ``e_q(x) E_q(-x) = 1``."""
    q = ctx.q
    worst = 0.0
    for x in np.linspace(-2, 2, 17):
        if any(abs(1 - x * q**j) < 1e-9 for j in range(60)):
            continue
        worst = max(worst, abs((1 - x) * e_q(x, ctx) - e_q(q * x, ctx)) / abs(e_q(q * x, ctx)))
        if abs(E_q(x, ctx)) > 1e-12:
            worst = max(worst, abs(E_q(x, ctx) - (1 + x) * E_q(q * x, ctx)) / abs(E_q(x, ctx)))
        worst = max(worst, abs(e_q(x, ctx) * E_q(-x, ctx) - 1))
    return CheckResult("functional-equations", worst, 10 * ctx.rel_tol)


def check_q_factorial_moments(ctx, gamma):
    """Generating series of ``u_γ``'s moments is the constant 1."""
    u = unit_u(gamma, ctx)
    gs = generating_series(moments_of(u, 10, ctx, gamma=gamma), ctx).coeffs
    target = np.zeros(11)
    target[0] = 1.0
    return CheckResult("unit-moments", float(np.max(np.abs(gs - target))), 1e-9)


CHECKS = {
    "gaussian-moments": check_gaussian_moments,
    "gaussian-moments-corrected": check_gaussian_moments_corrected,
    "moment-homomorphism": check_moment_homomorphism,
    "g-basis": check_g_basis,
    "gk-binomial": check_gk_binomial,
    "gk-routes": check_gk_routes,
    "unit": check_unit,
    "unit-moments": check_q_factorial_moments,
    "zero-product": check_zero_product,
    "zero-product-shifted": check_zero_product_shifted,
    "delta-closed-form": check_delta_closed_form,
    "approximation": check_approximation,
    "approximation-odd-moment": check_approximation_odd_moment,
    "fourier-roundtrip": check_fourier_roundtrip,
    "fourier-kernel-inverse": check_fourier_kernel_inverse,
    "kernel-identity": check_kernel_identity,
    "twisted-theorem": check_twisted_theorem,
    "twisted-theorem-formal-left": check_twisted_theorem_formal_left,
    "twisted-gate": check_twisted_gate,
    "solver-example": check_solver_example,
    "reconstruction": check_reconstruction,
    "gm-expansion": check_gm_expansion,
    "integral-symmetry": check_integral_symmetry,
    "functional-equations": check_functional_equations,
}


def run_check(name: str, ctx: QContext | None = None, gamma: float = 0.9) -> CheckResult:
    if name not in CHECKS:
        raise KeyError(f"unknown check {name!r}; known: {', '.join(sorted(CHECKS))}")
    return CHECKS[name](ctx or default_context(), gamma)
