"""Formal and kernel q-Fourier transforms and their inverses.

Conventions (all on the lattice ``L(γ)``)::

    F̃_γ f (y)  = Σ_k μ_k (-iy)^k / (q;q)_k
    F̃'_γ f (y) = Σ_k (∫_γ f X^k) (iy)^k / (q;q)_k   = S^{-1} Q^{-1} F̃_γ f
    F_γ f (y)   = ∫_γ E_q(-iqxy) f(x) d_qx
    𝒢_γ φ       = Σ_k i^k c_k (q;q)_k G_{k,γ}     for φ = Σ c_k y^k
    F'_γ f (y)  = (c_q(γ) b_q)^{-1} ∫_{-1}^{1} e_q(ixy) f(x) d_qx
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convolve import _gamma_of, convolve, moments_any
from .errors import RadiusError, TruncationError, TypeGrowthError
from .gaussian import G_k, GaussianSeries, b_q, c_q, radius_estimate
from .lattice import LatticeFunction, _integrand_values, _weights, lattice_sum
from .qcore import QContext, poch_array
from .series import (MomentSeries, PowerSeries, antipode_S_inverse, psi_inverse_product)

__all__ = [
    "FourierImage",
    "fourier_formal",
    "fourier_formal_prime",
    "fourier_kernel",
    "fourier_inverse_G",
    "fourier_inverse_kernel",
    "estimate_left_type",
    "type_scaled_moments",
    "convolution_theorem_twisted",
]


@dataclass(frozen=True)
class FourierImage:
    """Power series in ``y`` together with the lattice it came from."""

    series: PowerSeries
    source_gamma: float

    def __call__(self, y):
        return self.series(y)


def _qq(n, ctx):
    return poch_array(ctx.q, n, ctx).real


def fourier_formal(f, gamma: float | None, ctx: QContext, order: int | None = None) -> FourierImage:
    """``F̃_γ f``: coefficient ``k`` is ``μ_k (-i)^k / (q;q)_k``."""
    n = ctx.order if order is None else order
    gam = f.gamma if isinstance(f, MomentSeries) else _gamma_of(f, gamma)
    m = moments_any(f, n, ctx, gam)
    k = np.arange(len(m))
    return FourierImage(PowerSeries(m.moments * (-1j) ** k / _qq(len(m) - 1, ctx), m.order), gam)


def q_inverse_shift(p: PowerSeries, ctx: QContext) -> PowerSeries:
    """``φ(y) -> φ(y/q)``."""
    return p.scale(1.0 / ctx.q)


def fourier_formal_prime(f, gamma: float | None, ctx: QContext, order: int | None = None) -> FourierImage:
    """``F̃'_γ = S^{-1} ∘ Q^{-1} ∘ F̃_γ``."""
    img = f if isinstance(f, FourierImage) else fourier_formal(f, gamma, ctx, order)
    return FourierImage(antipode_S_inverse(q_inverse_shift(img.series, ctx), ctx), img.source_gamma)


def _log_poch_inf(a, ctx: QContext):
    """Elementwise ``log (a; q)_∞`` (principal branches summed)."""
    a = np.asarray(a, dtype=complex)
    amax = float(np.max(np.abs(a))) if a.size else 0.0
    if amax == 0.0:
        return np.zeros(a.shape, dtype=complex)
    lq = -math.log(ctx.q)
    n = max(1, int(math.ceil((math.log(amax) + 40 * math.log(10)) / lq)) + 1)
    if n > ctx.max_terms:
        raise TruncationError(f"(a;q)_inf with |a|={amax:.3g} needs more than {ctx.max_terms} factors")
    j = np.arange(n)
    return np.sum(np.log1p(-a[..., None] * ctx.q ** j), axis=-1)


def fourier_kernel(f, gamma: float | None, y, ctx: QContext):
    """``∫_γ E_q(-iqxy) f(x) d_qx`` as a Jackson sum, one value per ``y``."""
    gam = _gamma_of(f, gamma)
    fn = f.as_lattice_function(gam) if isinstance(f, GaussianSeries) else f
    if not isinstance(fn, LatticeFunction):
        fn = LatticeFunction(gam, fn)
    ys = np.atleast_1d(np.asarray(y, dtype=complex))
    q = ctx.q

    def terms(ks):
        plus, minus = _integrand_values(fn, ks, ctx, gam)
        x = q ** ks.astype(float) * gam

        def part(v, sgn):
            # kernel grows where f decays; combine magnitudes in log space
            logk = _log_poch_inf(1j * q * sgn * x[:, None] * ys[None, :], ctx)
            mag = np.abs(v)[:, None]
            with np.errstate(divide="ignore"):
                lm = np.log(np.where(mag > 0, mag, 1.0)) + logk
            phase = np.exp(1j * np.angle(v))[:, None]
            return np.where(mag > 0, phase * np.exp(lm), 0.0)

        return _weights(ks, gam, ctx)[:, None] * (part(plus, 1.0) + part(minus, -1.0))

    out = lattice_sum(terms, ctx)
    return complex(out[0]) if np.ndim(y) == 0 else out.reshape(np.shape(y))


def fourier_inverse_G(phi, gamma: float, ctx: QContext, order: int | None = None,
                      check_radius: bool = True) -> GaussianSeries:
    """``𝒢_γ φ = Σ_k i^k c_k (q;q)_k G_{k,γ}``.

    Raises :class:`RadiusError` unless the coefficients of ``φ`` indicate a
    radius of convergence above ``q^{-1}``.
    """
    ps = phi.series if isinstance(phi, FourierImage) else phi
    if not isinstance(ps, PowerSeries):
        ps = PowerSeries(ps)
    n = ctx.order if order is None else order
    if check_radius:
        rho = radius_estimate(ps, ctx.rel_tol)
        if not rho > 1.0 / ctx.q:
            raise RadiusError(f"series radius ~{rho:.4g} does not exceed 1/q")
    c = ps.coeffs[: n + 1]
    k = np.arange(len(c))
    weights = (1j) ** k * c * _qq(len(c) - 1, ctx)
    out = np.zeros(n + 1, dtype=complex)
    for kk, w in enumerate(weights):
        if w != 0:
            out += w * G_k(kk, gamma, ctx, n).coeffs
    return GaussianSeries(out, "hermite2", ctx, gamma)


def _eq_values(z, ctx):
    return np.exp(-_log_poch_inf(z, ctx))


def fourier_inverse_kernel(f, gamma: float, y, ctx: QContext):
    """``(c_q(γ) b_q)^{-1} (1-q) Σ_{k>=0, ε=±1} q^k f(εq^k) e_q(iεq^k y)``."""
    ys = np.atleast_1d(np.asarray(y, dtype=complex))
    q = ctx.q
    ev = f if callable(f) else (lambda x: np.full(np.shape(x), complex(f)))
    total = np.zeros(ys.shape, dtype=complex)
    absum = np.zeros(ys.shape)
    run = 0
    block = 32
    for start in range(0, ctx.max_terms, block):
        ks = np.arange(start, start + block)
        x = q ** ks.astype(float)
        fp = np.asarray(ev(x), dtype=complex).reshape(-1)
        fm = np.asarray(ev(-x), dtype=complex).reshape(-1)
        t = (1 - q) * x[:, None] * (fp[:, None] * _eq_values(1j * x[:, None] * ys[None, :], ctx)
                                    + fm[:, None] * _eq_values(-1j * x[:, None] * ys[None, :], ctx))
        for row in t:
            total += row
            mag = np.abs(row)
            absum += mag
            if np.all(mag <= ctx.rel_tol * absum):
                run += 1
            else:
                run = 0
        if run >= ctx.tail_window:
            out = total / (c_q(gamma, ctx) * b_q(ctx))
            return complex(out[0]) if np.ndim(y) == 0 else out.reshape(np.shape(y))
    raise TruncationError("bounded Jackson integral did not settle")


# ----------------------------------------------------------------------------
# twisted convolution theorem


def estimate_left_type(m: MomentSeries, ctx: QContext, step: float = 0.05) -> float:
    """Left type ``α`` with ``|μ_k| ≈ C b^k q^{α k²/2}``, rounded down to ``step``.

    Least squares of ``log|μ_k|`` on ``1, k, k²`` over the moments above
    ``rel_tol`` times the largest; smaller ones (parity zeros, round-off
    floor) are skipped.
    """
    mu = np.abs(m.moments)
    k = np.arange(len(mu))
    keep = mu > max(ctx.rel_tol * float(np.max(mu)), 1e-300)
    if np.count_nonzero(keep) < 4:
        return math.inf
    A = np.stack([np.ones(np.count_nonzero(keep)), k[keep], k[keep] ** 2.0], axis=1)
    coef, *_ = np.linalg.lstsq(A, np.log(mu[keep]), rcond=None)
    alpha = 2.0 * coef[2] / math.log(ctx.q)
    return math.floor((alpha + 1e-6) / step) * step


def type_scaled_moments(alpha: float, gamma: float, ctx: QContext, order: int | None = None,
                        scale: float = 1.0) -> MomentSeries:
    """Moments ``scale^k q^{α k²/2}``: a sequence of left type exactly ``α``."""
    n = ctx.order if order is None else order
    k = np.arange(n + 1)
    return MomentSeries(gamma, scale ** k * ctx.q ** (alpha * k * k / 2.0))


@dataclass(frozen=True)
class TwistedReport:
    residual: float
    alpha: float
    beta: float
    lhs: PowerSeries
    rhs: PowerSeries


def convolution_theorem_twisted(f, g, ctx: QContext, gamma: float | None = None,
                                order: int = 10, left: str = "prime") -> TwistedReport:
    """Compare ``F̃'(f * g)`` with ``m∘Ψ^{-1}(A(f) ⊗ F̃'(g))`` up to ``order``.

    The residual is the largest coefficient gap after rescaling coefficient
    ``r`` by ``(q;q)_r q^{r(r+1)/2} (-i)^r`` (moment units), relative to
    ``max(1, max|lhs|)``.

    ``left="prime"`` uses ``A = F̃'``; ``left="formal"`` uses ``A = F̃``.
    Refuses with :class:`TypeGrowthError` unless both left types exceed 1
    and ``(α-1)(β-1) > 1``.
    """
    gam = _gamma_of(f, gamma)
    n = max(order, 12)
    mf = moments_any(f, n, ctx, gam)
    mg = moments_any(g, n, ctx, gam)
    alpha = estimate_left_type(mf, ctx)
    beta = estimate_left_type(mg, ctx)
    if not (alpha > 1 and beta > 1 and (alpha - 1) * (beta - 1) > 1):
        raise TypeGrowthError(f"left types alpha={alpha:.3g}, beta={beta:.3g} violate (a-1)(b-1) > 1")
    prod = convolve(f, g, ctx, gam)
    lhs = fourier_formal_prime(prod, gam, ctx, order).series
    if left == "prime":
        A = fourier_formal_prime(mf, gam, ctx, order).series
    elif left == "formal":
        A = fourier_formal(mf, gam, ctx, order).series
    else:
        raise ValueError(f"unknown left transform {left!r}")
    B = fourier_formal_prime(mg, gam, ctx, order).series
    rhs = psi_inverse_product(A, B, ctx)
    # compare in moment units, where round-off is uniform across indices
    r = np.arange(order + 1)
    to_mu = _qq(order, ctx) * ctx.q ** (r * (r + 1) / 2.0) * (-1j) ** r
    a, b = lhs.coeffs[: order + 1] * to_mu, rhs.coeffs[: order + 1] * to_mu
    resid = float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(a)))))
    return TwistedReport(resid, alpha, beta, lhs, rhs)
