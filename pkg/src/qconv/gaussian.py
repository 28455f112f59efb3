"""Gaussian-times-entire functions ``F = f(x) e_{q²}(-x²)``.

``f`` is stored either by monomial coefficients or by coefficients in the
discrete q-Hermite II polynomials ``h̃_l``.  The Hermite basis is the
working basis: q-differentiation and convolution are index shifts there.

Truncating a Hermite expansion at index N perturbs point values by roughly
``q^N`` (the coefficients decay like ``q^{l²/2}`` but ``h̃_l`` grows like
``q^{-l²/2}``), so orders much beyond 40 overflow double precision and are
refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, InsufficientDataError, PoleError, RadiusError
from .lattice import LatticeFunction, q_integral
from .qcore import QContext, poch, poch_array, q_factorial
from .series import MomentSeries, PowerSeries

__all__ = [
    "GaussianSeries",
    "GrowthType",
    "MAX_HERMITE_ORDER",
    "hermite2_poly",
    "hermite_matrix",
    "inverse_hermite_matrix",
    "weighted_powers",
    "eq2_gaussian_values",
    "c_q",
    "b_q",
    "basis_convert",
    "gaussian_moments",
    "hermite_derivative",
    "eq2_gaussian",
    "hermite2_gaussian",
    "g_m",
    "g_m_hermite",
    "cos_q",
    "sin_q",
    "jackson_bessel1",
    "unit_u",
    "G_k",
    "estimate_growth_type",
    "reconstruct_from_moments",
    "big_gaussian_function",
    "BigGaussian",
    "taylor_series",
    "exp_i_function",
    "ImaginaryQExponential",
    "radius_estimate",
]

MAX_HERMITE_ORDER = 44


# ----------------------------------------------------------------------------
# Hermite II polynomials


@lru_cache(maxsize=64)
def _hermite_matrix(q: float, n: int) -> np.ndarray:
    ctx = QContext(q)
    qq = poch_array(q, n, ctx).real
    q2 = poch_array(q * q, n // 2 + 1, ctx, base=q * q).real
    H = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        for l in range(k // 2 + 1):
            H[k, k - 2 * l] = ((-1) ** l * qq[k] * q ** (-2 * l * k + 2 * l * l + l)
                               / (q2[l] * qq[k - 2 * l]))
    H.setflags(write=False)
    return H


@lru_cache(maxsize=64)
def _inverse_hermite_matrix(q: float, n: int) -> np.ndarray:
    ctx = QContext(q)
    qq = poch_array(q, n, ctx).real
    q2 = poch_array(q * q, n // 2 + 1, ctx, base=q * q).real
    T = np.zeros((n + 1, n + 1))
    for p in range(n + 1):
        for k in range(p // 2 + 1):
            r = p - 2 * k
            T[p, r] = qq[p] * q ** (-2 * r * k - k * k) / (qq[r] * q2[k])
    T.setflags(write=False)
    return T


def _check_order(n):
    if n > MAX_HERMITE_ORDER:
        raise DomainError(f"Hermite order {n} exceeds {MAX_HERMITE_ORDER} (double overflow)")


def hermite_matrix(n: int, ctx: QContext) -> np.ndarray:
    """``H[l, j]`` = coefficient of ``x^j`` in ``h̃_l``, for ``l, j <= n``."""
    _check_order(n)
    return _hermite_matrix(ctx.q, n)


def inverse_hermite_matrix(n: int, ctx: QContext) -> np.ndarray:
    """``T[j, l]`` with ``x^j = Σ_l T[j, l] h̃_l``; all entries are non-negative."""
    _check_order(n)
    return _inverse_hermite_matrix(ctx.q, n)


def hermite2_poly(l: int, x, ctx: QContext):
    """Discrete q-Hermite II polynomial ``h̃_l(x; q)`` from its explicit sum."""
    if l < 0:
        raise DomainError("degree must be non-negative")
    x = np.asarray(x, dtype=complex)
    coeffs = hermite_matrix(l, ctx)[l]
    acc = np.zeros_like(x)
    for c in coeffs[::-1]:
        acc = acc * x + c
    return complex(acc) if acc.ndim == 0 else acc


# ----------------------------------------------------------------------------
# the Gaussian weight


def _log_weight(x, ctx: QContext):
    """``log e_{q²}(-x²)`` (complex log for complex x)."""
    z = x * x
    amax = float(np.max(np.abs(z))) if z.size else 0.0
    q2 = ctx.q * ctx.q
    n_terms = 1
    if amax > 0:
        n_terms = int(math.ceil((math.log(amax) + 40 * math.log(10)) / -math.log(q2))) + 1
        n_terms = max(n_terms, 1)
    if n_terms > ctx.max_terms:
        from .errors import TruncationError
        raise TruncationError("Gaussian weight needs more than max_terms factors")
    powers = q2 ** np.arange(n_terms)
    fac = 1.0 + z[..., None] * powers
    if np.iscomplexobj(fac):
        if np.any(np.abs(fac) < ctx.rel_tol):
            raise PoleError("e_{q^2}(-x^2) has a pole at x = ±i q^{-j}")
        return -np.sum(np.log(fac), axis=-1)
    return -np.sum(np.log1p(z[..., None] * powers), axis=-1)


def weighted_powers(x, n: int, ctx: QContext) -> np.ndarray:
    """Array ``W[..., j] = x^j e_{q²}(-x²)`` for ``0 <= j <= n``, overflow-safe."""
    x = np.asarray(x)
    real = not np.iscomplexobj(x) or np.all(x.imag == 0)
    j = np.arange(n + 1)
    if real:
        xr = np.real(x).astype(float)
        lw = _log_weight(xr, ctx)
        zero = xr == 0
        with np.errstate(divide="ignore"):
            la = np.log(np.abs(np.where(zero, 1.0, xr)))
        W = np.exp(j * la[..., None] + lw[..., None])
        W = W * np.where(xr < 0, -1.0, 1.0)[..., None] ** j
        W = W.astype(complex)
    else:
        xc = x.astype(complex)
        lw = _log_weight(xc, ctx)
        zero = xc == 0
        la = np.log(np.where(zero, 1.0, xc))
        W = np.exp(j * la[..., None] + lw[..., None])
    if np.any(zero):
        W[zero] = 0.0
        W[zero, 0] = 1.0
    return W


def eq2_gaussian_values(x, ctx: QContext):
    """``e_{q²}(-x²)`` evaluated element-wise."""
    return weighted_powers(x, 0, ctx)[..., 0]


@lru_cache(maxsize=256)
def _c_q(ctx: QContext, gamma: float) -> float:
    f = LatticeFunction(gamma, lambda x: eq2_gaussian_values(x, ctx), label="eq2_gaussian")
    return q_integral(f, ctx).real


def c_q(gamma: float, ctx: QContext) -> float:
    """``∫_γ e_{q²}(-x²) d_qx`` by direct Jackson summation (cached per context)."""
    return _c_q(ctx, float(gamma))


class BigGaussian(LatticeFunction):
    """``E_{q²}(-q²x²) = (q²x²; q²)_∞`` on ``L(1)``; it vanishes for ``|x| > 1``.

    Lattice values use exact indices (so the zeros at ``±q^{-k}`` are exact);
    :meth:`evaluate` off the lattice uses the product directly.
    """

    __slots__ = ("_ctx",)

    def __init__(self, index_rule, ctx):
        super().__init__(1.0, index_rule=index_rule, label="Eq2_gaussian")
        self._ctx = ctx

    def evaluate(self, x, ctx: QContext):
        x = np.asarray(x, dtype=complex)
        q2 = ctx.q * ctx.q
        out = np.array([poch(q2 * v * v, math.inf, ctx, base=q2) for v in x.reshape(-1)],
                       dtype=complex).reshape(x.shape)
        return complex(out) if out.ndim == 0 else out


def big_gaussian_function(ctx: QContext) -> BigGaussian:
    """``E_{q²}(-q²x²)`` as a function on ``L(1)``."""
    q = ctx.q

    def rule(sign, k):
        k = np.asarray(k)
        out = np.zeros(np.broadcast(sign, k).shape, dtype=complex)
        flat_k = np.broadcast_to(k, out.shape)
        for idx in np.ndindex(out.shape):
            kk = int(flat_k[idx])
            if kk >= 0:
                out[idx] = poch(q ** (2 * kk + 2), math.inf, ctx, base=q * q)
        return out

    return BigGaussian(rule, ctx)


@lru_cache(maxsize=64)
def _b_q(ctx: QContext) -> float:
    return q_integral(big_gaussian_function(ctx), ctx).real


def b_q(ctx: QContext) -> float:
    """``∫_1 E_{q²}(-q²x²) d_qx`` by direct Jackson summation (cached)."""
    return _b_q(ctx)


class ImaginaryQExponential(LatticeFunction):
    """``x -> e_q(ix) = 1/(ix; q)_∞``; finite on the whole real line.

    Its q-derivatives are known exactly: ``∂^n e_q(ix) = (i/(1-q))^n e_q(ix)``.
    """

    __slots__ = ("_q",)

    def __init__(self, gamma: float, ctx: QContext):
        q = ctx.q

        def rule(x):
            x = np.asarray(x, dtype=float)
            amax = float(np.max(np.abs(x))) if x.size else 0.0
            n = int(math.ceil((math.log(max(amax, 1e-300)) + 40 * math.log(10)) / -math.log(q))) + 1
            n = max(n, 1)
            return np.exp(-np.sum(np.log(1 - 1j * x[..., None] * q ** np.arange(n)), axis=-1))

        super().__init__(gamma, rule, label="eq_exp_i")
        self._q = q

    def q_derivative_values(self, x, n: int, ctx: QContext):
        return (1j / (1 - self._q)) ** n * self.evaluate(x, ctx)


def exp_i_function(gamma: float, ctx: QContext) -> ImaginaryQExponential:
    return ImaginaryQExponential(gamma, ctx)


# ----------------------------------------------------------------------------
# Gaussian series


class GaussianSeries:
    """``(Σ c_l b_l(x)) e_{q²}(-x²)`` with ``b_l`` monomials or ``h̃_l``.

    Parameters
    ----------
    coeffs : array_like
        Coefficients c_0..c_N.
    basis : {"hermite2", "monomial"}
    ctx : QContext
    gamma_hint : float, optional
        Lattice used by default for moments and lattice views.
    """

    __slots__ = ("_coeffs", "basis", "ctx", "gamma_hint", "_other")

    def __init__(self, coeffs, basis: str = "hermite2", ctx: QContext | None = None,
                 gamma_hint: float | None = None):
        if basis not in ("hermite2", "monomial"):
            raise ValueError(f"unknown basis {basis!r}")
        if ctx is None:
            raise ValueError("a QContext is required")
        c = np.array(coeffs, dtype=complex).reshape(-1)
        if len(c) == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        self._coeffs = c
        self.basis = basis
        self.ctx = ctx
        self.gamma_hint = gamma_hint
        self._other = None

    # -- representation -------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    def __repr__(self):
        return (f"GaussianSeries(order={self.order}, basis={self.basis!r}, "
                f"q={self.ctx.q}, gamma_hint={self.gamma_hint})")

    def _converted(self):
        if self._other is None:
            n = self.order
            if self.basis == "hermite2":
                other = self._coeffs @ hermite_matrix(n, self.ctx)
            else:
                other = self._coeffs @ inverse_hermite_matrix(n, self.ctx)
            other.setflags(write=False)
            self._other = other
        return self._other

    @property
    def hermite(self) -> np.ndarray:
        return self._coeffs if self.basis == "hermite2" else self._converted()

    @property
    def monomial(self) -> np.ndarray:
        return self._coeffs if self.basis == "monomial" else self._converted()

    def to_basis(self, basis: str) -> "GaussianSeries":
        if basis == self.basis:
            return self
        coeffs = self.hermite if basis == "hermite2" else self.monomial
        return GaussianSeries(coeffs, basis, self.ctx, self.gamma_hint)

    def truncate(self, order: int) -> "GaussianSeries":
        return GaussianSeries(self._coeffs[: order + 1], self.basis, self.ctx, self.gamma_hint)

    def padded(self, order: int) -> "GaussianSeries":
        c = np.zeros(order + 1, dtype=complex)
        n = min(order, self.order) + 1
        c[:n] = self._coeffs[:n]
        return GaussianSeries(c, self.basis, self.ctx, self.gamma_hint)

    def with_gamma(self, gamma: float) -> "GaussianSeries":
        return GaussianSeries(self._coeffs, self.basis, self.ctx, gamma)

    # -- evaluation -----------------------------------------------------
    def __call__(self, x):
        a = self.monomial
        W = weighted_powers(np.asarray(x), self.order, self.ctx)
        out = W @ a
        return complex(out) if np.ndim(out) == 0 else out

    def q_derivative_values(self, x, n: int, ctx: QContext | None = None):
        """``(∂^n F)(x)`` through the exact Hermite index shift."""
        return hermite_derivative(self, n)(x)

    def as_lattice_function(self, gamma: float | None = None) -> LatticeFunction:
        g = self.gamma_hint if gamma is None else gamma
        if g is None:
            raise DomainError("no lattice given and no gamma_hint set")
        return LatticeFunction(g, self.__call__, label="gaussian_series")

    # -- algebra --------------------------------------------------------
    def _align(self, other):
        if not isinstance(other, GaussianSeries):
            return NotImplemented
        if other.ctx.q != self.ctx.q:
            raise ValueError("series use different bases q")
        other = other.to_basis(self.basis)
        n = min(self.order, other.order)
        return self._coeffs[: n + 1], other._coeffs[: n + 1]

    def __add__(self, other):
        pair = self._align(other)
        if pair is NotImplemented:
            return NotImplemented
        return GaussianSeries(pair[0] + pair[1], self.basis, self.ctx, self.gamma_hint)

    def __sub__(self, other):
        pair = self._align(other)
        if pair is NotImplemented:
            return NotImplemented
        return GaussianSeries(pair[0] - pair[1], self.basis, self.ctx, self.gamma_hint)

    def __neg__(self):
        return GaussianSeries(-self._coeffs, self.basis, self.ctx, self.gamma_hint)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return GaussianSeries(self._coeffs * scalar, self.basis, self.ctx, self.gamma_hint)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return GaussianSeries(self._coeffs / scalar, self.basis, self.ctx, self.gamma_hint)

    def derivative(self, t: int = 1) -> "GaussianSeries":
        return hermite_derivative(self, t)

    def moments(self, up_to: int, gamma: float | None = None) -> MomentSeries:
        g = self.gamma_hint if gamma is None else gamma
        return gaussian_moments(self, g, up_to, self.ctx)

    def max_coeff_diff(self, other: "GaussianSeries", basis: str = "hermite2") -> float:
        a = self.to_basis(basis).coeffs
        b = other.to_basis(basis).coeffs
        n = max(len(a), len(b))
        a = np.pad(a, (0, n - len(a)))
        b = np.pad(b, (0, n - len(b)))
        return float(np.max(np.abs(a - b)))


def basis_convert(g: GaussianSeries, target_basis: str) -> GaussianSeries:
    return g.to_basis(target_basis)


def hermite_derivative(g: GaussianSeries, t: int) -> GaussianSeries:
    """``∂^t`` in the Hermite basis: ``h̃_l e -> (-1)^t q^{lt+(t²-t)/2} (1-q)^{-t} h̃_{l+t} e``.

    The result is exact and has order ``N + t``.
    """
    if t < 0:
        raise DomainError("derivative order must be non-negative")
    if t == 0:
        return g
    q = g.ctx.q
    c = g.hermite
    l = np.arange(len(c))
    fac = (-1) ** t * q ** (l * t + (t * t - t) / 2) / (1 - q) ** t
    out = np.zeros(len(c) + t, dtype=complex)
    out[t:] = c * fac
    return GaussianSeries(out, "hermite2", g.ctx, g.gamma_hint)


def gaussian_moments(g: GaussianSeries, gamma: float, up_to: int, ctx: QContext | None = None) -> MomentSeries:
    """Closed-form moments from the Hermite coefficients.

    Uses ``∫_γ e x^p h̃_r = c_q(γ) (q;q)_p q^{-2rk-k²-r²} / (q²;q²)_k`` for
    ``p = r + 2k`` and zero otherwise.
    """
    ctx = g.ctx if ctx is None else ctx
    if gamma is None:
        raise DomainError("gamma is required for moments")
    q = ctx.q
    c = g.hermite
    cq = c_q(gamma, ctx)
    qq = poch_array(q, up_to, ctx).real
    q2 = poch_array(q * q, up_to // 2 + 1, ctx, base=q * q).real
    mu = np.zeros(up_to + 1, dtype=complex)
    for p in range(up_to + 1):
        acc = 0j
        for k in range(p // 2 + 1):
            r = p - 2 * k
            if r >= len(c):
                continue
            expo = -r * r / 2 + k * k + r / 2 + k
            acc += c[r] * qq[p] * q**expo / q2[k]
        mu[p] = cq * acc
    return MomentSeries(gamma, mu)


def taylor_series(g: GaussianSeries, order: int) -> PowerSeries:
    """Taylor coefficients at 0 of ``f(x) e_{q²}(-x²)`` (radius 1)."""
    q = g.ctx.q
    q2 = poch_array(q * q, order // 2 + 1, g.ctx, base=q * q).real
    w = np.zeros(order + 1)
    for k in range(order // 2 + 1):
        w[2 * k] = (-1) ** k / q2[k]
    a = g.monomial
    return PowerSeries(np.convolve(a, w)[: order + 1], order)


# ----------------------------------------------------------------------------
# named members


def _order(ctx, order):
    n = ctx.order if order is None else int(order)
    _check_order(n)
    return n


def eq2_gaussian(ctx: QContext, order: int | None = None, gamma_hint=None) -> GaussianSeries:
    """``e_{q²}(-x²)`` itself."""
    c = np.zeros(_order(ctx, order) + 1)
    c[0] = 1.0
    return GaussianSeries(c, "hermite2", ctx, gamma_hint)


def hermite2_gaussian(l: int, ctx: QContext, order: int | None = None, gamma_hint=None) -> GaussianSeries:
    """``h̃_l(x) e_{q²}(-x²)``."""
    n = max(_order(ctx, order), l)
    _check_order(n)
    c = np.zeros(n + 1)
    c[l] = 1.0
    return GaussianSeries(c, "hermite2", ctx, gamma_hint)


def g_m(m: int, ctx: QContext, order: int | None = None, gamma_hint=None) -> GaussianSeries:
    """``e_{q²}(-x²) ₀φ₁(-; q^{1+2m}; q², -q^{1+2m} x²)`` in the monomial basis."""
    if m < 0:
        raise DomainError("m must be non-negative")
    n = _order(ctx, order)
    q = ctx.q
    a = np.zeros(n + 1)
    bm = poch_array(q ** (1 + 2 * m), n // 2 + 1, ctx, base=q * q).real
    q2 = poch_array(q * q, n // 2 + 1, ctx, base=q * q).real
    for r in range(n // 2 + 1):
        a[2 * r] = (-1) ** r * q ** (2 * r * r - r + 2 * m * r) / (bm[r] * q2[r])
    return GaussianSeries(a, "monomial", ctx, gamma_hint)


def g_m_hermite(m: int, ctx: QContext, order: int | None = None, gamma_hint=None) -> GaussianSeries:
    """The same function from its closed-form Hermite expansion (needs ``m >= 1``)."""
    if m < 1:
        raise DomainError("the Hermite expansion of g_m needs m >= 1")
    n = _order(ctx, order)
    q = ctx.q
    pref = (poch(q ** (2 * m), math.inf, ctx, base=q * q)
            / poch(q ** (1 + 2 * m), math.inf, ctx, base=q * q)).real
    q2 = poch_array(q * q, n // 2 + 1, ctx, base=q * q).real
    c = np.zeros(n + 1)
    for k in range(n // 2 + 1):
        c[2 * k] = pref * (-1) ** k * q ** (2 * m * k + 2 * k * k - k) / q2[k]
    return GaussianSeries(c, "hermite2", ctx, gamma_hint)


def cos_q(ctx: QContext, order: int | None = None, gamma_hint=None) -> GaussianSeries:
    """``(e_q(ix) + e_q(-ix)) / 2``, equal to ``g_0``."""
    return g_m(0, ctx, order, gamma_hint)


def sin_q(ctx: QContext, order: int | None = None, gamma_hint=None) -> GaussianSeries:
    """``(e_q(ix) - e_q(-ix)) / 2i = x g_1(x) / (1-q)``."""
    n = _order(ctx, order)
    g1 = g_m(1, ctx, n - 1).monomial
    a = np.zeros(n + 1, dtype=complex)
    a[1:] = g1 / (1 - ctx.q)
    return GaussianSeries(a, "monomial", ctx, gamma_hint)


def jackson_bessel1(m: int, z, ctx: QContext):
    """Jackson's first q-Bessel function ``J^{(1)}_{m-1/2}(z; q²)`` read off ``g_m``.

    Uses ``J^{(1)}_{m-1/2}(2x; q²) = (q^{2m+1};q²)_∞ / (q²;q²)_∞ · x^{m-1/2} g_m(x)``.
    """
    q = ctx.q
    x = np.asarray(z, dtype=complex) / 2
    scale = (poch(q ** (2 * m + 1), math.inf, ctx, base=q * q)
             / poch(q * q, math.inf, ctx, base=q * q))
    return scale * x ** (m - 0.5) * g_m(m, ctx)(x)


def unit_u(gamma: float, ctx: QContext, order: int | None = None) -> GaussianSeries:
    """Convolution unit ``g_1 / ∫_γ g_1`` in the Hermite basis.

    The normalising integral is a direct Jackson sum of the monomial form.
    """
    n = _order(ctx, order)
    norm = q_integral(g_m(1, ctx, n).as_lattice_function(gamma), ctx).real
    return g_m_hermite(1, ctx, n, gamma) / norm


def G_k(k: int, gamma: float, ctx: QContext, order: int | None = None,
        method: str = "expansion") -> GaussianSeries:
    """``G_{k,γ} = (-1)^k ∂^k u_γ / [k]_q!``.

    ``method="expansion"`` uses the closed-form Hermite coefficients
    ``(-1)^j q^{(2j+k)²/2 + (2j-k)/2} / (c_q(γ) (q;q)_k (q²;q²)_j)`` on
    ``h̃_{2j+k}``; ``method="derivative"`` differentiates ``unit_u``.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    n = max(_order(ctx, order), k)
    _check_order(n)
    q = ctx.q
    if method == "derivative":
        u = unit_u(gamma, ctx, n)
        return (hermite_derivative(u, k) * ((-1) ** k / q_factorial(k, ctx))).truncate(n)
    if method != "expansion":
        raise ValueError(f"unknown method {method!r}")
    cq = c_q(gamma, ctx)
    qk = poch(q, k, ctx).real
    q2 = poch_array(q * q, n // 2 + 1, ctx, base=q * q).real
    c = np.zeros(n + 1)
    for j in range((n - k) // 2 + 1):
        p = 2 * j + k
        c[p] = (-1) ** j * q ** (p * p / 2 + (2 * j - k) / 2) / (cq * qk * q2[j])
    return GaussianSeries(c, "hermite2", ctx, gamma)


# ----------------------------------------------------------------------------
# growth and reconstruction


@dataclass(frozen=True)
class GrowthType:
    """Estimated ``s`` in ``|a_l| <= C s^l q^{l²/2}``."""

    s_estimate: float
    confidence_window: tuple[int, int]


def estimate_growth_type(g: GaussianSeries) -> GrowthType:
    """Max of ``(|a_l| q^{-l²/2})^{1/l}`` over the upper half of the monomial window."""
    a = np.abs(g.monomial)
    n = len(a) - 1
    if len(a) < 8:
        raise InsufficientDataError(f"need at least 8 coefficients, got {len(a)}")
    lo = max(1, n // 2)
    l = np.arange(lo, n + 1)
    q = g.ctx.q
    with np.errstate(divide="ignore"):
        vals = np.exp((np.log(a[lo:]) - (l * l / 2.0) * math.log(q)) / l)
    vals = vals[np.isfinite(vals)]
    s = float(np.max(vals)) if len(vals) else 0.0
    return GrowthType(max(s, np.finfo(float).tiny), (lo, n))


def radius_estimate(series: PowerSeries, tol: float = 0.0) -> float:
    """Radius of convergence from the tail of the coefficient ratios.

    Returns ``inf`` for series whose coefficients are negligible past a point
    (numerical polynomials).
    """
    a = np.abs(series.coeffs)
    scale = float(np.max(a)) if len(a) else 0.0
    nz = np.nonzero(a > max(tol, 1e-300) * max(scale, 1.0))[0]
    if len(nz) == 0 or nz[-1] < len(a) - 1 - max(2, len(a) // 4):
        return math.inf
    lo = len(a) // 2
    ratios = []
    for k in range(lo, len(a) - 1):
        if a[k] > 0 and a[k + 1] > 0:
            ratios.append(a[k + 1] / a[k])
    if not ratios:
        return math.inf
    lim = max(ratios)
    return math.inf if lim == 0 else 1.0 / lim


def reconstruct_from_moments(m: MomentSeries, ctx: QContext, order: int | None = None,
                             check_radius: bool = True) -> GaussianSeries:
    """``Σ_k μ_k G_{k,γ}`` assembled in the Hermite basis.

    Raises :class:`RadiusError` when the moment generating series appears to
    have radius below ``(1-q)^{-1}``.
    """
    n = _order(ctx, order)
    if check_radius:
        fact = np.array([q_factorial(k, ctx) for k in range(len(m))])
        rho = radius_estimate(PowerSeries(m.moments / fact), tol=ctx.rel_tol)
        if rho < 1.0 / (1 - ctx.q):
            raise RadiusError(f"moment series radius ~{rho:.4g} below (1-q)^-1")
    out = np.zeros(n + 1, dtype=complex)
    for k, mu in enumerate(m.moments[: n + 1]):
        if mu != 0:
            out += mu * G_k(k, m.gamma, ctx, n).coeffs
    return GaussianSeries(out, "hermite2", ctx, m.gamma)
