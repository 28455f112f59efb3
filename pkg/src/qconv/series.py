"""Truncated power series, moment sequences and the twisted product.

A :class:`PowerSeries` knows its truncation order: coefficients past the
order are unknown rather than zero, and arithmetic never reports more than
the smaller order of its operands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotInvertibleError
from .qcore import QContext, q_factorial, q_number
from .lattice import DiscreteDelta, jackson_power_integrals

__all__ = [
    "PowerSeries",
    "MomentSeries",
    "BivariateSeries",
    "moments_of",
    "generating_series",
    "antipode_S",
    "antipode_S_inverse",
    "counit_eps",
    "reciprocal",
    "psi_inverse_product",
    "moment_valuation",
    "moment_distance",
]


def _as_coeffs(coeffs):
    return np.array(coeffs, dtype=complex).reshape(-1)


class PowerSeries:
    """``Σ a_n x^n`` known up to (and including) ``x^order``."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int | None = None):
        c = _as_coeffs(coeffs)
        if order is None:
            order = max(len(c) - 1, 0)
        order = int(order)
        if len(c) < order + 1:
            c = np.concatenate([c, np.zeros(order + 1 - len(c), dtype=complex)])
        c = c[: order + 1].copy()
        c.setflags(write=False)
        self.coeffs = c
        self.order = order

    @classmethod
    def constant(cls, value, order: int) -> "PowerSeries":
        return cls([value], order)

    @classmethod
    def monomial(cls, n: int, order: int, value=1.0) -> "PowerSeries":
        c = np.zeros(order + 1, dtype=complex)
        if n <= order:
            c[n] = value
        return cls(c, order)

    def __repr__(self):
        return f"PowerSeries({np.array2string(self.coeffs, precision=6)}, order={self.order})"

    def __len__(self):
        return self.order + 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: order + 1], min(order, self.order))

    def _pair(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries.constant(other, self.order)
        n = min(self.order, other.order)
        return self.coeffs[: n + 1], other.coeffs[: n + 1], n

    def __add__(self, other):
        a, b, n = self._pair(other)
        return PowerSeries(a + b, n)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, n = self._pair(other)
        return PowerSeries(a - b, n)

    def __rsub__(self, other):
        a, b, n = self._pair(other)
        return PowerSeries(b - a, n)

    def __neg__(self):
        return PowerSeries(-self.coeffs, self.order)

    def __mul__(self, other):
        if np.isscalar(other):
            return PowerSeries(self.coeffs * other, self.order)
        a, b, n = self._pair(other)
        return PowerSeries(np.convolve(a, b)[: n + 1], n)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, scalar):
        return PowerSeries(self.coeffs / scalar, self.order)

    def __call__(self, x):
        """Horner evaluation of the truncated polynomial."""
        x = np.asarray(x, dtype=complex)
        acc = np.zeros_like(x)
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return complex(acc) if acc.ndim == 0 else acc

    def scale(self, c) -> "PowerSeries":
        """``t -> f(c t)``."""
        return PowerSeries(self.coeffs * complex(c) ** np.arange(self.order + 1), self.order)

    def q_derivative(self, ctx: QContext) -> "PowerSeries":
        """``∂ x^n = [n]_q x^{n-1}``; the order drops by one."""
        n = np.arange(1, self.order + 1)
        return PowerSeries(self.coeffs[1:] * q_number(n, ctx), max(self.order - 1, 0))

    def allclose(self, other, atol=0.0, rtol=1e-12) -> bool:
        a, b, _ = self._pair(other)
        return bool(np.allclose(a, b, atol=atol, rtol=rtol))

    def degree(self, tol: float = 0.0) -> int:
        nz = np.nonzero(np.abs(self.coeffs) > tol)[0]
        return int(nz[-1]) if len(nz) else -1


@dataclass(frozen=True)
class MomentSeries:
    """Moments ``μ_0..μ_N`` on ``L(gamma)`` (Jackson-normalised)."""

    gamma: float
    moments: np.ndarray
    strict_moments: np.ndarray | None = field(default=None)

    def __post_init__(self):
        m = _as_coeffs(self.moments)
        m.setflags(write=False)
        object.__setattr__(self, "moments", m)
        if self.strict_moments is not None:
            s = np.array(self.strict_moments, dtype=float).reshape(-1)
            s.setflags(write=False)
            object.__setattr__(self, "strict_moments", s)

    @property
    def order(self) -> int:
        return len(self.moments) - 1

    def __len__(self):
        return len(self.moments)

    def __getitem__(self, k):
        return self.moments[k]

    def truncate(self, order: int) -> "MomentSeries":
        sm = None if self.strict_moments is None else self.strict_moments[: order + 1]
        return MomentSeries(self.gamma, self.moments[: order + 1], sm)


def moments_of(f, up_to: int, ctx: QContext, gamma: float | None = None,
               strict: bool = False) -> MomentSeries:
    """``μ_e = q^{(e²+e)/2} ∫_γ f x^e`` for ``e <= up_to`` by direct Jackson sums.

    Objects with their own closed-form moments (``moments(up_to, ctx,
    gamma)``) should be passed to :func:`qconv.gaussian.gaussian_moments`
    instead; this routine always integrates on the lattice.
    """
    g = getattr(f, "gamma", None) if gamma is None else gamma
    if isinstance(f, DiscreteDelta):
        g = f.gamma
    e = np.arange(up_to + 1)
    pref = ctx.q ** ((e * e + e) / 2.0)
    from .gaussian import GaussianSeries  # local: avoids an import cycle

    target = f
    if isinstance(f, GaussianSeries):
        target = f.as_lattice_function(g)
    raw = jackson_power_integrals(target, e, ctx, gamma=g)
    strict_m = None
    if strict:
        strict_m = (pref * jackson_power_integrals(target, e, ctx, gamma=g, absolute=True)).real
    return MomentSeries(target.gamma if hasattr(target, "gamma") else g, pref * raw, strict_m)


def generating_series(m: MomentSeries, ctx: QContext) -> PowerSeries:
    """``Σ μ_k t^k / [k]_q!``."""
    fact = np.array([q_factorial(k, ctx) for k in range(len(m))])
    return PowerSeries(m.moments / fact, m.order)


def _antipode_factors(order, ctx, sign=1):
    r = np.arange(order + 1)
    return (-1.0) ** r * ctx.q ** (sign * r * (r - 1) / 2.0)


def antipode_S(f: PowerSeries, ctx: QContext) -> PowerSeries:
    """``a_r -> (-1)^r q^{r(r-1)/2} a_r``."""
    return PowerSeries(f.coeffs * _antipode_factors(f.order, ctx), f.order)


def antipode_S_inverse(f: PowerSeries, ctx: QContext) -> PowerSeries:
    """``a_r -> (-1)^r q^{-r(r-1)/2} a_r``."""
    return PowerSeries(f.coeffs * _antipode_factors(f.order, ctx, -1), f.order)


def counit_eps(f) -> complex:
    """Evaluation at 0."""
    if isinstance(f, PowerSeries):
        return complex(f.coeffs[0])
    return complex(f(0.0))


def reciprocal(f: PowerSeries, ctx: QContext | None = None) -> PowerSeries:
    """Multiplicative inverse at the same truncation order."""
    tol = 1e-12 if ctx is None else ctx.rel_tol
    a = f.coeffs
    if abs(a[0]) <= tol:
        raise NotInvertibleError(f"constant term {a[0]} is (numerically) zero")
    b = np.zeros_like(a)
    b[0] = 1.0 / a[0]
    for n in range(1, f.order + 1):
        b[n] = -np.dot(a[1 : n + 1], b[n - 1 :: -1][:n]) / a[0]
    return PowerSeries(b, f.order)


class BivariateSeries:
    """``Σ a_{nm} x^n y^m`` on a rectangular truncation ``n <= Nx, m <= Ny``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.ndim != 2:
            raise ValueError("bivariate coefficients must be 2-D")
        c.setflags(write=False)
        self.coeffs = c

    @property
    def orders(self):
        return self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1

    @classmethod
    def tensor(cls, f: PowerSeries, g: PowerSeries) -> "BivariateSeries":
        """``f(x) g(y)``."""
        return cls(np.outer(f.coeffs, g.coeffs))

    def twist(self, ctx: QContext, power: int = 1) -> "BivariateSeries":
        """Multiply ``a_{nm}`` by ``q^{power·nm}``; ``power=-1`` is the inverse twist."""
        n = np.arange(self.coeffs.shape[0])[:, None]
        m = np.arange(self.coeffs.shape[1])[None, :]
        return BivariateSeries(self.coeffs * ctx.q ** (power * n * m))

    def diagonal_product(self) -> PowerSeries:
        """Set ``y = x``; exact up to ``min(Nx, Ny)``."""
        nx, ny = self.orders
        order = min(nx, ny)
        out = np.zeros(order + 1, dtype=complex)
        for t in range(order + 1):
            n = np.arange(t + 1)
            out[t] = np.sum(self.coeffs[n, t - n])
        return PowerSeries(out, order)


def psi_inverse_product(F: PowerSeries, G: PowerSeries, ctx: QContext) -> PowerSeries:
    """Coefficient ``t`` is ``Σ_{m+n=t} a_m b_n q^{-nm}``."""
    return BivariateSeries.tensor(F, G).twist(ctx, -1).diagonal_product()


def moment_valuation(m, ctx: QContext) -> int:
    """Index of the first moment above ``rel_tol·max(1, max|μ|)``; ``len(m)`` if none."""
    mu = m.moments if isinstance(m, MomentSeries) else _as_coeffs(m)
    thresh = ctx.rel_tol * max(1.0, float(np.max(np.abs(mu))) if len(mu) else 1.0)
    big = np.nonzero(np.abs(mu) > thresh)[0]
    return int(big[0]) if len(big) else len(mu)


def moment_distance(m1, m2, ctx: QContext) -> float:
    """``exp(-m(f-g))``, the moment-valuation metric."""
    a = m1.moments if isinstance(m1, MomentSeries) else _as_coeffs(m1)
    b = m2.moments if isinstance(m2, MomentSeries) else _as_coeffs(m2)
    n = min(len(a), len(b))
    return math.exp(-moment_valuation(a[:n] - b[:n], ctx))
