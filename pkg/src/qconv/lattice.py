"""Functions on the bilateral lattice ``{±q^k γ}`` and the Jackson integral.

A :class:`LatticeFunction` is backed by one of

* a vectorised rule ``x -> f(x)`` valid on (at least) the lattice,
* a rule on lattice indices ``(sign, k) -> value``,
* a finite table ``{(sign, k): value}``, zero elsewhere.

The Jackson integral is the weighted bilateral sum
``(1-q) Σ_k Σ_± q^k γ f(±q^k γ)``, truncated adaptively on both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import DomainError, MismatchError, TruncationError
from .qcore import QContext, poch, q_binomial

__all__ = [
    "LatticePoint",
    "LatticeFunction",
    "DiscreteDelta",
    "lattice_window",
    "lattice_sum",
    "q_integral",
    "q_derivative",
    "q_derivative_n",
    "ryde_weights",
    "q_shift",
    "delta_convolve",
]

_BLOCK = 32


@dataclass(frozen=True)
class LatticePoint:
    """The point ``sign * q^k * gamma``."""

    sign: int
    k: int
    gamma: float

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")
        if not self.gamma > 0:
            raise DomainError("gamma must be positive")

    def x(self, ctx: QContext) -> float:
        return self.sign * ctx.q**self.k * self.gamma

    def shifted(self, j: int) -> "LatticePoint":
        return LatticePoint(self.sign, self.k + j, self.gamma)


def lattice_window(gamma: float, kmin: int, kmax: int, ctx: QContext) -> np.ndarray:
    """Both signs of ``q^k gamma`` for ``kmin <= k <= kmax``."""
    ks = np.arange(kmin, kmax + 1)
    pos = ctx.q ** ks.astype(float) * gamma
    return np.concatenate([pos, -pos])


def _same_lattice(g1: float, g2: float, q: float) -> bool:
    r = math.log(g1 / g2) / math.log(q)
    return abs(r - round(r)) < 1e-9


def _locate(x, gamma, q):
    """Map real lattice points back to (sign, k); DomainError if off-lattice."""
    x = np.asarray(x, dtype=complex)
    if np.any(np.abs(x.imag) > 1e-12 * np.maximum(1.0, np.abs(x.real))):
        raise DomainError("index-backed lattice functions need real arguments")
    xr = x.real
    if np.any(xr == 0):
        raise DomainError("0 is not a lattice point")
    kf = np.log(np.abs(xr) / gamma) / math.log(q)
    k = np.rint(kf).astype(np.int64)
    if np.any(np.abs(kf - k) > 1e-8):
        raise DomainError("argument is not a point of the lattice")
    return np.where(xr > 0, 1, -1), k


class LatticeFunction:
    """A function sampled or evaluable on the lattice ``L(gamma)``."""

    __slots__ = ("gamma", "_rule", "_index_rule", "_table", "label")

    def __init__(self, gamma: float, rule: Callable | None = None, *,
                 index_rule: Callable | None = None,
                 table: Mapping | None = None, label: str | None = None):
        if not gamma > 0:
            raise DomainError("gamma must be positive")
        if sum(v is not None for v in (rule, index_rule, table)) != 1:
            raise ValueError("give exactly one of rule, index_rule, table")
        self.gamma = float(gamma)
        self._rule = rule
        self._index_rule = index_rule
        self._table = None
        if table is not None:
            self._table = {(int(s), int(k)): complex(v)
                           for (s, k), v in table.items() if v != 0}
        self.label = label

    @classmethod
    def pointwise(cls, gamma, fn, label=None):
        """Wrap a scalar callable (not vectorised)."""
        vec = np.vectorize(lambda t: complex(fn(t)), otypes=[complex])
        return cls(gamma, vec, label=label)

    @property
    def is_table(self) -> bool:
        return self._table is not None

    @property
    def table(self):
        return dict(self._table) if self._table is not None else None

    @property
    def index_backed(self) -> bool:
        return self._rule is None

    def __repr__(self):
        kind = "table" if self.is_table else ("index" if self.index_backed else "rule")
        return f"LatticeFunction(gamma={self.gamma}, {kind}, label={self.label!r})"

    def values(self, sign, k, ctx: QContext) -> np.ndarray:
        """Values at ``sign * q^k * gamma`` (array arguments broadcast)."""
        sign, k = np.broadcast_arrays(np.asarray(sign), np.asarray(k))
        if self._table is not None:
            flat = [self._table.get((int(s), int(j)), 0j)
                    for s, j in zip(sign.ravel(), k.ravel())]
            return np.asarray(flat, dtype=complex).reshape(sign.shape)
        if self._index_rule is not None:
            return np.asarray(self._index_rule(sign, k), dtype=complex)
        x = sign * ctx.q ** k.astype(float) * self.gamma
        return np.asarray(self._rule(x), dtype=complex)

    def at(self, point: LatticePoint, ctx: QContext) -> complex:
        if not _same_lattice(point.gamma, self.gamma, ctx.q):
            raise MismatchError("point belongs to a different lattice")
        shift = int(round(math.log(point.gamma / self.gamma) / math.log(ctx.q)))
        return complex(self.values(point.sign, point.k + shift, ctx))

    def evaluate(self, x, ctx: QContext):
        """Evaluate at real/complex ``x``.  Index-backed functions need lattice points."""
        scalar = np.ndim(x) == 0
        if self._rule is not None:
            out = np.asarray(self._rule(np.asarray(x)), dtype=complex)
        else:
            s, k = _locate(np.atleast_1d(x), self.gamma, ctx.q)
            out = self.values(s, k, ctx)
        return complex(out.reshape(-1)[0]) if scalar else out

    def scaled(self, c) -> "LatticeFunction":
        if self._table is not None:
            return LatticeFunction(self.gamma, table={key: c * v for key, v in self._table.items()},
                                   label=self.label)
        if self._index_rule is not None:
            rule = self._index_rule
            return LatticeFunction(self.gamma, index_rule=lambda s, k: c * rule(s, k),
                                   label=self.label)
        rule = self._rule
        return LatticeFunction(self.gamma, lambda x: c * rule(x), label=self.label)


@dataclass(frozen=True)
class DiscreteDelta:
    """Indicator of the single lattice point ``sign * gamma * q^p``."""

    sign: int
    p: int
    gamma: float

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")
        if not self.gamma > 0:
            raise DomainError("gamma must be positive")

    def as_function(self) -> LatticeFunction:
        return LatticeFunction(self.gamma, table={(self.sign, self.p): 1.0},
                               label=f"delta({self.sign:+d},{self.p})")

    def values(self, sign, k, ctx=None):
        sign, k = np.broadcast_arrays(np.asarray(sign), np.asarray(k))
        return ((sign == self.sign) & (k == self.p)).astype(complex)

    def moment(self, e: int, ctx: QContext) -> float:
        """Closed-form moment ``(1-q) η^e q^{(e²+e)/2} γ^{e+1} q^{p(e+1)}``."""
        q = ctx.q
        return ((1 - q) * self.sign**e * q ** ((e * e + e) / 2)
                * self.gamma ** (e + 1) * q ** (self.p * (e + 1)))


# ----------------------------------------------------------------------------
# Jackson integration


def _rows(values, n):
    v = np.asarray(values, dtype=complex)
    if v.ndim == 1:
        v = v[:, None]
    return v.reshape(n, -1)


def lattice_sum(term_fn: Callable[[np.ndarray], np.ndarray], ctx: QContext) -> np.ndarray:
    """Adaptive bilateral sum ``Σ_{k∈Z} term_fn(k)``.

    ``term_fn`` maps an integer array of indices to an array of shape
    ``(len(k), width)``.  Each direction stops once ``tail_window``
    consecutive rows are negligible column-wise relative to the running sum
    of absolute values.
    """
    total = None
    for direction in (1, -1):
        absum = None
        run = 0
        used = 0
        start = 0 if direction == 1 else -1
        done = False
        while not done:
            if used >= ctx.max_terms:
                raise TruncationError(
                    f"Jackson sum did not converge within {ctx.max_terms} terms "
                    f"towards k -> {'+' if direction == 1 else '-'}inf")
            n = min(_BLOCK, ctx.max_terms - used)
            ks = start + direction * np.arange(used, used + n)
            with np.errstate(over="ignore", invalid="ignore"):
                rows = _rows(term_fn(ks), n)
            if total is None:
                total = np.zeros(rows.shape[1], dtype=complex)
            if absum is None:
                absum = np.zeros(rows.shape[1])
            for row in rows:
                if not np.all(np.isfinite(row)):
                    raise TruncationError("integrand is not finite on the lattice "
                                          "(not q-integrable at working precision)")
                mag = np.abs(row)
                absum += mag
                total += row
                used += 1
                if np.all(mag <= ctx.rel_tol * absum):
                    run += 1
                    if run >= ctx.tail_window:
                        done = True
                        break
                else:
                    run = 0
    return total


def _weights(ks, gamma, ctx):
    return (1 - ctx.q) * ctx.q ** ks.astype(float) * gamma


def _integrand_values(f, ks, ctx, gamma):
    """(plus, minus) sample arrays of f on the lattice of ``gamma``."""
    if isinstance(f, (LatticeFunction, DiscreteDelta)):
        return f.values(1, ks, ctx), f.values(-1, ks, ctx)
    x = ctx.q ** ks.astype(float) * gamma
    return np.asarray(f(x), dtype=complex), np.asarray(f(-x), dtype=complex)


def _resolve_gamma(f, gamma, ctx):
    own = getattr(f, "gamma", None)
    if own is None:
        if gamma is None:
            raise DomainError("gamma is required for a plain callable")
        return float(gamma), 0
    if gamma is None or gamma == own:
        return own, 0
    if not _same_lattice(gamma, own, ctx.q):
        raise MismatchError(f"function lives on L({own}), requested L({gamma})")
    return own, 0


def _table_items(f):
    if isinstance(f, DiscreteDelta):
        return {(f.sign, f.p): 1.0 + 0j}
    if isinstance(f, LatticeFunction) and f.is_table:
        return f.table
    return None


def q_integral(f, ctx: QContext, gamma: float | None = None) -> complex:
    """Jackson integral of ``f`` over the whole lattice ``L(gamma)``.

    ``f`` is a :class:`LatticeFunction`, a :class:`DiscreteDelta`, or any
    vectorised callable (then ``gamma`` is required).
    """
    gamma, _ = _resolve_gamma(f, gamma, ctx)
    items = _table_items(f)
    if items is not None:
        return complex(math.fsum(((1 - ctx.q) * ctx.q**k * gamma * v).real
                                 for (s, k), v in items.items())
                       + 1j * math.fsum(((1 - ctx.q) * ctx.q**k * gamma * v).imag
                                        for (s, k), v in items.items()))

    def terms(ks):
        plus, minus = _integrand_values(f, ks, ctx, gamma)
        return _weights(ks, gamma, ctx) * (plus + minus)

    return complex(lattice_sum(terms, ctx)[0])


def jackson_power_integrals(f, powers, ctx: QContext, gamma=None, absolute=False) -> np.ndarray:
    """``∫_γ f x^e`` (or ``∫_γ |f x^e|``) for every ``e`` in ``powers`` at once."""
    gamma, _ = _resolve_gamma(f, gamma, ctx)
    powers = np.asarray(powers)
    items = _table_items(f)
    if items is not None:
        out = np.zeros(len(powers), dtype=complex)
        for (s, k), v in items.items():
            x = s * ctx.q**k * gamma
            w = (1 - ctx.q) * ctx.q**k * gamma
            vals = v * x ** powers.astype(float)
            out += w * (np.abs(vals) if absolute else vals)
        return out

    def terms(ks):
        plus, minus = _integrand_values(f, ks, ctx, gamma)
        logx = np.log(ctx.q) * ks.astype(float) + np.log(gamma)
        ep = powers[None, :].astype(float)

        def scaled(v, sgn):
            # v * (sgn x)^e in log space, so huge x^e times tiny v stays finite
            mag = np.abs(v)[:, None]
            with np.errstate(divide="ignore"):
                lm = np.log(np.where(mag > 0, mag, 1.0)) + ep * logx[:, None]
            # angle() rather than v/|v|: complex division of denormals gives nan
            phase = np.where(mag > 0, np.exp(1j * np.angle(v))[:, None], 0.0)
            out = np.where(mag > 0, np.exp(lm), 0.0)
            if absolute:
                return out
            return phase * out * sgn**ep

        return _weights(ks, gamma, ctx)[:, None] * (scaled(plus, 1.0) + scaled(minus, -1.0))

    return lattice_sum(terms, ctx)


# ----------------------------------------------------------------------------
# derivatives and shifts


def _sample(f, x, j, ctx):
    """``f(q^j x)``; lattice points and lattice functions are matched by index."""
    if isinstance(x, LatticePoint):
        p = x.shifted(j)
        if isinstance(f, (LatticeFunction, DiscreteDelta)):
            if isinstance(f, DiscreteDelta):
                return complex(f.values(p.sign, p.k))
            return f.at(p, ctx)
        return complex(f(p.x(ctx)))
    if isinstance(f, LatticeFunction):
        return f.evaluate(ctx.q**j * np.asarray(x), ctx)
    return np.asarray(f(ctx.q**j * np.asarray(x)), dtype=complex)


def _xvalue(x, ctx):
    return x.x(ctx) if isinstance(x, LatticePoint) else np.asarray(x)


def q_derivative(f, x, ctx: QContext):
    """Single q-difference quotient ``(f(x) - f(qx)) / ((1-q) x)``."""
    xv = _xvalue(x, ctx)
    if np.any(xv == 0):
        raise DomainError("the lattice q-derivative is undefined at x = 0")
    return (_sample(f, x, 0, ctx) - _sample(f, x, 1, ctx)) / ((1 - ctx.q) * xv)


def ryde_weights(n: int, ctx: QContext) -> np.ndarray:
    """Weights of ``f(q^k x)`` in the n-th q-derivative, without the
    ``(1-q)^{-n} x^{-n}`` prefactor."""
    q = ctx.q
    return np.array([(-1) ** k * q_binomial(n, k, ctx) * q ** (-k * (n - k) - k * (k - 1) / 2)
                     for k in range(n + 1)])


def q_derivative_n(f, x, n: int, ctx: QContext):
    """n-th q-derivative from the n+1 samples ``f(q^k x)``, ``0 <= k <= n``."""
    if n < 0:
        raise DomainError("derivative order must be non-negative")
    if n == 0:
        return _sample(f, x, 0, ctx)
    xv = _xvalue(x, ctx)
    if np.any(xv == 0):
        raise DomainError("the lattice q-derivative is undefined at x = 0")
    w = ryde_weights(n, ctx)
    samples = [_sample(f, x, k, ctx) for k in range(n + 1)]
    if np.ndim(samples[0]) == 0:
        acc = complex(math.fsum((wk * s).real for wk, s in zip(w, samples)),
                      math.fsum((wk * s).imag for wk, s in zip(w, samples)))
    else:
        acc = sum(wk * s for wk, s in zip(w, samples))
    return acc / ((1 - ctx.q) ** n * xv**n)


def q_shift(f, p: int, ctx: QContext | None = None):
    """``(Q^p f)(x) = f(q^p x)``.

    On tables and deltas the support moves by ``-p`` lattice steps.
    """
    if p == 0:
        return f
    if isinstance(f, DiscreteDelta):
        return DiscreteDelta(f.sign, f.p - p, f.gamma)
    if isinstance(f, LatticeFunction):
        if f.is_table:
            return LatticeFunction(f.gamma, table={(s, k - p): v for (s, k), v in f.table.items()},
                                   label=f.label)
        if f.index_backed:
            rule = f._index_rule
            return LatticeFunction(f.gamma, index_rule=lambda s, k: rule(s, np.asarray(k) + p),
                                   label=f.label)
        if ctx is None:
            raise DomainError("q_shift of a rule-backed function needs a context")
        rule = f._rule
        scale = ctx.q**p
        return LatticeFunction(f.gamma, lambda x: rule(scale * np.asarray(x)), label=f.label)
    if ctx is None:
        raise DomainError("q_shift of a callable needs a context")
    scale = ctx.q**p
    return lambda x: f(scale * np.asarray(x))


def delta_convolve(d1: DiscreteDelta, d2: DiscreteDelta, x: LatticePoint, ctx: QContext) -> complex:
    """Closed-form value of ``(d1 * d2)(x)`` for two discrete deltas.

    With ``d1 = δ_{εγq^t}``, ``d2 = δ_{ηγq^s}`` and ``x = θγq^l`` the product
    vanishes unless ``θ = η`` and ``l <= s``.
    """
    if not (_same_lattice(d1.gamma, d2.gamma, ctx.q) and _same_lattice(d1.gamma, x.gamma, ctx.q)):
        raise MismatchError("deltas and point must share a lattice")
    gamma = d1.gamma
    shift2 = int(round(math.log(d2.gamma / gamma) / math.log(ctx.q)))
    shiftx = int(round(math.log(x.gamma / gamma) / math.log(ctx.q)))
    q = ctx.q
    eps, t = d1.sign, d1.p
    eta, s = d2.sign, d2.p + shift2
    theta, l = x.sign, x.k + shiftx
    if theta != eta or l > s:
        return 0j
    sign = eta * eps
    n = s - l
    val = (gamma * (1 - q) * q ** ((t + s - l) + n * (t - l)) * sign**n
           * poch(sign * q ** (t - l + 1), math.inf, ctx) / poch(q, n, ctx))
    return complex(val)
