"""Basic q-arithmetic: Pochhammer symbols, q-numbers and q-exponentials.

Every routine takes an explicit :class:`QContext`; there is no module-level
state.  Infinite products stop once ``tail_window`` consecutive factors
differ from 1 by less than ``rel_tol``, and raise
:class:`~qconv.errors.TruncationError` when ``max_terms`` is reached first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, PoleError, TruncationError

__all__ = [
    "QContext",
    "poch",
    "poch_array",
    "q_number",
    "q_factorial",
    "q_binomial",
    "e_q",
    "E_q",
]


@dataclass(frozen=True)
class QContext:
    """Base ``q`` together with the numeric policy used by all algorithms.

    Parameters
    ----------
    q : float
        Base, strictly inside (0, 1).
    rel_tol : float
        Relative tolerance used for truncating infinite sums and products.
    max_terms : int
        Hard cap on the number of terms of any infinite sum or product.
    tail_window : int
        Number of consecutive negligible terms required before truncating.
    order : int
        Default truncation order for series representations.
    """

    q: float
    rel_tol: float = 1e-12
    max_terms: int = 512
    tail_window: int = 8
    order: int = 32

    def __post_init__(self):
        q = float(self.q)
        if not 0.0 < q < 1.0:
            raise DomainError(f"q must lie in (0, 1), got {self.q!r}")
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if int(self.max_terms) < 16:
            raise DomainError("max_terms must be at least 16")
        if int(self.tail_window) < 1:
            raise DomainError("tail_window must be positive")
        if int(self.order) < 1:
            raise DomainError("order must be positive")
        object.__setattr__(self, "q", q)

    def with_base(self, base: float) -> "QContext":
        """Same policy, different base (e.g. ``q**2``)."""
        return replace(self, q=base)

    def with_order(self, order: int) -> "QContext":
        return replace(self, order=order)


def _base(ctx: QContext, base):
    return ctx.q if base is None else float(base)


def poch(a, k, ctx: QContext, base=None) -> complex:
    """``(a; base)_k`` for a non-negative integer ``k`` or ``k = math.inf``.

    ``base`` defaults to ``ctx.q``.
    """
    b = _base(ctx, base)
    a = complex(a)
    if k is None or k == math.inf:
        prod = 1.0 + 0.0j
        small = 0
        for j in range(ctx.max_terms):
            t = a * b**j
            if t == 1.0:
                return 0.0j
            prod *= 1.0 - t
            small = small + 1 if abs(t) < ctx.rel_tol else 0
            if small >= ctx.tail_window:
                return prod
        raise TruncationError(
            f"infinite product (a;q) with |a|={abs(a):.3g} did not converge "
            f"within {ctx.max_terms} factors"
        )
    k = int(k)
    if k < 0:
        raise DomainError("poch needs k >= 0")
    prod = 1.0 + 0.0j
    for j in range(k):
        prod *= 1.0 - a * b**j
    return prod


def poch_array(a, n: int, ctx: QContext, base=None) -> np.ndarray:
    """Vector ``[(a; base)_0, ..., (a; base)_n]`` of finite products."""
    b = _base(ctx, base)
    out = np.empty(n + 1, dtype=complex)
    out[0] = 1.0
    for j in range(n):
        out[j + 1] = out[j] * (1.0 - a * b**j)
    return out


def q_number(k, ctx: QContext, base=None) -> float:
    """``[k]_q = (1 - q^k) / (1 - q)``."""
    b = _base(ctx, base)
    return (1.0 - b**k) / (1.0 - b)


def q_factorial(k: int, ctx: QContext, base=None) -> float:
    """``[k]_q! = (q;q)_k / (1 - q)^k``."""
    if k < 0:
        raise DomainError("q_factorial needs k >= 0")
    b = _base(ctx, base)
    out = 1.0
    for j in range(1, k + 1):
        out *= (1.0 - b**j) / (1.0 - b)
    return out


def q_binomial(n: int, k: int, ctx: QContext, base=None) -> float:
    """Gaussian binomial coefficient ``(q;q)_n / ((q;q)_k (q;q)_{n-k})``."""
    if not 0 <= k <= n:
        raise DomainError(f"q_binomial needs 0 <= k <= n, got n={n}, k={k}")
    b = _base(ctx, base)
    k = min(k, n - k)
    out = 1.0
    for j in range(k):
        out *= (1.0 - b ** (n - j)) / (1.0 - b ** (j + 1))
    return out


def e_q(x, ctx: QContext, base=None) -> complex:
    """Small q-exponential ``1 / (x; q)_inf``, valid away from its poles."""
    b = _base(ctx, base)
    x = complex(x)
    j_max = ctx.max_terms
    for j in range(j_max):
        t = x * b**j
        if abs(t) < ctx.rel_tol:
            break
        if abs(1.0 - t) < ctx.rel_tol:
            raise PoleError(f"e_q has a pole at x = q^-{j}; got x={x}")
    return 1.0 / poch(x, math.inf, ctx, base=b)


def E_q(x, ctx: QContext, base=None) -> complex:
    """Big q-exponential ``(-x; q)_inf`` (entire)."""
    return poch(-complex(x), math.inf, ctx, base=base)
