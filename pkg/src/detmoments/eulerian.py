"""Eulerian numbers and the loop series built from them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import comb, factorial

from .algebra import ONE, ZERO, MomentPolynomial, Symbol
from .series import DEFAULT_ORDER, EgfSeries


@lru_cache(maxsize=None)
def eulerian_number(n: int, k: int) -> int:
    """Number of permutations of [n] with exactly k ascents.

    Alternating sum over i <= k+1 only: the terms with a negative base
    (k+1-i)^n belong to the truncated-power convention and are zero.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if k < 0 or (n > 0 and k >= n) or (n == 0 and k != 0):
        return 0
    return sum((-1) ** i * comb(n + 1, i) * (k + 1 - i) ** n for i in range(k + 2))


def eulerian_polynomial(n: int) -> tuple:
    """Coefficients (by power of u) of sum_k A(n,k) u^k."""
    if n == 0:
        return (1,)
    return tuple(eulerian_number(n, k) for k in range(n))


def ascents(perm) -> int:
    return sum(1 for a, b in zip(perm, perm[1:]) if a < b)


def eulerian_by_ascents(n: int) -> tuple:
    """Row n counted directly over all permutations (slow, for checking)."""
    if n == 0:
        return (1,)
    row = [0] * n
    for p in permutations(range(n)):
        row[ascents(p)] += 1
    return tuple(row)


@dataclass(frozen=True)
class EulerianTable:
    n_max: int
    rows: tuple

    @classmethod
    def build(cls, n_max: int) -> "EulerianTable":
        return cls(n_max, tuple(eulerian_polynomial(n) for n in range(n_max + 1)))

    def row_sums_ok(self) -> bool:
        return all(sum(r) == factorial(n) for n, r in enumerate(self.rows))

    def symmetric(self) -> bool:
        return all(r == r[::-1] for r in self.rows)


def _poly(x) -> MomentPolynomial:
    if isinstance(x, MomentPolynomial):
        return x
    if isinstance(x, (Symbol, str)):
        return MomentPolynomial.symbol(x)
    return MomentPolynomial.constant(x)


def b_series(lam, lam_prime, sign: str = "positive", order: int = DEFAULT_ORDER) -> EgfSeries:
    """Homogenized Eulerian loop series.

    positive:  B(lam/lam', lam' t), EGF coefficient of t^n is
               sum_k A(n-1,k) lam^(k+1) lam'^(n-1-k) for n >= 3.
    negative:  -B(lam/lam', -lam' t), i.e. the same with an extra -(-1)^n.
    """
    if sign not in ("positive", "negative"):
        raise ValueError("sign must be 'positive' or 'negative'")
    x, y = _poly(lam), _poly(lam_prime)
    xp, yp = [ONE], [ONE]
    for _ in range(order):
        xp.append(xp[-1] * x)
        yp.append(yp[-1] * y)
    cs = [ZERO] * (order + 1)
    for n in range(3, order + 1):
        c = ZERO
        for k in range(n - 1):
            a = eulerian_number(n - 1, k)
            if a:
                c = c + xp[k + 1] * yp[n - 1 - k] * a
        cs[n] = c if sign == "positive" else (-c if n % 2 == 0 else c)
    return EgfSeries(cs, order)


def t_g_series(delta: MomentPolynomial, order: int) -> EgfSeries:
    # t*g(delta t) = (e^{delta t} - 1)/delta, whose EGF coefficients are delta^(n-1)
    cs = [ZERO]
    pw = ONE
    for _ in range(order):
        cs.append(pw)
        pw = pw * delta
    return EgfSeries(cs, order)


def exp_ratio_series(lam, delta_lhs, delta_rhs, kind: str = "prefactor",
                     order: int = DEFAULT_ORDER) -> EgfSeries:
    """Series free of the removable singularity at delta_lhs = delta_rhs.

    With D = delta_lhs - delta_rhs and g(x) = (e^x - 1)/x:
      prefactor: 1 / (1 - lam t g(D t))
      marked:    t g(D t) / (1 - lam t g(D t))
    For D != 0 the prefactor is D / (l' - l e^{D t}) with l = lam, l' = lam + D.
    """
    d = _poly(delta_lhs) - _poly(delta_rhs)
    tg = t_g_series(d, order)
    pref = (EgfSeries.one(order) - tg * _poly(lam)).inverse()
    if kind == "prefactor":
        return pref
    if kind == "marked":
        return tg * pref
    raise ValueError("kind must be 'prefactor' or 'marked'")


def b_closed_form(lam, lam_prime, order: int = DEFAULT_ORDER) -> EgfSeries:
    """-log(1 - lam t g((lam'-lam) t)) - lam t - lam lam' t^2 / 2."""
    x, y = _poly(lam), _poly(lam_prime)
    pref = exp_ratio_series(x, y, x, "prefactor", order)
    corr = EgfSeries([ZERO, x, x * y], order)
    return pref.log() - corr
