"""Truncated exponential generating functions with polynomial coefficients.

A series of order N stores c_0..c_N where the function is sum c_n t^n / n!.
Products use binomial convolution, so every recurrence below stays in
integer arithmetic on the coefficients.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Callable, Mapping, Sequence

from .algebra import ONE, ZERO, AlgebraError, GaussianRational, MomentPolynomial, combination

DEFAULT_ORDER = 12


class SeriesError(ValueError):
    pass


def _poly(x) -> MomentPolynomial:
    if isinstance(x, MomentPolynomial):
        return x
    return MomentPolynomial.constant(x)


class EgfSeries:
    """Immutable truncated EGF; ``coeffs[n]`` is n! times the t^n coefficient."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence, order: int | None = None):
        cs = [_poly(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise SeriesError("order must be non-negative")
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        cs.extend([ZERO] * (order + 1 - len(cs)))
        self.order = order
        self.coeffs = tuple(cs)

    # constructors
    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "EgfSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> "EgfSeries":
        return cls([ONE], order)

    @classmethod
    def from_ordinary(cls, raw: Mapping | Sequence, order: int = DEFAULT_ORDER) -> "EgfSeries":
        """Build from ordinary coefficients a_n (the t^n coefficient)."""
        items = raw.items() if isinstance(raw, Mapping) else enumerate(raw)
        cs = [ZERO] * (order + 1)
        for n, a in items:
            if n <= order:
                cs[n] = cs[n] + _poly(a) * factorial(n)
        return cls(cs, order)

    @classmethod
    def monomial(cls, coeff, power: int, order: int = DEFAULT_ORDER) -> "EgfSeries":
        """coeff * t^power."""
        return cls.from_ordinary({power: coeff}, order)

    # access
    def egf(self, n: int) -> MomentPolynomial:
        return self.coeffs[n] if n <= self.order else ZERO

    def ordinary(self, n: int) -> MomentPolynomial:
        """The t^n coefficient c_n / n!."""
        return self.egf(n) / factorial(n)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return self.order + 1

    def _check(self, other: "EgfSeries"):
        if not isinstance(other, EgfSeries):
            raise SeriesError("expected an EgfSeries")
        if other.order != self.order:
            raise SeriesError(f"order mismatch: {self.order} vs {other.order}")

    # ring operations
    def __add__(self, other):
        if not isinstance(other, EgfSeries):
            other = EgfSeries([_poly(other)], self.order)
        self._check(other)
        return EgfSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return EgfSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, EgfSeries):
            other = EgfSeries([_poly(other)], self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, EgfSeries):
            self._check(other)
            a, b = self.coeffs, other.coeffs
            nz_a = [j for j, x in enumerate(a) if x]
            out = []
            for n in range(self.order + 1):
                out.append(combination((comb(n, j), a[j], b[n - j]) for j in nz_a
                                       if j <= n and b[n - j]))
            return EgfSeries(out, self.order)
        try:
            p = _poly(other)
        except AlgebraError:
            return NotImplemented
        return EgfSeries([c * p for c in self.coeffs], self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, EgfSeries):
            return self * other.inverse()
        return self * (GaussianRational(1) / GaussianRational.coerce(other))

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise SeriesError("series powers must be non-negative integers; use power()")
        out = EgfSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, EgfSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    # analytic operations
    def exp(self) -> "EgfSeries":
        """exp(S) for S with zero constant term."""
        s = self.coeffs
        if s[0]:
            raise SeriesError("exp needs a zero constant term")
        f = [ONE]
        for n in range(self.order):
            f.append(combination((comb(n, j), s[j + 1], f[n - j]) for j in range(n + 1) if s[j + 1]))
        return EgfSeries(f, self.order)

    def log(self) -> "EgfSeries":
        """log(F) for F with constant term 1."""
        f = self.coeffs
        if f[0] != ONE:
            raise SeriesError("log needs constant term 1")
        s = [ZERO]
        for n in range(self.order):
            rest = combination((comb(n, j), s[j + 1], f[n - j]) for j in range(n) if s[j + 1])
            s.append(f[n + 1] - rest)
        return EgfSeries(s, self.order)

    def inverse(self) -> "EgfSeries":
        """1/F for F with constant term 1."""
        f = self.coeffs
        if f[0] != ONE:
            raise SeriesError("inverse needs constant term 1")
        g = [ONE]
        for n in range(1, self.order + 1):
            g.append(-combination((comb(n, j), f[j], g[n - j]) for j in range(1, n + 1) if f[j]))
        return EgfSeries(g, self.order)

    def power(self, alpha) -> "EgfSeries":
        """F^alpha for rational alpha and F with constant term 1.

        Uses F G' = alpha F' G, which in EGF form gives
        G_{n+1} = alpha sum_j C(n,j) F_{j+1} G_{n-j} - sum_{j>=1} C(n,j) F_j G_{n+1-j}.
        """
        f = self.coeffs
        if f[0] != ONE:
            raise SeriesError("power needs constant term 1")
        alpha = Fraction(alpha)
        g = [ONE]
        for n in range(self.order):
            a = combination((comb(n, j) * alpha, f[j + 1], g[n - j]) for j in range(n + 1) if f[j + 1])
            b = combination((comb(n, j), f[j], g[n + 1 - j]) for j in range(1, n + 1) if f[j])
            g.append(a - b)
        return EgfSeries(g, self.order)

    def inv_sqrt(self) -> "EgfSeries":
        return self.power(Fraction(-1, 2))

    def sqrt(self) -> "EgfSeries":
        return self.power(Fraction(1, 2))

    # structural helpers
    def scale_t(self, factor) -> "EgfSeries":
        """S(factor * t)."""
        f = _poly(factor)
        out, pw = [], ONE
        for c in self.coeffs:
            out.append(c * pw)
            pw = pw * f
        return EgfSeries(out, self.order)

    def negate_t(self) -> "EgfSeries":
        return EgfSeries([c if n % 2 == 0 else -c for n, c in enumerate(self.coeffs)], self.order)

    def times_t(self) -> "EgfSeries":
        return EgfSeries([ZERO] + [self.coeffs[n - 1] * n for n in range(1, self.order + 1)], self.order)

    def valuation(self) -> int:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return self.order + 1

    def truncate(self, order: int) -> "EgfSeries":
        if order > self.order:
            raise SeriesError("cannot raise the order of a truncated series")
        return EgfSeries(self.coeffs[: order + 1], order)

    def map(self, fn: Callable[[MomentPolynomial], MomentPolynomial]) -> "EgfSeries":
        return EgfSeries([fn(c) for c in self.coeffs], self.order)

    def substitute(self, bindings: Mapping) -> "EgfSeries":
        return self.map(lambda c: c.substitute(bindings))

    def conjugate(self) -> "EgfSeries":
        return self.map(lambda c: c.conjugate())

    # serialization
    def to_json(self) -> dict:
        return {"order": self.order, "normalization": "egf",
                "coefficients": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "EgfSeries":
        if not isinstance(obj, Mapping) or obj.get("normalization") != "egf":
            raise SeriesError("series JSON must carry normalization 'egf'")
        cs = [MomentPolynomial.from_json(c) for c in obj["coefficients"]]
        order = int(obj["order"])
        if len(cs) != order + 1:
            raise SeriesError("coefficient count does not match order")
        return cls(cs, order)

    def __repr__(self):
        body = ", ".join(str(c) for c in self.coeffs[:4])
        more = ", ..." if self.order > 3 else ""
        return f"EgfSeries(order={self.order}, [{body}{more}])"


# combinatorial constructions on a class with EGF A (A_0 = 0)

def set_of(a: EgfSeries) -> EgfSeries:
    return a.exp()


def cycles_of(a: EgfSeries) -> EgfSeries:
    """-log(1 - A)."""
    return -((EgfSeries.one(a.order) - a).log())


def sequences_of(a: EgfSeries) -> EgfSeries:
    """1/(1 - A)."""
    return (EgfSeries.one(a.order) - a).inverse()


def cycles_at_least(a: EgfSeries, k: int) -> EgfSeries:
    """Cycles of length >= k: -log(1-A) - sum_{j<k} A^j / j."""
    out = cycles_of(a)
    pw = EgfSeries.one(a.order)
    for j in range(1, k):
        pw = pw * a
        out = out - pw * Fraction(1, j)
    return out


# functional aliases

def series_combine(op: str, a: EgfSeries, b: EgfSeries) -> EgfSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise SeriesError(f"unknown operation {op!r}")


def series_exp(s: EgfSeries) -> EgfSeries:
    return s.exp()


def series_log(s: EgfSeries) -> EgfSeries:
    return s.log()


def series_inverse(s: EgfSeries) -> EgfSeries:
    return s.inverse()


def series_inv_sqrt(s: EgfSeries) -> EgfSeries:
    return s.inv_sqrt()


def egf_coefficient(s: EgfSeries, n: int) -> MomentPolynomial:
    """n! [t^n] s, i.e. the stored EGF coefficient."""
    if n < 0 or n > s.order:
        raise SeriesError(f"coefficient {n} outside order {s.order}")
    return s.coeffs[n]
