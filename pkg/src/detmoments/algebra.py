"""Exact Gaussian-rational scalars and sparse polynomials in moment symbols.

Polynomials live over a fixed, closed registry of symbols. Monomials are
packed into a single Python int (16 bits of exponent per registry slot) so
that monomial multiplication is one integer addition. Coefficients are kept
as two dicts of ``gmpy2.mpq`` (real and imaginary parts).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from gmpy2 import mpq


class AlgebraError(ValueError):
    pass


# ---------------------------------------------------------------- scalars

def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if type(x).__name__ == "mpq":
        n, d = x.as_integer_ratio()
        return Fraction(int(n), int(d))
    if type(x).__name__ == "mpz":
        return Fraction(int(x))
    raise AlgebraError(f"cannot convert {x!r} to an exact rational")


@dataclass(frozen=True)
class GaussianRational:
    """An element re + i*im of Q[i], always in lowest terms."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _to_fraction(self.re))
        object.__setattr__(self, "im", _to_fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise AlgebraError("floating complex values are not exact")
        if isinstance(x, float):
            raise AlgebraError("floats are not exact; pass a Fraction or a string")
        if isinstance(x, Mapping):
            return cls.from_json(x)
        return cls(_to_fraction(x), Fraction(0))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except AlgebraError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except AlgebraError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except AlgebraError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except AlgebraError:
            return NotImplemented
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero in Q[i]")
        num = self * o.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return GaussianRational(1) / (self ** (-e))
        out = GaussianRational(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except AlgebraError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, obj) -> "GaussianRational":
        if isinstance(obj, Mapping):
            try:
                return cls(Fraction(str(obj.get("re", "0"))), Fraction(str(obj.get("im", "0"))))
            except (ValueError, ZeroDivisionError) as exc:
                raise AlgebraError(f"bad scalar {obj!r}") from exc
        if isinstance(obj, (str, int)):
            try:
                return cls(Fraction(obj))
            except (ValueError, ZeroDivisionError) as exc:
                raise AlgebraError(f"bad scalar {obj!r}") from exc
        raise AlgebraError(f"bad scalar {obj!r}")

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = "I" if abs(self.im) == 1 else f"{abs(self.im)}*I"
        if self.re == 0:
            return im if self.im > 0 else "-" + im
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {im})"

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"


# ---------------------------------------------------------------- symbols

_MAX_INDEX = {"m": 6, "mu": 6, "nu": 6, "kappa": 4, "a": 2, "c": 2}
_LAMBDA_MAX = 4
KINDS = ("m", "mu", "nu", "kappa", "lambda", "a", "c")


def _allowed_indices():
    out = []
    for kind in KINDS:
        if kind == "lambda":
            for tot in range(1, _LAMBDA_MAX + 1):
                for p in range(tot, -1, -1):
                    out.append((kind, (p, tot - p)))
        else:
            for q in range(1, _MAX_INDEX[kind] + 1):
                out.append((kind, (q,)))
    return out


_ALLOWED = _allowed_indices()
_ALLOWED_SET = frozenset(_ALLOWED)
_NAME_RE = re.compile(r"^(m|mu|nu|kappa|lambda|a|c)(\d+)$")


@dataclass(frozen=True)
class Symbol:
    """A moment symbol such as mu2, kappa4, lambda21 or the shift a1."""

    kind: str
    index: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.index)
        object.__setattr__(self, "index", idx)
        if (self.kind, idx) not in _ALLOWED_SET:
            raise AlgebraError(f"symbol {self.kind}{''.join(map(str, idx))} is outside the registry")

    @property
    def name(self) -> str:
        return self.kind + "".join(str(i) for i in self.index)

    @classmethod
    def parse(cls, name: str) -> "Symbol":
        if isinstance(name, Symbol):
            return name
        m = _NAME_RE.match(name.strip())
        if not m:
            raise AlgebraError(f"unknown symbol name {name!r}")
        kind, digits = m.groups()
        if kind == "lambda":
            if len(digits) != 2:
                raise AlgebraError(f"lambda symbols take two digit indices, got {name!r}")
            return cls(kind, (int(digits[0]), int(digits[1])))
        return cls(kind, (int(digits),))

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"Symbol({self.name})"


REGISTRY: tuple = tuple(Symbol(k, i) for k, i in _ALLOWED)
_POS = {s: n for n, s in enumerate(REGISTRY)}
_NVARS = len(REGISTRY)
_BITS = 16
_EMASK = (1 << _BITS) - 1


def position(s: Symbol) -> int:
    return _POS[s]


def _unpack(m: int) -> list:
    """Monomial int -> list of (position, exponent) with nonzero exponents."""
    out = []
    pos = 0
    while m:
        e = m & _EMASK
        if e:
            out.append((pos, e))
        m >>= _BITS
        pos += 1
    return out


def _pack(exps: Iterable) -> int:
    m = 0
    for pos, e in exps:
        if e < 0 or e > _EMASK:
            raise AlgebraError("exponent out of range")
        m += e << (_BITS * pos)
    return m


def _exponent(m: int, pos: int) -> int:
    return (m >> (_BITS * pos)) & _EMASK


def _degree(m: int) -> int:
    return sum(e for _, e in _unpack(m))


def _sort_key(m: int):
    # graded, then lexicographic in registry order (earlier symbols first)
    vec = [0] * _NVARS
    for pos, e in _unpack(m):
        vec[pos] = e
    return (-sum(vec), [-e for e in vec])


# lambda_pq <-> lambda_qp, used by conjugation
_CONJ_PERM = [_POS[Symbol("lambda", (s.index[1], s.index[0]))] if s.kind == "lambda" else n
              for n, s in enumerate(REGISTRY)]


# ------------------------------------------------------------ polynomials

Scalar = Union[int, Fraction, GaussianRational]


def _split_scalar(x):
    """Scalar -> (real mpq, imag mpq)."""
    if isinstance(x, int):
        return mpq(x), mpq(0)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator), mpq(0)
    if isinstance(x, GaussianRational):
        return (mpq(x.re.numerator, x.re.denominator),
                mpq(x.im.numerator, x.im.denominator))
    if type(x).__name__ in ("mpq", "mpz"):
        return mpq(x), mpq(0)
    if isinstance(x, str):
        f = Fraction(x)
        return mpq(f.numerator, f.denominator), mpq(0)
    raise AlgebraError(f"not an exact scalar: {x!r}")


def _frac(q) -> Fraction:
    n, d = q.as_integer_ratio()
    return Fraction(int(n), int(d))


def _addmul(out: dict, x: dict, y: dict, scale) -> None:
    """out += scale * x * y over Q (dict form)."""
    if len(x) > len(y):
        x, y = y, x
    get = out.get
    one = scale == 1
    for mx, cx in x.items():
        s = cx if one else cx * scale
        for my, cy in y.items():
            m = mx + my
            out[m] = get(m, 0) + s * cy


def _addscaled(out: dict, x: dict, scale) -> None:
    get = out.get
    for m, c in x.items():
        out[m] = get(m, 0) + c * scale


def _clean(d: dict) -> dict:
    return {m: c for m, c in d.items() if c}


class MomentPolynomial:
    """Immutable sparse polynomial over Q[i] in registry symbols."""

    __slots__ = ("_re", "_im", "_hash")

    def __init__(self, terms=None):
        self._re = {}
        self._im = {}
        self._hash = None
        if terms is None:
            return
        if isinstance(terms, Mapping):
            terms = terms.items()
        for mono, coeff in terms:
            m = self._mono_from(mono)
            cr, ci = _split_scalar(coeff)
            if cr:
                self._re[m] = self._re.get(m, 0) + cr
            if ci:
                self._im[m] = self._im.get(m, 0) + ci
        self._re = _clean(self._re)
        self._im = _clean(self._im)

    @staticmethod
    def _mono_from(mono) -> int:
        if isinstance(mono, int):
            return mono
        if isinstance(mono, Mapping):
            mono = mono.items()
        exps = {}
        for s, e in mono:
            p = _POS[Symbol.parse(s) if isinstance(s, str) else s]
            exps[p] = exps.get(p, 0) + int(e)
        return _pack(exps.items())

    @classmethod
    def _raw(cls, re_part: dict, im_part: dict) -> "MomentPolynomial":
        p = cls.__new__(cls)
        p._re = re_part
        p._im = im_part
        p._hash = None
        return p

    # constructors
    @classmethod
    def constant(cls, c) -> "MomentPolynomial":
        if isinstance(c, MomentPolynomial):
            return c
        cr, ci = _split_scalar(c)
        return cls._raw({0: cr} if cr else {}, {0: ci} if ci else {})

    @classmethod
    def symbol(cls, s) -> "MomentPolynomial":
        if isinstance(s, str):
            s = Symbol.parse(s)
        return cls._raw({1 << (_BITS * _POS[s]): mpq(1)}, {})

    # inspection
    def is_zero(self) -> bool:
        return not self._re and not self._im

    def __bool__(self):
        return not self.is_zero()

    def is_constant(self) -> bool:
        return all(m == 0 for m in self._re) and all(m == 0 for m in self._im)

    def constant_term(self) -> GaussianRational:
        return GaussianRational(_frac(self._re.get(0, mpq(0))), _frac(self._im.get(0, mpq(0))))

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise AlgebraError(f"polynomial is not constant: {self}")
        return self.constant_term()

    def is_real(self) -> bool:
        return not self._im

    def __len__(self):
        return len(set(self._re) | set(self._im))

    def _monomials(self):
        return sorted(set(self._re) | set(self._im), key=_sort_key)

    def terms(self) -> Iterator[tuple]:
        """Yield (exponent dict keyed by Symbol, GaussianRational) in canonical order."""
        for m in self._monomials():
            coeff = GaussianRational(_frac(self._re.get(m, mpq(0))), _frac(self._im.get(m, mpq(0))))
            yield {REGISTRY[p]: e for p, e in _unpack(m)}, coeff

    def coefficient(self, monomial) -> GaussianRational:
        m = self._mono_from(monomial)
        return GaussianRational(_frac(self._re.get(m, mpq(0))), _frac(self._im.get(m, mpq(0))))

    def symbols(self) -> set:
        acc = 0
        for m in self._re:
            acc |= m
        for m in self._im:
            acc |= m
        out = set()
        for p in range(_NVARS):
            if (acc >> (_BITS * p)) & _EMASK:
                out.add(REGISTRY[p])
        return out

    def degree(self) -> int:
        ms = set(self._re) | set(self._im)
        return max((_degree(m) for m in ms), default=0)

    def degree_in(self, s) -> int:
        p = _POS[Symbol.parse(s) if isinstance(s, str) else s]
        ms = set(self._re) | set(self._im)
        return max((_exponent(m, p) for m in ms), default=0)

    # arithmetic
    @staticmethod
    def _coerce(x) -> "MomentPolynomial":
        if isinstance(x, MomentPolynomial):
            return x
        return MomentPolynomial.constant(x)

    def __neg__(self):
        return MomentPolynomial._raw({m: -c for m, c in self._re.items()},
                                     {m: -c for m, c in self._im.items()})

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except AlgebraError:
            return NotImplemented
        re_ = dict(self._re)
        im_ = dict(self._im)
        _addscaled(re_, o._re, 1)
        _addscaled(im_, o._im, 1)
        return MomentPolynomial._raw(_clean(re_), _clean(im_))

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except AlgebraError:
            return NotImplemented
        re_ = dict(self._re)
        im_ = dict(self._im)
        _addscaled(re_, o._re, -1)
        _addscaled(im_, o._im, -1)
        return MomentPolynomial._raw(_clean(re_), _clean(im_))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, MomentPolynomial):
            return combination([(1, self, other)])
        try:
            sr, si = _split_scalar(other)
        except AlgebraError:
            return NotImplemented
        return self._scale(sr, si)

    __rmul__ = __mul__

    def _scale(self, sr, si) -> "MomentPolynomial":
        re_, im_ = {}, {}
        if sr:
            _addscaled(re_, self._re, sr)
            _addscaled(im_, self._im, sr)
        if si:
            _addscaled(re_, self._im, -si)
            _addscaled(im_, self._re, si)
        return MomentPolynomial._raw(_clean(re_), _clean(im_))

    def __truediv__(self, other):
        if isinstance(other, MomentPolynomial):
            if not other.is_constant():
                raise AlgebraError("division only by constants")
            other = other.constant_value()
        d = GaussianRational.coerce(other)
        return self * (GaussianRational(1) / d)

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise AlgebraError("polynomial powers must be non-negative integers")
        out = ONE
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, MomentPolynomial):
            try:
                other = self._coerce(other)
            except AlgebraError:
                return NotImplemented
        return self._re == other._re and self._im == other._im

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self._re.items()), frozenset(self._im.items())))
        return self._hash

    # transformations
    def conjugate(self) -> "MomentPolynomial":
        """Complex conjugate: conjugate coefficients and swap lambda_pq with lambda_qp."""
        def perm(m):
            return _pack((_CONJ_PERM[p], e) for p, e in _unpack(m))
        re_ = {perm(m): c for m, c in self._re.items()}
        im_ = {perm(m): -c for m, c in self._im.items()}
        return MomentPolynomial._raw(re_, im_)

    def substitute(self, bindings: Mapping) -> "MomentPolynomial":
        """Simultaneously replace symbols by polynomials or scalars."""
        if not bindings:
            return self
        b = {}
        for k, v in bindings.items():
            s = Symbol.parse(k) if isinstance(k, str) else k
            b[_POS[s]] = MomentPolynomial._coerce(v)
        keys = set(b)
        used = set()
        for v in b.values():
            used |= {_POS[s] for s in v.symbols()}
        if used & keys:
            return self._substitute_simultaneous(b)
        out = self
        for p, val in sorted(b.items()):
            out = out._substitute_one(p, val)
        return out

    def _substitute_one(self, pos: int, val: "MomentPolynomial") -> "MomentPolynomial":
        shift = _BITS * pos
        groups = {}
        for part, src in ((0, self._re), (1, self._im)):
            for m, c in src.items():
                e = (m >> shift) & _EMASK
                if e:
                    g = groups.setdefault(e, ({}, {}))
                    g[part][m - (e << shift)] = c
        if not groups:
            return self
        re_ = {m: c for m, c in self._re.items() if not (m >> shift) & _EMASK}
        im_ = {m: c for m, c in self._im.items() if not (m >> shift) & _EMASK}
        acc = MomentPolynomial._raw(re_, im_)
        prods = []
        pw = ONE
        last = 0
        for e, (gr, gi) in sorted(groups.items()):
            pw = pw * val ** (e - last)
            last = e
            prods.append((1, MomentPolynomial._raw(gr, gi), pw))
        return acc + combination(prods)

    def _substitute_simultaneous(self, b: dict) -> "MomentPolynomial":
        cache = {}

        def power(p, e):
            key = (p, e)
            if key not in cache:
                cache[key] = b[p] ** e
            return cache[key]

        prods = []
        for part, src in ((0, self._re), (1, self._im)):
            for m, c in src.items():
                rest = 0
                factor = ONE
                for p, e in _unpack(m):
                    if p in b:
                        factor = factor * power(p, e)
                    else:
                        rest += e << (_BITS * p)
                mono = MomentPolynomial._raw({rest: c}, {}) if part == 0 else MomentPolynomial._raw({}, {rest: c})
                prods.append((1, mono, factor))
        return combination(prods)

    def evaluate(self, assignment: Mapping) -> GaussianRational:
        return self.substitute(assignment).constant_value()

    def to_complex(self, assignment: Mapping) -> complex:
        """Numeric evaluation with float or complex values (inexact)."""
        vals = {}
        for k, v in assignment.items():
            s = Symbol.parse(k) if isinstance(k, str) else k
            vals[_POS[s]] = complex(v)
        total = 0j
        for part, src in ((1, self._re), (1j, self._im)):
            for m, c in src.items():
                t = complex(float(c)) * part
                for p, e in _unpack(m):
                    if p not in vals:
                        raise AlgebraError(f"no value for {REGISTRY[p].name}")
                    t *= vals[p] ** e
                total += t
        return total

    # serialization
    def to_json(self) -> list:
        out = []
        for mono, coeff in self.terms():
            out.append({"coeff": coeff.to_json(),
                        "monomial": {s.name: e for s, e in mono.items()}})
        return out

    @classmethod
    def from_json(cls, obj) -> "MomentPolynomial":
        if not isinstance(obj, list):
            raise AlgebraError("polynomial JSON must be a list of terms")
        terms = []
        for t in obj:
            if not isinstance(t, Mapping) or "coeff" not in t:
                raise AlgebraError(f"bad term {t!r}")
            mono = {Symbol.parse(k): int(v) for k, v in t.get("monomial", {}).items()}
            terms.append((mono, GaussianRational.from_json(t["coeff"])))
        return cls(terms)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for mono, coeff in self.terms():
            mstr = "*".join(s.name if e == 1 else f"{s.name}^{e}" for s, e in mono.items())
            if not mstr:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(mstr)
            elif coeff == -1:
                parts.append("-" + mstr)
            else:
                parts.append(f"{coeff}*{mstr}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MomentPolynomial({self})"


def combination(products: Iterable) -> MomentPolynomial:
    """Sum of scale * p * q over an iterable of (scale, p, q).

    ``q`` may be None, meaning the term is just scale * p. Scales must be
    rational (int, Fraction or mpq); the fused loop avoids temporaries.
    """
    re_, im_ = {}, {}
    for scale, p, q in products:
        if isinstance(scale, Fraction):
            scale = mpq(scale.numerator, scale.denominator)
        if q is None:
            _addscaled(re_, p._re, scale)
            _addscaled(im_, p._im, scale)
            continue
        if not p._re and not p._im or not q._re and not q._im:
            continue
        _addmul(re_, p._re, q._re, scale)
        if p._im and q._im:
            _addmul(re_, p._im, q._im, -scale)
        if p._im:
            _addmul(im_, p._im, q._re, scale)
        if q._im:
            _addmul(im_, p._re, q._im, scale)
    return MomentPolynomial._raw(_clean(re_), _clean(im_))


def sym(name) -> MomentPolynomial:
    """Shorthand: the polynomial consisting of a single registry symbol."""
    return MomentPolynomial.symbol(name)


ZERO = MomentPolynomial()
ONE = MomentPolynomial.constant(1)
I = MomentPolynomial.constant(GaussianRational(0, 1))


def poly_add(a, b) -> MomentPolynomial:
    return MomentPolynomial._coerce(a) + b


def poly_mul(a, b) -> MomentPolynomial:
    return MomentPolynomial._coerce(a) * b


def poly_conjugate(p: MomentPolynomial) -> MomentPolynomial:
    return p.conjugate()


def poly_substitute(p: MomentPolynomial, bindings: Mapping) -> MomentPolynomial:
    return p.substitute(bindings)
