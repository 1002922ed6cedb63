"""Ensemble specifications, moment assignments and the specialization maps."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping

from .algebra import (I, ONE, ZERO, AlgebraError, GaussianRational, MomentPolynomial, REGISTRY,
                      Symbol, sym)

FAMILIES = ("symmetric", "wigner", "hermitian")


class EnsembleError(ValueError):
    pass


@dataclass(frozen=True)
class EnsembleSpec:
    """Which matrix family, which moment order k, and the standing constraints."""

    family: str
    k: int
    constraints: tuple = ()
    shift_params: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise EnsembleError(f"unknown family {self.family!r}")
        if self.k not in (1, 2):
            raise EnsembleError("only k = 1 and k = 2 are supported")

    @classmethod
    def default(cls, family: str, k: int) -> "EnsembleSpec":
        if family == "symmetric":
            return cls(family, k, (), False)
        if family == "wigner":
            return cls(family, k, tuple(Symbol.parse(s) for s in ("mu1", "nu1", "kappa1")), True)
        if family == "hermitian":
            if k == 1:
                return cls(family, k, (), False)
            return cls(family, k, tuple(Symbol.parse(s) for s in ("kappa1", "lambda10", "lambda01")), True)
        raise EnsembleError(f"unknown family {family!r}")

    def constraint_map(self) -> dict:
        return {s: ZERO for s in self.constraints}

    def apply_constraints(self, p: MomentPolynomial) -> MomentPolynomial:
        return p.substitute(self.constraint_map()) if self.constraints else p

    def admitted(self) -> frozenset:
        k2 = 2 * self.k
        out = set()
        for s in REGISTRY:
            if self.family == "symmetric":
                ok = s.kind in ("m", "mu") and s.index[0] <= k2
            elif self.family == "wigner":
                ok = (s.kind in ("mu", "nu", "kappa") and s.index[0] <= k2) or \
                     (s.kind in ("a", "c") and s.index[0] <= self.k)
            else:
                ok = (s.kind == "lambda" and sum(s.index) <= k2) or \
                     (s.kind == "kappa" and s.index[0] <= k2) or \
                     (self.shift_params and s.kind in ("a", "c") and s.index[0] <= self.k)
            if ok:
                out.add(s)
        return frozenset(out)

    def shift_symbols(self, r: int):
        """(a_r, c_r) as polynomials, or zeros when the ensemble has no shifts."""
        if not self.shift_params:
            return ZERO, ZERO
        return sym(f"a{r}"), sym(f"c{r}")


@dataclass(frozen=True)
class MomentAssignment:
    """Concrete exact values for some registry symbols."""

    values: Mapping = field(default_factory=dict)

    def __post_init__(self):
        vals = {}
        for k, v in dict(self.values).items():
            s = Symbol.parse(k) if isinstance(k, str) else k
            vals[s] = GaussianRational.coerce(v)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_json(cls, obj: Mapping) -> "MomentAssignment":
        if not isinstance(obj, Mapping):
            raise EnsembleError("assignment JSON must be an object")
        try:
            return cls({Symbol.parse(k): GaussianRational.from_json(v) for k, v in obj.items()})
        except AlgebraError as exc:
            raise EnsembleError(str(exc)) from exc

    def to_json(self) -> dict:
        return {s.name: v.to_json() for s, v in sorted(self.values.items(), key=lambda kv: REGISTRY.index(kv[0]))}

    def bindings(self) -> dict:
        return {s: MomentPolynomial.constant(v) for s, v in self.values.items()}

    def get(self, name, default=None):
        return self.values.get(Symbol.parse(name) if isinstance(name, str) else name, default)


def validate_assignment(spec: EnsembleSpec, asg: MomentAssignment) -> list:
    """Return a list of human-readable violations; empty means consistent."""
    problems = []
    admitted = spec.admitted()
    for s, v in asg.values.items():
        if s not in admitted:
            problems.append(f"{s.name} is not a parameter of the {spec.family} k={spec.k} ensemble")
        if s in spec.constraints and v != 0:
            problems.append(f"{s.name} is constrained to 0 but assigned {v}")
        if spec.family in ("symmetric", "wigner") and not v.is_real():
            problems.append(f"{s.name} must be real for a real-valued ensemble")
        if spec.family == "hermitian":
            if s.kind in ("kappa", "a") and not v.is_real():
                problems.append(f"{s.name} must be real")
            if s.kind == "lambda":
                p, q = s.index
                if p == q and not v.is_real():
                    problems.append(f"{s.name} must be real")
                elif p < q:
                    mate = asg.values.get(Symbol("lambda", (q, p)))
                    if mate is not None and mate != v.conjugate():
                        problems.append(f"lambda{q}{p} must be the conjugate of {s.name}")
    return problems


# ------------------------------------------------------- specialization maps

def _mu(q):
    return ONE if q == 0 else (ZERO if q == 1 else sym(f"mu{q}"))


def _nu(q):
    return ONE if q == 0 else (ZERO if q == 1 else sym(f"nu{q}"))


def _binom(n, r):
    return comb(n, r) if 0 <= r <= n else 0


def wigner_lambda_map(p: int, q: int) -> MomentPolynomial:
    """E[Z^p conj(Z)^q] for Z = X + iY with independent centred X, Y.

    Valid for p + q <= 6 (the registry holds mu_q, nu_q up to q = 6).
    """
    if p < 0 or q < 0 or p + q > 6:
        raise EnsembleError("wigner_lambda_map needs p, q >= 0 and p + q <= 6")
    n = p + q
    out = ZERO
    for k in range(n + 1):
        inner = sum(_binom(p, k - j) * _binom(q, j) * (-1) ** (q - j) for j in range(q + 1))
        if not inner:
            continue
        term = _mu(k) * _nu(n - k)
        if term:
            out = out + term * (I ** (n - k)) * inner
    return out


def wigner_substitution() -> dict:
    """Bindings sending every registry lambda_pq to its Wigner value."""
    return {s: wigner_lambda_map(*s.index) for s in REGISTRY if s.kind == "lambda"}


def symmetric_substitution() -> dict:
    """Wigner -> real symmetric: Y = 0, diagonal law = off-diagonal law, shift m1 J."""
    b = {}
    for q in range(1, 7):
        b[Symbol("nu", (q,))] = ZERO
    for q in range(1, 5):
        b[Symbol("kappa", (q,))] = sym(f"mu{q}")
    for r in (1, 2):
        b[Symbol("a", (r,))] = sym("m1")
        b[Symbol("c", (r,))] = ZERO
    return b


def symmetric_from_wigner(p: MomentPolynomial) -> MomentPolynomial:
    return p.substitute(symmetric_substitution())


def raw_to_centered_bindings(max_q: int = 6) -> dict:
    """m_q -> sum_j C(q,j) m1^(q-j) mu_j, with mu_0 = 1, mu_1 = 0."""
    m1 = sym("m1")
    b = {}
    for q in range(2, max_q + 1):
        b[Symbol("m", (q,))] = sum((_mu(j) * m1 ** (q - j) * comb(q, j) for j in range(q + 1)), ZERO)
    return b


def centered_to_raw_bindings(max_q: int = 6) -> dict:
    """mu_q -> sum_j C(q,j) m_j (-m1)^(q-j), with m_0 = 1."""
    m1 = sym("m1")
    b = {Symbol("mu", (1,)): ZERO}
    for q in range(2, max_q + 1):
        tot = ZERO
        for j in range(q + 1):
            mj = ONE if j == 0 else sym(f"m{j}")
            tot = tot + mj * (-m1) ** (q - j) * comb(q, j)
        b[Symbol("mu", (q,))] = tot
    return b


def raw_to_centered(p: MomentPolynomial) -> MomentPolynomial:
    return p.substitute(raw_to_centered_bindings())


def centered_to_raw(p: MomentPolynomial) -> MomentPolynomial:
    return p.substitute(centered_to_raw_bindings())
