"""Closed-form EGFs for first and second determinant moments.

Each builder assembles its series from the connected structures of the
permutation-table multigraph (fixed points, mussels, loops, necklaces,
chains, dumbbells and their marked variants) using Set/Cycle constructions.
Independent literature and closed-form expressions live in
``reference_formula`` and are only used for cross-checking.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .algebra import ONE, ZERO, MomentPolynomial, Symbol, sym
from .ensembles import (EnsembleSpec, MomentAssignment, centered_to_raw_bindings,
                        symmetric_substitution, wigner_substitution)
from .eulerian import b_series, exp_ratio_series, t_g_series
from .series import DEFAULT_ORDER, EgfSeries, cycles_at_least


class CatalogError(ValueError):
    pass


@dataclass
class CatalogEntry:
    """A moment EGF, its split by number of marked rows, and its structures.

    ``structures`` maps (tag, marks) to the EGF of one connected structure
    of that kind; it is what the census compares against.
    """

    family: str
    k: int
    order: int
    series: EgfSeries
    components: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)

    @property
    def spec(self) -> EnsembleSpec:
        return EnsembleSpec.default(self.family, self.k)

    def component(self, r: int) -> EgfSeries:
        if r not in self.components:
            raise CatalogError(f"no component with {r} marked rows")
        return self.components[r]


class _Ctx:
    """Atoms for one build: symbols (possibly pre-evaluated) and t-monomials."""

    def __init__(self, order: int, assignment=None):
        if order < 0:
            raise CatalogError("order must be non-negative")
        self.order = order
        if isinstance(assignment, MomentAssignment):
            assignment = assignment.bindings()
        self.bindings = {(Symbol.parse(k) if isinstance(k, str) else k): v
                         for k, v in (assignment or {}).items()}

    def v(self, name: str) -> MomentPolynomial:
        p = sym(name)
        return p.substitute(self.bindings) if self.bindings else p

    def t(self, coeff=1, power: int = 1) -> EgfSeries:
        return EgfSeries.monomial(coeff, power, self.order)

    def one(self) -> EgfSeries:
        return EgfSeries.one(self.order)

    def geometric(self, x, power: int = 1) -> EgfSeries:
        """1 / (1 - x t^power)."""
        return (self.one() - self.t(x, power)).inverse()


def _sum(series_list, order):
    out = EgfSeries.zero(order)
    for s in series_list:
        out = out + s
    return out


def _pair_structures(ctx: _Ctx, s, parallel0, parallel2, m3, lam22, kappa2, c1, c2, a1, a2):
    """Connected-structure EGFs shared by the Wigner and Hermitian families."""
    sq = ctx.geometric(s * s, 2)  # 1/(1 - s^2 t^2)
    st = {
        ("fixed_point", 0): ctx.t(c1 * c2 + kappa2, 1),
        ("mussel", 0): ctx.t(lam22 * Fraction(1, 2), 2),
        ("parallel_loop", 0): parallel0,
        ("antiparallel_loop", 0): cycles_at_least(ctx.t(s), 3),
        ("necklace", 0): cycles_at_least(ctx.t(s * s, 2), 2) * Fraction(1, 2),
        ("chain", 0): ctx.t(c1 * c2 * s * s, 3) * sq,
        ("dumbbell", 0): ctx.t(-(c1 * c1 + c2 * c2) * s * Fraction(1, 2), 2) * sq,
        ("mussel", 1): ctx.t((a1 + a2) * m3, 2),
        ("chain", 1): ctx.t(a1 * c2 + a2 * c1, 1) * sq,
        ("dumbbell", 1): ctx.t(-s * (a1 * c1 + a2 * c2), 2) * sq,
        ("chain", 2): ctx.t(a1 * a2, 1) * sq,
        ("antiparallel_loop", 2): (ctx.t(1, 1) * ctx.geometric(s) - ctx.t(1, 1)) * (a1 * a2),
        ("parallel_loop", 2): parallel2 * (a1 * a2),
    }
    # one-marked pieces split by which row carries the mark
    p1 = ctx.t(m3, 2) + ctx.t(c2, 1) * sq - ctx.t(c1 * s, 2) * sq
    p2 = ctx.t(m3, 2) + ctx.t(c1, 1) * sq - ctx.t(c2 * s, 2) * sq
    return st, p1, p2


def _assemble(ctx: _Ctx, st: dict, p1, p2, a1, a2):
    zero_marked = _sum([v for (tag, m), v in sorted(st.items()) if m == 0], ctx.order)
    h0 = zero_marked.exp()
    h1 = (p1 * a1 + p2 * a2) * h0
    two = _sum([v for (tag, m), v in sorted(st.items()) if m == 2], ctx.order)
    h2 = (two + p1 * p2 * (a1 * a2)) * h0
    return h0, h1, h2


# ------------------------------------------------------------------ builders

def _check_k(k):
    if k not in (1, 2):
        raise CatalogError("only k = 1 and k = 2 have closed forms")


def egf_symmetric(k: int, order: int = DEFAULT_ORDER, assignment=None) -> CatalogEntry:
    """Real symmetric matrices with i.i.d. entries of mean m1, in centred moments mu_q."""
    _check_k(k)
    ctx = _Ctx(order, assignment)
    m1, mu2, mu3, mu4 = (ctx.v(n) for n in ("m1", "mu2", "mu3", "mu4"))
    if k == 1:
        # raw-moment multigraph recipe: fixed points, 2-cycles, signed loops
        m2raw = m1 * m1 + mu2
        loops = b_series(m1, m1, "negative", order)
        full = (ctx.t(m1, 1) + ctx.t(-m2raw * Fraction(1, 2), 2) + loops).exp()
        g0 = ctx.t(-mu2 * Fraction(1, 2), 2).exp()
        g1 = ctx.t(m1, 1) * g0
        return CatalogEntry("symmetric", 1, order, full, {0: g0, 1: g1}, {})
    loop = cycles_at_least(ctx.t(mu2), 3)
    st = {
        ("fixed_point", 0): ctx.t(mu2, 1),
        ("mussel", 0): ctx.t(mu4 * Fraction(1, 2), 2),
        ("parallel_loop", 0): loop,
        ("antiparallel_loop", 0): loop,
        ("necklace", 0): cycles_at_least(ctx.t(mu2 * mu2, 2), 2) * Fraction(1, 2),
        ("mussel", 1): ctx.t(m1 * mu3 * 2, 2),
        ("chain", 2): ctx.t(m1 * m1, 1) * ctx.geometric(mu2 * mu2, 2),
        ("antiparallel_loop", 2): (ctx.t(1, 1) * ctx.geometric(mu2) - ctx.t(1, 1)) * (m1 * m1),
        ("parallel_loop", 2): (ctx.t(1, 1) * ctx.geometric(mu2) - ctx.t(1, 1)) * (m1 * m1),
    }
    g0 = ctx.t(mu2, 1).exp() * ctx.t(mu4 * Fraction(1, 2), 2).exp() * (loop.exp() ** 2) \
        * (cycles_at_least(ctx.t(mu2 * mu2, 2), 2) * Fraction(1, 2)).exp()
    g1 = ctx.t(m1 * mu3 * 2, 2) * g0
    bracket = ctx.t(m1 * m1 * mu2 * 2, 2) * ctx.geometric(mu2) \
        + ctx.t(m1 * m1, 1) * ctx.geometric(mu2 * mu2, 2) + ctx.t(m1 * m1 * mu3 * mu3, 4)
    g2 = bracket * g0
    return CatalogEntry("symmetric", 2, order, g0 + g1 + g2, {0: g0, 1: g1, 2: g2}, st)


def egf_wigner(k: int, order: int = DEFAULT_ORDER, assignment=None) -> CatalogEntry:
    """Wigner matrices Z = X + iY with a shift sum_r (a_r J + c_r I)."""
    _check_k(k)
    ctx = _Ctx(order, assignment)
    mu2, nu2 = ctx.v("mu2"), ctx.v("nu2")
    s, d = mu2 + nu2, mu2 - nu2
    if k == 1:
        a1, c1 = ctx.v("a1"), ctx.v("c1")
        h0 = (ctx.t(c1, 1) + ctx.t(-s * Fraction(1, 2), 2)).exp()
        h1 = ctx.t(a1, 1) * h0
        return CatalogEntry("wigner", 1, order, h0 + h1, {0: h0, 1: h1}, {})
    a1, a2, c1, c2 = (ctx.v(n) for n in ("a1", "a2", "c1", "c2"))
    mu3, mu4, nu4, kappa2 = ctx.v("mu3"), ctx.v("mu4"), ctx.v("nu4"), ctx.v("kappa2")
    lam22 = mu4 + mu2 * nu2 * 2 + nu4
    parallel0 = cycles_at_least(ctx.t(d), 3)
    parallel2 = ctx.t(1, 1) * ctx.geometric(d) - ctx.t(1, 1)
    st, p1, p2 = _pair_structures(ctx, s, parallel0, parallel2, mu3, lam22, kappa2, c1, c2, a1, a2)
    h0, h1, h2 = _assemble(ctx, st, p1, p2, a1, a2)
    return CatalogEntry("wigner", 2, order, h0 + h1 + h2, {0: h0, 1: h1, 2: h2}, st)


def egf_hermitian(k: int, order: int = DEFAULT_ORDER, assignment=None) -> CatalogEntry:
    """Hermitian matrices with joint moments lambda_pq = E[Z^p conj(Z)^q]."""
    _check_k(k)
    ctx = _Ctx(order, assignment)
    lam11 = ctx.v("lambda11")
    if k == 1:
        kappa1, l10, l01 = ctx.v("kappa1"), ctx.v("lambda10"), ctx.v("lambda01")
        # 1 + l10 t g((l10 - l01) t), times the correction left over from the loop closed form
        pref = ctx.one() + t_g_series(l10 - l01, order) * l10
        rest = (ctx.t(kappa1 - l10, 1) + ctx.t((l10 * l01 - lam11) * Fraction(1, 2), 2)).exp()
        f1 = pref * rest
        return CatalogEntry("hermitian", 1, order, f1, {0: f1}, {})
    a1, a2, c1, c2 = (ctx.v(n) for n in ("a1", "a2", "c1", "c2"))
    l20, l02, l21, l12 = (ctx.v(n) for n in ("lambda20", "lambda02", "lambda21", "lambda12"))
    lam22, kappa2 = ctx.v("lambda22"), ctx.v("kappa2")
    parallel0 = b_series(l20, l02, "positive", order)
    parallel2 = exp_ratio_series(l20, l02, l20, "marked", order) - ctx.t(1, 1)
    m3 = (l21 + l12) * Fraction(1, 2)
    st, p1, p2 = _pair_structures(ctx, lam11, parallel0, parallel2, m3, lam22, kappa2, c1, c2, a1, a2)
    h0, h1, h2 = _assemble(ctx, st, p1, p2, a1, a2)
    return CatalogEntry("hermitian", 2, order, h0 + h1 + h2, {0: h0, 1: h1, 2: h2}, st)


_BUILDERS = {"symmetric": egf_symmetric, "wigner": egf_wigner, "hermitian": egf_hermitian}


@lru_cache(maxsize=64)
def _cached(family: str, k: int, order: int) -> CatalogEntry:
    return _BUILDERS[family](k, order)


def catalog_entry(family: str, k: int, order: int = DEFAULT_ORDER, assignment=None) -> CatalogEntry:
    """Dispatch by family; symbolic builds are cached."""
    if family not in _BUILDERS:
        raise CatalogError(f"unknown family {family!r}")
    if assignment:
        return _BUILDERS[family](k, order, assignment)
    return _cached(family, k, order)


# ------------------------------------------------------------ specialization

def specialize(series: EgfSeries, source: str, target: str) -> EgfSeries:
    """Push a Hermitian or Wigner series down the chain hermitian -> wigner -> symmetric."""
    chain = ["hermitian", "wigner", "symmetric"]
    if source not in chain or target not in chain or chain.index(target) < chain.index(source):
        raise CatalogError(f"cannot specialize {source} to {target}")
    out = series
    for step in chain[chain.index(source) + 1: chain.index(target) + 1]:
        out = out.substitute(wigner_substitution() if step == "wigner" else symmetric_substitution())
    return out


# --------------------------------------------------------- reference formulas

REFERENCE_NAMES = ("zhurbenko", "goetze_koesters", "wigner_equal_shifts", "wigner_closed",
                   "hermitian_closed", "symmetric_unit_variance")


def reference_formula(name: str, order: int = DEFAULT_ORDER) -> EgfSeries:
    """Literature and closed-form expressions, built by direct series arithmetic."""
    ctx = _Ctx(order)
    t, one, geo = ctx.t, ctx.one(), ctx.geometric
    if name == "zhurbenko":
        # mean-zero symmetric, raw moments m2, m4
        m2, m4 = sym("m2"), sym("m4")
        num = (t((m4 - m2 * m2 * 3) * Fraction(1, 2), 2) + t(-m2, 1)).exp()
        return num * (geo(m2) ** 2) * (one - t(m2 * m2, 2)).inv_sqrt()
    if name == "goetze_koesters":
        k2, k4, c1, c2 = sym("kappa2"), sym("kappa4"), sym("c1"), sym("c2")
        sq = geo(k2 * k2, 2)
        expo = t(c1 * c2, 1) - t((c1 * c1 + c2 * c2) * k2 * Fraction(1, 2), 2) * sq \
            + t(c1 * c2 * k2 * k2, 3) * sq + t((k4 - k2 * k2 * 3) * Fraction(1, 4), 2)
        return expo.exp() * geo(k2) * (one - t(k2 * k2, 2)).inv_sqrt()
    if name in ("wigner_closed", "wigner_equal_shifts"):
        mu2, nu2, mu3, mu4, nu4, k2 = (sym(n) for n in ("mu2", "nu2", "mu3", "mu4", "nu4", "kappa2"))
        a1, a2 = sym("a1"), sym("a2")
        s = mu2 + nu2
        quad = one - t(mu2 * 2, 1) + t(mu2 * mu2 - nu2 * nu2, 2)
        quad_inv = quad.inverse()
        root = (one - t(s * s, 2)).inv_sqrt()
        sq = geo(s * s, 2)
        if name == "wigner_closed":
            c1, c2 = sym("c1"), sym("c2")
            p1 = t(mu3, 2) + t(c2, 1) * sq - t(c1 * s, 2) * sq
            p2 = t(mu3, 2) + t(c1, 1) * sq - t(c2 * s, 2) * sq
            bracket = one + t((a1 + a2) * mu3, 2) + t(a1 * c2 + a2 * c1, 1) * sq \
                - t(s * (a1 * c1 + a2 * c2), 2) * sq \
                + ((t(mu2 * 2, 2) + t((nu2 * nu2 - mu2 * mu2) * 2, 3)) * quad_inv + t(1, 1) * sq + p1 * p2) * (a1 * a2)
            expo = t(c1 * c2 + k2 - mu2 * 2, 1) \
                + t((mu4 - nu2 * nu2 * 3 - mu2 * mu2 * 3 + nu4) * Fraction(1, 2), 2) \
                - t((c1 * c1 + c2 * c2) * s * Fraction(1, 2), 2) * sq + t(c1 * c2 * s * s, 3) * sq
            return bracket * expo.exp() * quad_inv * root
        # c1 = c2 = c, with c written as c1
        c = sym("c1")
        lin = (one + t(s, 1)).inverse()
        bracket = one + (t(mu3, 2) + t(c, 1) * lin) * (a1 + a2) \
            + (t(mu3 * mu3, 4) + t(c * mu3 * 2, 3) * lin + t(c * c, 2) * lin * lin
               + (t(mu2 * 2, 2) + t((nu2 * nu2 - mu2 * mu2) * 2, 3)) * quad_inv + t(1, 1) * sq) * (a1 * a2)
        expo = t(c * c + k2 - mu2 * 2, 1) \
            + t((mu4 - nu2 * nu2 * 3 - mu2 * mu2 * 3 + nu4) * Fraction(1, 2), 2) \
            - t(c * c * s, 2) * lin
        return bracket * expo.exp() * quad_inv * root
    if name == "hermitian_closed":
        l11, l20, l02, l21, l12, l22, k2 = (sym(n) for n in (
            "lambda11", "lambda20", "lambda02", "lambda21", "lambda12", "lambda22", "kappa2"))
        a1, a2, c1, c2 = (sym(n) for n in ("a1", "a2", "c1", "c2"))
        sq = geo(l11 * l11, 2)
        m3 = (l21 + l12) * Fraction(1, 2)
        p1 = t(m3, 2) + t(c2, 1) * sq - t(c1 * l11, 2) * sq
        p2 = t(m3, 2) + t(c1, 1) * sq - t(c2 * l11, 2) * sq
        ratio = exp_ratio_series(l20, l02, l20, "marked", order)
        bracket = one + t((a1 + a2) * m3, 2) + t(a1 * c2 + a2 * c1, 1) * sq \
            - t(l11 * (a1 * c1 + a2 * c2), 2) * sq \
            + (t(l11, 2) * geo(l11) + t(1, 1) * sq - t(1, 1) + ratio + p1 * p2) * (a1 * a2)
        expo = t(c1 * c2 + k2 - l11 - l20, 1) \
            + t((l22 - l11 * l11 * 2 - l02 * l20) * Fraction(1, 2), 2) \
            + t(c1 * c2 * l11 * l11, 3) * sq - t((c1 * c1 + c2 * c2) * l11 * Fraction(1, 2), 2) * sq
        pref = exp_ratio_series(l20, l02, l20, "prefactor", order)
        return bracket * expo.exp() * geo(l11) * (one - t(l11 * l11, 2)).inv_sqrt() * pref
    if name == "symmetric_unit_variance":
        m1, mu3, mu4 = sym("m1"), sym("mu3"), sym("mu4")
        bracket = one + t(m1 * mu3 * 2, 2) + (t(mu3 * mu3, 4) + t(1, 1) * geo(ONE, 2)
                                             + t(2, 2) * geo(ONE)) * (m1 * m1)
        expo = t((mu4 - 3) * Fraction(1, 2), 2) - t(1, 1)
        return bracket * expo.exp() * (geo(ONE) ** 2) * (one - t(1, 2)).inv_sqrt()
    raise CatalogError(f"unknown reference formula {name!r}")


def goetze_koesters_bindings() -> dict:
    """The moment relations under which the Goetze-Koesters formula holds."""
    k2, k4 = sym("kappa2"), sym("kappa4")
    return {Symbol.parse("mu2"): k2 * Fraction(1, 2), Symbol.parse("nu2"): k2 * Fraction(1, 2),
            Symbol.parse("mu3"): ZERO, Symbol.parse("nu3"): ZERO,
            Symbol.parse("mu4"): k4 * Fraction(1, 4), Symbol.parse("nu4"): k4 * Fraction(1, 4),
            Symbol.parse("a1"): ZERO, Symbol.parse("a2"): ZERO}


def to_raw_moments(series: EgfSeries) -> EgfSeries:
    """Rewrite a symmetric series from (m1, mu_q) into raw moments m_q."""
    return series.substitute(centered_to_raw_bindings())


__all__ = ["CatalogEntry", "CatalogError", "egf_symmetric", "egf_wigner", "egf_hermitian",
           "catalog_entry", "specialize", "reference_formula", "REFERENCE_NAMES",
           "goetze_koesters_bindings", "to_raw_moments"]
