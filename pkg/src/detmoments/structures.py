"""Multigraphs of marked permutation tables and the structure census.

A marked table with k = 2 rows becomes a 2-colored directed multigraph on
[n] (edge i -> pi_r(i) of color r). Connected components of nontrivial
tables fall into a short list of kinds; the census enumerates all marked
tables of a given size, classifies them and checks the signed weights
against the connected-structure EGFs of the catalog.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from math import factorial
from typing import NamedTuple

from .algebra import ONE, ZERO, MomentPolynomial, sym
from .catalog import catalog_entry
from .ensembles import EnsembleSpec, raw_to_centered, wigner_lambda_map
from .eulerian import eulerian_number
from .oracle import MarkedTable, PermutationTable, exact_moment

TAGS = ("fixed_point", "mussel", "parallel_loop", "antiparallel_loop", "necklace", "chain", "dumbbell")


class StructureError(ValueError):
    pass


class StructureKind(NamedTuple):
    tag: str
    marks: int

    def __str__(self):
        return f"{self.tag}/{self.marks}"


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    color: int
    marked: bool = False


@dataclass(frozen=True)
class MultiGraph:
    n: int
    k: int
    edges: tuple

    def out_edge(self, v: int, color: int) -> Edge:
        for e in self.edges:
            if e.source == v and e.color == color:
                return e
        raise StructureError(f"vertex {v} has no edge of color {color}")


def build_multigraph(t: MarkedTable) -> MultiGraph:
    edges = []
    for r, row in enumerate(t.table.rows):
        for i, j in enumerate(row):
            edges.append(Edge(i, j, r, t.marks[r] == i))
    return MultiGraph(t.table.n, t.table.k, tuple(edges))


def to_marked_table(g: MultiGraph) -> MarkedTable:
    rows = [[None] * g.n for _ in range(g.k)]
    marks = [None] * g.k
    for e in g.edges:
        if rows[e.color][e.source] is not None:
            raise StructureError("two edges of one color leave the same vertex")
        rows[e.color][e.source] = e.target
        if e.marked:
            if marks[e.color] is not None:
                raise StructureError("a color carries more than one mark")
            marks[e.color] = e.source
    return MarkedTable(PermutationTable(tuple(tuple(r) for r in rows)), tuple(marks))


# ---------------------------------------------------------------- weights

def _unmarked_cells(t: MarkedTable):
    """pairs[(i,j)] -> [forward count, backward count]; diag[i] -> unmarked rows."""
    pairs, diag = {}, {}
    for r, row in enumerate(t.table.rows):
        for i, j in enumerate(row):
            if t.marks[r] == i:
                continue
            if i == j:
                diag.setdefault(i, []).append(r)
            else:
                key = (min(i, j), max(i, j))
                cell = pairs.setdefault(key, [0, 0])
                cell[0 if i < j else 1] += 1
    return pairs, diag


def is_trivial(t: MarkedTable, diagonal_shift: bool = True) -> bool:
    """A table is trivial when some cell is forced to have zero expectation.

    That happens for an off-diagonal cell holding exactly one unmarked edge
    (mean-zero entry), and, when there is no diagonal shift, for a diagonal
    cell holding exactly one unmarked self-loop.
    """
    pairs, diag = _unmarked_cells(t)
    if any(p + q == 1 for p, q in pairs.values()):
        return True
    if not diagonal_shift and any(len(rows) == 1 for rows in diag.values()):
        return True
    return False


def _pair_moment(family: str, p: int, q: int) -> MomentPolynomial:
    if p + q == 0:
        return ONE
    if family == "symmetric":
        return ZERO if p + q == 1 else sym(f"mu{p + q}")
    if family == "wigner":
        return wigner_lambda_map(p, q)
    return sym(f"lambda{p}{q}")


def _diag_moment(family: str, rows) -> MomentPolynomial:
    if family == "symmetric":
        n = len(rows)
        return ONE if n == 0 else (ZERO if n == 1 else sym(f"mu{n}"))
    out = ZERO
    for size in range(len(rows) + 1):
        for s in itertools.combinations(rows, size):
            term = ONE if not s else sym(f"kappa{len(s)}")
            for r in rows:
                if r not in s:
                    term = term * sym(f"c{r + 1}")
            out = out + term
    return out


def _mark_value(family: str, r: int) -> MomentPolynomial:
    return sym("m1") if family == "symmetric" else sym(f"a{r + 1}")


def _component_sign(t: MarkedTable, vertices) -> int:
    """prod over rows of (-1)^(|V| - cycles of the row inside V)."""
    vs = set(vertices)
    sign = 1
    for row in t.table.rows:
        seen = set()
        cycles = 0
        for v in vs:
            if v not in seen:
                cycles += 1
                j = v
                while j not in seen:
                    seen.add(j)
                    j = row[j]
        if (len(vs) - cycles) % 2:
            sign = -sign
    return sign


def marked_weight(spec: EnsembleSpec, t: MarkedTable, vertices=None) -> MomentPolynomial:
    """Signed weight of a marked table, or of one union of its components."""
    vs = set(range(t.table.n)) if vertices is None else set(vertices)
    fam = spec.family
    w = ONE * _component_sign(t, vs)
    for r, m in enumerate(t.marks):
        if m is not None and m in vs:
            w = w * _mark_value(fam, r)
    pairs, diag = _unmarked_cells(t)
    for (i, j), (p, q) in pairs.items():
        if i in vs:
            w = w * _pair_moment(fam, p, q)
    for i in vs:
        if i in diag:
            w = w * _diag_moment(fam, diag[i])
    return spec.apply_constraints(w)


# --------------------------------------------------------- classification

def components(g: MultiGraph) -> list:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        a, b = find(e.source), find(e.target)
        if a != b:
            parent[a] = b
    groups = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return [frozenset(vs) for _, vs in sorted(groups.items(), key=lambda kv: min(kv[1]))]


def classify_component(g: MultiGraph, vertices) -> StructureKind:
    if g.k != 2:
        raise StructureError("classification is defined for two-row tables")
    vs = sorted(vertices)
    succ = [{e.source: e.target for e in g.edges if e.color == r and e.source in vertices} for r in (0, 1)]
    marked = [e for e in g.edges if e.marked and e.source in vertices]
    marks = len(marked)
    m = len(vs)
    if m == 1:
        return StructureKind("fixed_point" if marks == 0 else "chain", marks)

    def cycle_lengths(s):
        seen, out = set(), []
        for v in vs:
            if v not in seen:
                n, j = 0, v
                while j not in seen:
                    seen.add(j)
                    j = s[j]
                    n += 1
                out.append(n)
        return out

    c0, c1 = cycle_lengths(succ[0]), cycle_lengths(succ[1])
    if c0 == [m] and c1 == [m]:
        same = succ[0] == succ[1]
        reverse = all(succ[1][succ[0][v]] == v for v in vs)
        if m == 2:
            if marks < 2:
                return StructureKind("mussel", marks)
            par = marked[0].source == marked[1].source
            return StructureKind("parallel_loop" if par else "antiparallel_loop", 2)
        if same:
            return StructureKind("parallel_loop", marks)
        if reverse:
            return StructureKind("antiparallel_loop", marks)
        raise StructureError("two distinct long cycles on one component")
    if max(c0 + c1) > 2:
        raise StructureError("component mixes a long cycle with other cycles")
    ends = [(v, r) for r in (0, 1) for v in vs if succ[r][v] == v]
    if not ends:
        return StructureKind("necklace", marks)
    if len(ends) == 2:
        same_color = ends[0][1] == ends[1][1]
        return StructureKind("dumbbell" if same_color else "chain", marks)
    raise StructureError("path component with an unexpected number of self-loops")


def classify_components(g: MultiGraph) -> list:
    """[(vertex set, StructureKind)] for every component."""
    return [(vs, classify_component(g, vs)) for vs in components(g)]


# ------------------------------------------------------------------ census

@dataclass
class CensusCell:
    count: int = 0
    weight: MomentPolynomial = ZERO


@dataclass
class Census:
    family: str
    n: int
    tables: int = 0
    nontrivial: int = 0
    by_multiset: dict = field(default_factory=dict)
    single: dict = field(default_factory=dict)
    total: MomentPolynomial = ZERO
    factorization_failures: int = 0

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "tables": self.tables,
            "nontrivial": self.nontrivial,
            "structures": {"+".join(map(str, key)) if key else "empty": {"count": c.count, "signed_weight": c.weight.to_json()}
                           for key, c in sorted(self.by_multiset.items(), key=lambda kv: [str(x) for x in kv[0]])},
            "total": self.total.to_json(),
        }


def iter_marked_tables(n: int, k: int = 2):
    perms = list(itertools.permutations(range(n)))
    choices = [None] + list(range(n))
    for rows in itertools.product(perms, repeat=k):
        t = PermutationTable(rows)
        for marks in itertools.product(choices, repeat=k):
            yield MarkedTable(t, marks)


def census(spec: EnsembleSpec, n: int, check_factorization: bool = True) -> Census:
    if spec.k != 2:
        raise StructureError("the census covers second moments only")
    if not 0 <= n <= 5:
        raise StructureError("census supports n <= 5")
    diag_shift = spec.family != "symmetric"
    out = Census(spec.family, n)
    acc = Counter()
    weights = {}
    singles = {}
    for t in iter_marked_tables(n, 2):
        out.tables += 1
        if is_trivial(t, diag_shift):
            continue
        out.nontrivial += 1
        g = build_multigraph(t)
        comps = classify_components(g)
        key = tuple(sorted(kind for _, kind in comps))
        w = marked_weight(spec, t)
        if check_factorization:
            prod = ONE
            for vs, _ in comps:
                prod = prod * marked_weight(spec, t, vs)
            if prod != w:
                out.factorization_failures += 1
        acc[key] += 1
        weights.setdefault(key, []).append(w)
        if len(comps) == 1:
            singles.setdefault(key[0], []).append(w)
    for key, c in acc.items():
        out.by_multiset[key] = CensusCell(c, sum(weights[key], ZERO))
    for kind, ws in singles.items():
        out.single[kind] = sum(ws, ZERO)
    out.total = sum((c.weight for c in out.by_multiset.values()), ZERO)
    return out


@dataclass
class CensusReport:
    family: str
    n: int
    total_matches: bool
    factorization_ok: bool
    mismatched_kinds: list
    checked_kinds: list

    @property
    def passed(self) -> bool:
        return self.total_matches and self.factorization_ok and not self.mismatched_kinds


def census_crosscheck(spec: EnsembleSpec, n: int) -> CensusReport:
    """Grand total vs the oracle, single-structure totals vs structure EGFs."""
    cen = census(spec, n)
    oracle = exact_moment(spec, n, prune=True)
    if spec.family == "symmetric":
        oracle = raw_to_centered(oracle)
    entry = catalog_entry(spec.family, 2, max(n, 1))
    bad, checked = [], []
    kinds = set(cen.single) | {StructureKind(*k) for k in entry.structures}
    for kind in sorted(kinds):
        egf = entry.structures.get(tuple(kind))
        expected = egf.coeffs[n] if egf is not None else ZERO
        got = cen.single.get(kind, ZERO)
        checked.append(kind)
        if expected != got:
            bad.append(kind)
    return CensusReport(spec.family, n, cen.total == oracle, cen.factorization_failures == 0, bad, checked)


def loop_ascent_profile(n: int) -> tuple:
    """Counts of single n-cycles by number of ascending edges i -> pi(i), i < pi(i).

    Entry k is the number of cycles with k + 1 ascending edges.
    """
    if n < 2:
        raise StructureError("loops need n >= 2")
    counts = [0] * (n - 1)
    for rest in itertools.permutations(range(1, n)):
        order = (0,) + rest
        succ = {order[i]: order[(i + 1) % n] for i in range(n)}
        asc = sum(1 for i, j in succ.items() if i < j)
        counts[asc - 1] += 1
    return tuple(counts)


def loop_ascents_match(n: int) -> bool:
    return loop_ascent_profile(n) == tuple(eulerian_number(n - 1, k) for k in range(n - 1))
