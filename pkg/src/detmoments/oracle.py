"""Brute-force moments by enumerating permutation tables.

E[det(M)^k] with M = Z + sum of shifts is expanded as a signed sum over
k-tuples of permutations. Every cell of the table (an unordered pair {i,j}
or a diagonal index i) contributes an expectation that depends only on which
rows pass through it and in which direction, so a table is summarized by the
histogram of its cell kinds. Enumeration is vectorized with numpy and the
polynomial work happens once per distinct histogram.

This module shares no code with the closed-form catalog: weights come from
expanding the shifted entries directly.
"""
from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, sqrt
from typing import Optional

import numpy as np

from .algebra import I, ONE, ZERO, MomentPolynomial, combination, sym
from .ensembles import EnsembleSpec, MomentAssignment

MAX_TABLES = 30_000_000


class OracleError(ValueError):
    pass


def perm_sign(p) -> int:
    seen = [False] * len(p)
    sign = 1
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def cycle_count(p) -> int:
    seen = [False] * len(p)
    c = 0
    for i in range(len(p)):
        if not seen[i]:
            c += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
    return c


@dataclass(frozen=True)
class PermutationTable:
    """k rows, each a permutation of range(n) in one-line notation."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise OracleError("a table needs at least one row")
        n = len(rows[0])
        for r in rows:
            if sorted(r) != list(range(n)):
                raise OracleError(f"row {r} is not a permutation of range({n})")

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    def sign(self) -> int:
        s = 1
        for r in self.rows:
            s *= perm_sign(r)
        return s

    def cycles(self) -> int:
        return sum(cycle_count(r) for r in self.rows)


@dataclass(frozen=True)
class MarkedTable:
    """A table where each row marks at most one entry (None for unmarked)."""

    table: PermutationTable
    marks: tuple

    def __post_init__(self):
        marks = tuple(None if m is None else int(m) for m in self.marks)
        object.__setattr__(self, "marks", marks)
        if len(marks) != self.table.k:
            raise OracleError("one mark slot per row is required")
        for m in marks:
            if m is not None and not 0 <= m < self.table.n:
                raise OracleError("mark index out of range")


@dataclass(frozen=True)
class CellProfile:
    """Per-cell row sets: pairs[(i,j)] = (forward rows, backward rows), diag[i] = rows."""

    pairs: dict
    diag: dict


def cell_profile(t: PermutationTable) -> CellProfile:
    pairs, diag = {}, {}
    for r, row in enumerate(t.rows):
        for i, j in enumerate(row):
            if i == j:
                diag.setdefault(i, set()).add(r)
            else:
                key = (min(i, j), max(i, j))
                fwd, bwd = pairs.setdefault(key, (set(), set()))
                (fwd if i < j else bwd).add(r)
    return CellProfile({k: (frozenset(f), frozenset(b)) for k, (f, b) in pairs.items()},
                       {k: frozenset(v) for k, v in diag.items()})


# ------------------------------------------------------------- cell weights

def _subsets(rows):
    rows = sorted(rows)
    for size in range(len(rows) + 1):
        for s in itertools.combinations(rows, size):
            yield frozenset(s)


@lru_cache(maxsize=None)
def _wigner_joint(p: int, q: int) -> MomentPolynomial:
    """E[(X+iY)^p (X-iY)^q] by binomial expansion, X and Y independent."""
    def mom(kind, e):
        return ONE if e == 0 else sym(f"{kind}{e}")
    out = ZERO
    for u in range(p + 1):
        for v in range(q + 1):
            coeff = comb(p, u) * comb(q, v)
            phase = (I ** u) * ((-I) ** v)
            out = out + mom("mu", p + q - u - v) * mom("nu", u + v) * phase * coeff
    return out


def _joint(family: str, p: int, q: int) -> MomentPolynomial:
    if p == 0 and q == 0:
        return ONE
    if family == "wigner":
        return _wigner_joint(p, q)
    return sym(f"lambda{p}{q}")


@lru_cache(maxsize=None)
def pair_weight(family: str, k: int, shifts: bool, fwd: frozenset, bwd: frozenset) -> MomentPolynomial:
    """E[prod_{r in fwd} (Z_ij + a_r) prod_{r in bwd} (conj Z_ij + a_r)] for i < j."""
    if family == "symmetric":
        n = len(fwd) + len(bwd)
        return ONE if n == 0 else sym(f"m{n}")
    if not shifts:
        return _joint(family, len(fwd), len(bwd))
    out = ZERO
    for s in _subsets(fwd):
        for t in _subsets(bwd):
            term = _joint(family, len(s), len(t))
            rest = ONE
            for r in sorted(fwd - s):
                rest = rest * sym(f"a{r + 1}")
            for r in sorted(bwd - t):
                rest = rest * sym(f"a{r + 1}")
            out = out + term * rest
    return out


@lru_cache(maxsize=None)
def diag_weight(family: str, k: int, shifts: bool, rows: frozenset) -> MomentPolynomial:
    """E[prod_{r in rows} (Z_ii + a_r + c_r)]."""
    if family == "symmetric":
        return ONE if not rows else sym(f"m{len(rows)}")
    if not shifts:
        return ONE if not rows else sym(f"kappa{len(rows)}")
    out = ZERO
    for s in _subsets(rows):
        term = ONE if not s else sym(f"kappa{len(s)}")
        for r in sorted(rows - s):
            term = term * (sym(f"a{r + 1}") + sym(f"c{r + 1}"))
        out = out + term
    return out


def table_weight(spec: EnsembleSpec, t: PermutationTable, constrained: bool = True) -> MomentPolynomial:
    """sign(t) times the expectation of the table's product of entries."""
    prof = cell_profile(t)
    w = ONE * t.sign()
    for fwd, bwd in prof.pairs.values():
        w = w * pair_weight(spec.family, spec.k, spec.shift_params, fwd, bwd)
    for rows in prof.diag.values():
        w = w * diag_weight(spec.family, spec.k, spec.shift_params, rows)
    return spec.apply_constraints(w) if constrained else w


# -------------------------------------------------------- vectorized counting

def _perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int16).reshape(-1, n)


def _signs(P: np.ndarray) -> np.ndarray:
    return np.array([perm_sign(p) for p in P], dtype=np.int64)


def _pair_code_names(k: int):
    # bit 2r: row r goes i -> j (i < j); bit 2r+1: row r goes j -> i
    names = {}
    for code in range(1, 4 ** k):
        fwd = frozenset(r for r in range(k) if code >> (2 * r) & 1)
        bwd = frozenset(r for r in range(k) if code >> (2 * r + 1) & 1)
        names[code] = (fwd, bwd)
    return names


def _diag_code_names(k: int):
    return {code: frozenset(r for r in range(k) if code >> r & 1) for code in range(1, 2 ** k)}


def _count_block(args):
    """Histogram counts for tables whose first k-1 rows come from ``heads``."""
    n, k, heads = args
    P = _perms(n)
    S = _signs(P)
    I_, J_ = np.triu_indices(n, 1)
    idx = np.arange(n)
    fwd_last = (P[:, I_] == J_).astype(np.int16)
    bwd_last = (P[:, J_] == I_).astype(np.int16)
    fix_last = (P == idx).astype(np.int16)
    npc, ndc = 4 ** k - 1, 2 ** k - 1
    out = Counter()
    for head in heads:
        pc = fwd_last << (2 * (k - 1))
        pc = pc | (bwd_last << (2 * (k - 1) + 1))
        dc = fix_last << (k - 1)
        sgn = S.copy()
        for r, hi in enumerate(head):
            h = P[hi]
            pc = pc | ((h[I_] == J_).astype(np.int16) << (2 * r)) | ((h[J_] == I_).astype(np.int16) << (2 * r + 1))
            dc = dc | ((h == idx).astype(np.int16) << r)
            sgn = sgn * S[hi]
        cols = [(pc == v).sum(axis=1) for v in range(1, npc + 1)]
        cols += [(dc == v).sum(axis=1) for v in range(1, ndc + 1)]
        keys = np.stack(cols, axis=1).astype(np.int16)
        uniq, inv = np.unique(keys, axis=0, return_inverse=True)
        sums = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(sums, inv.reshape(-1), sgn)
        for key, s in zip(map(tuple, uniq.tolist()), sums.tolist()):
            if s:
                out[key] += s
    return out


def kind_histogram(n: int, k: int, jobs: int = 1) -> Counter:
    """Signed table counts keyed by the histogram of cell kinds."""
    if n < 0:
        raise OracleError("n must be non-negative")
    if k not in (1, 2):
        raise OracleError("k must be 1 or 2")
    if factorial(n) ** k > MAX_TABLES:
        raise OracleError(f"(n!)^k = {factorial(n) ** k} tables exceeds the enumeration limit")
    npc, ndc = 4 ** k - 1, 2 ** k - 1
    if n == 0:
        return Counter({(0,) * (npc + ndc): 1})
    heads = list(itertools.product(range(factorial(n)), repeat=k - 1))
    jobs = max(1, int(jobs))
    if jobs == 1 or len(heads) < 2:
        return _count_block((n, k, heads))
    chunks = [heads[i::jobs] for i in range(jobs)]
    total = Counter()
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        for part in ex.map(_count_block, [(n, k, c) for c in chunks]):
            total.update(part)
    return Counter({key: v for key, v in total.items() if v})


def exact_moment(spec: EnsembleSpec, n: int, prune: bool = False, jobs: int = 1) -> MomentPolynomial:
    """E[det^k] of the n x n matrix as an exact polynomial.

    prune=True applies the ensemble constraints to each cell weight first and
    skips histograms containing a vanishing cell; the default path expands
    everything and constrains at the end.
    """
    k = spec.k
    hist = kind_histogram(n, k, jobs)
    pnames, dnames = _pair_code_names(k), _diag_code_names(k)
    weights = [pair_weight(spec.family, k, spec.shift_params, *pnames[c]) for c in sorted(pnames)]
    weights += [diag_weight(spec.family, k, spec.shift_params, dnames[c]) for c in sorted(dnames)]
    if prune:
        weights = [spec.apply_constraints(w) for w in weights]
    powers = {}

    def power(i, e):
        if (i, e) not in powers:
            powers[(i, e)] = weights[i] ** e
        return powers[(i, e)]

    terms = []
    for key in sorted(hist):
        if prune and any(e and weights[i].is_zero() for i, e in enumerate(key)):
            continue
        w = ONE
        for i, e in enumerate(key):
            if e:
                w = w * power(i, e)
        terms.append((hist[key], w, None))
    total = combination(terms)
    return spec.apply_constraints(total)


# --------------------------------------------------- marked-expansion check

@dataclass(frozen=True)
class MarkedExpansionReport:
    n: int
    passed: bool
    full_terms: int
    marked_terms: int


def verify_marked_expansion(n: int) -> MarkedExpansionReport:
    """det(Y + m1 J) for symmetric Y: full subset expansion vs marked permutations.

    Monomials are (power of m1, sorted tuple of entries Y_{min,max}).
    """
    if not 0 <= n <= 6:
        raise OracleError("verify_marked_expansion supports n <= 6")
    full = Counter()
    marked = Counter()
    for p in itertools.permutations(range(n)):
        sg = perm_sign(p)
        for size in range(n + 1):
            for A in itertools.combinations(range(n), size):
                ent = tuple(sorted((min(i, p[i]), max(i, p[i])) for i in range(n) if i not in A))
                full[(size, ent)] += sg
                if size <= 1:
                    marked[(size, ent)] += sg
    full = Counter({k: v for k, v in full.items() if v})
    marked = Counter({k: v for k, v in marked.items() if v})
    return MarkedExpansionReport(n, full == marked, len(full), len(marked))


def sign_via_cycles(t: PermutationTable) -> int:
    """(-1)^(k n - number of cycles), which should equal the table sign."""
    return -1 if (t.k * t.n - t.cycles()) % 2 else 1


# ----------------------------------------------------------- numeric checks

def _int_det(m) -> int:
    """Exact determinant of a small integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for i in range(n - 1):
        if a[i][i] == 0:
            for r in range(i + 1, n):
                if a[r][i]:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


def exhaustive_rademacher(n: int, k: int = 2) -> Fraction:
    """Exact E[det^k] over all symmetric +-1 matrices of size n."""
    if not 0 <= n <= 5:
        raise OracleError("exhaustive_rademacher supports n <= 5")
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    total = 0
    for bits in itertools.product((1, -1), repeat=len(cells)):
        m = [[0] * n for _ in range(n)]
        for (i, j), b in zip(cells, bits):
            m[i][j] = m[j][i] = b
        total += _int_det(m) ** k
    return Fraction(total, 2 ** len(cells))


DISTRIBUTIONS = ("rademacher", "std_normal", "complex_normal")


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def distribution_assignment(dist: str, spec: EnsembleSpec) -> MomentAssignment:
    """Exact moments of a named entry law, in the ensemble's symbols (shifts = 0)."""
    vals = {}
    if dist in ("rademacher", "std_normal"):
        def m(q):
            if q % 2:
                return 0
            return 1 if dist == "rademacher" else _double_factorial(q - 1)
        if spec.family == "symmetric":
            for q in range(1, 7):
                vals[f"m{q}"] = m(q)
                vals[f"mu{q}"] = m(q)
        elif spec.family == "wigner":
            for q in range(1, 7):
                vals[f"mu{q}"] = m(q)
                vals[f"nu{q}"] = 0
            for q in range(1, 5):
                vals[f"kappa{q}"] = m(q)
        else:
            for p in range(5):
                for q in range(5 - p):
                    if p + q:
                        vals[f"lambda{p}{q}"] = m(p + q)
            for q in range(1, 5):
                vals[f"kappa{q}"] = m(q)
    elif dist == "complex_normal":
        if spec.family != "hermitian":
            raise OracleError("complex_normal entries need the hermitian family")
        # off-diagonal standard complex normal (E|Z|^2 = 1), real N(0,1) diagonal
        for p in range(5):
            for q in range(5 - p):
                if p + q:
                    vals[f"lambda{p}{q}"] = factorial(p) if p == q else 0
        for q in range(1, 5):
            vals[f"kappa{q}"] = 0 if q % 2 else _double_factorial(q - 1)
    else:
        raise OracleError(f"unknown distribution {dist!r}")
    if spec.shift_params:
        for r in range(1, spec.k + 1):
            vals[f"a{r}"] = 0
            vals[f"c{r}"] = 0
    admitted = {x.name for x in spec.admitted()}
    return MomentAssignment({k: v for k, v in vals.items() if k in admitted})


def _sample_matrices(dist: str, n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    if dist == "rademacher":
        m = rng.choice(np.array([-1.0, 1.0]), size=(trials, n, n))
    elif dist == "std_normal":
        m = rng.standard_normal((trials, n, n))
    else:
        off = (rng.standard_normal((trials, n, n)) + 1j * rng.standard_normal((trials, n, n))) / sqrt(2)
        diag = rng.standard_normal((trials, n))
        m = np.triu(off, 1)
        m = m + np.conj(np.swapaxes(m, 1, 2))
        m[:, np.arange(n), np.arange(n)] = diag
        return m
    m = np.triu(m)
    lower = np.swapaxes(m, 1, 2).copy()
    lower[:, np.arange(n), np.arange(n)] = 0
    return m + lower


def sample_moment(dist: str, spec: EnsembleSpec, n: int, trials: int,
                  seed: Optional[int] = 0) -> tuple:
    """Monte Carlo estimate of E[det^k] and its standard error."""
    if dist not in DISTRIBUTIONS:
        raise OracleError(f"unknown distribution {dist!r}")
    if trials < 2:
        raise OracleError("need at least two trials")
    if n == 0:
        return 1.0, 0.0
    rng = np.random.default_rng(seed)
    m = _sample_matrices(dist, n, trials, rng)
    d = np.linalg.det(m)
    if dist == "complex_normal":
        d = d.real
    x = d ** spec.k
    return float(x.mean()), float(x.std(ddof=1) / sqrt(trials))
