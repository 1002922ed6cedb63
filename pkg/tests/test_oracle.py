import itertools
import math
from fractions import Fraction

import pytest

from detmoments.algebra import sym
from detmoments.catalog import catalog_entry
from detmoments.ensembles import EnsembleSpec, raw_to_centered, validate_assignment
from detmoments.oracle import (OracleError, PermutationTable, cell_profile, cycle_count,
                               distribution_assignment, exact_moment, exhaustive_rademacher,
                               kind_histogram, perm_sign, sample_moment, sign_via_cycles,
                               table_weight, verify_marked_expansion)

m1, m2, m3, m4 = (sym(f"m{q}") for q in range(1, 5))
SYM2 = EnsembleSpec.default("symmetric", 2)


def tab(*rows):
    """Build a table from 1-based rows."""
    return PermutationTable(tuple(tuple(x - 1 for x in r) for r in rows))


def test_perm_basics():
    assert perm_sign((1, 0, 2)) == -1 and perm_sign((1, 2, 0)) == 1
    assert cycle_count((1, 0, 2)) == 2
    with pytest.raises(OracleError):
        PermutationTable(((0, 0),))


def test_cell_profile_directions():
    prof = cell_profile(PermutationTable(((1, 2, 0), (0, 1, 2))))
    assert prof.pairs[(0, 1)] == (frozenset({0}), frozenset())
    assert prof.pairs[(0, 2)] == (frozenset(), frozenset({0}))
    assert prof.diag[1] == frozenset({1})


@pytest.mark.parametrize("n", range(1, 5))
def test_sign_via_cycles(n):
    for rows in itertools.product(itertools.permutations(range(n)), repeat=2):
        t = PermutationTable(rows)
        assert sign_via_cycles(t) == t.sign()


def test_frozen_values():
    assert exact_moment(SYM2, 2) == -2 * m1 ** 2 * m2 + m2 ** 2 + m4
    assert exact_moment(SYM2, 3) == 4 * m1 ** 6 - 12 * m1 ** 3 * m3 + 5 * m2 ** 3 + 3 * m2 * m4
    assert exact_moment(EnsembleSpec.default("symmetric", 1), 3) == 3 * m1 ** 3 - 3 * m1 * m2
    h1 = exact_moment(EnsembleSpec.default("hermitian", 1), 2)
    assert h1 == sym("kappa1") ** 2 - sym("lambda11")
    assert exact_moment(SYM2, 0) == 1


def test_figure_table_weight():
    t = tab([4, 9, 1, 7, 5, 6, 8, 3, 2], [1, 9, 8, 7, 6, 3, 4, 5, 2])
    w = table_weight(SYM2, t)
    assert w in (m1 ** 9 * m2 * m3 * m4, -m1 ** 9 * m2 * m3 * m4)


@pytest.mark.parametrize("family", ["symmetric", "wigner", "hermitian"])
@pytest.mark.parametrize("n", range(0, 4))
def test_prune_agrees(family, n):
    spec = EnsembleSpec.default(family, 2)
    assert exact_moment(spec, n, prune=True) == exact_moment(spec, n)


def test_parallel_histogram_matches_serial():
    assert kind_histogram(4, 2, jobs=2) == kind_histogram(4, 2, jobs=1)
    assert exact_moment(SYM2, 4, jobs=2) == exact_moment(SYM2, 4)


@pytest.mark.parametrize("family", ["symmetric", "wigner", "hermitian"])
def test_oracle_equals_egf_small(family):
    spec = EnsembleSpec.default(family, 2)
    s = catalog_entry(family, 2, 4).series
    for n in range(5):
        p = exact_moment(spec, n, prune=True)
        if family == "symmetric":
            p = raw_to_centered(p)
        assert p == s.coeffs[n]


@pytest.mark.parametrize("n", range(1, 5))
def test_marked_expansion(n):
    rep = verify_marked_expansion(n)
    assert rep.passed and rep.full_terms == rep.marked_terms


def test_exhaustive_rademacher():
    assert [exhaustive_rademacher(n) for n in range(5)] == [1, 1, 2, 8, 44]
    assert exhaustive_rademacher(3, k=1) == 0
    with pytest.raises(OracleError):
        exhaustive_rademacher(6)


def test_distribution_assignments_are_valid():
    for fam in ("symmetric", "wigner", "hermitian"):
        spec = EnsembleSpec.default(fam, 2)
        for dist in ("rademacher", "std_normal"):
            assert validate_assignment(spec, distribution_assignment(dist, spec)) == []
    h = EnsembleSpec.default("hermitian", 2)
    asg = distribution_assignment("complex_normal", h)
    assert validate_assignment(h, asg) == []
    assert asg.get("lambda22") == 2 and asg.get("lambda20") == 0
    with pytest.raises(OracleError):
        distribution_assignment("complex_normal", SYM2)


def _exact_at(dist, spec, n):
    p = exact_moment(spec, n, prune=True)
    return p.substitute(distribution_assignment(dist, spec).bindings()).constant_value()


@pytest.mark.parametrize("dist,family", [("rademacher", "symmetric"), ("std_normal", "symmetric"),
                                         ("complex_normal", "hermitian")])
def test_sampling_within_three_sigma(dist, family):
    spec = EnsembleSpec.default(family, 2)
    for n in (2, 3):
        est, se = sample_moment(dist, spec, n, 20_000, seed=1)
        exact = float(_exact_at(dist, spec, n).re)
        assert abs(est - exact) <= 3 * se


def test_sampling_is_seeded():
    a = sample_moment("std_normal", SYM2, 3, 1000, seed=7)
    assert a == sample_moment("std_normal", SYM2, 3, 1000, seed=7)
    assert sample_moment("rademacher", SYM2, 0, 10) == (1.0, 0.0)
    with pytest.raises(OracleError):
        sample_moment("cauchy", SYM2, 2, 10)
