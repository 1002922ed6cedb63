"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are collected in RESULTS and echoed in the pytest terminal
summary (see conftest.py), so they show up without -s.
"""
import math

import pytest

from detmoments.catalog import catalog_entry, goetze_koesters_bindings, reference_formula, specialize, \
    to_raw_moments
from detmoments.algebra import sym
from detmoments.asymptotics import asymptotic_error_report
from detmoments.ensembles import EnsembleSpec, raw_to_centered
from detmoments.eulerian import EulerianTable, b_closed_form, b_series, eulerian_by_ascents, \
    eulerian_polynomial
from detmoments.oracle import distribution_assignment, exact_moment, exhaustive_rademacher, \
    sample_moment, verify_marked_expansion
from detmoments.structures import census_crosscheck

RESULTS = {}


def record(num, desc, ok, detail=""):
    line = f"CRITERION {num:2d}: {'PASS' if ok else 'FAIL'}  {desc}" + (f"  [{detail}]" if detail else "")
    RESULTS[num] = line
    print(line)
    assert ok, line


def _oracle_vs_egf(family, k, n_max):
    spec = EnsembleSpec.default(family, k)
    series = catalog_entry(family, k, n_max).series
    bad = []
    for n in range(n_max + 1):
        p = exact_moment(spec, n)
        if family == "symmetric":
            p = raw_to_centered(p)
        if p != series.coeffs[n]:
            bad.append(n)
    return bad


def test_criterion_01_symmetric_second_moment():
    bad = _oracle_vs_egf("symmetric", 2, 6)
    record(1, "symmetric second moment: oracle == EGF for n = 0..6", not bad, f"mismatch at n={bad}" if bad else "")


def test_criterion_02_wigner_second_moment():
    bad = _oracle_vs_egf("wigner", 2, 5)
    record(2, "Wigner second moment with live shifts: oracle == EGF for n = 0..5", not bad,
           f"mismatch at n={bad}" if bad else "")


def test_criterion_03_hermitian_second_moment():
    bad = _oracle_vs_egf("hermitian", 2, 5)
    record(3, "Hermitian second moment, free lambdas: oracle == EGF for n = 0..5", not bad,
           f"mismatch at n={bad}" if bad else "")


def test_criterion_04_specialization_chain():
    h = catalog_entry("hermitian", 2, 10).series
    w = catalog_entry("wigner", 2, 10).series
    s = catalog_entry("symmetric", 2, 10).series
    hw = specialize(h, "hermitian", "wigner") == w
    ws = specialize(w, "wigner", "symmetric") == s
    record(4, "Hermitian -> Wigner -> symmetric specialization to order 10", hw and ws,
           f"hermitian->wigner={hw} wigner->symmetric={ws}")


def test_criterion_05_literature_anchors():
    s = catalog_entry("symmetric", 2, 12).series
    zh = to_raw_moments(s).substitute({"m1": 0}) == reference_formula("zhurbenko", 12)
    w = catalog_entry("wigner", 2, 10).series
    gk = w.substitute(goetze_koesters_bindings()) == reference_formula("goetze_koesters", 10)
    eq = w.substitute({"c2": sym("c1")}) == reference_formula("wigner_equal_shifts", 10)
    record(5, "Zhurbenko (order 12), Goetze-Koesters and equal-shift corollary (order 10)", zh and gk and eq,
           f"zhurbenko={zh} goetze_koesters={gk} equal_shifts={eq}")


def test_criterion_06_first_moments():
    bad = {f: _oracle_vs_egf(f, 1, 8) for f in ("symmetric", "wigner", "hermitian")}
    ok = not any(bad.values())
    record(6, "first moments: oracle == EGF for n = 0..8 in all three families", ok,
           "" if ok else f"mismatches {bad}")


def test_criterion_07_marked_expansion():
    reps = [verify_marked_expansion(n) for n in range(1, 5)]
    ok = all(r.passed for r in reps)
    record(7, "subset expansion == marked-permutation sum for n = 1..4", ok,
           " ".join(f"n={r.n}:{r.full_terms}" for r in reps))


def test_criterion_08_eulerian_suite():
    tab = EulerianTable.build(12)
    rows = tab.row_sums_ok() and tab.symmetric()
    counts = all(eulerian_polynomial(n) == eulerian_by_ascents(n) for n in range(9))
    x, y = sym("lambda20"), sym("lambda02")
    pos = b_series(x, y, "positive", 12)
    closed = pos == b_closed_form(x, y, 12)
    symm = pos == b_series(y, x, "positive", 12) and \
        b_series(x, y, "negative", 12) == b_series(y, x, "negative", 12)
    ok = rows and counts and closed and symm
    record(8, "Eulerian rows, ascent counts, B closed form and B symmetry", ok,
           f"rows={rows} ascents={counts} closed_form={closed} symmetry={symm}")


def test_criterion_09_numeric_crosschecks():
    sym2 = EnsembleSpec.default("symmetric", 2)
    rad = distribution_assignment("rademacher", sym2).bindings()
    exh = {n: exhaustive_rademacher(n) for n in range(1, 5)}
    exact = {n: exact_moment(sym2, n).substitute(rad).constant_value().re for n in range(1, 5)}
    exh_ok = exh == exact and [exh[n] for n in (1, 2, 3)] == [1, 2, 8]
    worst = 0.0
    mc_ok = True
    cases = [("rademacher", "symmetric"), ("std_normal", "symmetric"), ("rademacher", "wigner"),
             ("complex_normal", "hermitian")]
    for dist, fam in cases:
        spec = EnsembleSpec.default(fam, 2)
        vals = distribution_assignment(dist, spec).bindings()
        for n in range(1, 5):
            target = float(exact_moment(spec, n, prune=True).substitute(vals).constant_value().re)
            est, se = sample_moment(dist, spec, n, 100_000, seed=n)
            if se == 0:
                mc_ok &= est == target
                continue
            z = abs(est - target) / se
            worst = max(worst, z)
            mc_ok &= z <= 3
    record(9, "exhaustive Rademacher == oracle (n=1..4); Monte Carlo within 3 SE (n<=4, 1e5 trials)",
           exh_ok and mc_ok, f"exhaustive={[str(exh[n]) for n in exh]} worst_z={worst:.2f}")


def test_criterion_10_census():
    bad = []
    for fam in ("symmetric", "wigner", "hermitian"):
        for n in range(5):
            rep = census_crosscheck(EnsembleSpec.default(fam, 2), n)
            if not rep.passed:
                bad.append((fam, n, [str(k) for k in rep.mismatched_kinds]))
    record(10, "census per-kind totals == structure EGFs and grand total == oracle, n <= 4", not bad,
           f"failures {bad}" if bad else "")


def test_criterion_11_asymptotics():
    rows = {r.n: r.relative_error for r in asymptotic_error_report([20, 60])}
    ok = rows[60] < rows[20] and rows[60] < 0.1
    record(11, "asymptotic display: err(60) < err(20) and err(60) < 0.1", ok,
           f"err(20)={rows[20]:.4f} err(60)={rows[60]:.4f}")
