from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from detmoments.algebra import (I, ONE, ZERO, AlgebraError, GaussianRational, MomentPolynomial,
                                REGISTRY, Symbol, poly_conjugate, poly_substitute, sym)
from detmoments.ensembles import raw_to_centered_bindings, wigner_lambda_map


# ----------------------------------------------------------------- scalars

def test_gaussian_rational_arithmetic():
    a = GaussianRational("1/2", "3")
    b = GaussianRational(2, -1)
    assert a * b == GaussianRational(Fraction(1) + 3, Fraction(-1, 2) + 6)
    assert (a / b) * b == a
    assert a.conjugate() == GaussianRational("1/2", "-3")
    assert GaussianRational(0, 1) ** 2 == -1
    assert GaussianRational(2) ** -2 == GaussianRational("1/4")


def test_gaussian_rational_json_and_lowest_terms():
    g = GaussianRational.from_json({"re": "6/4", "im": "-2/8"})
    assert g.to_json() == {"re": "3/2", "im": "-1/4"}
    with pytest.raises(AlgebraError):
        GaussianRational.from_json({"re": "x"})
    with pytest.raises(AlgebraError):
        GaussianRational.coerce(0.5)


# ----------------------------------------------------------------- symbols

def test_registry_is_closed():
    names = {s.name for s in REGISTRY}
    assert "lambda22" in names and "kappa4" in names and "mu6" in names
    assert "lambda32" not in names
    with pytest.raises(AlgebraError):
        Symbol.parse("lambda32")
    with pytest.raises(AlgebraError):
        Symbol.parse("kappa5")
    with pytest.raises(AlgebraError):
        Symbol.parse("z1")
    assert Symbol.parse("lambda21") == Symbol("lambda", (2, 1))


# ------------------------------------------------------------- polynomials

def test_examples_products():
    mu2, m1, mu3, nu3 = sym("mu2"), sym("m1"), sym("mu3"), sym("nu3")
    assert (mu2 + 1) * (mu2 - 1) == mu2 ** 2 - 1
    assert m1 * m1 == m1 ** 2
    assert (mu3 + I * nu3) * (mu3 - I * nu3) == mu3 ** 2 + nu3 ** 2


def test_substitution_examples():
    assert wigner_lambda_map(1, 1) == sym("mu2") + sym("nu2")
    assert wigner_lambda_map(2, 1) == sym("mu3") + I * sym("nu3")
    m2 = sym("m2").substitute(raw_to_centered_bindings())
    assert m2.substitute({"m1": 0}) == sym("mu2")


def test_substitution_is_simultaneous():
    p = sym("mu2") + 2 * sym("nu2") ** 2
    swapped = poly_substitute(p, {"mu2": sym("nu2"), "nu2": sym("mu2")})
    assert swapped == sym("nu2") + 2 * sym("mu2") ** 2


def test_conjugation_examples():
    assert poly_conjugate(sym("lambda12")) == sym("lambda21")
    assert (I * sym("nu3")).conjugate() == -I * sym("nu3")
    p = sym("kappa2") ** 2 + sym("lambda22")
    assert p.conjugate() == p


def test_json_round_trip_and_order():
    p = 3 * sym("mu2") * sym("nu2") + I * sym("lambda21") - Fraction(1, 2)
    js = p.to_json()
    assert MomentPolynomial.from_json(js) == p
    # graded: degree-2 monomial first, constant last
    assert js[0]["monomial"] == {"mu2": 1, "nu2": 1}
    assert js[-1] == {"coeff": {"re": "-1/2", "im": "0"}, "monomial": {}}
    with pytest.raises(AlgebraError):
        MomentPolynomial.from_json([{"coeff": {"re": "1", "im": "0"}, "monomial": {"bogus": 1}}])


def test_constant_and_degree_helpers():
    p = sym("a1") ** 3 * sym("c2") + 5
    assert p.degree() == 4 and p.degree_in("a1") == 3
    assert not p.is_constant()
    assert (p - p).is_zero()
    assert p.substitute({"a1": 1, "c2": 2}).constant_value() == 7
    with pytest.raises(AlgebraError):
        p.constant_value()


# ------------------------------------------------------------- properties

_names = ["mu2", "nu2", "lambda21", "lambda12", "a1", "c1"]
_coeff = st.builds(GaussianRational, st.fractions(max_denominator=5).map(lambda f: f.limit_denominator(5)),
                   st.integers(-3, 3))
_mono = st.dictionaries(st.sampled_from(_names), st.integers(0, 3), max_size=3)
_poly = st.lists(st.tuples(_mono, _coeff), max_size=4).map(MomentPolynomial)


@settings(max_examples=60, deadline=None)
@given(_poly, _poly, _poly)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO and a * ONE == a


@settings(max_examples=60, deadline=None)
@given(_poly, _poly)
def test_conjugation_is_an_involutive_ring_map(a, b):
    assert a.conjugate().conjugate() == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


@settings(max_examples=60, deadline=None)
@given(_poly)
def test_json_round_trip_property(a):
    assert MomentPolynomial.from_json(a.to_json()) == a
