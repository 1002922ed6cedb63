import pytest

from detmoments.algebra import I, ONE, ZERO, GaussianRational, sym
from detmoments.ensembles import (EnsembleError, EnsembleSpec, MomentAssignment, centered_to_raw,
                                  raw_to_centered, symmetric_from_wigner, validate_assignment,
                                  wigner_lambda_map, wigner_substitution)

mu = {q: sym(f"mu{q}") for q in range(2, 7)}
nu = {q: sym(f"nu{q}") for q in range(2, 7)}

# lambda_pq for Wigner entries, p, q <= 3, as printed in the reference table
WIGNER_TABLE = {
    (0, 0): ONE, (0, 1): ZERO, (0, 2): mu[2] - nu[2], (0, 3): mu[3] + I * nu[3],
    (1, 0): ZERO, (1, 1): mu[2] + nu[2], (1, 2): mu[3] - I * nu[3], (1, 3): mu[4] - nu[4],
    (2, 0): mu[2] - nu[2], (2, 1): mu[3] + I * nu[3], (2, 2): mu[4] + 2 * mu[2] * nu[2] + nu[4],
    (2, 3): mu[5] + 2 * mu[3] * nu[2] - 2 * I * mu[2] * nu[3] - I * nu[5],
    (3, 0): mu[3] - I * nu[3], (3, 1): mu[4] - nu[4],
    (3, 2): mu[5] + 2 * mu[3] * nu[2] + 2 * I * mu[2] * nu[3] + I * nu[5],
    (3, 3): mu[6] + 3 * mu[4] * nu[2] + 3 * mu[2] * nu[4] + nu[6],
}


@pytest.mark.parametrize("pq", sorted(WIGNER_TABLE))
def test_wigner_lambda_table(pq):
    assert wigner_lambda_map(*pq) == WIGNER_TABLE[pq]


def test_wigner_lambda_conjugate_symmetry():
    for p in range(4):
        for q in range(4):
            assert wigner_lambda_map(p, q).conjugate() == wigner_lambda_map(q, p)
    with pytest.raises(EnsembleError):
        wigner_lambda_map(4, 3)


def test_specs_and_admitted_symbols():
    w = EnsembleSpec.default("wigner", 2)
    names = {s.name for s in w.admitted()}
    assert {"mu4", "nu4", "kappa2", "a2", "c2"} <= names
    assert "lambda11" not in names
    h = EnsembleSpec.default("hermitian", 2)
    assert {"lambda22", "lambda21", "kappa2", "a1", "c1"} <= {s.name for s in h.admitted()}
    assert w.apply_constraints(sym("mu1") + sym("mu2")) == sym("mu2")
    with pytest.raises(EnsembleError):
        EnsembleSpec("orthogonal", 2)
    with pytest.raises(EnsembleError):
        EnsembleSpec.default("symmetric", 3)


def test_validate_hermitian():
    h = EnsembleSpec.default("hermitian", 2)
    ok = MomentAssignment({"lambda12": GaussianRational(1, 1), "lambda21": GaussianRational(1, -1)})
    assert validate_assignment(h, ok) == []
    bad = MomentAssignment({"lambda11": GaussianRational(0, 1)})
    assert any("lambda11" in p for p in validate_assignment(h, bad))
    mism = MomentAssignment({"lambda12": GaussianRational(1, 1), "lambda21": GaussianRational(1, 1)})
    assert validate_assignment(h, mism)
    assert validate_assignment(h, MomentAssignment({"kappa1": 1}))


def test_validate_real_families():
    w = EnsembleSpec.default("wigner", 2)
    assert validate_assignment(w, MomentAssignment({"mu2": 1, "nu2": 0, "c1": 3})) == []
    assert validate_assignment(w, MomentAssignment({"mu2": GaussianRational(0, 1)}))
    assert validate_assignment(w, MomentAssignment({"lambda11": 1}))
    s = EnsembleSpec.default("symmetric", 1)
    assert validate_assignment(s, MomentAssignment({"m2": 1})) == []
    assert validate_assignment(s, MomentAssignment({"m3": 1}))


def test_assignment_json():
    a = MomentAssignment.from_json({"mu2": "1/2", "lambda21": {"re": "1", "im": "-1"}})
    assert MomentAssignment.from_json(a.to_json()) == a
    assert a.get("mu2") == GaussianRational("1/2")


def test_hermitian_to_wigner_substitution():
    p = sym("lambda11") + sym("lambda21") * sym("lambda12")
    got = p.substitute(wigner_substitution())
    assert got == mu[2] + nu[2] + mu[3] ** 2 + nu[3] ** 2


def test_wigner_to_symmetric():
    p = sym("kappa2") + sym("nu2") + sym("a1") * sym("a2") + sym("c1")
    assert symmetric_from_wigner(p) == mu[2] + sym("m1") ** 2


def test_raw_centered_round_trip():
    m1 = sym("m1")
    assert raw_to_centered(sym("m2")) == m1 ** 2 + mu[2]
    assert raw_to_centered(sym("m3")) == m1 ** 3 + 3 * m1 * mu[2] + mu[3]
    p = sym("m4") * sym("m2") - 3 * sym("m3") + m1
    assert centered_to_raw(raw_to_centered(p)) == p
