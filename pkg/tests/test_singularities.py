import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from singfol.catalog import lookup
from singfol.lattice import CohClass, DomainError
from singfol.singularities import (
    BivarPoly,
    FoliationPlan,
    PolynomialError,
    common_factor,
    cusp,
    explicit,
    hopf_degree,
    hopf_degree_oracle,
    intersection_multiplicity,
    ledger_check,
    normal_crossing,
    parse_model,
    pencil,
    power,
    quadratic,
    reduce,
    synthesize_plan,
    tangent_field,
    total_degree,
    z1,
    z2,
)


def quotient_dimension(h1, h2) -> int:
    """dim Q[z1, z2]/(h1, h2) from the staircase of a grevlex Groebner basis."""
    G = sympy.groebner([h1, h2], z1, z2, order="grevlex", domain="QQ")
    leads = [sympy.Poly(g, z1, z2).monoms(order="grevlex")[0] for g in G.exprs]
    a = min(m[0] for m in leads if m[1] == 0)
    b = min(m[1] for m in leads if m[0] == 0)
    return sum(1 for i in range(a) for j in range(b)
               if not any(i >= m[0] and j >= m[1] for m in leads))


def test_parse():
    f = BivarPoly.parse("z1^3 - z2**2 + I*z1*z2/2")
    assert f.total_degree == 3
    assert f.terms[(1, 1)] == sympy.I / 2
    for bad in ["z1 + x", "z1^", "1/z1", "sin(z1)"]:
        with pytest.raises(PolynomialError):
            BivarPoly.parse(bad)


def test_tangent_field_and_reduction():
    g1, g2 = tangent_field(BivarPoly.parse("z1^2*z2^3"))
    assert g1.poly.as_expr() == 3 * z1**2 * z2**2
    assert g2.poly.as_expr() == -2 * z1 * z2**3
    assert common_factor(g1, g2).as_expr() == z1 * z2**2
    h1, h2 = reduce(g1, g2)
    assert (h1.poly.as_expr(), h2.poly.as_expr()) == (3 * z1, -2 * z2)
    with pytest.raises(PolynomialError):
        tangent_field(BivarPoly.parse("5"))


def test_intersection_multiplicity_classics():
    P = lambda e: sympy.Poly(e, z1, z2, domain=sympy.QQ_I)  # noqa: E731
    assert intersection_multiplicity(P(z1), P(z2)) == 1
    assert intersection_multiplicity(P(z2 - z1**2), P(z2)) == 2
    assert intersection_multiplicity(P(z1**3 - z2**2), P(z1**2 - z2**3)) == 4
    # Fulton's textbook example: (x^2 + y^2)^2 + 3x^2 y - y^3 and (x^2 + y^2)^3 - 4x^2y^2
    F = (z1**2 + z2**2) ** 2 + 3 * z1**2 * z2 - z2**3
    G = (z1**2 + z2**2) ** 3 - 4 * z1**2 * z2**2
    assert intersection_multiplicity(P(F), P(G)) == 14
    assert intersection_multiplicity(P(z1 + 1), P(z2)) == 0
    with pytest.raises(DomainError):
        intersection_multiplicity(P(z1 * z2), P(z1 * (z2 + 1)))


def test_named_degrees():
    assert hopf_degree("z1^3 - z2^2") == 2
    assert cusp().degree == 2
    assert quadratic().degree == 1
    assert pencil().degree == 1
    assert hopf_degree("z1 + z2^2") == 0


@pytest.mark.parametrize("p", range(1, 5))
@pytest.mark.parametrize("q", range(1, 5))
def test_normal_crossing_and_power_degrees(p, q):
    assert hopf_degree(f"z1^{p}*z2^{q}") == 1
    assert power(p, q).degree == p * q


@pytest.mark.parametrize("p", range(1, 5))
@pytest.mark.parametrize("q", range(1, 5))
def test_power_degree_matches_groebner(p, q):
    h1, h2 = reduce(*tangent_field(BivarPoly.parse(f"z1^{p + 1} + z2^{q + 1}")))
    assert quotient_dimension(h1.poly.as_expr(), h2.poly.as_expr()) == p * q


@pytest.mark.parametrize("text", ["z1^3 - z2^2", "z1*z2", "z1^2*z2^3", "z1^3 + z2^4", "z1^4 + z2^2",
                                  "z1^3 + z1*z2^3", "z1^2*z2 + z2^4"])
def test_oracle_agrees(text):
    assert hopf_degree_oracle(text) == hopf_degree(text)


def test_mixed_examples_against_groebner():
    # D and E type singularities, whose tangent fields vanish only at 0
    for text, mu in [("z1^2*z2 + z2^4", 5), ("z1^3 + z2^4", 6), ("z1^3 + z1*z2^3", 7), ("z1^3 + z2^5", 8)]:
        h1, h2 = reduce(*tangent_field(BivarPoly.parse(text)))
        assert quotient_dimension(h1.poly.as_expr(), h2.poly.as_expr()) == mu
        assert hopf_degree(text) == mu


def test_non_isolated_rejected():
    with pytest.raises(DomainError):
        hopf_degree("z1^2")
    with pytest.raises(DomainError):
        hopf_degree("z1^2 + z1^2*z2")


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(-3, 3), st.integers(1, 3))
def test_degree_invariant_under_linear_change(p, q, b, k):
    # z1 -> z1 + b z2, scaled by k: a unimodular-ish change of coordinates
    f = (z1 + b * z2) ** (p + 1) + (k * z2) ** (q + 1)
    assert hopf_degree(str(sympy.expand(f))) == p * q


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 5))
def test_degree_invariant_under_scaling_and_shift(p, q, k):
    base = f"z1^{p + 1} + z2^{q + 1}"
    assert hopf_degree(f"{k}*({base}) + 7") == p * q


def test_models():
    m = parse_model("power(2,3)")
    assert (m.kind, m.degree) == ("power", 6)
    assert parse_model("deg(4)", "negative").degree == 4
    assert parse_model("z1*z2").degree == 1
    assert str(pencil()) == "pencil[+1]"
    assert pencil().negated().sign == "negative"
    assert normal_crossing(2, 3).degree == 1
    with pytest.raises(ValueError):
        explicit(-1)
    with pytest.raises(ValueError):
        pencil("sideways")


def test_synthesize_plan():
    assert synthesize_plan(0) == []
    assert [s.kind for s in synthesize_plan(3)] == ["pencil"] * 3
    assert total_degree(synthesize_plan(5, "single")) == 5
    rng = random.Random(4)
    for n in range(0, 12):
        plan = synthesize_plan(n, ["pencil", "cusp", "power"], rng=rng)
        assert total_degree(plan) == n
    with pytest.raises(ValueError):
        synthesize_plan(-1)
    with pytest.raises(ValueError):
        synthesize_plan(1, ["cusp"])


def test_ledger_check():
    cp2 = lookup("CP2")
    plan = FoliationPlan((0,), (3,), 0, 3, (cusp(), pencil()))
    assert ledger_check(cp2, plan)
    assert not ledger_check(cp2, FoliationPlan((0,), (3,), 0, 3, (cusp(),)))
    assert not ledger_check(cp2, FoliationPlan((0,), (3,), 0, 3, (cusp(), pencil("negative"))))
    s4 = lookup("S4")
    ach = FoliationPlan((), (), 1, 1, (pencil(),), (pencil("negative"),))
    assert ach.achiral and ledger_check(s4, ach)
    assert not ledger_check(s4, FoliationPlan((), (), 1, 1, (pencil(),), (pencil(),)))


def test_ledger_random_plans():
    rng = random.Random(9)
    inv = lookup("CP2#CP2bar")
    c = CohClass((3, 1))
    for _ in range(30):
        tau = CohClass((rng.randint(-2, 2), rng.randint(-2, 2)))
        nu = c - tau
        n = inv.chi - inv.form.pair(tau, nu)
        if n < 0:
            continue
        plan = FoliationPlan(tau.coords, nu.coords, 0, n, tuple(synthesize_plan(n, ["pencil", "cusp"], rng=rng)))
        assert ledger_check(inv, plan)
