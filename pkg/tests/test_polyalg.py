from fractions import Fraction

import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester
from hypothesis import given, settings
from hypothesis import strategies as st

from verikit.errors import DegreeOverflow, NotBranchPoint
from verikit.perm_core import CycleType
from verikit.polyalg import (AlgebraicContext, Poly, branch_data, chebyshev, chebyshev_identity, compose,
                             configuration_check, configuration_instances, critical_value_polynomial,
                             decompose_degree_check, multiplicity_profile, ramification_type, resultant,
                             ritt_identity, special_points, squarefree_decomposition)

x = sympy.Symbol("X")


def polys(min_deg=0, max_deg=4, lo=-4, hi=4):
    return st.lists(st.integers(lo, hi), min_size=min_deg + 1, max_size=max_deg + 1).map(Poly) \
        .filter(lambda p: p.degree >= min_deg)


@settings(max_examples=60, deadline=None)
@given(polys(1, 3), polys(1, 3), polys(1, 2))
def test_composition_is_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, b).degree == a.degree * b.degree


@settings(max_examples=40, deadline=None)
@given(polys(1, 4), polys(1, 3))
def test_arithmetic_matches_sympy(a, b):
    assert (a * b).to_sympy().expand() == (a.to_sympy() * b.to_sympy()).expand()
    q, r = divmod(a, b)
    assert q * b + r == a and r.degree < b.degree


@settings(max_examples=40, deadline=None)
@given(polys(1, 4), polys(1, 4))
def test_resultant_is_the_sylvester_determinant(a, b):
    # sympy.resultant itself disagrees in sign on e.g. (X + 2, X^3 + 1)
    det = sylvester(a.to_sympy(), b.to_sympy(), x).det()
    assert Fraction(resultant(a, b)) == Fraction(str(det))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=4))
def test_multiplicity_profile_of_products_of_linear_factors(roots):
    merged = {}
    for r, e in roots:
        merged[r] = merged.get(r, 0) + e
    f = Poly([1])
    for r, e in merged.items():
        f = f * Poly([-r, 1]) ** e
    assert multiplicity_profile(f) == CycleType(tuple(sorted(merged.values(), reverse=True)))
    prod = Poly([1])
    for mult, a in squarefree_decomposition(f):
        prod = prod * a ** mult
    assert prod == f.monic()


@settings(max_examples=30, deadline=None)
@given(polys(2, 5, -3, 3))
def test_riemann_hurwitz_for_random_polynomials(f):
    # branch_data raises if the indices do not sum to 2(n - 1)
    data = branch_data(f)
    assert data[-1].branch_point == "inf"
    R = critical_value_polynomial(f)
    assert R.degree <= f.degree - 1
    assert sum(d.conjugates for d in data[:-1]) == len({r for r in sympy.roots(R.to_sympy(), x)})


def test_critical_values_of_a_cubic():
    f = Poly.parse("X^3 - 3*X")
    vals = sorted(d.branch_point for d in branch_data(f) if d.branch_point != "inf")
    assert vals == [-2, 2]
    assert [t.notation() for t in ramification_type(f)] == ["[2.1]", "[2.1]", "[3]"]


@pytest.mark.parametrize("n", range(1, 13))
def test_chebyshev_identity(n):
    assert chebyshev_identity(n)


@pytest.mark.parametrize("m, n", [(2, 3), (3, 4), (2, 5), (4, 6)])
def test_chebyshev_polynomials_commute(m, n):
    assert compose(chebyshev(m), chebyshev(n)) == chebyshev(m * n)
    assert ritt_identity(chebyshev(m), chebyshev(n), chebyshev(n), chebyshev(m))


def test_monomial_ritt_move():
    # X^3 o X (X^3 + 1) = X (X + 1)^3 o X^3
    X = Poly.X()
    assert ritt_identity(X ** 3, X * (X ** 3 + 1), X * (X + 1) ** 3, X ** 3)
    assert not ritt_identity(X ** 3, X * (X ** 3 + 1), X * (X + 1) ** 2, X ** 3)


def test_decomposition_search():
    g = Poly.parse("X^2 + 3*X - 1")
    h = Poly.parse("X^3 - 2*X + 5")
    ok, pair = decompose_degree_check(compose(g, h), (2, 3))
    assert ok and compose(*pair) == compose(g, h)
    ok, _ = decompose_degree_check(Poly.parse("X^6 + X + 1"), (2, 3))
    assert not ok
    ok, _ = decompose_degree_check(chebyshev(6), (3, 2))
    assert ok


def test_composition_degree_cap():
    with pytest.raises(DegreeOverflow):
        compose(Poly.parse("X^20"), Poly.parse("X^20"), cap=100)


def test_special_points():
    f = Poly.parse("X^3*(X-1)")
    assert 1 in special_points(f, 0)
    with pytest.raises(NotBranchPoint):
        special_points(f, 5)


def test_algebraic_context_arithmetic():
    K = AlgebraicContext.parse("a^2 - 2")
    a = K.gen
    assert a * a == K.elem(2)
    assert (1 + a) * (a - 1) == K.one()
    assert (a + 3).inverse() * (a + 3) == K.one()


@pytest.mark.parametrize("case_id", sorted(configuration_instances()))
def test_configuration_instances(case_id):
    assert configuration_check(case_id)


def test_configuration_check_rejects_a_wrong_pair():
    # X^3 + 2 has its branch point at 2, which is not special for X^3 (X - 1)
    assert not configuration_check("s4-agl-c3", h=Poly.parse("X^3 + 2"))
