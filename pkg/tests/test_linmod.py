import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from verikit.errors import DimensionMismatch, HypothesisViolated
from verikit.linmod import (FpSubmodule, MonomialAction, aug_minus_module, aug_minus_power, aug_module,
                            aug_power, check_lemma_instance, classify_submodule, compute_lemma_span,
                            cyclic_code, diag_module, full_cycle_power_check, invariant_subspaces,
                            lemma_instances, lemma_prediction, orbit_span, symmetric_invariant_subspaces,
                            xq_minus_one)
from verikit.perm_core import alternating_group, cyclic_group, dihedral_group, symmetric_group


def vectors(p, n):
    return st.lists(st.integers(0, p - 1), min_size=n, max_size=n).map(tuple)


def brute_span(p, n, vecs):
    """All F_p-combinations: the span as a set of vectors."""
    vecs = list(vecs)
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(vecs)):
        out.add(tuple(sum(c * v[i] for c, v in zip(coeffs, vecs)) % p for i in range(n)))
    return out


def as_set(M):
    return brute_span(M.p, M.n, M.basis) if M.basis else {(0,) * M.n}


@settings(max_examples=50, deadline=None)
@given(st.lists(vectors(3, 4), min_size=1, max_size=4))
def test_span_matches_brute_force(vecs):
    M = FpSubmodule.span(3, 4, vecs)
    assert as_set(M) == brute_span(3, 4, vecs)
    assert 3 ** M.dim == len(as_set(M))


@settings(max_examples=50, deadline=None)
@given(st.lists(vectors(2, 5), max_size=3), st.lists(vectors(2, 5), max_size=3))
def test_dimension_formula_for_sum_and_intersection(a, b):
    A = FpSubmodule.span(2, 5, a)
    B = FpSubmodule.span(2, 5, b)
    assert (A + B).dim + A.intersect(B).dim == A.dim + B.dim
    assert (A + B).contains(A) and A.contains(A.intersect(B))


@settings(max_examples=40, deadline=None)
@given(vectors(3, 5))
def test_orbit_span_is_span_of_group_orbit(v):
    G = dihedral_group(5)
    act = MonomialAction(G, 3)
    orbit = set()
    for g in G.elements():
        w = [0] * 5
        for i, x in enumerate(v):
            w[g[i]] = x
        orbit.add(tuple(w))
    assert orbit_span(act, v) == FpSubmodule.span(3, 5, orbit)


def test_orbit_span_rejects_wrong_length():
    with pytest.raises(DimensionMismatch):
        orbit_span(MonomialAction(cyclic_group(5), 2), (1, 0))


@pytest.mark.parametrize("p, n", [(2, 4), (2, 6), (3, 6), (5, 4), (3, 3)])
def test_distinguished_modules(p, n):
    assert diag_module(p, n).dim == 1
    assert aug_module(p, n).dim == n - 1
    assert all(sum(b) % p == 0 for b in aug_module(p, n).basis)
    if n % 2 == 0:
        M = aug_minus_module(p, n)
        assert M.dim == n - 1
        assert all(sum((-1) ** k * x for k, x in enumerate(b)) % p == 0 for b in M.basis)


def test_powers_have_expected_dimension():
    # (Aug(C_p^o))^(n/o) has dimension n - n/o
    assert aug_power(2, 6, 3).dim == 4
    assert aug_minus_power(3, 6, 2).dim == 3
    assert classify_submodule(aug_power(2, 6, 3)).kind == "aug_power"
    assert classify_submodule(aug_minus_power(3, 6, 2)).kind == "aug_minus_power"


def test_classification_of_closed_forms():
    assert str(classify_submodule(FpSubmodule.zero(2, 5))) == "zero"
    assert str(classify_submodule(FpSubmodule.full(2, 5))) == "full"
    assert str(classify_submodule(diag_module(3, 5))) == "diag"
    assert str(classify_submodule(aug_module(3, 5))) == "aug"
    assert classify_submodule(FpSubmodule.span(2, 5, [(1, 1, 0, 0, 0)])).kind == "other"


@pytest.mark.parametrize("p, n, alternating", [(2, 4, False), (3, 4, False), (2, 5, False),
                                               (2, 4, True), (3, 4, True), (2, 5, True)])
def test_invariant_submodules_against_exhaustive_enumeration(p, n, alternating):
    V = alternating_group(n) if alternating else symmetric_group(n)
    fast = set(symmetric_invariant_subspaces(p, n, alternating))
    slow = set(invariant_subspaces(MonomialAction(V, p)))
    assert fast == slow
    assert {str(classify_submodule(M)) for M in fast} == {"zero", "diag", "aug", "full"}


def test_cyclic_codes_are_shift_invariant():
    # x^5 - 1 over F_2 = (x + 1)(x^4 + x^3 + x^2 + x + 1)
    assert xq_minus_one(5, 2) == [1, 0, 0, 0, 0, 1]
    C = cyclic_code(2, 5, [1, 1])
    assert C == aug_module(2, 5)
    act = MonomialAction(cyclic_group(5), 2)
    for b in C.basis:
        assert C.contains_vector(act.apply(0, b))


def test_every_lemma_instance_matches_closed_form():
    ids = set()
    for lid, params in lemma_instances(7):
        rec = check_lemma_instance(lid, params)
        assert rec.match, rec.to_json()
        ids.add(lid)
    assert ids == {"3.2", "3.3", "3.4", "3.5", "3.6"}


def test_short_orbit_span_brute_force():
    # e_0 + e_2 under C_6 over F_3: the span of all shifts, checked by enumeration
    params = {"p": 3, "q": 6, "i": 2}
    M = compute_lemma_span("3.3", params)
    shifts = [tuple(1 if k in (s % 6, (s + 2) % 6) else 0 for k in range(6)) for s in range(6)]
    assert as_set(M) == brute_span(3, 6, shifts)
    assert M == lemma_prediction("3.3", params).build(3, 6)


@pytest.mark.parametrize("params", [{"p": 7, "q": 3, "mu": 1}, {"p": 2, "q": 3, "mu": 0}])
def test_lemma_hypotheses_enforced(params):
    with pytest.raises(HypothesisViolated):
        lemma_prediction("3.2", params)


@pytest.mark.parametrize("m, n", [(2, 2), (3, 4), (4, 3), (5, 5)])
def test_full_cycle_powers_are_diagonal(m, n):
    assert all(full_cycle_power_check(m, n, trials=30, seed=m + n))
