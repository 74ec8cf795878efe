import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from verikit.errors import IndexOutOfRange, InvalidTuple, NotTransitive
from verikit.perm_core import cycle_type, pconj, pid
from verikit.ramification import (BraidWord, BranchTuple, braid_act, braid_orbit, canonical_entries,
                                  coalesce, genus, is_polynomial_tuple, random_tuple, read_jsonl,
                                  tuple_product, write_jsonl)


@st.composite
def product_one_tuples(draw, max_degree=7, max_r=6):
    n = draw(st.integers(2, max_degree))
    r = draw(st.integers(3, max_r))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_tuple(n, r, random.Random(seed))


def test_product_composes_right_to_left():
    t = BranchTuple.from_cycle_strings(4, ["(1,2,3,4)", "(1,2)", "(1,3)", "(1,4)"])
    assert tuple_product(t.entries) == pid(4)


def test_generic_s4_tuple_has_genus_zero():
    t = BranchTuple.from_cycle_strings(4, ["(1,2,3,4)", "(1,2)", "(1,3)", "(1,4)"])
    assert genus(t) == 0
    assert is_polynomial_tuple(t)


def test_four_transpositions_in_degree_two_give_an_elliptic_curve():
    t = BranchTuple.from_cycle_strings(2, ["(1,2)"] * 4)
    assert genus(t) == 1
    assert not is_polynomial_tuple(t)


def test_invalid_tuples_rejected():
    with pytest.raises(InvalidTuple):
        BranchTuple.from_cycle_strings(3, ["(1,2)", "(1,3)"])
    with pytest.raises(NotTransitive):
        genus(BranchTuple.from_cycle_strings(4, ["(1,2)", "(1,2)"]))


@settings(max_examples=60, deadline=None)
@given(product_one_tuples())
def test_index_sum_is_even_for_product_one_tuples(t):
    # sign of the product: parity of the index sum
    assert t.index_sum() % 2 == 0
    if t.is_transitive():
        assert genus(t) >= 0


@settings(max_examples=80, deadline=None)
@given(product_one_tuples(), st.data())
def test_braid_relations(t, data):
    r = t.r
    i = data.draw(st.integers(1, r - 1))
    assert braid_act(t, [i, -i]) == t
    if i < r - 1:
        assert braid_act(t, [i, i + 1, i]) == braid_act(t, [i + 1, i, i + 1])
    j = data.draw(st.integers(1, r - 1))
    if abs(i - j) >= 2:
        assert braid_act(t, [i, j]) == braid_act(t, [j, i])


@settings(max_examples=60, deadline=None)
@given(product_one_tuples(), st.lists(st.integers(1, 5), max_size=6))
def test_braiding_preserves_invariants(t, word):
    word = [a for a in word if a <= t.r - 1]
    u = braid_act(t, word)
    assert tuple_product(u.entries) == pid(t.degree)
    assert u.group().order() == t.group().order()
    assert sorted(cycle_type(e).parts for e in u.entries) == sorted(cycle_type(e).parts for e in t.entries)
    assert braid_act(u, BraidWord(tuple(word)).inverse()) == t


def test_braid_word_bounds():
    t = BranchTuple.from_cycle_strings(4, ["(1,2,3,4)", "(1,2)", "(1,3)", "(1,4)"])
    with pytest.raises(IndexOutOfRange):
        braid_act(t, [4])


@settings(max_examples=60, deadline=None)
@given(product_one_tuples(max_degree=6), st.data())
def test_canonical_form_is_conjugation_invariant(t, data):
    if not t.is_transitive():
        return
    g = tuple(data.draw(st.permutations(list(range(t.degree)))))
    conj = tuple(pconj(e, g) for e in t.entries)
    assert canonical_entries(conj) == canonical_entries(t.entries)


def test_transposition_tuples_form_one_orbit():
    # brute force over all transitive product-one 4-tuples of transpositions in S_3
    trans = [(1, 0, 2), (2, 1, 0), (0, 2, 1)]
    classes = set()
    for e in itertools.product(trans, repeat=4):
        if tuple_product(e) == pid(3) and BranchTuple(3, e).is_transitive():
            classes.add(canonical_entries(e))
    start = BranchTuple(3, min(classes))
    orbit = {u.entries for u in braid_orbit(start)}
    assert orbit == classes


def test_coalesce_multiplies_neighbours():
    t = BranchTuple.from_cycle_strings(4, ["(1,2,3,4)", "(1,2)", "(1,3)", "(1,4)"])
    c = coalesce(t, 2)
    assert c.r == 3
    assert cycle_type(c.entries[1]).notation() == "[3.1]"
    with pytest.raises(IndexOutOfRange):
        coalesce(t, 4)


def test_jsonl_round_trip(tmp_path):
    rng = random.Random(3)
    ts = [random_tuple(5, 4, rng) for _ in range(5)]
    path = tmp_path / "t.jsonl"
    write_jsonl(path, ts)
    assert read_jsonl(path) == ts
