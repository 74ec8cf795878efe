import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_perms, closure, perms, small_generating_sets
from verikit.errors import NotNormal
from verikit.groups import named_group
from verikit.perm_core import (BlockSystem, CycleType, Permutation, PermGroup, all_block_systems,
                               alternating_group, cycle_type, cyclic_group, dihedral_group,
                               is_split_extension, maximal_block_systems, pcycles, pconj, pid, pinv,
                               pmul, porder, ppow, socle_small, symmetric_group)


def test_composition_applies_right_factor_first():
    a = (1, 2, 0)
    b = (0, 2, 1)
    assert pmul(a, b) == tuple(a[b[x]] for x in range(3))


@given(perms(7), perms(7))
def test_inverse_and_conjugation(a, b):
    assert pmul(a, pinv(a)) == pid(7)
    assert pconj(a, b) == pmul(pmul(b, a), pinv(b))
    assert cycle_type(pconj(a, b)) == cycle_type(a)


@given(perms(8), st.integers(-20, 20))
def test_power_matches_repeated_product(a, k):
    x = pid(8)
    step = a if k >= 0 else pinv(a)
    for _ in range(abs(k)):
        x = pmul(step, x)
    assert ppow(a, k) == x
    assert ppow(a, porder(a)) == pid(8)


@given(perms(9))
def test_cycle_string_round_trip(a):
    p = Permutation(a)
    assert Permutation.parse(p.to_cycle_string(), 9) == p
    assert sorted(x for c in pcycles(a, include_fixed=True) for x in c) == list(range(9))


@pytest.mark.parametrize("text", ["[4]", "[2.1^2]", "[3^2.1]", "[2^3.1^6]", "[1^5]"])
def test_cycle_type_notation_round_trip(text):
    assert CycleType.parse(text).notation() == text


def test_cycle_type_index():
    assert CycleType.parse("[3.1]").index == 2
    assert CycleType.parse("[2^2.1]").index == 2


@settings(max_examples=60, deadline=None)
@given(small_generating_sets())
def test_order_matches_brute_force_closure(data):
    n, gens = data
    G = PermGroup(n, gens)
    assert G.order() == len(closure(gens, n))


@settings(max_examples=40, deadline=None)
@given(small_generating_sets(max_degree=5), st.data())
def test_membership_matches_closure(data, draw):
    n, gens = data
    G = PermGroup(n, gens)
    elems = closure(gens, n)
    g = draw.draw(perms(n))
    assert (g in G) == (g in elems)


@pytest.mark.parametrize("G, order", [
    (symmetric_group(5), 120), (alternating_group(5), 60), (cyclic_group(7), 7), (dihedral_group(5), 10),
    (named_group("PGL2(5)"), 120), (named_group("PSL2(7)"), 168), (named_group("PSL3(2)"), 168),
    (named_group("PGL2(7)"), 336),
])
def test_standard_group_orders(G, order):
    assert G.order() == order


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def _brute_block_systems(G):
    out = set()
    n = G.degree
    for part in _partitions(list(range(n))):
        if len(part) in (1, n) or len({len(b) for b in part}) > 1:
            continue
        bs = BlockSystem(tuple(tuple(b) for b in part))
        if bs.is_invariant(G):
            out.add(bs)
    return out


@pytest.mark.parametrize("G", [cyclic_group(6), dihedral_group(6), symmetric_group(4),
                               PermGroup(6, [(1, 2, 0, 4, 5, 3), (3, 4, 5, 0, 1, 2)]),
                               cyclic_group(8)])
def test_block_systems_match_partition_enumeration(G):
    found = {b for b in all_block_systems(G) if not b.is_trivial()}
    assert found == _brute_block_systems(G)


def test_cyclic_six_has_two_maximal_block_systems():
    assert len(maximal_block_systems(cyclic_group(6))) == 2
    assert len(maximal_block_systems(cyclic_group(8))) == 1


def test_socles():
    assert socle_small(symmetric_group(4)).order() == 4
    assert socle_small(alternating_group(5)).order() == 60
    assert socle_small(cyclic_group(6)).order() == 6
    assert socle_small(dihedral_group(5)).order() == 5


def test_split_extensions():
    S4 = symmetric_group(4)
    V4 = PermGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1)])
    assert is_split_extension(S4, V4).status == "split"
    C4 = cyclic_group(4)
    assert is_split_extension(C4, PermGroup(4, [ppow((1, 2, 3, 0), 2)])).status == "nonsplit"


def test_split_extension_rejects_non_normal():
    S3 = symmetric_group(3)
    with pytest.raises(NotNormal):
        is_split_extension(S3, PermGroup(3, [(1, 0, 2)]))


def test_split_oracle_on_all_subgroups_of_small_groups():
    # brute force: a complement is a subgroup of the right order meeting N trivially
    D4 = dihedral_group(4)
    elems = list(D4.elements())
    Z = PermGroup(4, [ppow((1, 2, 3, 0), 2)])
    brute = any(
        PermGroup(4, [a, b]).order() == 4 and not any(z in PermGroup(4, [a, b]) for z in Z.elements() if z != pid(4))
        for a, b in itertools.combinations(elems, 2))
    assert (is_split_extension(D4, Z).status == "split") == brute


def test_symmetric_elements_enumerate():
    assert set(symmetric_group(4).elements()) == set(all_perms(4))
