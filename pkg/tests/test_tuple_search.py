import json

import pytest

from verikit.errors import DegreeOverflow
from verikit.perm_core import CycleType, cyclic_group, dihedral_group, symmetric_group
from verikit.ramification import canonical_entries, genus
from verikit.tuple_search import (SearchSpec, enumerate_base_tuples, naive_search, placements,
                                  polynomial_types, search, spec_for_placement)

T = CycleType.parse


def small_specs():
    out = []
    for U, htypes, V, gtypes in [
        (cyclic_group(2), [T("[2]")], dihedral_group(3), ["[3]", "[2.1]", "[2.1]"]),
        (cyclic_group(3), [T("[3]")], cyclic_group(3), ["[3]", "[3]"]),
        (dihedral_group(3), [T("[2.1]"), T("[2.1]")], cyclic_group(3), ["[3]", "[3]"]),
        (cyclic_group(2), [T("[2]")], symmetric_group(4), ["[4]", "[3.1]", "[2.1^2]"]),
    ]:
        base = enumerate_base_tuples(V, gtypes)[0]
        for pl in placements(base, htypes):
            out.append(spec_for_placement(U, base, pl))
    return out


SPECS = small_specs()


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"deg{s.degree}-r{s.base_tuple.r}")
def test_search_matches_naive_enumeration(spec):
    fast = search(spec, with_fingerprint=False, with_kernel=False)
    assert fast.exhaustive
    slow = naive_search(spec)
    assert {canonical_entries(t.entries) for t in fast.tuples} == slow
    assert len(fast.tuples) == len(slow)


@pytest.mark.parametrize("spec", SPECS[:6], ids=lambda s: f"deg{s.degree}")
def test_found_tuples_are_genus_zero_with_full_cycle(spec):
    for t in search(spec, with_fingerprint=False, with_kernel=False).tuples:
        assert genus(t) == 0
        assert sorted(t.entries[0]) == list(range(spec.degree))


def test_parallel_search_is_deterministic():
    V = symmetric_group(4)
    base = enumerate_base_tuples(V, ["[4]", "[2.1^2]", "[2.1^2]", "[2.1^2]"])[0]
    pl = placements(base, [T("[3]")])[0]
    spec = spec_for_placement(cyclic_group(3), base, pl)
    a = search(spec, jobs=1)
    b = search(spec, jobs=3)
    assert [t.entries for t in a.tuples] == [t.entries for t in b.tuples]
    assert [g.to_json() for g in a.groups] == [g.to_json() for g in b.groups]


def test_spec_json_round_trip():
    spec = SPECS[-1]
    again = SearchSpec.from_json(json.loads(json.dumps(spec.to_json())))
    assert again.to_json() == spec.to_json()
    assert [t.entries for t in search(again, with_fingerprint=False).tuples] == \
        [t.entries for t in search(spec, with_fingerprint=False).tuples]


def test_generic_s4_base_tuples():
    # polynomials with simple branching: n^(n-3) classes
    assert len(enumerate_base_tuples(symmetric_group(4), ["[4]", "[2.1^2]", "[2.1^2]", "[2.1^2]"])) == 4
    assert len(enumerate_base_tuples(symmetric_group(5), ["[5]"] + ["[2.1^3]"] * 4)) == 25
    types = {tuple(t.notation() for t in ts) for ts in polynomial_types(symmetric_group(4))}
    assert ("[4]", "[3.1]", "[2.1^2]") in types
    assert ("[4]", "[2.1^2]", "[2.1^2]", "[2.1^2]") in types


def test_placements_of_a_single_branch_point():
    base = enumerate_base_tuples(cyclic_group(3), ["[3]", "[3]"])[0]
    pls = placements(base, [T("[2]")])
    # the ramified point over 0, or a non-branch value
    assert len(pls) == 2
    assert len(placements(base, [T("[2]")], allow_free=False)) == 1


def test_degree_cap():
    spec = SPECS[0]
    spec.max_degree = 4
    with pytest.raises(DegreeOverflow):
        search(spec)
    spec.max_degree = 24
