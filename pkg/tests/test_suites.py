import itertools

import pytest

from verikit.errors import DataFileMissing, HypothesisViolated
from verikit.perm_core import cyclic_group, pinv, pmul
from verikit.ramification import BranchTuple
from verikit.suites import (CaseCombo, Location, SuiteConfig, eval_expr, load_data, reality_obstruction,
                            rule_matches, run_case_combos, run_suite, satisfies)
from verikit.wreath import ImprimitiveFrame, block_kernel


def test_eval_expr_allows_only_arithmetic():
    assert eval_expr("2*p**(q-1)", {"p": 3, "q": 3}) == 18
    assert eval_expr(7, {}) == 7
    for bad in ["__import__('os')", "p.real", "[p]", "r + 1", "lambda: 1"]:
        with pytest.raises((HypothesisViolated, SyntaxError)):
            eval_expr(bad, {"p": 2})


LOCS = [Location("[2]", "special", "[3.1]", "g1"), Location("[2]", "free", None, "free0")]


def test_rule_matching_is_a_bijection_with_value_letters():
    rule = {"g": "S4-special", "at": [{"h": "[2]", "kind": "free"}, {"h": "[2]", "over": "[3.1]"}]}
    assert rule_matches(rule, "S4-special", 4, "X^p", 2, LOCS)
    assert not rule_matches(rule, "S4-generic", 4, "X^p", 2, LOCS)
    assert not rule_matches({"at": [{"h": "[2]"}]}, "S4-special", 4, "X^p", 2, LOCS)
    same = {"at": [{"value": "u"}, {"value": "u"}]}
    diff = {"at": [{"value": "u"}, {"value": "v"}]}
    assert not rule_matches(same, "S4-special", 4, "X^p", 2, LOCS)
    assert rule_matches(diff, "S4-special", 4, "X^p", 2, LOCS)


def test_rule_parameters_and_free_flag():
    assert not rule_matches({"params": {"p_min": 3}}, "X^q", 3, "X^p", 2, LOCS)
    assert rule_matches({"params": {"p": 2, "q": 3}}, "X^q", 3, "X^p", 2, LOCS)
    assert not rule_matches({"free": False}, "X^q", 3, "X^p", 2, LOCS)
    assert rule_matches({"free": False}, "X^q", 3, "X^p", 2, LOCS[:1])


def test_satisfies_one_of():
    expect = {"one_of": [{"order_total": 72}, {"contains": ["V4"]}]}
    assert satisfies(expect, {"order_total": 72, "contains": {"V4": False}})
    assert satisfies(expect, {"order_total": 3456, "contains": {"V4": True}})
    assert not satisfies(expect, {"order_total": 3456, "contains": {"V4": False}})


def test_missing_data_file(tmp_path, monkeypatch):
    with pytest.raises(DataFileMissing):
        run_suite("ritt", SuiteConfig(data_dir=str(tmp_path)))
    monkeypatch.setenv("VERIKIT_DATA", str(tmp_path))
    with pytest.raises(DataFileMissing):
        load_data("case_tables.json")


def test_unknown_suite():
    with pytest.raises(HypothesisViolated):
        run_suite("nope")


def test_reports_do_not_depend_on_parallelism():
    a = run_suite("table1", SuiteConfig(jobs=1)).to_json(with_timing=False)
    b = run_suite("table1", SuiteConfig(jobs=2)).to_json(with_timing=False)
    assert a == b
    assert a["counts"]["fail"] == 0


def test_budget_truncates_and_sets_exit_code():
    rep = run_suite("lemmas", SuiteConfig(budget_seconds=0.0))
    assert rep.truncated and rep.exit_code() == 2
    assert any(r.reason == "budget" for r in rep.records)


def _brute_reversal_normalizes(G, tau):
    n = G.degree
    elems = set(G.elements())
    for x in itertools.permutations(range(n)):
        if pmul(pmul(x, tau), pinv(x)) != pinv(tau):
            continue
        if all(pmul(pmul(x, g), pinv(x)) in elems for g in G.raw_generators):
            return True
    return False


def test_reality_obstruction_matches_brute_force():
    row = load_data("table1.json")["rows"][0]
    t = BranchTuple.from_cycle_strings(row["degree"], row["tuple"])
    G = t.group()
    res = reality_obstruction(G, t.entries[0])
    assert res["obstruction"] == (not _brute_reversal_normalizes(G, t.entries[0]))
    assert res["obstruction"]
    C = cyclic_group(7)
    assert not reality_obstruction(C, C.raw_generators[0])["obstruction"]


def test_x3_over_generic_s4_has_an_extra_monodromy_class():
    """All three branch points of h in one unramified fibre of X^3.

    Besides S4 x C3 there is a second polynomial class, of order 3456.
    """
    combo = CaseCombo("agl_s4", "X^q", 3, "S4-generic", 4)
    records = run_case_combos([combo]).records
    failing = [r for r in records if r.status == "fail"]
    assert [r.ref for r in failing] == ["agl_s4:s4xc3"]
    totals = sorted(k["order_total"] for k in failing[0].computed["kernels"])
    assert totals == [72, 3456]

    t = BranchTuple.from_cycle_strings(12, ["(1,5,9,2,6,10,3,7,11,4,8,12)", "(1,9,5)(2,12,6)(3,10,8)(4,11,7)",
                                            "(1,2)(7,8)(10,12)"])
    G = t.group()
    assert G.order() == 3456
    gamma = block_kernel(ImprimitiveFrame.standard(G, 4))
    assert gamma.order() == 1152
    assert failing[0].inputs["configuration"].endswith("free:{[2.1^2],[2.1^2],[2.1^2]}")


def test_block_kernel_of_the_extra_class_is_not_a_power_of_a4():
    t = BranchTuple.from_cycle_strings(12, ["(1,5,9,2,6,10,3,7,11,4,8,12)", "(1,9,5)(2,12,6)(3,10,8)(4,11,7)",
                                            "(1,2)(7,8)(10,12)"])
    G = t.group()
    # no 3-cycle supported in a single block, so A4^3 is not inside
    three_cycles = [g for g in G.elements() if sum(1 for x in range(12) if g[x] != x) == 3]
    assert not three_cycles
