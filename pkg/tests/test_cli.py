import json
import subprocess
import sys

from verikit.cli import main
from verikit.perm_core import CycleType, cyclic_group, symmetric_group
from verikit.ramification import BranchTuple, read_jsonl, write_jsonl
from verikit.tuple_search import enumerate_base_tuples, placements, spec_for_placement

S4_GENERIC = BranchTuple.from_cycle_strings(4, ["(1,2,3,4)", "(1,2)", "(1,3)", "(1,4)"])


def test_genus(tmp_path, capsys):
    path = tmp_path / "t.jsonl"
    write_jsonl(path, [S4_GENERIC, BranchTuple.from_cycle_strings(2, ["(1,2)"] * 4)])
    assert main(["genus", str(path)]) == 0
    lines = [json.loads(s) for s in capsys.readouterr().out.splitlines()]
    assert [d["genus"] for d in lines] == [0, 1]


def test_braid_orbit(tmp_path, capsys):
    path = tmp_path / "t.jsonl"
    out = tmp_path / "orbit.jsonl"
    write_jsonl(path, [S4_GENERIC])
    assert main(["braid-orbit", str(path), "--out", str(out)]) == 0
    info = json.loads(capsys.readouterr().out)
    # 4 Nielsen classes, each with the 4-cycle in any of 4 positions
    assert info["orbit_size"] == len(read_jsonl(out)) == 16


def test_search_tuples(tmp_path, capsys):
    base = enumerate_base_tuples(symmetric_group(4), ["[4]", "[3.1]", "[2.1^2]"])[0]
    pl = placements(base, [CycleType.parse("[2]")])[0]
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec_for_placement(cyclic_group(2), base, pl).to_json()))
    out = tmp_path / "results.jsonl"
    assert main(["search-tuples", "--spec", str(spec_path), "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["exhaustive"]
    assert len(read_jsonl(out)) == summary["tuples"]


def test_branch_data(capsys):
    assert main(["branch-data", "X^3*(X-1)"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert {d["ram_type"] for d in data} == {"[3.1]", "[2.1^2]", "[4]"}
    assert main(["branch-data", "X^2+a", "--context", "a^2 + a/2 + 3/16"]) == 0


def test_verify_writes_a_deterministic_report(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--suite", "ritt", "--out", str(out1), "--deterministic"]) == 0
    assert main(["verify", "--suite", "ritt", "--out", str(out2), "--deterministic", "--jobs", "2"]) == 0
    assert out1.read_text() == out2.read_text()
    assert json.loads(out1.read_text())["counts"]["fail"] == 0


def test_exit_codes(tmp_path, capsys):
    assert main(["verify", "--suite", "lemmas", "--budget", "0"]) == 2
    assert main(["verify", "--suite", "ritt", "--data-dir", str(tmp_path)]) == 1
    assert "DataFileMissing" in capsys.readouterr().err


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "verikit.cli", "genus", "/nonexistent.jsonl"],
                         capture_output=True, text=True)
    assert res.returncode != 0
