import json
import subprocess

import pytest

from downsets.cli import main


def write_doc(tmp_path, doc, name="poset.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def chain_doc(n):
    return {
        "elements": [{"id": i} for i in range(n)],
        "leq": [[i, j] for i in range(n) for j in range(i, n)],
        "closed": True,
    }


def antichain_doc(n):
    return {
        "elements": [{"id": i} for i in range(n)],
        "leq": [[i, i] for i in range(n)],
        "closed": True,
    }


def test_validate_text(tmp_path, capsys):
    assert main(["validate", write_doc(tmp_path, chain_doc(3))]) == 0
    out = capsys.readouterr().out
    assert "valid: 3 elements" in out
    assert "maximal: 2" in out


def test_validate_json(tmp_path, capsys):
    assert main(["validate", write_doc(tmp_path, chain_doc(2)), "--format", "json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["valid"] is True and body["ids"] == [0, 1]


def test_validate_reports_violation_with_exit_2(tmp_path, capsys):
    doc = {
        "elements": [{"id": 0}, {"id": 1}],
        "leq": [[0, 0], [1, 1], [0, 1], [1, 0]],
        "closed": True,
    }
    assert main(["validate", write_doc(tmp_path, doc)]) == 2
    assert "antisymmetry" in capsys.readouterr().out


def test_missing_file_exits_1(capsys):
    assert main(["validate", "/nonexistent/poset.json"]) == 1


def test_bad_json_exits_1(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["validate", str(path)]) == 1


def test_usage_error_exits_1(capsys):
    assert main([]) == 1
    assert main(["no-such-command"]) == 1


def test_intervals_count(tmp_path, capsys):
    assert main(["intervals", write_doc(tmp_path, chain_doc(3)), "--count"]) == 0
    assert capsys.readouterr().out == "4\n"


def test_intervals_enumerate_line_format(tmp_path, capsys):
    assert main(["intervals", write_doc(tmp_path, antichain_doc(2)), "--enumerate"]) == 0
    assert capsys.readouterr().out == "\n0\n1\n0 1\n"


def test_intervals_requires_a_mode(tmp_path, capsys):
    assert main(["intervals", write_doc(tmp_path, chain_doc(2))]) == 1


def test_enumeration_cap_exits_3(tmp_path, capsys):
    path = write_doc(tmp_path, antichain_doc(12))
    assert main(["intervals", path, "--enumerate", "--max-enum", "100"]) == 3


def test_enumeration_cap_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("POSETS_MAX_ENUM", "100")
    path = write_doc(tmp_path, antichain_doc(12))
    assert main(["intervals", path, "--enumerate"]) == 3
    monkeypatch.setenv("POSETS_MAX_ENUM", "5000")
    assert main(["intervals", path, "--enumerate"]) == 0


def test_separate_text_and_tree(tmp_path, capsys):
    path = write_doc(tmp_path, chain_doc(4))
    assert main(["separate", path, "1", "3", "--depth", "4"]) == 0
    out = capsys.readouterr().out
    assert "interval: 0 1" in out
    assert "tree: 1100" in out


def test_separate_precondition_exits_2(tmp_path, capsys):
    path = write_doc(tmp_path, chain_doc(4))
    assert main(["separate", path, "3", "1"]) == 2


def test_gadget_decompose_pipeline(tmp_path, capsys):
    # build an encoding, decode its range back out of the ideal cover
    assert main(["gadget", "two-chain", "--f", "5", "--n", "8"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["gadget"] == {"family": "two-chain", "f": [5], "horizon": 8}
    path = write_doc(tmp_path, doc, "gadget.json")
    assert main(["decompose", path, "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "decoded: 5" in out


def test_gadget_bracketed_table_accepted(tmp_path, capsys):
    assert main(["gadget", "range-strong", "--f", "[2, 0]"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["gadget"]["f"] == [2, 0]


def test_gadget_two_table_family(tmp_path, capsys):
    assert main(["gadget", "sep", "--f", "0", "--g", "1", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "family: sep" in out
    assert "role a0:" in out


def test_gadget_overlapping_tables_exit_2(capsys):
    assert main(["gadget", "sep", "--f", "1", "--g", "1"]) == 2


def test_dot_output_allowed_for_validate_and_gadget(tmp_path, capsys):
    assert main(["validate", write_doc(tmp_path, chain_doc(2)), "--format", "dot"]) == 0
    assert "digraph" in capsys.readouterr().out
    assert main(["gadget", "two-chain", "--f", "1", "--format", "dot"]) == 0
    assert "digraph" in capsys.readouterr().out


def test_dot_output_refused_elsewhere(tmp_path, capsys):
    path = write_doc(tmp_path, chain_doc(2))
    assert main(["intervals", path, "--count", "--format", "dot"]) == 1


def test_priority_text_run(capsys):
    assert main(["priority", "10", "120"]) == 0
    out = capsys.readouterr().out
    assert "activations: 13" in out
    assert "verify: pass" in out


def test_priority_rules_file(tmp_path, capsys):
    rules = tmp_path / "rules.json"
    rules.write_text(json.dumps({"rules": [{"e": 0, "value": 0, "from_stage": 0}]}))
    assert main(["priority", "2", "3", str(rules), "--slice", "4"]) == 0
    assert "activations: 1" in capsys.readouterr().out


def test_census_text_table(capsys):
    assert main(["census", "3", "--random", "5"]) == 0
    out = capsys.readouterr().out
    assert "classes" in out
    assert "random: 5 posets" in out
    assert "total violations: 0" in out


def test_console_script_pipeline(tmp_path):
    # end to end through the installed entry point
    doc = subprocess.run(
        ["downsets", "gadget", "two-chain", "--f", "5", "--n", "8"],
        capture_output=True, text=True, check=True,
    ).stdout
    path = tmp_path / "g.json"
    path.write_text(doc)
    out = subprocess.run(
        ["downsets", "decompose", str(path), "--format", "text"],
        capture_output=True, text=True, check=True,
    ).stdout
    assert "decoded: 5" in out
