import json
from fractions import Fraction

import pytest

from oligorep import cli


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, argv):
    code, out = run(capsys, argv)
    assert code == 0, out
    return json.loads(out)


def test_catalog_linear_order(capsys):
    report = run_json(capsys, ["catalog", "--class", "linear_order",
                               "--max-base", "5"])
    assert report["count"] == 6
    assert len(report["labels"]) == 6
    assert all(label["sigma_degree"] == 1 for label in report["labels"])


def test_catalog_empty_base_only(capsys):
    report = run_json(capsys, ["catalog", "--class", "graph",
                               "--max-base", "0"])
    assert report["count"] == 1
    assert report["labels"][0]["base_size"] == 0


def test_catalog_csv(capsys):
    code, out = run(capsys, ["catalog", "--class", "pure_set",
                             "--max-base", "2", "--format", "csv"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].split(",")[0] == "base_code"
    assert len(lines) == 5


def test_decompose_pure_cube(capsys):
    report = run_json(capsys, ["decompose", "--class", "pure_set",
                               "--n", "3"])
    assert report["total_degree"] == 13
    assert len(report["terms"]) == 6
    assert report["recursion"]["ok"] is True
    assert report["recursion"]["max_abs_residual"] == 0


def test_decompose_moving_part_has_no_trivial_label(capsys):
    report = run_json(capsys, ["decompose", "--class", "boolean_algebra",
                               "--n", "1", "--x0"])
    assert all(term["base_size"] > 0 for term in report["terms"])


def test_subgroups_listing(capsys):
    report = run_json(capsys, ["subgroups", "--class", "pure_set",
                               "--max-base", "2"])
    assert report["count"] == 4


def test_cosets_listing(capsys):
    report = run_json(capsys, ["cosets", "--class", "vector_space",
                               "--max-base", "1"])
    assert report["count"] == 2
    for pair in report["pairs"]:
        assert pair["profile"]["count"] == len(
            pair["profile"]["witnesses"])
        assert pair["finite_left_classes"] >= 1


def test_kazhdan_relational_report(capsys):
    report = run_json(capsys, ["kazhdan", "--class", "pure_set",
                               "--depth", "4", "--trials", "50"])
    assert report["Q"] == [[1], [2]]
    assert report["tree"]["conditions_ok"] is True
    assert report["tree"]["level_sizes"] == [1, 4, 16, 128]
    assert report["freeness"]["pass"] is True
    trials = report["displacement_trials"]
    assert trials["count"] == 50
    assert trials["at_least_half"] is True
    assert Fraction(trials["min_value"]) >= Fraction(1, 2)


def test_kazhdan_without_tree_for_algebraic_class(capsys):
    report = run_json(capsys, ["kazhdan", "--class", "vector_space"])
    assert "tree" not in report
    assert report["freeness"]["pass"] is True


def test_kazhdan_graph_cayley_section(capsys):
    report = run_json(capsys, ["kazhdan", "--class", "graph",
                               "--seed", "7", "--trials", "50",
                               "--depth", "4"])
    assert report["cayley"]["edge_invariance"] is True
    assert 0 <= Fraction(report["cayley"]["extension_rate"]) <= 1


def test_output_file_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    for path in (out1, out2):
        code, _ = run(capsys, ["decompose", "--class", "graph", "--n", "2",
                               "--out", str(path)])
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert not (tmp_path / "a.json.tmp").exists()


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["catalog"])
    assert info.value.code == 1
    code, _ = run(capsys, ["catalog", "--class", "not_a_class"])
    assert code == 1
    code, _ = run(capsys, ["kazhdan", "--class", "pure_set",
                           "--format", "csv"])
    assert code == 1


def test_size_limit_exits_two(capsys, monkeypatch):
    monkeypatch.setenv("OLIGOREP_LIMITS", '{"tree_nodes": 50}')
    code, _ = run(capsys, ["kazhdan", "--class", "pure_set",
                           "--depth", "6"])
    assert code == 2


def test_invariant_failure_exits_three(capsys, monkeypatch):
    monkeypatch.setattr(cli.oligo, "tensor_recursion_check",
                        lambda *a, **k: {"ok": False})
    code, _ = run(capsys, ["decompose", "--class", "pure_set", "--n", "2"])
    assert code == 3


def test_selftest_exit_codes(capsys, monkeypatch):
    rows = [{"id": "1", "desc": "stub", "passed": True, "elapsed": 0.0,
             "details": {}}]
    monkeypatch.setattr("oligorep.acceptance.run_all", lambda: rows)
    report = run_json(capsys, ["selftest"])
    assert report["ok"] is True
    assert "elapsed" not in report["criteria"][0]

    rows[0]["passed"] = False
    code, _ = run(capsys, ["selftest"])
    assert code == 3
