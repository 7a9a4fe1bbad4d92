"""Command line verbs, output shapes, exit codes."""

import json

import pytest

from permres.cli import main
from permres.manifest import bundled_corpus, group_from_serialized

S5 = '{"kind": "symmetric", "m": 5}'
AFFINE = '{"kind": "affine", "family": "Sp", "m": 4, "q": 2}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_order_text_and_json(capsys):
    code, out, _ = run(capsys, "order", "--recipe", S5)
    assert code == 0 and "120" in out
    code, out, _ = run(capsys, "order", "--recipe", S5, "--json")
    assert code == 0 and json.loads(out)["order"] == 120


def test_describe_recomputes_profile(capsys):
    code, out, _ = run(capsys, "describe", "--recipe", AFFINE, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["order"] == 11520
    assert doc["primitive"] is True
    assert doc["composition-factors"] == ["C2", "C2", "C2", "C2", "C2", "A6"]
    assert doc["min-certified-d"] == 7


def test_construct_roundtrips_through_file(capsys, tmp_path):
    dest = tmp_path / "group.json"
    code, out, _ = run(capsys, "construct", "--recipe",
                       '{"kind": "subsets", "m": 5, "k": 2}',
                       "--out", str(dest))
    assert code == 0 and str(dest) in out
    doc = json.loads(dest.read_text())
    G = group_from_serialized(doc)
    assert G.degree == 10 and G.order() == 120
    assert len(doc["point-labels"]) == 10


def test_recipe_from_file(capsys, tmp_path):
    p = tmp_path / "r.json"
    p.write_text(S5)
    code, out, _ = run(capsys, "order", "--recipe", f"@{p}", "--json")
    assert code == 0 and json.loads(out)["order"] == 120


def test_base_size_verb(capsys):
    code, out, _ = run(capsys, "base-size", "--recipe",
                       '{"kind": "dihedral", "m": 4}', "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["size"] == 2 and doc["status"] == "exact"


def test_dist_number_verb(capsys):
    code, out, _ = run(capsys, "dist-number", "--recipe",
                       '{"kind": "dihedral", "m": 4}', "--json")
    assert code == 0 and json.loads(out)["distinguishing-number"] == 3


def test_stab_scan_exit_codes(capsys):
    code, out, _ = run(capsys, "stab-scan", "--recipe", AFFINE,
                       "--c", "2", "--predicate", "solvable", "--json")
    assert code == 0 and json.loads(out)["verdict"] == "all-pass"
    # S8 has non-solvable two-point stabilizers
    code, out, _ = run(capsys, "stab-scan", "--recipe",
                       '{"kind": "symmetric", "m": 8}', "--c", "2", "--json")
    assert code == 1 and json.loads(out)["verdict"] == "fail"


def test_reg_count_verb(capsys):
    code, out, _ = run(capsys, "reg-count", "--recipe",
                       '{"kind": "symmetric", "m": 3}', "--t", "2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == 6 and doc["exact"] is True


def test_bounds_verbs(capsys):
    code, out, _ = run(capsys, "bounds", "--check", "threshold-m",
                       "--params", '{"eps": "1"}', "--json")
    assert code == 0 and json.loads(out)["M"] == 21

    code, out, _ = run(capsys, "bounds", "--check", "formula", "--params",
                       '{"name": "diag_bound", "params": {"k": 2, "t_order": 60}}',
                       "--json")
    assert code == 0 and json.loads(out)["bound"] == 4

    code, out, _ = run(capsys, "bounds", "--check", "lemma22",
                       "--recipe", S5, "--params", '{"d": 6}', "--json")
    assert code == 0 and json.loads(out)["verdict"] == "holds"


def test_bounds_failing_comparison_exits_one(capsys):
    code, out, _ = run(capsys, "bounds", "--check", "formula", "--params",
                       '{"name": "diag_bound", "params": {"k": 2, "t_order": 60},'
                       ' "measured": 9}', "--json")
    assert code == 1 and json.loads(out)["verdict"] == "fails"


def test_verify_pass_and_fail(capsys, tmp_path):
    doc = {"schema": 1, "checks": [
        {"id": "ok", "recipe": {"kind": "cyclic", "m": 6},
         "assertions": [{"op": "order", "expect": 6, "tag": "direct"}]}]}
    p = tmp_path / "m.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--manifest", str(p))
    assert code == 0 and "1 passed" in out

    doc["checks"][0]["assertions"][0]["expect"] = 7
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--manifest", str(p))
    assert code == 1 and "expected 7, measured 6" in out


def test_verify_json_report(capsys, tmp_path):
    doc = {"schema": 1, "checks": [
        {"id": "a", "recipe": {"kind": "symmetric", "m": 4},
         "assertions": [{"op": "base-size", "expect": {"size": 3},
                         "tag": "derived"}]}]}
    p = tmp_path / "m.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--manifest", str(p), "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["summary"]["pass"] == 1
    assert rep["checks"][0]["assertions"][0]["measured"]["size"] == 3


def test_verify_resource_skip_exit_two(capsys, tmp_path):
    doc = {"schema": 1, "checks": [
        {"id": "slow", "budget_ms": 1,
         "recipe": {"kind": "classical", "family": "GO-odd", "m": 7, "q": 2,
                    "space": "subspace", "k": 6,
                    "filter": "nondegenerate-plus"},
         "assertions": [{"op": "order", "expect": 1451520,
                         "tag": "direct"}]}]}
    p = tmp_path / "m.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--manifest", str(p))
    assert code == 2 and "resource-skipped" in out


def test_bad_inputs_exit_three(capsys, tmp_path):
    code, _, err = run(capsys, "order", "--recipe", "{broken")
    assert code == 3 and "JSON" in err
    code, _, err = run(capsys, "order", "--recipe", '{"kind": "nope"}')
    assert code == 3 and "unknown recipe kind" in err
    code, _, err = run(capsys, "verify", "--manifest",
                       str(tmp_path / "missing.json"))
    assert code == 3 and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": 9, "checks": []}')
    code, _, err = run(capsys, "verify", "--manifest", str(bad))
    assert code == 3 and "schema" in err


def test_bundled_corpus_is_reachable():
    assert bundled_corpus().exists()
