"""Recipe construction, manifest validation, check execution, reports."""

import json

import pytest

from permres.constructions import ConstructionError
from permres.manifest import (
    ManifestError,
    OPS,
    _matches,
    bundled_corpus,
    construct_recipe,
    group_from_serialized,
    load_manifest,
    run_check,
    run_manifest,
    serialize_group,
    validate_manifest,
)
from permres.stabchain import PermGroup


# -- recipes ---------------------------------------------------------------


def test_primitive_recipe_kinds():
    assert construct_recipe({"kind": "symmetric", "m": 5}).group.order() == 120
    assert construct_recipe({"kind": "alternating", "m": 5}).group.order() == 60
    assert construct_recipe({"kind": "cyclic", "m": 7}).group.order() == 7
    d = construct_recipe({"kind": "dihedral", "m": 6})
    assert d.group.order() == 12 and d.degree == 6


def test_perm_generators_recipe():
    act = construct_recipe({
        "kind": "perm-generators", "degree": 4,
        "generators": [[1, 2, 3, 0], [1, 0, 2, 3]],
    })
    assert act.group.order() == 24


def test_classical_vector_recipe():
    act = construct_recipe({"kind": "classical", "family": "Sp", "m": 6, "q": 2})
    assert act.degree == 63 and act.group.order() == 1451520


def test_classical_subspace_recipe():
    act = construct_recipe({"kind": "classical", "family": "GL", "m": 4, "q": 3,
                            "space": "subspace", "k": 1})
    assert act.degree == 40 and act.group.order() == 12130560


def test_matrix_generators_recipe():
    # the two matrices generate GL(2,2) acting on the 3 nonzero vectors
    act = construct_recipe({
        "kind": "matrix-generators", "m": 2, "q": 2,
        "matrices": [[[1, 1], [0, 1]], [[0, 1], [1, 0]]],
    })
    assert act.degree == 3 and act.group.order() == 6


def test_affine_recipe():
    act = construct_recipe({"kind": "affine", "family": "SL", "m": 2, "q": 3})
    assert act.degree == 9 and act.group.order() == 9 * 24


def test_coset_recipe_embeds_matrix_subgroup():
    act = construct_recipe({
        "kind": "coset",
        "group": {"kind": "classical", "family": "Sp", "m": 6, "q": 2},
        "subgroup": {"kind": "classical", "family": "GO+", "m": 6, "q": 2},
    })
    assert act.degree == 36 and act.group.order() == 1451520


def test_coset_recipe_perm_subgroup():
    act = construct_recipe({
        "kind": "coset",
        "group": {"kind": "symmetric", "m": 4},
        "subgroup": {"kind": "dihedral", "m": 4},
    })
    assert act.degree == 3


def test_combinatorial_recipes():
    assert construct_recipe({"kind": "subsets", "m": 6, "k": 2}).degree == 15
    assert construct_recipe({"kind": "partitions", "m": 4, "k": 2}).degree == 3
    alt = construct_recipe({"kind": "subsets", "m": 5, "k": 2, "alt": True})
    assert alt.group.order() == 60


def test_wreath_recipes():
    imp = construct_recipe({"kind": "wreath",
                            "inner": {"kind": "symmetric", "m": 3},
                            "outer": {"kind": "symmetric", "m": 2},
                            "action": "imprimitive"})
    assert imp.degree == 6 and imp.group.order() == 72
    prod = construct_recipe({"kind": "wreath",
                             "inner": {"kind": "symmetric", "m": 3},
                             "outer": {"kind": "symmetric", "m": 2},
                             "action": "product"})
    assert prod.degree == 9 and prod.group.order() == 72


def test_diagonal_recipe():
    act = construct_recipe({"kind": "diagonal",
                            "factor": {"kind": "alternating", "m": 5},
                            "swap": True, "outer": [0, 1, 2, 4, 3]})
    assert act.degree == 60 and act.group.order() == 14400


def test_recipe_errors():
    with pytest.raises(ConstructionError):
        construct_recipe({"kind": "who-knows"})
    with pytest.raises(ConstructionError):
        construct_recipe({"kind": "symmetric"})  # missing m
    with pytest.raises(ConstructionError):
        construct_recipe({"kind": "cyclic", "m": 0})
    with pytest.raises(ConstructionError):
        construct_recipe({"kind": "wreath", "inner": {"kind": "cyclic", "m": 2},
                          "outer": {"kind": "cyclic", "m": 2}, "action": "odd"})
    with pytest.raises(ConstructionError):
        construct_recipe({"kind": "coset",
                          "group": {"kind": "symmetric", "m": 5},
                          "subgroup": {"kind": "symmetric", "m": 4}})
    with pytest.raises(ConstructionError):
        construct_recipe("not a dict")


# -- serialization ---------------------------------------------------------


def test_group_serialization_roundtrip():
    G = construct_recipe({"kind": "subsets", "m": 5, "k": 2}).group
    doc = json.loads(json.dumps(serialize_group(G)))
    H = group_from_serialized(doc)
    assert H.degree == G.degree and H.order() == G.order()
    assert all(G.contains(g) for g in H.gens)


def test_group_serialization_errors():
    with pytest.raises(ManifestError):
        group_from_serialized({"degree": 3})
    with pytest.raises(ManifestError):
        group_from_serialized({"degree": 3, "generators": [[0, 1]]})


# -- validation ------------------------------------------------------------


def _one_check(**over):
    chk = {"id": "a", "recipe": {"kind": "cyclic", "m": 3},
           "assertions": [{"op": "order", "expect": 3, "tag": "direct"}]}
    chk.update(over)
    return {"schema": 1, "checks": [chk]}


def test_validate_accepts_minimal_manifest():
    assert len(validate_manifest(_one_check())) == 1


@pytest.mark.parametrize("doc,msg", [
    ([], "root"),
    ({"schema": 2, "checks": []}, "schema"),
    ({"schema": 1}, "checks"),
    (_one_check(id=""), "id"),
    (_one_check(recipe=None), "recipe"),
    (_one_check(assertions=[]), "assertions"),
    (_one_check(assertions=[{"op": "nope", "expect": 1, "tag": "direct"}]), "op"),
    (_one_check(assertions=[{"op": "order", "expect": 1, "tag": "guessed"}]), "tag"),
    (_one_check(assertions=[{"op": "order", "tag": "direct"}]), "expect"),
    (_one_check(budget_ms=0), "budget"),
])
def test_validate_rejects_bad_shapes(doc, msg):
    with pytest.raises(ManifestError, match=msg):
        validate_manifest(doc)


def test_validate_rejects_duplicate_ids():
    doc = _one_check()
    doc["checks"].append(dict(doc["checks"][0]))
    with pytest.raises(ManifestError, match="duplicate"):
        validate_manifest(doc)


def test_unknown_check_keys_are_inert():
    doc = _one_check(note="free-form commentary survives validation")
    assert validate_manifest(doc)[0]["note"].startswith("free-form")


# -- comparison semantics --------------------------------------------------


def test_matches_subset_for_objects():
    assert _matches({"size": 6}, {"size": 6, "proof": "exhausted"})
    assert not _matches({"size": 6, "missing": 1}, {"size": 6})
    assert not _matches({"size": 5}, {"size": 6, "proof": "exhausted"})


def test_matches_lists_and_bools():
    assert _matches([1, 35], [1, 35])
    assert not _matches([35, 1], [1, 35])
    assert _matches(True, True)
    # JSON true must not match the number 1, nor 1 match true
    assert not _matches(True, 1)
    assert not _matches(1, True)


# -- execution -------------------------------------------------------------


def test_run_check_pass_and_fail():
    good = run_check({"id": "g", "recipe": {"kind": "symmetric", "m": 5},
                      "assertions": [{"op": "order", "expect": 120,
                                      "tag": "direct"}]})
    assert good.status == "pass" and good.assertions[0].ok is True

    bad = run_check({"id": "b", "recipe": {"kind": "symmetric", "m": 5},
                     "assertions": [{"op": "order", "expect": 121,
                                     "tag": "reported"}]})
    assert bad.status == "fail"
    assert bad.assertions[0].measured == 120
    assert bad.assertions[0].ok is False


def test_run_check_construction_failure():
    res = run_check({"id": "c", "recipe": {"kind": "cyclic", "m": -1},
                     "assertions": [{"op": "order", "expect": 1,
                                     "tag": "direct"}]})
    assert res.status == "fail" and "construction" in res.error


def test_run_check_resource_skip_from_operation():
    # max_b too small forces the base search to give up, not fail
    res = run_check({"id": "r", "recipe": {"kind": "symmetric", "m": 6},
                     "assertions": [
                         {"op": "base-size", "params": {"max_b": 2},
                          "expect": {"size": 5}, "tag": "derived"},
                         {"op": "order", "expect": 720, "tag": "direct"}]})
    assert res.status == "skipped-resource"
    assert res.assertions[0].ok is None
    assert len(res.assertions) == 1  # later assertions never ran


def test_run_check_budget_exhaustion():
    res = run_check({"id": "slow", "budget_ms": 1,
                     "recipe": {"kind": "classical", "family": "GO-odd",
                                "m": 7, "q": 2, "space": "subspace", "k": 6,
                                "filter": "nondegenerate-plus"},
                     "assertions": [{"op": "order", "expect": 1451520,
                                     "tag": "direct"}]})
    assert res.status == "skipped-resource"


def test_env_budget_default(monkeypatch):
    monkeypatch.setenv("PERMRES_BUDGET_MS", "1")
    rep = run_manifest({"schema": 1, "checks": [
        {"id": "slow", "recipe": {"kind": "classical", "family": "GO-odd",
                                  "m": 7, "q": 2, "space": "subspace", "k": 6,
                                  "filter": "nondegenerate-plus"},
         "assertions": [{"op": "order", "expect": 1451520,
                         "tag": "direct"}]}]})
    assert rep.checks[0].status == "skipped-resource"
    assert rep.exit_code == 2


def test_env_budget_rejects_garbage(monkeypatch):
    monkeypatch.setenv("PERMRES_BUDGET_MS", "soon")
    with pytest.raises(ManifestError, match="PERMRES_BUDGET_MS"):
        run_manifest(_one_check())


def test_run_manifest_empty_is_pass():
    rep = run_manifest({"schema": 1, "checks": []})
    assert rep.exit_code == 0 and rep.counts() == {
        "pass": 0, "fail": 0, "skipped-resource": 0}


def test_run_manifest_merges_in_manifest_order():
    doc = {"schema": 1, "checks": [
        {"id": f"c{i}", "recipe": {"kind": "cyclic", "m": i + 1},
         "assertions": [{"op": "order", "expect": i + 1, "tag": "direct"}]}
        for i in range(6)
    ]}
    rep = run_manifest(doc, threads=3)
    assert [c.id for c in rep.checks] == [f"c{i}" for i in range(6)]
    assert rep.exit_code == 0


def test_reports_deterministic_across_threads():
    doc = {"schema": 1, "checks": [
        {"id": "s5", "recipe": {"kind": "symmetric", "m": 5},
         "assertions": [{"op": "base-size", "expect": {"size": 4},
                         "tag": "derived"}]},
        {"id": "wrong", "recipe": {"kind": "cyclic", "m": 4},
         "assertions": [{"op": "order", "expect": 5, "tag": "reported"}]},
        {"id": "d6", "recipe": {"kind": "dihedral", "m": 6},
         "assertions": [{"op": "dist-number", "expect": 2, "tag": "derived"}]},
    ]}
    one = run_manifest(doc, threads=1).fingerprint()
    four = run_manifest(doc, threads=4).fingerprint()
    assert one == four
    assert one["summary"] == {"pass": 2, "fail": 1, "skipped-resource": 0}


def test_report_shape_and_hash():
    rep = run_manifest(_one_check())
    doc = rep.to_dict()
    assert doc["schema_version"] == 1
    assert len(doc["manifest_sha256"]) == 64
    assert doc["tool_version"]
    assert doc["checks"][0]["status"] == "pass"


def test_load_manifest_reports_json_position(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"schema": 1,\n "checks": [}]}')
    with pytest.raises(ManifestError, match="line 2"):
        load_manifest(p)


def test_matches_op_compares_two_routes():
    res = run_check({
        "id": "m",
        "recipe": {"kind": "subsets", "m": 4, "k": 1},
        "assertions": [{
            "op": "matches",
            "params": {"other": {"kind": "symmetric", "m": 4},
                       "compare": ["degree", "order", "suborbit-sizes"]},
            "expect": True, "tag": "derived"}],
    })
    # singleton subsets carry the natural action under a different recipe
    assert res.status == "pass"


def test_bundled_corpus_validates():
    path = bundled_corpus()
    assert path.exists()
    doc, digest = load_manifest(path)
    checks = validate_manifest(doc)
    assert len(checks) >= 15 and len(digest) == 64


def test_threshold_ops_need_no_group():
    res = run_check({"id": "t", "recipe": {"kind": "cyclic", "m": 1},
                     "assertions": [
                         {"op": "threshold-m", "params": {"eps": "1"},
                          "expect": 21, "tag": "derived"},
                         {"op": "threshold-n", "params": {"c": 1, "delta": "1"},
                          "expect": 39, "tag": "derived"}]})
    assert res.status == "pass"


def test_ops_registry_is_total():
    act = construct_recipe({"kind": "cyclic", "m": 3})
    for name in ("order", "degree", "transitive", "primitive", "solvable",
                 "orbit-sizes", "suborbit-sizes"):
        assert OPS[name](act, {}) is not None
