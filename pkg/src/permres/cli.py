"""Command line front end.

Verbs take a recipe (inline JSON or @file) and print either an aligned
text table or, with --json, a machine-readable document. Exit codes:
0 success, 1 assertion failure, 2 resource budget hit, 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bounds import formula_suite, lemma22_check, m_epsilon, n_c_delta, theorem13_check
from .constructions import ConstructionError
from .manifest import (
    ManifestError,
    OPS,
    TOOL_VERSION,
    bundled_corpus,
    construct_recipe,
    run_manifest,
    serialize_group,
)
from .search import base_size_exact, count_regular_tuples, distinguishing_number, stabilizer_scan
from .stabchain import ResourceLimit
from .structure import composition_factors, gamma_profile


def _read_recipe(text: str) -> dict:
    if text.startswith("@"):
        try:
            text = open(text[1:], encoding="utf-8").read()
        except OSError as e:
            raise ManifestError(f"cannot read recipe file: {e}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ManifestError(
            f"recipe is not valid JSON (line {e.lineno} column {e.colno}: "
            f"{e.msg})") from None
    if not isinstance(doc, dict):
        raise ManifestError("recipe must be a JSON object")
    return doc


def _emit(doc: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(doc, indent=2))
        return
    width = max(len(k) for k in doc)
    for k, v in doc.items():
        if isinstance(v, (list, tuple)):
            v = ", ".join(str(x) for x in v)
        print(f"{k:<{width}}  {v}")


def _cmd_construct(args) -> int:
    act = construct_recipe(_read_recipe(args.recipe))
    doc = serialize_group(act.group)
    doc["point-labels"] = [str(lbl) for lbl in act.labels]
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def _cmd_describe(args) -> int:
    # everything below is recomputed on each invocation; nothing is cached
    act = construct_recipe(_read_recipe(args.recipe))
    G = act.group
    factors = composition_factors(G, order_cap=args.order_cap)
    prof = gamma_profile(G, order_cap=args.order_cap)
    doc = {
        "label": G.label,
        "degree": G.degree,
        "order": G.order(),
        "transitive": G.is_transitive(),
        "primitive": G.is_primitive(),
        "orbit-sizes": sorted(len(o) for o in G.orbits()),
        "composition-factors": [f.name for f in factors],
        "min-certified-d": prof["min_certified_d"],
        "profile-tight": prof["tight"],
    }
    _emit(doc, args.json)
    return 0


def _cmd_order(args) -> int:
    act = construct_recipe(_read_recipe(args.recipe))
    _emit({"order": act.group.order()}, args.json)
    return 0


def _cmd_base_size(args) -> int:
    act = construct_recipe(_read_recipe(args.recipe))
    w = base_size_exact(act.group, max_b=args.max_b,
                        node_budget=args.node_budget)
    doc = {"status": w.status, "size": w.size,
           "proof": w.proof_of_minimality,
           "points": list(w.points) if w.points is not None else None,
           "nodes": w.nodes}
    _emit(doc, args.json)
    return 0 if w.status == "exact" else 2


def _cmd_dist_number(args) -> int:
    act = construct_recipe(_read_recipe(args.recipe))
    res = distinguishing_number(act.group, elem_cap=args.elem_cap)
    _emit({"distinguishing-number": res.number, "method": res.method},
          args.json)
    return 0


def _cmd_stab_scan(args) -> int:
    act = construct_recipe(_read_recipe(args.recipe))
    rep = stabilizer_scan(act.group, args.c, args.predicate,
                          node_budget=args.node_budget)
    doc = {"verdict": rep.verdict, "classes": rep.classes,
           "exhaustive": rep.exhaustive}
    if rep.worst_witness is not None:
        doc["worst-order"] = rep.worst_witness.order
        doc["worst-points"] = list(rep.worst_witness.points)
        doc["worst-summary"] = rep.worst_witness.summary
    if rep.first_failure is not None:
        doc["first-failure-points"] = list(rep.first_failure.points)
        doc["first-failure-order"] = rep.first_failure.order
    _emit(doc, args.json)
    if rep.verdict == "fail":
        return 1
    return 0 if rep.verdict == "all-pass" else 2


def _cmd_reg_count(args) -> int:
    act = construct_recipe(_read_recipe(args.recipe))
    res = count_regular_tuples(act.group, args.t, threshold=args.threshold,
                               first_point=args.first_point,
                               node_budget=args.node_budget)
    _emit({"value": res.value, "t": res.t, "exact": res.exact,
           "reached-threshold": res.reached_threshold}, args.json)
    return 0


def _cmd_bounds(args) -> int:
    params = json.loads(args.params) if args.params else {}
    if not isinstance(params, dict):
        raise ManifestError("--params must be a JSON object")
    name = args.check
    if name == "threshold-m":
        doc = {"M": m_epsilon(Fraction(params["eps"]))}
    elif name == "threshold-n":
        doc = {"N": n_c_delta(params["c"], Fraction(params["delta"]))}
    elif name == "formula":
        rep = formula_suite(params["name"], params.get("params", {}),
                            measured=params.get("measured"))
        doc = {"bound": rep.bound_value, "verdict": rep.verdict}
    elif name in ("lemma22", "thm13"):
        if not args.recipe:
            raise ManifestError(f"--check {name} needs --recipe")
        act = construct_recipe(_read_recipe(args.recipe))
        if name == "lemma22":
            rep = lemma22_check(act.group, params["d"])
        else:
            rep = theorem13_check(act.group, params.get("c", 0), params["d"],
                                  Fraction(params.get("delta", 1)),
                                  order_cap=params.get("order_cap", 10 ** 12))
        doc = {"bound": rep.bound_value, "measured": rep.measured_value,
               "verdict": rep.verdict}
    else:
        raise ManifestError(f"unknown bounds check {name!r}")
    _emit(doc, args.json)
    return 1 if doc.get("verdict") == "fails" else 0


def _cmd_verify(args) -> int:
    source = args.manifest
    if source == "corpus":
        source = bundled_corpus()
    report = run_manifest(source, threads=args.threads,
                          budget_ms=args.budget_ms)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        wid = max(len(c.id) for c in report.checks) if report.checks else 2
        for c in report.checks:
            print(f"{c.id:<{wid}}  {c.status:<16}  {c.elapsed_ms:>7} ms")
            for a in c.assertions:
                if a.ok is False:
                    print(f"{'':<{wid}}  {a.op}: expected "
                          f"{a.expected!r}, measured {a.measured!r}"
                          + (f" ({a.error})" if a.error else ""))
                elif a.ok is None:
                    print(f"{'':<{wid}}  {a.op}: {a.error}")
            if c.error:
                print(f"{'':<{wid}}  {c.error}")
        counts = report.counts()
        print(f"checks: {counts['pass']} passed, {counts['fail']} failed, "
              f"{counts['skipped-resource']} resource-skipped")
    return report.exit_code


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="permres",
        description="permutation group measurements and check manifests")
    top.add_argument("--version", action="version",
                     version=f"permres {TOOL_VERSION}")
    sub = top.add_subparsers(dest="verb", required=True)

    def common(p, recipe_required=True):
        if recipe_required:
            p.add_argument("--recipe", required=True,
                           help="inline JSON or @file")
        else:
            p.add_argument("--recipe", help="inline JSON or @file")
        p.add_argument("--json", action="store_true",
                       help="machine-readable output")

    p = sub.add_parser("construct", help="build a group, emit generators")
    common(p)
    p.add_argument("--out", help="write the serialized group here")
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("describe", help="order, orbits, factors, profile")
    common(p)
    p.add_argument("--order-cap", type=int, default=10 ** 12)
    p.set_defaults(fn=_cmd_describe)

    p = sub.add_parser("order", help="group order")
    common(p)
    p.set_defaults(fn=_cmd_order)

    p = sub.add_parser("base-size", help="exact minimal base size")
    common(p)
    p.add_argument("--max-b", type=int, default=16)
    p.add_argument("--node-budget", type=int, default=2_000_000)
    p.set_defaults(fn=_cmd_base_size)

    p = sub.add_parser("dist-number", help="exact distinguishing number")
    common(p)
    p.add_argument("--elem-cap", type=int, default=200_000)
    p.set_defaults(fn=_cmd_dist_number)

    p = sub.add_parser("stab-scan", help="predicate over c-point stabilizers")
    common(p)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--predicate", default="solvable",
                   help="solvable or gamma:<d>")
    p.add_argument("--node-budget", type=int, default=500_000)
    p.set_defaults(fn=_cmd_stab_scan)

    p = sub.add_parser("reg-count", help="count tuples with trivial stabilizer")
    common(p)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--threshold", type=int)
    p.add_argument("--first-point", type=int)
    p.add_argument("--node-budget", type=int, default=1_000_000)
    p.set_defaults(fn=_cmd_reg_count)

    p = sub.add_parser("bounds", help="closed-form bounds and thresholds")
    common(p, recipe_required=False)
    p.add_argument("--check", required=True,
                   help="lemma22 | thm13 | formula | threshold-m | threshold-n")
    p.add_argument("--params", help="JSON object of parameters")
    p.set_defaults(fn=_cmd_bounds)

    p = sub.add_parser("verify", help="run a check manifest")
    p.add_argument("--manifest", required=True,
                   help="path to a manifest, or 'corpus' for the bundled one")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--budget-ms", type=int,
                   help="per-check budget; default from PERMRES_BUDGET_MS")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    return top


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return 2
    except (ManifestError, ConstructionError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
