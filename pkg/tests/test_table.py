"""Checks over the bundled simple-group table.

The table ships as generated data; these tests re-verify its arithmetic
invariants from scratch and pin the witnessed exact values that the rest
of the package relies on.
"""

import json
import math
from importlib import resources

import pytest

from permres.classical import classical_generators
from permres.constructions import matrix_orbit_action
from permres.structure import (
    alt_section_upper_bound,
    composition_factors,
    identify_simple,
    max_alternating_section,
)


@pytest.fixture(scope="module")
def table():
    path = resources.files("permres.data").joinpath("simple_groups.json")
    return json.loads(path.read_text())


def test_table_metadata(table):
    assert table["version"] == 2
    assert len(table["groups"]) > 400


def test_bracket_arithmetic_all_rows(table):
    for r in table["groups"]:
        lower, upper = r["alt_lower"], r["alt_upper"]
        assert 4 <= lower <= upper
        # the stored upper bound never exceeds the recomputed arithmetic one
        assert upper <= alt_section_upper_bound(r["order"])
        if r["max_alt_section"] is not None:
            assert lower == upper == r["max_alt_section"]
        else:
            assert lower < upper
        if lower > 4:
            # a witnessed A_m section forces m!/2 to divide the order
            assert r["order"] % (math.factorial(lower) // 2) == 0


def test_order_collisions_all_marked(table):
    by_order = {}
    for r in table["groups"]:
        by_order.setdefault(r["order"], []).append(r)
    for order, rows in by_order.items():
        if len(rows) == 1:
            continue
        assert len(rows) == 2
        for r in rows:
            assert r["disambiguator"] is not None, (order, [x["name"] for x in rows])


def test_witnessed_exact_values(table):
    byname = {r["name"]: r for r in table["groups"]}
    assert byname["S6(2)"]["max_alt_section"] == 8
    assert byname["U4(2)"]["max_alt_section"] == 6
    assert byname["L4(3)"]["max_alt_section"] == 6
    assert byname["L2(7)"]["max_alt_section"] == 4
    # open bracket kept honest: no fabricated exact value
    l34 = byname["L3(4)"]
    assert l34["max_alt_section"] is None
    assert (l34["alt_lower"], l34["alt_upper"]) == (6, 7)


def test_identify_pins_table_rows(table):
    byname = {r["name"]: r for r in table["groups"]}
    assert identify_simple(1451520) == "S6(2)"
    assert identify_simple(25920) == "U4(2)"
    assert identify_simple(168) == "L2(7)"
    assert byname["S6(2)"]["max_alt_section"] == 8
    assert byname["U4(2)"]["max_alt_section"] == 6


def test_identified_sp62_pipeline():
    # full pipeline: matrices -> permutation action -> composition factor
    # -> table row with its witnessed alternating-section value
    act = matrix_orbit_action(classical_generators("Sp", 6, 2), kind="vector")
    factors = composition_factors(act.group)
    assert len(factors) == 1
    f = factors[0]
    assert f.order == 1451520
    assert f.name == "S6(2)"
    assert max_alternating_section(f) == 8


def test_identified_l34_bracket_stays_open():
    act = matrix_orbit_action(classical_generators("SL", 3, 4),
                              kind="subspace", k=1)
    factors = composition_factors(act.group)
    assert len(factors) == 1
    f = factors[0]
    assert f.order == 20160
    assert f.name == "L3(4)"
    assert max_alternating_section(f) is None
    assert (f.alt_lower, f.alt_upper) == (6, 7)
