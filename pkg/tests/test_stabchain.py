import random

import pytest

from permres.perm import Perm, iter_alt_gens, iter_sym_gens
from permres.stabchain import (
    PermGroup,
    ResourceLimit,
    StabilizerChain,
    action_on_blocks,
    action_with_kernel,
    coloring_stabilizer,
    derived_subgroup,
    normal_closure,
)


def closure(degree, gens):
    """Brute-force element set; the oracle for everything chain-based."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    mats = [g.images for g in gens]
    while frontier:
        nxt = []
        for t in frontier:
            for m in mats:
                u = tuple(m[v] for v in t)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return seen


def cyc(cycles, degree):
    return Perm.from_cycles(cycles, degree)


SAMPLES = {
    "sym5": (5, list(iter_sym_gens(5))),
    "alt4": (4, list(iter_alt_gens(4))),
    "alt6": (6, list(iter_alt_gens(6))),
    "dihedral4": (4, [cyc([(0, 1, 2, 3)], 4), cyc([(1, 3)], 4)]),
    "cyclic6": (6, [cyc([(0, 1, 2, 3, 4, 5)], 6)]),
    "klein": (4, [cyc([(0, 1), (2, 3)], 4), cyc([(0, 2), (1, 3)], 4)]),
    "two_orbit": (7, [cyc([(0, 1, 2)], 7), cyc([(3, 4), (5, 6)], 7), cyc([(3, 5), (4, 6)], 7)]),
    "psl27": (7, [cyc([(0, 1, 2, 3, 4, 5, 6)], 7), cyc([(1, 2), (3, 6)], 7)]),
    "trivial": (4, []),
}


@pytest.mark.parametrize("name", sorted(SAMPLES))
def test_order_matches_closure(name):
    degree, gens = SAMPLES[name]
    G = PermGroup(degree, gens)
    assert G.order() == len(closure(degree, gens))


@pytest.mark.parametrize("name", sorted(SAMPLES))
def test_membership_matches_closure(name):
    degree, gens = SAMPLES[name]
    G = PermGroup(degree, gens)
    elems = closure(degree, gens)
    for imgs in sorted(elems):
        assert G.contains(Perm(imgs))
    rng = random.Random(11)
    for _ in range(200):
        imgs = tuple(rng.sample(range(degree), degree))
        assert G.contains(Perm(imgs)) == (imgs in elems)


@pytest.mark.parametrize("name", sorted(SAMPLES))
def test_elements_enumeration(name):
    degree, gens = SAMPLES[name]
    G = PermGroup(degree, gens)
    got = {p.images for p in G.elements()}
    assert got == closure(degree, gens)


@pytest.mark.parametrize("name", sorted(SAMPLES))
def test_chain_verify(name):
    degree, gens = SAMPLES[name]
    chain = StabilizerChain(degree, gens)
    chain.verify()
    chain2 = StabilizerChain(degree, gens, base_hint=list(range(degree)))
    chain2.verify()
    assert chain2.order() == chain.order()


def test_order_is_product_of_orbit_lengths():
    degree, gens = SAMPLES["sym5"]
    chain = StabilizerChain(degree, gens)
    prod = 1
    for lvl in chain.levels:
        prod *= len(lvl.orbit)
    assert prod == chain.order() == 120


def test_sift_residue_identity_only_for_members():
    degree, gens = SAMPLES["alt4"]
    chain = StabilizerChain(degree, gens)
    assert chain.sift(cyc([(0, 1, 2)], 4)).is_identity()
    assert not chain.sift(cyc([(0, 1)], 4)).is_identity()


def test_extend_grows_incrementally():
    chain = StabilizerChain(5)
    assert chain.order() == 1
    assert chain.extend(cyc([(0, 1)], 5))
    assert chain.order() == 2
    assert not chain.extend(cyc([(0, 1)], 5))
    assert chain.extend(cyc([(0, 1, 2, 3, 4)], 5))
    assert chain.order() == 120
    chain.verify()


def test_random_element_lands_in_group():
    degree, gens = SAMPLES["dihedral4"]
    G = PermGroup(degree, gens)
    elems = closure(degree, gens)
    rng = random.Random(7)
    seen = set()
    for _ in range(100):
        p = G.random_element(rng)
        assert p.images in elems
        seen.add(p.images)
    assert len(seen) == 8  # all elements reached


def test_element_limit_guard():
    G = PermGroup.symmetric(8)
    with pytest.raises(ResourceLimit):
        G.elements(limit=100)


def test_base_hint_prefix_respected():
    degree, gens = SAMPLES["sym5"]
    chain = StabilizerChain(degree, gens, base_hint=[2, 0])
    assert chain.base[:2] == (2, 0)
    assert chain.order() == 120


# -- orbits, blocks, primitivity ------------------------------------------


def test_orbits():
    degree, gens = SAMPLES["two_orbit"]
    G = PermGroup(degree, gens)
    assert G.orbits() == [[0, 1, 2], [3, 4, 5, 6]]
    assert not G.is_transitive()
    assert PermGroup(5, list(iter_sym_gens(5))).is_transitive()


def test_orbits_brute_force():
    degree, gens = SAMPLES["dihedral4"]
    G = PermGroup(degree, gens)
    elems = closure(degree, gens)
    for orb in G.orbits():
        x = orb[0]
        assert sorted({e[x] for e in elems}) == orb


def test_primitive_sym4():
    assert PermGroup.symmetric(4).is_primitive()


def test_blocks_dihedral4():
    G = PermGroup(SAMPLES["dihedral4"][0], SAMPLES["dihedral4"][1])
    systems = G.minimal_block_systems()
    assert ((0, 2), (1, 3)) in systems
    assert not G.is_primitive()
    for system in systems:
        sizes = {len(b) for b in system}
        assert len(sizes) == 1


def test_blocks_cyclic6():
    G = PermGroup(SAMPLES["cyclic6"][0], SAMPLES["cyclic6"][1])
    systems = G.minimal_block_systems()
    sizes = sorted(len(s[0]) for s in systems)
    assert sizes == [2, 3]


def test_blocks_require_transitive():
    G = PermGroup(SAMPLES["two_orbit"][0], SAMPLES["two_orbit"][1])
    with pytest.raises(ValueError):
        G.minimal_block_systems()


def test_block_action_and_kernel():
    G = PermGroup(SAMPLES["dihedral4"][0], SAMPLES["dihedral4"][1])
    blocks = [(0, 2), (1, 3)]
    image, kernel = action_on_blocks(G, blocks)
    assert image.order() == 2
    assert kernel.order() == 4
    assert G.order() == image.order() * kernel.order()
    for k in kernel.gens:
        for blk in blocks:
            assert {k.images[x] for x in blk} == set(blk)


def test_action_with_kernel_faithful():
    # regular-ish action of sym3 on labels given by its own generators
    G = PermGroup(3, list(iter_sym_gens(3)))
    limg = [list(g.images) for g in G.gens]
    image, kernel = action_with_kernel(G, limg, 3)
    assert image.order() == 6
    assert kernel.order() == 1


# -- stabilizers ----------------------------------------------------------


@pytest.mark.parametrize("name", ["sym5", "alt6", "dihedral4", "psl27"])
def test_point_stabilizer_matches_closure(name):
    degree, gens = SAMPLES[name]
    G = PermGroup(degree, gens)
    elems = closure(degree, gens)
    for pt in range(degree):
        want = {e for e in elems if e[pt] == pt}
        S = G.point_stabilizer(pt)
        assert S.order() == len(want)
        assert all(e.images in want for e in S.elements())


def test_pointwise_stabilizer():
    G = PermGroup.symmetric(5)
    S = G.pointwise_stabilizer((0, 1))
    assert S.order() == 6
    S2 = G.pointwise_stabilizer((0, 1, 2, 3))
    assert S2.order() == 1


@pytest.mark.parametrize(
    "name,points",
    [("sym5", (0, 1)), ("sym5", (1, 3, 4)), ("alt6", (0, 5)), ("dihedral4", (0, 1)), ("psl27", (2, 4, 6))],
)
def test_setwise_stabilizer_matches_closure(name, points):
    degree, gens = SAMPLES[name]
    G = PermGroup(degree, gens)
    elems = closure(degree, gens)
    pts = set(points)
    want = {e for e in elems if {e[x] for x in pts} == pts}
    S = G.setwise_stabilizer(points)
    assert S.order() == len(want)
    assert {e.images for e in S.elements()} == want


def test_coloring_stabilizer_three_colors():
    G = PermGroup.symmetric(6)
    coloring = [0, 0, 1, 1, 1, 2]
    elems = closure(6, G.gens)
    want = {e for e in elems if all(coloring[e[x]] == coloring[x] for x in range(6))}
    S = coloring_stabilizer(G, coloring)
    assert S.order() == len(want) == 2 * 6 * 1


def test_coloring_stabilizer_nontrivial_witness():
    G = PermGroup.symmetric(5)
    coloring = [0, 0, 1, 1, 1]
    w = coloring_stabilizer(G, coloring, find_nontrivial=True)
    assert w is not None and not w.is_identity()
    assert all(coloring[w.images[x]] == coloring[x] for x in range(5))
    # all-distinct coloring admits no nontrivial preserver
    assert coloring_stabilizer(G, [0, 1, 2, 3, 4], find_nontrivial=True) is None


def test_coloring_stabilizer_budget():
    G = PermGroup.symmetric(7)
    with pytest.raises(ResourceLimit):
        coloring_stabilizer(G, [0] * 7, node_budget=5)


def test_restriction():
    degree, gens = SAMPLES["two_orbit"]
    G = PermGroup(degree, gens)
    R = G.restriction([3, 4, 5, 6])
    assert R.degree == 4
    assert R.order() == 4
    with pytest.raises(ValueError):
        G.restriction([0, 3])


# -- normal structure helpers ---------------------------------------------


def test_normal_closure_in_sym4():
    G = PermGroup.symmetric(4)
    assert normal_closure(G, [cyc([(0, 1, 2)], 4)]).order() == 12
    assert normal_closure(G, [cyc([(0, 1), (2, 3)], 4)]).order() == 4
    assert normal_closure(G, [cyc([(0, 1)], 4)]).order() == 24
    assert normal_closure(G, []).order() == 1


def test_derived_subgroups():
    assert derived_subgroup(PermGroup.symmetric(4)).order() == 12
    assert derived_subgroup(PermGroup.alternating(4)).order() == 4
    assert derived_subgroup(PermGroup.symmetric(5)).order() == 60
    D = PermGroup(4, [cyc([(0, 1, 2, 3)], 4), cyc([(1, 3)], 4)])
    assert derived_subgroup(D).order() == 2
    assert derived_subgroup(PermGroup(6, SAMPLES["cyclic6"][1])).order() == 1


# -- orbit representatives on tuples --------------------------------------


def test_orbit_tuple_reps_transitive_pairs():
    G = PermGroup.symmetric(3)
    reps = G.orbit_tuple_reps(2)
    assert len(reps) == 1
    assert sum(w for _, _, w in reps) == 6


@pytest.mark.parametrize("name,c", [("sym5", 2), ("dihedral4", 2), ("psl27", 2), ("alt6", 3), ("two_orbit", 2)])
def test_orbit_tuple_reps_cover(name, c):
    degree, gens = SAMPLES[name]
    G = PermGroup(degree, gens)
    elems = closure(degree, gens)
    reps = G.orbit_tuple_reps(c)
    total = 1
    for j in range(c):
        total *= degree - j
    assert sum(w for _, _, w in reps) == total
    # every representative's reported weight is its true orbit size,
    # and its reported stabilizer is the true pointwise stabilizer
    for tup, stab, w in reps:
        orbit = {tuple(e[x] for x in tup) for e in elems}
        assert len(orbit) == w
        want = len({e for e in elems if all(e[x] == x for x in tup)})
        assert stab.order() == want
    # distinct representatives lie in distinct orbits
    for i, (t1, _, _) in enumerate(reps):
        for t2, _, _ in reps[i + 1:]:
            orbit = {tuple(e[x] for x in t1) for e in elems}
            assert t2 not in orbit


def test_orbit_tuple_reps_budget():
    G = PermGroup.trivial(8)
    with pytest.raises(ResourceLimit):
        G.orbit_tuple_reps(3, node_budget=10)
