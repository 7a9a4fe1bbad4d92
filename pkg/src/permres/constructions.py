"""Permutation actions built from matrices, cosets, and combinatorial data.

Every construction returns a LabeledAction: a permutation group together
with the list of objects its points stand for. Orbits are enumerated by
breadth-first closure over canonical labels, then sorted so that point
numbering is deterministic across runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .classical import MatrixGroup
from .fq import FqField, FqMatrix, SubspaceFq
from .perm import Perm, iter_alt_gens, iter_sym_gens
from .stabchain import PermGroup

DEGREE_CAP = 100_000


class ConstructionError(ValueError):
    pass


@dataclass
class LabeledAction:
    group: PermGroup
    labels: list
    index: dict
    act: Callable | None = None  # (label, generator object) -> label

    @property
    def degree(self) -> int:
        return len(self.labels)

    def perm_of(self, obj) -> Perm:
        """Permutation induced by any object the stored action understands."""
        if self.act is None:
            raise ConstructionError("action does not support external objects")
        try:
            images = [self.index[self.act(lbl, obj)] for lbl in self.labels]
        except KeyError:
            raise ConstructionError("object maps a label outside the orbit") from None
        if len(set(images)) != len(images):
            raise ConstructionError("object does not permute the labels")
        return Perm(images)

    # matrix actions are the common case; keep the name from the recipes
    def perm_of_matrix(self, M: FqMatrix) -> Perm:
        return self.perm_of(M)


def _close_orbit(seed, gen_objs, act, cap: int):
    seen = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for lbl in frontier:
            for g in gen_objs:
                img = act(lbl, g)
                if img not in seen:
                    if len(seen) >= cap:
                        raise ConstructionError(f"orbit exceeds cap {cap}")
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return sorted(seen)


def _action_from_orbit(degree_gens, labels, act, label=None) -> LabeledAction:
    index = {lbl: i for i, lbl in enumerate(labels)}
    perms = []
    for g in degree_gens:
        images = [index[act(lbl, g)] for lbl in labels]
        perms.append(Perm(images))
    group = PermGroup(len(labels), perms, label=label)
    return LabeledAction(group, list(labels), index, act)


# -- matrix orbit actions --------------------------------------------------


def _vector_act(field: FqField):
    def act(v, M: FqMatrix):
        return M.apply(v)
    return act


def _subspace_act(field: FqField):
    def act(W: SubspaceFq, M: FqMatrix):
        return SubspaceFq.from_vectors(field, [M.apply(row) for row in W.basis])
    return act


def _check_seed_filter(grp: MatrixGroup, seed, kind: str, flt: str) -> None:
    if flt == "all":
        return
    form = grp.form
    if form is None:
        raise ConstructionError("filters need an invariant form")
    if kind == "vector":
        if flt == "nonsingular":
            val = form.quad_value(seed) if form.quad is not None \
                else form.bilinear(seed, seed)
            if val == 0:
                raise ConstructionError("seed vector is singular")
            return
        if flt == "totally-isotropic":
            val = form.quad_value(seed) if form.quad is not None \
                else form.bilinear(seed, seed)
            if val != 0:
                raise ConstructionError("seed vector is not isotropic")
            return
        raise ConstructionError(f"unknown vector filter {flt!r}")
    from .fq import subspace_type

    cls = subspace_type(form, seed.basis)
    if flt == "totally-isotropic":
        ok = cls.totally_singular if form.quad is not None else cls.totally_isotropic
        if not ok:
            raise ConstructionError("seed subspace is not totally isotropic")
    elif flt in ("nondegenerate-plus", "nondegenerate-minus"):
        want = "+" if flt.endswith("plus") else "-"
        if cls.degenerate or cls.eps != want:
            raise ConstructionError(f"seed subspace is not nondegenerate of type {want}")
    else:
        raise ConstructionError(f"unknown subspace filter {flt!r}")


def matrix_orbit_action(grp: MatrixGroup, seed=None, kind: str = "vector",
                        flt: str = "all", k: int | None = None,
                        cap: int = DEGREE_CAP) -> LabeledAction:
    """Orbit of a vector or a subspace under the matrix generators.

    kind "vector": labels are row vectors, seed defaults to e_0.
    kind "subspace": labels are canonical subspaces, seed defaults to the
    span of the first k standard basis vectors.
    flt restricts the seed (all / totally-isotropic / nondegenerate-plus /
    nondegenerate-minus / nonsingular); the orbit inherits the property.
    """
    field, m = grp.field, grp.m
    if kind == "vector":
        if seed is None:
            seed = tuple(1 if i == 0 else 0 for i in range(m))
        else:
            seed = tuple(seed)
        act = _vector_act(field)
    elif kind == "subspace":
        if seed is None:
            if k is None:
                raise ConstructionError("subspace kind needs a seed or k")
            seed = SubspaceFq.from_vectors(
                field, [tuple(1 if j == i else 0 for j in range(m)) for i in range(k)])
        elif not isinstance(seed, SubspaceFq):
            seed = SubspaceFq.from_vectors(field, [tuple(v) for v in seed])
        act = _subspace_act(field)
    else:
        raise ConstructionError(f"unknown kind {kind!r}")
    _check_seed_filter(grp, seed, kind, flt)
    labels = _close_orbit(seed, grp.matrices, act, cap)
    return _action_from_orbit(grp.matrices, labels, act, label=grp.label)


def affine_action(grp: MatrixGroup, cap: int = DEGREE_CAP) -> LabeledAction:
    """Affine group V:H on the full vector space: linear parts plus a basis
    of translations. Degree q^m."""
    field, m = grp.field, grp.m
    if field.q ** m > cap:
        raise ConstructionError(f"degree {field.q}^{m} exceeds cap {cap}")
    labels = sorted(itertools.product(range(field.q), repeat=m))
    index = {lbl: i for i, lbl in enumerate(labels)}
    perms = []
    for M in grp.matrices:
        perms.append(Perm([index[M.apply(v)] for v in labels]))
    for i in range(m):
        e = tuple(1 if j == i else 0 for j in range(m))
        perms.append(Perm([index[field.vec_add(v, e)] for v in labels]))
    group = PermGroup(len(labels), perms, label=f"{field.q}^{m}:{grp.label}")

    def act(v, M: FqMatrix):
        return M.apply(v)

    return LabeledAction(group, labels, index, act)


# -- coset actions ---------------------------------------------------------


def _canonical_coset_rep(hchain, g: Perm) -> Perm:
    # minimize the images of H's base level by level; the result is the
    # unique minimal element of Hg because only the identity of H fixes
    # every base point
    for lvl in hchain.levels:
        best_alpha = None
        best_val = None
        for alpha in lvl.transversal:
            val = g.images[alpha]
            if best_val is None or val < best_val:
                best_val = val
                best_alpha = alpha
        if best_alpha != lvl.point:
            g = lvl.transversal[best_alpha] * g
    return g


def coset_action(G: PermGroup, H: PermGroup, cap: int = DEGREE_CAP) -> LabeledAction:
    """Action of G on the right cosets of H, with canonical coset labels."""
    gchain = G.chain()
    for h in H.gens:
        if not gchain.contains(h):
            raise ConstructionError("H is not a subgroup of G")
    index_bound = gchain.order() // H.chain().order()
    if index_bound > cap:
        raise ConstructionError(f"index {index_bound} exceeds cap {cap}")
    hchain = H.chain()

    reps = {}
    seed = _canonical_coset_rep(hchain, Perm.identity(G.degree))
    reps[seed.images] = seed
    frontier = [seed]
    while frontier:
        nxt = []
        for r in frontier:
            for g in G.gens:
                cand = _canonical_coset_rep(hchain, r * g)
                if cand.images not in reps:
                    reps[cand.images] = cand
                    nxt.append(cand)
        frontier = nxt
    labels = sorted(reps)
    index = {lbl: i for i, lbl in enumerate(labels)}

    def act(lbl, g: Perm):
        return _canonical_coset_rep(hchain, reps[lbl] * g).images

    perms = []
    for g in G.gens:
        perms.append(Perm([index[act(lbl, g)] for lbl in labels]))
    group = PermGroup(len(labels), perms,
                      label=f"[{G.label or 'G'}:{H.label or 'H'}]")
    action = LabeledAction(group, labels, index, act)
    action.reps = reps
    return action


# -- symmetric-group combinatorial actions ---------------------------------


def subsets_action(m: int, k: int, alt: bool = False,
                   cap: int = DEGREE_CAP) -> LabeledAction:
    """S_m or A_m on k-element subsets of {0..m-1}. Needs 1 <= k < m/2."""
    if not 1 <= k or not 2 * k < m:
        raise ConstructionError(f"subsets need 1 <= k < m/2, got k={k}, m={m}")
    import math

    if math.comb(m, k) > cap:
        raise ConstructionError("degree exceeds cap")
    labels = sorted(itertools.combinations(range(m), k))
    gens = list(iter_alt_gens(m) if alt else iter_sym_gens(m))

    def act(lbl, g: Perm):
        return tuple(sorted(g.images[x] for x in lbl))

    name = f"{'A' if alt else 'S'}{m} on {k}-sets"
    return _action_from_orbit(gens, labels, act, label=name)


def _partitions_into(parts_of, k: int):
    # set partitions of parts_of into blocks of size k, anchored on minima
    if not parts_of:
        yield ()
        return
    first = parts_of[0]
    rest = parts_of[1:]
    for others in itertools.combinations(rest, k - 1):
        block = (first,) + others
        remaining = tuple(x for x in rest if x not in others)
        for tail in _partitions_into(remaining, k):
            yield (block,) + tail


def partitions_action(m: int, k: int, alt: bool = False,
                      cap: int = DEGREE_CAP) -> LabeledAction:
    """S_m or A_m on partitions of {0..m-1} into m/k blocks of size k."""
    if m % k or not 1 < k or not 2 * k <= m:
        raise ConstructionError(f"partitions need k | m, 1 < k <= m/2, got k={k}, m={m}")
    import math

    n_parts = m // k
    degree = math.factorial(m) // (math.factorial(k) ** n_parts * math.factorial(n_parts))
    if degree > cap:
        raise ConstructionError("degree exceeds cap")
    labels = sorted(_partitions_into(tuple(range(m)), k))
    assert len(labels) == degree
    gens = list(iter_alt_gens(m) if alt else iter_sym_gens(m))

    def act(lbl, g: Perm):
        blocks = [tuple(sorted(g.images[x] for x in blk)) for blk in lbl]
        return tuple(sorted(blocks))

    name = f"{'A' if alt else 'S'}{m} on {k}-part partitions"
    return _action_from_orbit(gens, labels, act, label=name)


# -- wreath products -------------------------------------------------------


def wreath_imprimitive(L: PermGroup, P: PermGroup,
                       cap: int = DEGREE_CAP) -> LabeledAction:
    """L wr P acting on blocks: degree deg(L) * deg(P)."""
    d, k = L.degree, P.degree
    if d * k > cap:
        raise ConstructionError("degree exceeds cap")
    labels = [(i, x) for i in range(k) for x in range(d)]
    index = {lbl: t for t, lbl in enumerate(labels)}
    perms = []
    for i in range(k):
        for g in L.gens:
            images = [index[(j, g.images[x] if j == i else x)] for (j, x) in labels]
            perms.append(Perm(images))
    for p in P.gens:
        images = [index[(p.images[j], x)] for (j, x) in labels]
        perms.append(Perm(images))
    group = PermGroup(d * k, perms, label=f"{L.label or 'L'} wr {P.label or 'P'}")
    return LabeledAction(group, labels, index)


def wreath_product_action(L: PermGroup, P: PermGroup,
                          cap: int = DEGREE_CAP) -> LabeledAction:
    """L wr P in the product action: degree deg(L)^deg(P), labels tuples."""
    d, k = L.degree, P.degree
    if d ** k > cap:
        raise ConstructionError("degree exceeds cap")
    labels = sorted(itertools.product(range(d), repeat=k))
    index = {lbl: t for t, lbl in enumerate(labels)}
    perms = []
    for i in range(k):
        for g in L.gens:
            images = []
            for lbl in labels:
                new = list(lbl)
                new[i] = g.images[lbl[i]]
                images.append(index[tuple(new)])
            perms.append(Perm(images))
    for p in P.gens:
        pinv = p.inv()
        images = []
        for lbl in labels:
            images.append(index[tuple(lbl[pinv.images[j]] for j in range(k))])
        perms.append(Perm(images))
    group = PermGroup(d ** k, perms,
                      label=f"{L.label or 'L'} wr {P.label or 'P'} (product)")
    return LabeledAction(group, labels, index)


# -- diagonal type ---------------------------------------------------------


def diagonal_type_group(T: PermGroup, include_swap: bool = True,
                        outer: Perm | None = None,
                        cap: int = DEGREE_CAP) -> LabeledAction:
    """Group between T x T and its extensions, acting on the elements of T.

    Points are the elements of T, indexed by sorted sift signatures. The
    two factors act by t -> a^-1 t and t -> t b, the swap is inversion,
    and outer, when given, is a permutation normalizing T acting by
    conjugation.
    """
    chain = T.chain()
    if chain.order() > cap:
        raise ConstructionError("|T| exceeds cap")
    elements = chain.elements(limit=cap)
    sig_of = {}
    for t in elements:
        sig_of[tuple(chain.base_images(t))] = t
    labels = sorted(sig_of)
    index = {lbl: i for i, lbl in enumerate(labels)}

    def point(t: Perm) -> int:
        return index[tuple(chain.base_images(t))]

    perms = []
    for a in T.gens:
        ainv = a.inv()
        perms.append(Perm([point(ainv * sig_of[lbl]) for lbl in labels]))
        perms.append(Perm([point(sig_of[lbl] * a) for lbl in labels]))
    if include_swap:
        perms.append(Perm([point(sig_of[lbl].inv()) for lbl in labels]))
    if outer is not None:
        oinv = outer.inv()
        for g in T.gens:
            if not chain.contains(oinv * g * outer):
                raise ConstructionError("outer map is not an automorphism of T")
        perms.append(Perm([point(oinv * sig_of[lbl] * outer) for lbl in labels]))
    group = PermGroup(len(labels), perms, label=f"diag({T.label or 'T'})")
    action = LabeledAction(group, labels, index)
    action.element_of_label = sig_of
    return action
