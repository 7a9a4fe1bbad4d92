"""Stabilizer chains and the groups built on them.

Deterministic Schreier-Sims with explicit permutation transversals. Base
points are chosen as the smallest point in the largest remaining orbit
unless a base hint pins them down. Every search and orbit walk uses fixed
tie-breaks, so identical inputs give identical chains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .perm import Perm


class ResourceLimit(RuntimeError):
    """A configured budget was exceeded; carries any partial result."""

    def __init__(self, message: str, partial: object = None):
        super().__init__(message)
        self.partial = partial


class _Level:
    __slots__ = ("point", "gens", "orbit", "transversal", "tinv", "scan_state", "processed")

    def __init__(self, point: int, identity: Perm):
        self.point = point
        self.gens: list[Perm] = []
        self.orbit: list[int] = [point]
        self.transversal: dict[int, Perm] = {point: identity}
        self.tinv: dict[int, Perm] = {point: identity}
        self.scan_state: tuple[int, int] = (1, 0)
        self.processed: set[tuple[int, int]] = set()


class StabilizerChain:
    """Base, strong generators, and explicit transversals for a group."""

    def __init__(self, degree: int, gens: Iterable[Perm] = (), base_hint: Sequence[int] = ()):
        self.degree = degree
        self.identity = Perm.identity(degree)
        self.levels: list[_Level] = []
        seen = set()
        for b in base_hint:
            if not 0 <= b < degree:
                raise ValueError(f"base hint point {b} out of range")
            if b not in seen:
                seen.add(b)
                self.levels.append(_Level(b, self.identity))
        grew = False
        for g in gens:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
            residue, j = self._sift(g, 0)
            if not residue.is_identity():
                self._install(residue, j)
                grew = True
        if grew:
            self._close()

    # -- construction ----------------------------------------------------

    def extend(self, g: Perm) -> bool:
        """Add one generator; returns True if the group grew."""
        residue, j = self._sift(g, 0)
        if residue.is_identity():
            return False
        self._install(residue, j)
        self._close()
        return True

    def _sift(self, g: Perm, start: int) -> tuple[Perm, int]:
        for i in range(start, len(self.levels)):
            lvl = self.levels[i]
            beta = g.images[lvl.point]
            if beta not in lvl.transversal:
                self._extend_orbit(i)
                if beta not in lvl.transversal:
                    return g, i
            g = g * lvl.tinv[beta]
        return g, len(self.levels)

    def _install(self, g: Perm, j: int) -> None:
        # g fixes the base prefix before level j and moves level j's point
        if j == len(self.levels):
            self.levels.append(_Level(self._pick_point(g), self.identity))
        for i in range(j + 1):
            self.levels[i].gens.append(g)

    def _pick_point(self, g: Perm) -> int:
        # smallest point in the largest cycle; ties by smallest cycle minimum
        best = None
        for cyc in g.cycles():
            key = (-len(cyc), min(cyc))
            if best is None or key < best[0]:
                best = (key, min(cyc))
        assert best is not None
        return best[1]

    def _extend_orbit(self, i: int) -> None:
        lvl = self.levels[i]
        if lvl.scan_state == (len(lvl.orbit), len(lvl.gens)):
            return
        orbit, transversal, tinv, gens = lvl.orbit, lvl.transversal, lvl.tinv, lvl.gens
        idx = 0
        while idx < len(orbit):
            beta = orbit[idx]
            u = transversal[beta]
            for s in gens:
                gamma = s.images[beta]
                if gamma not in transversal:
                    v = u * s
                    transversal[gamma] = v
                    tinv[gamma] = v.inv()
                    orbit.append(gamma)
            idx += 1
        lvl.scan_state = (len(orbit), len(gens))

    def _close(self) -> None:
        work = True
        while work:
            work = False
            i = len(self.levels) - 1
            while i >= 0:
                if self._process_level(i):
                    work = True
                    i = len(self.levels) - 1
                else:
                    i -= 1

    def _process_level(self, i: int) -> bool:
        lvl = self.levels[i]
        self._extend_orbit(i)
        added = False
        oi = 0
        while oi < len(lvl.orbit):
            beta = lvl.orbit[oi]
            gi = 0
            while gi < len(lvl.gens):
                key = (beta, gi)
                if key not in lvl.processed:
                    lvl.processed.add(key)
                    s = lvl.gens[gi]
                    gamma = s.images[beta]
                    self._extend_orbit(i)
                    sch = lvl.transversal[beta] * s * lvl.tinv[gamma]
                    if not sch.is_identity():
                        residue, j = self._sift(sch, i + 1)
                        if not residue.is_identity():
                            self._install(residue, j)
                            added = True
                gi += 1
            oi += 1
        return added

    # -- queries ---------------------------------------------------------

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(lvl.point for lvl in self.levels)

    def order(self) -> int:
        n = 1
        for lvl in self.levels:
            n *= len(lvl.orbit)
        return n

    def contains(self, g: Perm) -> bool:
        if g.degree != self.degree:
            return False
        residue, _ = self._sift(g, 0)
        return residue.is_identity()

    def sift(self, g: Perm) -> Perm:
        """Residue after dividing out transversal representatives."""
        residue, _ = self._sift(g, 0)
        return residue

    def strong_gens(self) -> list[Perm]:
        return list(self.levels[0].gens) if self.levels else []

    def gens_fixing_prefix(self, k: int) -> list[Perm]:
        """Strong generators of the stabilizer of the first k base points."""
        if k >= len(self.levels):
            return []
        return list(self.levels[k].gens)

    def base_images(self, g: Perm) -> tuple[int, ...]:
        return tuple(g.images[lvl.point] for lvl in self.levels)

    def elements(self, limit: int | None = None) -> Iterator[Perm]:
        """All elements, deterministic order. Guarded by limit if given."""
        if limit is not None and self.order() > limit:
            raise ResourceLimit(f"element enumeration of order {self.order()} exceeds limit {limit}")

        def rec(i: int) -> Iterator[Perm]:
            if i == len(self.levels):
                yield self.identity
                return
            lvl = self.levels[i]
            for h in rec(i + 1):
                for beta in lvl.orbit:
                    yield h * lvl.transversal[beta]

        return rec(0)

    def random_element(self, rng) -> Perm:
        """Uniform element via one transversal representative per level."""
        g = self.identity
        for lvl in reversed(self.levels):
            beta = lvl.orbit[rng.randrange(len(lvl.orbit))]
            g = g * lvl.transversal[beta]
        return g

    def verify(self) -> None:
        """Deterministic re-check of every chain invariant; raises on failure."""
        for i, lvl in enumerate(self.levels):
            for g in lvl.gens:
                for j in range(i):
                    if g.images[self.levels[j].point] != self.levels[j].point:
                        raise AssertionError("strong generator moves an earlier base point")
            if i + 1 < len(self.levels):
                deeper = set(map(id, self.levels[i + 1].gens))
                if not deeper <= set(map(id, lvl.gens)):
                    raise AssertionError("generator lists are not nested")
            for beta, u in lvl.transversal.items():
                if u.images[lvl.point] != beta:
                    raise AssertionError("transversal representative maps base point wrongly")
            for beta in lvl.orbit:
                for s in lvl.gens:
                    gamma = s.images[beta]
                    if gamma not in lvl.transversal:
                        raise AssertionError("orbit not closed")
                    sch = lvl.transversal[beta] * s * lvl.tinv[gamma]
                    residue, _ = self._sift(sch, i + 1)
                    if not residue.is_identity():
                        raise AssertionError("Schreier generator fails to sift to identity")


class PermGroup:
    """A permutation group given by generators, with a cached chain."""

    def __init__(self, degree: int, gens: Sequence[Perm], label: str | None = None):
        self.degree = degree
        self.gens = [g for g in gens if not g.is_identity()]
        for g in self.gens:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
        self.label = label
        self._chain: StabilizerChain | None = None

    @classmethod
    def trivial(cls, degree: int, label: str | None = None) -> "PermGroup":
        return cls(degree, [], label)

    @classmethod
    def symmetric(cls, m: int) -> "PermGroup":
        from .perm import iter_sym_gens
        return cls(m, list(iter_sym_gens(m)), label=f"Sym({m})")

    @classmethod
    def alternating(cls, m: int) -> "PermGroup":
        from .perm import iter_alt_gens
        return cls(m, list(iter_alt_gens(m)), label=f"Alt({m})")

    def chain(self, base_hint: Sequence[int] = ()) -> StabilizerChain:
        if base_hint:
            return StabilizerChain(self.degree, self.gens, base_hint=base_hint)
        if self._chain is None:
            self._chain = StabilizerChain(self.degree, self.gens)
        return self._chain

    def order(self) -> int:
        return self.chain().order()

    def contains(self, g: Perm) -> bool:
        return self.chain().contains(g)

    def is_trivial(self) -> bool:
        return not self.gens or self.order() == 1

    def random_element(self, rng) -> Perm:
        return self.chain().random_element(rng)

    def elements(self, limit: int | None = 10 ** 7) -> list[Perm]:
        return list(self.chain().elements(limit=limit))

    # -- orbits and blocks -----------------------------------------------

    def orbits(self) -> list[list[int]]:
        """Orbits on points, each sorted, ordered by smallest element."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            orb = [start]
            seen[start] = True
            idx = 0
            while idx < len(orb):
                x = orb[idx]
                for g in self.gens:
                    y = g.images[x]
                    if not seen[y]:
                        seen[y] = True
                        orb.append(y)
                idx += 1
            out.append(sorted(orb))
        return out

    def orbit_of(self, point: int) -> list[int]:
        orb = [point]
        seen = {point}
        idx = 0
        while idx < len(orb):
            x = orb[idx]
            for g in self.gens:
                y = g.images[x]
                if y not in seen:
                    seen.add(y)
                    orb.append(y)
            idx += 1
        return sorted(orb)

    def is_transitive(self) -> bool:
        return self.degree == 1 or len(self.orbit_of(0)) == self.degree

    def minimal_block_systems(self) -> list[tuple[tuple[int, ...], ...]]:
        """Nontrivial block systems refined by no other nontrivial system.

        The group must be transitive. Each system is a tuple of sorted
        blocks ordered by smallest element. Seeding the finest congruence
        of every pair (0, b) reaches every atom of the congruence lattice;
        non-atoms also show up (a seed pair can lie in no atom) and are
        filtered out by comparing the blocks through 0, since for a
        transitive group refinement is containment of those blocks.
        """
        if not self.is_transitive():
            raise ValueError("block systems require a transitive group")
        n = self.degree
        systems = {}
        for b in range(1, n):
            part = self._finest_congruence(0, b)
            blocks = {}
            for x in range(n):
                blocks.setdefault(part[x], []).append(x)
            if 1 < len(blocks) < n:
                system = tuple(sorted((tuple(v) for v in blocks.values()), key=lambda blk: blk[0]))
                systems[system] = True
        zero_blocks = {sys_: set(sys_[0]) for sys_ in systems}
        minimal = [
            sys_ for sys_, blk in zero_blocks.items()
            if not any(other < blk for other in zero_blocks.values())
        ]
        return sorted(minimal, key=lambda sys_: (len(sys_[0]), sys_))

    def _finest_congruence(self, a: int, b: int) -> list[int]:
        n = self.degree
        parent = list(range(n))

        def find(x: int) -> int:
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        def union(x: int, y: int) -> None:
            rx, ry = find(x), find(y)
            if rx > ry:
                rx, ry = ry, rx
            parent[ry] = rx

        union(a, b)
        work = [(a, b)]
        while work:
            x, y = work.pop()
            for g in self.gens:
                u, v = find(g.images[x]), find(g.images[y])
                if u != v:
                    union(u, v)
                    work.append((u, v))
        return [find(x) for x in range(n)]

    def is_primitive(self) -> bool:
        """Transitive with no nontrivial block system. Degree 1 counts."""
        if self.degree == 1:
            return True
        return self.is_transitive() and not self.minimal_block_systems()

    # -- stabilizers -----------------------------------------------------

    def point_stabilizer(self, point: int) -> "PermGroup":
        return self.pointwise_stabilizer((point,))

    def pointwise_stabilizer(self, points: Sequence[int]) -> "PermGroup":
        pts = []
        seen = set()
        for p in points:
            if p not in seen:
                seen.add(p)
                pts.append(p)
        chain = self.chain(base_hint=pts)
        gens = chain.gens_fixing_prefix(len(pts))
        return PermGroup(self.degree, gens)

    def setwise_stabilizer(self, points: Iterable[int], node_budget: int | None = None) -> "PermGroup":
        pts = set(points)
        coloring = [1 if x in pts else 0 for x in range(self.degree)]
        return coloring_stabilizer(self, coloring, node_budget=node_budget)

    def restriction(self, points: Sequence[int]) -> "PermGroup":
        """Action on an invariant point set, relabeled to 0..len-1."""
        index = {p: i for i, p in enumerate(points)}
        gens = []
        for g in self.gens:
            try:
                imgs = tuple(index[g.images[p]] for p in points)
            except KeyError:
                raise ValueError("point set is not invariant") from None
            gens.append(Perm(imgs, validate=False))
        return PermGroup(len(points), gens, label=self.label)

    # -- tuple orbit tree ------------------------------------------------

    def orbit_tuple_reps(self, c: int, node_budget: int = 200_000) -> list[tuple[tuple[int, ...], "PermGroup", int]]:
        """Representatives of orbits on c-tuples of distinct points.

        Returns (tuple, pointwise stabilizer, orbit size) per representative.
        Branches over orbit representatives of the running stabilizer; the
        orbit sizes of all representatives sum to n(n-1)...(n-c+1).
        """
        out: list[tuple[tuple[int, ...], PermGroup, int]] = []
        budget = [node_budget]

        def rec(prefix: tuple[int, ...], grp: PermGroup, weight: int) -> None:
            if budget[0] <= 0:
                raise ResourceLimit("orbit tuple tree exceeded node budget", partial=out)
            budget[0] -= 1
            if len(prefix) == c:
                out.append((prefix, grp, weight))
                return
            used = set(prefix)
            seen = set(prefix)
            for start in range(self.degree):
                if start in seen:
                    continue
                orb = [p for p in grp.orbit_of(start) if p not in used]
                seen.update(orb)
                stab = grp.point_stabilizer(start)
                rec(prefix + (start,), stab, weight * len(orb))

        rec((), self, 1)
        return out


# -- backtrack search for color-preserving subgroups ----------------------


def coloring_stabilizer(
    G: PermGroup,
    coloring: Sequence[int],
    find_nontrivial: bool = False,
    node_budget: int | None = None,
) -> "PermGroup | Perm | None":
    """Subgroup of G preserving a point coloring.

    With find_nontrivial=True, returns the first non-identity preserving
    element found, or None if the preserving subgroup is trivial. Otherwise
    returns the full preserving subgroup (for a two-valued coloring this is
    a setwise stabilizer). Complete depth-first search over base images
    with color and fixed-point pruning.
    """
    n = G.degree
    if len(coloring) != n:
        raise ValueError("coloring length must match degree")
    if not G.gens:
        return None if find_nontrivial else PermGroup.trivial(n)

    class_size: dict[int, int] = {}
    for c in coloring:
        class_size[c] = class_size.get(c, 0) + 1
    order_key = sorted(range(n), key=lambda x: (class_size[coloring[x]], coloring[x], x))
    chain = StabilizerChain(n, G.gens, base_hint=order_key)

    # per level: points fixed by that level's group, computed from its gens
    fixed_at: list[list[int]] = []
    prev: set[int] | None = None
    for i in range(len(chain.levels) + 1):
        gens = chain.gens_fixing_prefix(i)
        moved: set[int] = set()
        for g in gens:
            moved.update(g.moved())
        fixed = set(range(n)) - moved
        newly = sorted(fixed if prev is None else fixed - prev)
        fixed_at.append(newly)
        prev = fixed if prev is None else prev | fixed
    levels = chain.levels

    found: list[Perm] = []
    sub = StabilizerChain(n)
    budget = [node_budget if node_budget is not None else -1]

    def dfs(i: int, u: Perm) -> Perm | None:
        if budget[0] == 0:
            raise ResourceLimit("coloring stabilizer search exceeded node budget", partial=found)
        if budget[0] > 0:
            budget[0] -= 1
        # points newly determined at this depth must keep their colors
        for x in fixed_at[i]:
            if coloring[u.images[x]] != coloring[x]:
                return None
        if i == len(levels):
            if all(coloring[u.images[x]] == coloring[x] for x in range(n)):
                if find_nontrivial:
                    return u if not u.is_identity() else None
                if not u.is_identity() and not sub.contains(u):
                    sub.extend(u)
                    found.append(u)
            return None
        lvl = levels[i]
        pt_color = coloring[lvl.point]
        for beta in lvl.orbit:
            gamma = u.images[beta]
            if coloring[gamma] != pt_color:
                continue
            hit = dfs(i + 1, lvl.transversal[beta] * u)
            if hit is not None:
                return hit
        return None

    hit = dfs(0, chain.identity)
    if find_nontrivial:
        return hit
    return PermGroup(n, found)


# -- actions with kernels -------------------------------------------------


def action_with_kernel(
    G: PermGroup, label_images: Sequence[Sequence[int]], nlabels: int
) -> tuple[PermGroup, PermGroup]:
    """Image and kernel of a G-action given per-generator label maps.

    label_images[i] is the permutation of 0..nlabels-1 induced by G.gens[i].
    The kernel is returned as a subgroup of G in its original action.
    """
    n = G.degree
    big_gens = []
    for g, limg in zip(G.gens, label_images):
        big_gens.append(Perm(g.images + tuple(n + v for v in limg), validate=True))
    hint = list(range(n, n + nlabels))
    chain = StabilizerChain(n + nlabels, big_gens, base_hint=hint)
    kernel_gens = [Perm(bg.images[:n], validate=False) for bg in chain.gens_fixing_prefix(nlabels)]
    image_gens = [Perm(tuple(limg), validate=False) for limg in label_images]
    image = PermGroup(nlabels, image_gens)
    kernel = PermGroup(n, kernel_gens)
    return image, kernel


def action_on_blocks(G: PermGroup, blocks: Sequence[Sequence[int]]) -> tuple[PermGroup, PermGroup]:
    """Induced action on a block system, with its kernel inside G."""
    where = {}
    for bi, blk in enumerate(blocks):
        for x in blk:
            where[x] = bi
    label_images = []
    for g in G.gens:
        label_images.append([where[g.images[blk[0]]] for blk in blocks])
    return action_with_kernel(G, label_images, len(blocks))


def normal_closure(G: PermGroup, seeds: Sequence[Perm]) -> PermGroup:
    """Smallest normal subgroup of G containing the seed elements."""
    chain = StabilizerChain(G.degree)
    gens: list[Perm] = []
    work: list[Perm] = []
    for s in seeds:
        if chain.extend(s):
            gens.append(s)
            work.append(s)
    while work:
        k = work.pop()
        for g in G.gens:
            c = g.inv() * k * g
            if chain.extend(c):
                gens.append(c)
                work.append(c)
    return PermGroup(G.degree, gens)


def derived_subgroup(G: PermGroup) -> PermGroup:
    comms = []
    gs = G.gens
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            comms.append(gs[i].inv() * gs[j].inv() * gs[i] * gs[j])
    return normal_closure(G, comms)
