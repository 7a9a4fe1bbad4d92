"""Backtrack searches over a permutation group: minimal bases, stabilizer
scans, distinguishing colorings, and counts of tuples with trivial
pointwise stabilizer.

Every search here is deterministic: orbits are walked in increasing point
order and representatives are smallest-in-orbit, so repeated runs give
identical witnesses. Budgets raise ResourceLimit carrying whatever partial
result exists rather than returning a silently truncated answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .stabchain import PermGroup, ResourceLimit, coloring_stabilizer
from .structure import NO, UNKNOWN, YES, composition_factors, in_gamma, is_solvable

__all__ = [
    "BaseWitness",
    "ScanWitness",
    "ScanReport",
    "DistinguishingResult",
    "RegularCount",
    "base_lower_bound",
    "base_size_exact",
    "greedy_base",
    "stabilizer_scan",
    "distinguishing_number",
    "distinguishing_witness",
    "verify_distinguishing",
    "count_regular_tuples",
]


# -- base size -------------------------------------------------------------


@dataclass(frozen=True)
class BaseWitness:
    """A base for a group together with how much it proves.

    status is one of exact, upper-bound, exceeds-max-b, partial. The
    proof_of_minimality marker is "order-bound" when the witness length
    equals the information-theoretic lower bound, "exhausted" when every
    shorter depth was searched to completion, and None for upper bounds.
    """

    points: tuple[int, ...] | None
    size: int | None
    status: str
    proof_of_minimality: str | None
    lower_bound: int
    upper_bound: int | None
    nodes: int


def base_lower_bound(G: PermGroup) -> int:
    """Smallest b with degree**b >= |G|, by exact integer comparison."""
    order = G.order()
    if order == 1:
        return 0
    n = G.degree
    if n < 2:
        raise ValueError("nontrivial group needs degree >= 2")
    b, power = 0, 1
    while power < order:
        power *= n
        b += 1
    return b


def _verify_base(G: PermGroup, points: tuple[int, ...]) -> None:
    # independent of the search that produced the witness
    if G.pointwise_stabilizer(points).order() != 1:
        raise AssertionError(f"claimed base {points} has nontrivial stabilizer")


def base_size_exact(
    G: PermGroup, max_b: int = 16, node_budget: int = 2_000_000
) -> BaseWitness:
    """Exact minimal base size via iterative deepening.

    Branches only over orbit representatives of the current partial
    stabilizer (smallest point per orbit, increasing order); a branch is cut
    when the stabilizer order exceeds (largest orbit size) ** (remaining
    depth), since each further point divides the order by at most its orbit
    length. Budget exhaustion returns a partial witness bracketing the
    answer instead of raising.
    """
    if G.order() == 1:
        return BaseWitness((), 0, "exact", "order-bound", 0, 0, 0)
    lb = base_lower_bound(G)
    nodes = [0]

    def dfs(prefix: tuple[int, ...], grp: PermGroup, target: int) -> tuple[int, ...] | None:
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise ResourceLimit("base search exceeded node budget", partial=prefix)
        order = grp.order()
        if order == 1:
            return prefix
        rem = target - len(prefix)
        if rem <= 0:
            return None
        orbs = [o for o in grp.orbits() if len(o) > 1]
        if order > max(len(o) for o in orbs) ** rem:
            return None
        for orb in orbs:
            hit = dfs(prefix + (orb[0],), grp.point_stabilizer(orb[0]), target)
            if hit is not None:
                return hit
        return None

    for target in range(lb, max_b + 1):
        try:
            hit = dfs((), G, target)
        except ResourceLimit:
            upper = greedy_base(G)
            return BaseWitness(None, None, "partial", None, target, upper.size, nodes[0])
        if hit is not None:
            _verify_base(G, hit)
            proof = "order-bound" if len(hit) == lb else "exhausted"
            return BaseWitness(hit, len(hit), "exact", proof, lb, len(hit), nodes[0])
    return BaseWitness(None, None, "exceeds-max-b", None, max_b + 1, None, nodes[0])


def greedy_base(G: PermGroup) -> BaseWitness:
    """Upper bound: repeatedly stabilize the orbit representative whose
    stabilizer is smallest. No minimality claim."""
    points: list[int] = []
    grp = G
    while grp.order() > 1:
        best: tuple[int, int, PermGroup] | None = None
        for orb in grp.orbits():
            if len(orb) == 1:
                continue
            stab = grp.point_stabilizer(orb[0])
            o = stab.order()
            if best is None or o < best[0]:
                best = (o, orb[0], stab)
        assert best is not None
        points.append(best[1])
        grp = best[2]
    pts = tuple(points)
    _verify_base(G, pts)
    return BaseWitness(pts, len(pts), "upper-bound", None, base_lower_bound(G), len(pts), 0)


# -- stabilizer scan -------------------------------------------------------


@dataclass(frozen=True)
class ScanWitness:
    points: tuple[int, ...]
    order: int
    summary: str


@dataclass(frozen=True)
class ScanReport:
    """Outcome of testing a predicate on every c-point stabilizer class.

    verdict is all-pass, fail, or inconclusive (some class resolved to
    unknown and none failed outright). worst_witness is the scanned class
    with the largest stabilizer; first_failure is set on a fail verdict.
    """

    c: int
    predicate: str
    verdict: str
    worst_witness: ScanWitness | None
    first_failure: ScanWitness | None
    classes: int
    exhaustive: bool


def _structure_summary(H: PermGroup, order_cap: int = 10 ** 7) -> str:
    order = H.order()
    if order == 1:
        return "trivial"
    if order > order_cap:
        return f"order {order}"
    try:
        names = [f.name for f in composition_factors(H)]
    except ResourceLimit:
        return f"order {order}"
    return " * ".join(names)


def _parse_predicate(predicate: str):
    if predicate == "solvable":
        return lambda H: YES if is_solvable(H) else NO
    for prefix in ("gamma:", "in_gamma:"):
        if predicate.startswith(prefix):
            d = int(predicate[len(prefix):])
            return lambda H: in_gamma(H, d)
    raise ValueError(f"unknown predicate {predicate!r}")


def stabilizer_scan(
    G: PermGroup, c: int, predicate: str, node_budget: int = 500_000
) -> ScanReport:
    """Evaluate a conjugation-invariant predicate on the pointwise
    stabilizer of one representative tuple per orbit on distinct c-tuples.

    predicate: "solvable", or "gamma:d" for the no-alternating-section-of-
    degree->=d test (three-valued, so the verdict can be inconclusive).
    """
    if c < 1:
        raise ValueError("scan needs c >= 1")
    test = _parse_predicate(predicate)
    exhaustive = True
    try:
        reps = G.orbit_tuple_reps(c, node_budget=node_budget)
    except ResourceLimit as exc:
        reps = list(exc.partial or [])
        exhaustive = False

    worst: ScanWitness | None = None
    worst_order = -1
    failure: ScanWitness | None = None
    saw_unknown = False
    for pts, stab, _weight in reps:
        order = stab.order()
        verdict = test(stab)
        if order > worst_order:
            worst_order = order
            worst = ScanWitness(pts, order, _structure_summary(stab))
        if verdict == NO and failure is None:
            failure = ScanWitness(pts, order, _structure_summary(stab))
        elif verdict == UNKNOWN:
            saw_unknown = True
    if failure is not None:
        overall = "fail"
    elif saw_unknown:
        overall = "inconclusive"
    else:
        overall = "all-pass"
    return ScanReport(c, predicate, overall, worst, failure, len(reps), exhaustive)


# -- distinguishing colorings ----------------------------------------------


@dataclass(frozen=True)
class DistinguishingResult:
    number: int
    coloring: tuple[int, ...]
    method: str


_DEGREE_CAP = 64


def verify_distinguishing(G: PermGroup, coloring) -> bool:
    """Check a coloring is preserved only by the identity, independently of
    the search that produced it: intersect setwise stabilizers of the color
    classes by successive refinement."""
    classes: dict[int, list[int]] = {}
    for x, col in enumerate(coloring):
        classes.setdefault(col, []).append(x)
    H = G
    for col in sorted(classes):
        H = H.setwise_stabilizer(classes[col])
        if H.order() == 1:
            return True
    return H.order() == 1


def _prime_order_elements(G: PermGroup, cap: int) -> list:
    from sympy import isprime

    if G.order() > cap:
        raise ResourceLimit(
            f"group order {G.order()} exceeds the exact-coloring element cap {cap};"
            " use distinguishing_witness for an upper bound"
        )
    out = []
    for g in G.elements():
        if not g.is_identity() and isprime(g.order()):
            out.append((g, g.inv()))
    return out


def _rigid_coloring_dfs(n: int, r: int, elems: list) -> tuple[int, ...] | None:
    """First r-coloring (canonical form: color k appears only after 0..k-1)
    preserved by no listed element, or None if none exists.

    elems holds (g, g inverse) pairs of prime order; a nontrivial preserving
    subgroup always contains one, so filtering against this list is exact.
    A pair survives a partial coloring while no already-colored point
    witnesses a color mismatch; an empty survivor list makes every
    completion rigid.
    """
    coloring = [0] * n

    def rec(i: int, used: int, alive: list) -> bool:
        if not alive:
            for j in range(i, n):
                coloring[j] = 0
            return True
        if i == n:
            return False
        for col in range(min(used + 1, r)):
            coloring[i] = col
            nxt = []
            for g, ginv in alive:
                y = g.images[i]
                if y <= i and coloring[y] != col:
                    continue
                x = ginv.images[i]
                if x < i and coloring[x] != col:
                    continue
                nxt.append((g, ginv))
            if rec(i + 1, max(used, col + 1), nxt):
                return True
        return False

    return tuple(coloring) if rec(0, 0, elems) else None


def distinguishing_number(G: PermGroup, elem_cap: int = 200_000) -> DistinguishingResult:
    """Least r admitting a coloring of the points with r colors whose only
    color-preserving group element is the identity, with a witness.

    Natural symmetric and alternating actions get closed forms (a repeated
    color pair leaves a transposition, so the full symmetric group forces
    degree many colors; dropping to even permutations saves exactly one).
    Everything else is exhaustive search, so the group order is capped.
    """
    n = G.degree
    if n > _DEGREE_CAP:
        raise ValueError(f"degree {n} exceeds the distinguishing cap {_DEGREE_CAP}")
    order = G.order()
    if order == 1:
        return DistinguishingResult(1, tuple([0] * n), "closed-form")
    if order == math.factorial(n):
        witness = tuple(range(n))
        assert verify_distinguishing(G, witness)
        return DistinguishingResult(n, witness, "closed-form")
    if n >= 3 and order == math.factorial(n) // 2:
        witness = tuple(range(n - 1)) + (n - 2,)
        assert verify_distinguishing(G, witness)
        return DistinguishingResult(n - 1, witness, "closed-form")
    elems = _prime_order_elements(G, elem_cap)
    for r in range(2, n + 1):
        hit = _rigid_coloring_dfs(n, r, elems)
        if hit is not None:
            if not verify_distinguishing(G, hit):
                raise AssertionError(f"search returned a non-rigid coloring {hit}")
            return DistinguishingResult(r, hit, "exhausted")
    raise AssertionError("coloring all points distinctly is always rigid")


def distinguishing_witness(
    G: PermGroup, r: int, rng=None, tries: int = 200, elem_cap: int = 200_000
) -> tuple[int, ...] | None:
    """A verified r-coloring preserved only by the identity, or None.

    Small groups get the deterministic exhaustive search. Larger ones fall
    back to random colorings checked by backtracking, then to coloring a
    base with fresh colors (rigid whenever the base fits in r - 1 colors).
    Establishes an upper bound only; None does not prove impossibility.
    """
    n = G.degree
    if r < 1:
        raise ValueError("need at least one color")
    if G.order() == 1:
        return tuple([0] * n)
    try:
        elems = _prime_order_elements(G, elem_cap)
    except ResourceLimit:
        elems = None
    if elems is not None:
        hit = _rigid_coloring_dfs(n, r, elems)
        if hit is not None and not verify_distinguishing(G, hit):
            raise AssertionError(f"search returned a non-rigid coloring {hit}")
        return hit
    if rng is None:
        import random

        rng = random.Random(0xD157)
    for _ in range(tries):
        coloring = tuple(rng.randrange(r) for _ in range(n))
        if coloring_stabilizer(G, coloring, find_nontrivial=True) is None:
            if verify_distinguishing(G, coloring):
                return coloring
    base = greedy_base(G)
    assert base.points is not None
    if len(base.points) + 1 <= r:
        coloring_l = [0] * n
        for i, p in enumerate(base.points):
            coloring_l[p] = i + 1
        coloring = tuple(coloring_l)
        if verify_distinguishing(G, coloring):
            return coloring
    return None


# -- regular tuple counting ------------------------------------------------


@dataclass(frozen=True)
class RegularCount:
    """Count of t-tuples of points whose pointwise stabilizer is trivial.

    exact is False when the search stopped early at the threshold; value is
    then a certified lower bound."""

    value: int
    t: int
    reached_threshold: bool
    exact: bool


def count_regular_tuples(
    L: PermGroup,
    t: int,
    threshold: int | None = None,
    first_point: int | None = None,
    node_budget: int = 1_000_000,
) -> RegularCount:
    """Exact number of t-tuples (repeats allowed) with trivial pointwise
    stabilizer, collapsing orbits of the running stabilizer.

    Each tree node branches over one representative per orbit and carries
    the product of orbit sizes as an exact integer weight; once the running
    stabilizer is trivial the remaining positions contribute degree ** rest
    at a stroke. With a threshold the search stops as soon as the running
    total certifies value >= threshold. first_point pins the first
    coordinate instead of branching over it.
    """
    if t < 1:
        raise ValueError("tuple length must be >= 1")
    n = L.degree
    total = [0]
    nodes = [0]

    class _Reached(Exception):
        pass

    def rec(depth: int, grp: PermGroup, weight: int) -> None:
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise ResourceLimit(
                "regular tuple count exceeded node budget",
                partial=RegularCount(total[0], t, False, False),
            )
        if grp.order() == 1:
            total[0] += weight * n ** (t - depth)
            if threshold is not None and total[0] >= threshold:
                raise _Reached
            return
        if depth == t:
            return
        for orb in grp.orbits():
            rec(depth + 1, grp.point_stabilizer(orb[0]), weight * len(orb))

    try:
        if first_point is None:
            rec(0, L, 1)
        else:
            rec(1, L.point_stabilizer(first_point), 1)
    except _Reached:
        return RegularCount(total[0], t, True, False)
    reached = threshold is not None and total[0] >= threshold
    return RegularCount(total[0], t, reached, True)
