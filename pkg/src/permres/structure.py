"""Composition structure: solvability, factors, and alternating sections.

The factor descent peels a group apart by orbit kernels, block kernels,
derived subgroups, and normal closures, in that order; every step strictly
reduces (degree, order). Simple factors are identified by order against a
generated table, with an element-order probe for the one documented
order collision at 20160. Anything unresolved is reported as unknown,
never guessed.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .perm import Perm
from .stabchain import (
    PermGroup,
    ResourceLimit,
    action_on_blocks,
    action_with_kernel,
    derived_subgroup,
    normal_closure,
)

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class FactorDescriptor:
    """One composition factor.

    kind is one of cyclic, alternating, identified, unknown. The
    max_alt_section convention: 4 means "no A_m section for any m >= 5";
    None means unresolved. alt_lower/alt_upper bracket the true value
    (lower is witnessed, upper is certified impossible above).
    """

    kind: str
    order: int
    name: str
    param: int | None = None
    max_alt_section: int | None = None
    alt_lower: int = 4
    alt_upper: int | None = None
    note: str = ""

    def sort_key(self):
        return (self.order, self.kind, self.name)


def _cyclic(p: int) -> FactorDescriptor:
    return FactorDescriptor(kind="cyclic", order=p, name=f"C{p}", param=p,
                            max_alt_section=4, alt_lower=4, alt_upper=4)


def _alternating(m: int) -> FactorDescriptor:
    order = math.factorial(m) // 2
    return FactorDescriptor(kind="alternating", order=order, name=f"A{m}", param=m,
                            max_alt_section=m, alt_lower=m, alt_upper=m)


# -- the simple-group order table -----------------------------------------


@lru_cache(maxsize=1)
def _table() -> dict[int, list[dict]]:
    try:
        text = resources.files("permres.data").joinpath("simple_groups.json").read_text()
    except (FileNotFoundError, ModuleNotFoundError):
        return {}
    payload = json.loads(text)
    by_order: dict[int, list[dict]] = {}
    for row in payload["groups"]:
        by_order.setdefault(row["order"], []).append(row)
    return by_order


def table_rows(order: int) -> list[dict]:
    return list(_table().get(order, []))


def _alt_degree(order: int) -> int | None:
    m, half = 5, 60
    while half < order:
        m += 1
        half = half * m
    return m if half == order else None


def alt_section_upper_bound(order: int) -> int:
    """Largest m not ruled out as an A_m section of a simple group of this order.

    Sound for simple groups only. Rules used: m!/2 must divide the order
    (sections obey Lagrange); a proper subgroup big enough to carry an A_m
    quotient has index t = order/(m!/2) at most, and the coset action embeds
    the simple group in Sym(t), so order must not exceed t!; the t = 1 route
    means the group itself is A_m, allowed only on exact order match.
    """
    upper = 4
    m = 5
    while True:
        half = math.factorial(m) // 2
        if half > order:
            break
        if order % half == 0:
            t_max = order // half
            if t_max == 1:
                viable = True  # could be A_m itself
            elif t_max >= 20:
                viable = True  # 20! already tops any order in scope
            else:
                viable = order <= math.factorial(t_max)
            if viable:
                upper = m
        m += 1
    return upper


def identify_simple(order: int, spectrum_probe=None) -> str | None:
    """Name a simple group of the given order, or None when unresolved.

    spectrum_probe(k) must return k element orders sampled from the group;
    it is consulted only for the order-20160 pair, where an element of
    order 15 separates the two candidates.
    """
    if order < 2:
        return None
    if _is_prime(order):
        return f"C{order}"
    candidates: list[str] = []
    m = _alt_degree(order)
    if m is not None and m >= 5:
        candidates.append(f"A{m}")
    rows = table_rows(order)
    for row in rows:
        if row["name"] not in candidates:
            candidates.append(row["name"])
    if not candidates:
        return None
    if len(candidates) == 1:
        return candidates[0]
    if sorted(candidates) == ["A8", "L3(4)"] and spectrum_probe is not None:
        sampled = list(spectrum_probe(500))
        return "A8" if 15 in sampled else "L3(4)"
    return None


def _is_prime(n: int) -> bool:
    if n < 4:
        return n >= 2
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def spectrum_sampler(G: PermGroup, seed: int = 414):
    """Deterministic element-order sampler for identification probes."""
    chain = G.chain()

    def probe(k: int) -> list[int]:
        rng = random.Random(seed)
        return [chain.random_element(rng).order() for _ in range(k)]

    return probe


# -- derived series --------------------------------------------------------


def derived_series(G: PermGroup) -> list[PermGroup]:
    """G, G', G'', ... down to the perfect residual."""
    series = [G]
    while True:
        D = derived_subgroup(series[-1])
        if D.order() == series[-1].order():
            break
        series.append(D)
        if D.order() == 1:
            break
    return series


def is_solvable(G: PermGroup) -> bool:
    return derived_series(G)[-1].order() == 1


# -- composition factor descent --------------------------------------------


def composition_factors(G: PermGroup, order_cap: int = 10 ** 12) -> list[FactorDescriptor]:
    """Composition factor multiset, sorted by (order, kind, name).

    Descent order: kernel of the action on one orbit, kernel of the action
    on a minimal block system, derived subgroup, then a normal-closure
    search before accepting simplicity. Factors whose order matches no
    table entry come back as kind unknown.
    """
    order = G.order()
    if order > order_cap:
        raise ResourceLimit(f"group order {order} exceeds factor cap {order_cap}")
    out: list[FactorDescriptor] = []
    _descend(G, out)
    prod = 1
    for f in out:
        prod *= f.order
    assert prod == order, "factor orders do not multiply to the group order"
    return sorted(out, key=FactorDescriptor.sort_key)


def _descend(G: PermGroup, out: list[FactorDescriptor]) -> None:
    order = G.order()
    if order == 1:
        return
    orbits = G.orbits()
    if len(orbits) > 1:
        first = orbits[0]
        rest = [x for orb in orbits[1:] for x in orb]
        image = G.restriction(first)
        kernel = G.pointwise_stabilizer(first).restriction(sorted(rest))
        _descend(image, out)
        _descend(kernel, out)
        return
    if G.degree > 1:
        systems = G.minimal_block_systems()
        if systems:
            image, kernel = action_on_blocks(G, systems[0])
            _descend(image, out)
            _descend(kernel, out)
            return
    D = derived_subgroup(G)
    dorder = D.order()
    if dorder < order:
        from sympy import factorint

        for p, e in sorted(factorint(order // dorder).items()):
            for _ in range(e):
                out.append(_cyclic(p))
        _descend(D, out)
        return
    # perfect, transitive, primitive: hunt for a proper normal subgroup
    N = _find_proper_normal(G)
    if N is None:
        out.append(_simple_descriptor(G))
        return
    split = _split_by_labels(G, N)
    if split is None:
        out.append(FactorDescriptor(kind="unknown", order=order, name=f"?{order}",
                                    note="proper normal subgroup found but not separable"))
        return
    image, kernel = split
    _descend(image, out)
    _descend(kernel, out)


def _find_proper_normal(G: PermGroup, samples: int = 64, seed: int = 97) -> PermGroup | None:
    """A proper nontrivial normal subgroup, or None if none was found.

    Probes every generator, pairwise generator products, and seeded random
    elements. All closures full is strong evidence of simplicity but not a
    proof for adversarial generating sets; a wrong survivor is caught later
    when its order matches nothing and it reports as unknown.
    """
    order = G.order()
    probes: list[Perm] = list(G.gens)
    for i in range(len(G.gens)):
        for j in range(i + 1, len(G.gens)):
            probes.append(G.gens[i] * G.gens[j])
    rng = random.Random(seed)
    chain = G.chain()
    for _ in range(samples):
        probes.append(chain.random_element(rng))
    seen = set()
    for z in probes:
        if z.is_identity() or z.images in seen:
            continue
        seen.add(z.images)
        N = normal_closure(G, [z])
        if 1 < N.order() < order:
            return N
    return None


def _split_by_labels(G: PermGroup, N: PermGroup, cell_cap: int = 300_000):
    """Separate G along a normal subgroup via its orbits on point tuples.

    Labels each ordered pair (then triple) of points by its N-orbit; G
    permutes the labels and N lies in the kernel, so the kernel action
    splits G whenever some generator moves a label.
    """
    n = G.degree
    for arity in (2, 3):
        size = n ** arity
        if size > cell_cap:
            return None
        label = _tuple_orbit_labels(N, arity)
        nlabels = max(label) + 1
        if nlabels == 1:
            continue
        label_images = []
        moved = False
        for g in G.gens:
            img = [0] * nlabels
            done = [False] * nlabels
            for t in range(size):
                lb = label[t]
                if not done[lb]:
                    done[lb] = True
                    img[lb] = label[_apply_to_tuple(g, t, arity, n)]
            if any(img[i] != i for i in range(nlabels)):
                moved = True
            label_images.append(img)
        if not moved:
            continue
        image, kernel = action_with_kernel(G, label_images, nlabels)
        if kernel.order() < G.order():
            return image, kernel
    return None


def _apply_to_tuple(g: Perm, t: int, arity: int, n: int) -> int:
    out = 0
    mult = 1
    for _ in range(arity):
        out += g.images[t % n] * mult
        t //= n
        mult *= n
    return out


def _tuple_orbit_labels(N: PermGroup, arity: int) -> list[int]:
    n = N.degree
    size = n ** arity
    label = [-1] * size
    next_label = 0
    for start in range(size):
        if label[start] != -1:
            continue
        label[start] = next_label
        frontier = [start]
        while frontier:
            t = frontier.pop()
            for g in N.gens:
                u = _apply_to_tuple(g, t, arity, n)
                if label[u] == -1:
                    label[u] = next_label
                    frontier.append(u)
        next_label += 1
    return label


def _simple_descriptor(G: PermGroup) -> FactorDescriptor:
    order = G.order()
    name = identify_simple(order, spectrum_probe=spectrum_sampler(G))
    if name is None:
        return FactorDescriptor(kind="unknown", order=order, name=f"?{order}",
                                alt_upper=alt_section_upper_bound(order),
                                note="no unique order match")
    if name.startswith("A") and name[1:].isdigit():
        return _alternating(int(name[1:]))
    if name.startswith("C") and name[1:].isdigit():
        return _cyclic(int(name[1:]))
    row = next(r for r in table_rows(order) if r["name"] == name)
    return FactorDescriptor(kind="identified", order=order, name=name,
                            max_alt_section=row.get("max_alt_section"),
                            alt_lower=row.get("alt_lower", 4),
                            alt_upper=row.get("alt_upper"))


# -- alternating sections and the restricted classes -----------------------


def max_alternating_section(f: FactorDescriptor) -> int | None:
    """Largest m >= 5 with an A_m section, 4 if none, None if unresolved."""
    if f.kind == "cyclic":
        return 4
    if f.kind == "alternating":
        return f.param
    if f.kind == "identified":
        return f.max_alt_section
    return None


def _factor_in_gamma(f: FactorDescriptor, d: int) -> str:
    exact = max_alternating_section(f)
    if exact is not None:
        return YES if d > exact else NO
    lower = f.alt_lower
    upper = f.alt_upper if f.alt_upper is not None else alt_section_upper_bound(f.order)
    if d <= lower:
        return NO
    if d > upper:
        return YES
    return UNKNOWN


def in_gamma(G: PermGroup, d: int, order_cap: int = 10 ** 12) -> str:
    """Three-valued test: does every composition factor avoid A_d sections?

    Factor closure under subgroups, quotients, and extensions reduces the
    question to the factor multiset; that reduction is this library's own
    bookkeeping, not a quoted result.
    """
    if d < 5:
        raise ValueError("the restricted classes are defined for d >= 5 only")
    verdicts = [_factor_in_gamma(f, d) for f in composition_factors(G, order_cap)]
    if any(v == NO for v in verdicts):
        return NO
    if all(v == YES for v in verdicts):
        return YES
    return UNKNOWN


def gamma_profile(G: PermGroup, d_max: int = 40, order_cap: int = 10 ** 12) -> dict:
    """Smallest d with a certified yes, plus how tight the certificate is."""
    factors = composition_factors(G, order_cap)
    certified = None
    for d in range(5, d_max + 1):
        if all(_factor_in_gamma(f, d) == YES for f in factors):
            certified = d
            break
    exact = all(max_alternating_section(f) is not None for f in factors)
    return {"min_certified_d": certified, "tight": exact}
