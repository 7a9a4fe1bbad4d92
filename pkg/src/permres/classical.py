"""Matrix generators for the classical groups at desk scale.

Each family comes with its order formula; the formula is the contract and
the generator recipe is replaceable. Recipes: elementary transvections and
a signed cycle for SL/GL; symplectic transvections along a small set of
directions plus a pair cycle for Sp; unitary transvections with trace-zero
parameters plus a torus element for SU; reflection or orthogonal-transvection
pools for GO in odd and even characteristic; and for odd-dimension GO in
characteristic 2 the unique isometric lifts of the symplectic generators.
Orders are validated downstream through faithful permutation actions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fq import (
    FormSpec,
    FqField,
    FqMatrix,
    make_hermitian_form,
    make_quadratic_form,
    make_symplectic_form,
)

FAMILIES = ("SL", "GL", "Sp", "SU", "GO+", "GO-", "GO-odd")


@dataclass
class MatrixGroup:
    family: str
    m: int
    q: int
    field: FqField
    matrices: list[FqMatrix]
    form: FormSpec | None
    abstract_order: int

    @property
    def label(self) -> str:
        return f"{self.family}({self.m},{self.q})"


def classical_order(family: str, m: int, q: int) -> int:
    """Abstract group order from the standard product formulas."""
    if family == "SL":
        o = q ** (m * (m - 1) // 2)
        for i in range(2, m + 1):
            o *= q ** i - 1
        return o
    if family == "GL":
        return classical_order("SL", m, q) * (q - 1)
    if family == "Sp":
        n = m // 2
        o = q ** (n * n)
        for i in range(1, n + 1):
            o *= q ** (2 * i) - 1
        return o
    if family == "SU":
        o = q ** (m * (m - 1) // 2)
        for i in range(2, m + 1):
            o *= q ** i - (-1) ** i
        return o
    if family in ("GO+", "GO-"):
        eps = 1 if family == "GO+" else -1
        n = m // 2
        o = 2 * q ** (n * (n - 1)) * (q ** n - eps)
        for i in range(1, n):
            o *= q ** (2 * i) - 1
        return o
    if family == "GO-odd":
        n = m // 2
        o = q ** (n * n)
        for i in range(1, n + 1):
            o *= q ** (2 * i) - 1
        return o if q % 2 == 0 else 2 * o
    raise ValueError(f"unknown family {family!r}")


def _basis(m: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(m))


def _perm_matrix(field: FqField, images: list[tuple[int, ...]]) -> FqMatrix:
    return FqMatrix(field, images)


def _transvection(field: FqField, form: FormSpec, v, a) -> FqMatrix:
    # x -> x + a B(x, v) v ; preserves an alternating form for any v and
    # a quadratic form when v is nonsingular and a = Q(v)^-1 (char 2)
    m = form.dim
    rows = []
    for i in range(m):
        e = _basis(m, i)
        coef = field.mul(a, form.bilinear(e, v))
        rows.append(field.vec_add(e, field.vec_scale(coef, v)))
    return FqMatrix(field, rows)


def _reflection(field: FqField, form: FormSpec, v) -> FqMatrix:
    # x -> x - Q(v)^-1 B(x, v) v for nonsingular v; in characteristic 2 the
    # subtraction is addition and this is the orthogonal transvection
    m = form.dim
    qv_inv = field.inv(form.quad_value(v))
    rows = []
    for i in range(m):
        e = _basis(m, i)
        coef = field.mul(qv_inv, form.bilinear(e, v))
        rows.append(field.vec_add(e, field.vec_scale(field.neg(coef), v)))
    return FqMatrix(field, rows)


def _unitary_transvection(field: FqField, form: FormSpec, v, a) -> FqMatrix:
    # x -> x + a h(x, v) v with h(v, v) = 0 and a + conj(a) = 0
    m = form.dim
    rows = []
    for i in range(m):
        e = _basis(m, i)
        coef = field.mul(a, form.bilinear(e, v))
        rows.append(field.vec_add(e, field.vec_scale(coef, v)))
    return FqMatrix(field, rows)


def _sl_generators(field: FqField, m: int) -> list[FqMatrix]:
    gens = []
    mu = field.primitive
    for s in range(field.k):
        rows = [list(_basis(m, i)) for i in range(m)]
        rows[0][1] = field.pow(mu, s)
        gens.append(FqMatrix(field, rows))
    images = [_basis(m, i + 1) for i in range(m - 1)]
    last = [0] * m
    last[0] = 1 if m % 2 == 1 else field.neg(1)
    images.append(tuple(last))
    gens.append(_perm_matrix(field, images))
    return gens


def _sp_generators(field: FqField, form: FormSpec, m: int) -> list[FqMatrix]:
    n = m // 2
    mu = field.primitive
    e0, f0 = _basis(m, 0), _basis(m, n)
    gens = []
    for s in range(field.k):
        a = field.pow(mu, s)
        gens.append(_transvection(field, form, e0, a))
        gens.append(_transvection(field, form, f0, a))
    if n >= 2:
        e1, f1 = _basis(m, 1), _basis(m, n + 1)
        gens.append(_transvection(field, form, field.vec_add(e0, e1), 1))
        gens.append(_transvection(field, form, field.vec_add(e0, f1), 1))
        images = []
        for i in range(n):
            images.append(_basis(m, (i + 1) % n))
        for i in range(n):
            images.append(_basis(m, n + (i + 1) % n))
        gens.append(_perm_matrix(field, images))
    return gens


def _su_generators(field: FqField, form: FormSpec, m: int, q0: int) -> list[FqMatrix]:
    # field is F_{q0^2}; trace-zero line located by search
    kappa = next(a for a in range(1, field.q)
                 if field.add(a, field.pow(a, q0)) == 0)
    zeta = field.primitive
    sigma = field.pow(zeta, q0 + 1)  # generates the subfield units
    sub_deg = field.k // 2
    skew = [field.mul(kappa, field.pow(sigma, s)) for s in range(sub_deg)]
    full_basis = [field.pow(zeta, s) for s in range(field.k)]
    ell = m // 2
    e0, f0 = _basis(m, 0), _basis(m, ell)
    gens = []
    for a in skew:
        gens.append(_unitary_transvection(field, form, e0, a))
        gens.append(_unitary_transvection(field, form, f0, a))
    if ell >= 2:
        # GL(2)-block unipotents mixing the first two pairs carry the full
        # field into the entries: e0 -> e0 + b e1, f1 -> f1 - conj(b) f0
        for b in full_basis:
            rows = [list(_basis(m, i)) for i in range(m)]
            rows[0][1] = b
            rows[ell + 1][ell] = field.neg(field.pow(b, q0))
            gens.append(FqMatrix(field, rows))
        gens.append(_unitary_transvection(field, form, field.vec_add(e0, _basis(m, ell + 1)), skew[0]))
        images = [_basis(m, (i + 1) % ell) for i in range(ell)]
        images += [_basis(m, ell + (i + 1) % ell) for i in range(ell)]
        if m % 2:
            images.append(_basis(m, m - 1))
        gens.append(_perm_matrix(field, images))
        # torus with determinant fixed across two pairs:
        # diag(z, z^q0, z^-q0, z^-1) on (e0, e1, f0, f1)
        rows = [list(_basis(m, i)) for i in range(m)]
        rows[0][0] = zeta
        rows[1][1] = field.pow(zeta, q0)
        rows[ell][ell] = field.pow(zeta, -q0)
        rows[ell + 1][ell + 1] = field.pow(zeta, -1)
        gens.append(FqMatrix(field, rows))
    if m % 2:
        # rank-one-pair-plus-tail unipotents u(b, c): f0 -> f0 + b x + c e0,
        # x -> x - conj(b) e0, with c + conj(c) = -b conj(b); their opposites
        # act through f0 the same way
        for b in full_basis:
            nb = field.neg(field.mul(b, field.pow(b, q0)))
            c = next(v for v in range(field.q)
                     if field.add(v, field.pow(v, q0)) == nb)
            for anchor, other in ((0, ell), (ell, 0)):
                rows = [list(_basis(m, i)) for i in range(m)]
                rows[other][m - 1] = b
                rows[other][anchor] = c
                rows[m - 1][anchor] = field.neg(field.pow(b, q0))
                gens.append(FqMatrix(field, rows))
    if ell == 1:
        # single-pair torus: odd m spends the determinant on the tail,
        # even m stays inside the subfield
        rows = [list(_basis(m, i)) for i in range(m)]
        lam = zeta if m % 2 else sigma
        rows[0][0] = lam
        rows[ell][ell] = field.pow(lam, -q0)
        if m % 2:
            rows[m - 1][m - 1] = field.pow(lam, q0 - 1)
        gens.append(FqMatrix(field, rows))
    return gens


def _orthogonal_pool(field: FqField, form: FormSpec, m: int) -> list[tuple[int, ...]]:
    """All nonsingular vectors up to scalars; requires q^m <= 4096."""
    import itertools

    q = field.q
    if q ** m > 4096:
        raise ValueError(f"orthogonal recipe needs q^m <= 4096, got {q}^{m}")
    pool = []
    for v in itertools.product(range(q), repeat=m):
        if not any(v):
            continue
        first = next(x for x in v if x)
        if first != 1:
            continue  # projective representative
        if form.quad_value(v) != 0:
            pool.append(v)
    return pool


def _go_generators(field: FqField, form: FormSpec, m: int) -> list[FqMatrix]:
    gens = [_reflection(field, form, v) for v in _orthogonal_pool(field, form, m)]
    n = m // 2
    if field.p == 2 and m % 2 == 0 and n >= 2 and form.kind == "quadratic-plus":
        # transvections alone fall short for the smallest plus-type space;
        # swapping two hyperbolic pairs is always an isometry of this layout
        images = [_basis(m, i) for i in range(m)]
        images[0], images[1] = images[1], images[0]
        images[n], images[n + 1] = images[n + 1], images[n]
        gens.append(_perm_matrix(field, images))
    return gens


def _go_odd_char2(field: FqField, m: int) -> tuple[list[FqMatrix], FormSpec]:
    # unique isometric lifts of the symplectic generators: the radical line
    # coordinate is forced because squaring is bijective in characteristic 2
    n = m // 2
    sp_form = make_symplectic_form(field, 2 * n)
    sp_gens = _sp_generators(field, sp_form, 2 * n)
    form = make_quadratic_form(field, m, 0)
    pairs_quad = make_quadratic_form(field, 2 * n, 1)
    lifted = []
    for S in sp_gens:
        rows = []
        for i in range(2 * n):
            u = S.rows[i]
            c = field.sqrt2(pairs_quad.quad_value(u))
            rows.append(tuple(u) + (c,))
        rows.append(_basis(m, m - 1))
        lifted.append(FqMatrix(field, rows))
    return lifted, form


def classical_generators(family: str, m: int, q: int) -> MatrixGroup:
    """Matrix generators and form for a classical family member.

    Supported: families in FAMILIES, 2 <= m <= 12, q <= 9 a prime power
    (SU works inside the degree-2 extension, so its field is q^2 <= 81).
    Orthogonal recipes additionally need q^m <= 4096 to enumerate their
    reflection pools, except odd dimension in characteristic 2.
    """
    if family not in FAMILIES:
        raise ValueError(f"unsupported family {family!r}")
    if not 2 <= m <= 12 or q > 9 or q < 2:
        raise ValueError(f"unsupported triple ({family}, {m}, {q})")
    order = classical_order(family, m, q)
    if family in ("SL", "GL"):
        field = FqField.of(q)
        gens = _sl_generators(field, m)
        _check_det_one(gens)
        if family == "GL" and q > 2:
            rows = [list(_basis(m, i)) for i in range(m)]
            rows[0][0] = field.primitive
            gens.append(FqMatrix(field, rows))
        return MatrixGroup(family, m, q, field, gens, None, order)
    if family == "Sp":
        if m % 2:
            raise ValueError(f"unsupported triple ({family}, {m}, {q}): need even dimension")
        field = FqField.of(q)
        form = make_symplectic_form(field, m)
        gens = _sp_generators(field, form, m)
        _check_form(gens, form)
        return MatrixGroup(family, m, q, field, gens, form, order)
    if family == "SU":
        field = FqField.of(q * q)
        form = make_hermitian_form(field, m)
        gens = _su_generators(field, form, m, q)
        _check_form(gens, form)
        _check_det_one(gens)
        return MatrixGroup(family, m, q, field, gens, form, order)
    if family in ("GO+", "GO-"):
        if m % 2 or m < 4:
            raise ValueError(f"unsupported triple ({family}, {m}, {q}): need even dimension >= 4")
        field = FqField.of(q)
        form = make_quadratic_form(field, m, 1 if family == "GO+" else -1)
        gens = _go_generators(field, form, m)
        _check_form(gens, form)
        return MatrixGroup(family, m, q, field, gens, form, order)
    if family == "GO-odd":
        if m % 2 == 0 or m < 3:
            raise ValueError(f"unsupported triple ({family}, {m}, {q}): need odd dimension >= 3")
        field = FqField.of(q)
        if q % 2 == 0:
            gens, form = _go_odd_char2(field, m)
        else:
            form = make_quadratic_form(field, m, 0)
            gens = _go_generators(field, form, m)
        _check_form(gens, form)
        return MatrixGroup(family, m, q, field, gens, form, order)
    raise AssertionError


def _check_form(gens: list[FqMatrix], form: FormSpec) -> None:
    for M in gens:
        if not form.is_isometry(M):
            raise AssertionError("generator recipe produced a non-isometry")


def _check_det_one(gens: list[FqMatrix]) -> None:
    for M in gens:
        if M.det() != 1:
            raise AssertionError("generator recipe produced determinant != 1")


def scalar_kernel_order(grp: MatrixGroup) -> int:
    """Number of scalar matrices in the group: the kernel size of any
    action on subspaces."""
    field = grp.field
    count = 0
    for lam in field.units():
        if grp.family in ("SL", "SU") and field.pow(lam, grp.m) != 1:
            continue
        if grp.form is not None:
            lam_i = FqMatrix.identity(field, grp.m).map_entries(
                lambda a: field.mul(lam, a))
            if not grp.form.is_isometry(lam_i):
                continue
        count += 1
    return count


def primitive_element(field: FqField) -> int:
    return field.primitive
