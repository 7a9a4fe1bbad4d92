"""Small finite fields, matrices, canonical subspaces, and classical forms.

Fields cover q = p^k up to 512. Elements are ints in 0..q-1 encoding
base-p digit vectors, so 0 and 1 are the field zero and one. The defining
polynomial is the lexicographically least primitive one, found by trial
division and order checking at construction; multiplication runs on
exp/log tables, addition on a precomputed table.

Vectors are rows and matrices act on the right, x -> x*M, so matrix
products compose left to right like permutations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

MAX_Q = 512


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class FqField:
    """Arithmetic tables for GF(q). Use FqField.of(q); instances are cached."""

    _cache: dict[int, "FqField"] = {}

    @classmethod
    def of(cls, q: int) -> "FqField":
        if q not in cls._cache:
            cls._cache[q] = cls(q)
        return cls._cache[q]

    def __init__(self, q: int):
        if not 2 <= q <= MAX_Q:
            raise ValueError(f"field size {q} out of supported range")
        fac = _factor(q)
        if len(fac) != 1:
            raise ValueError(f"{q} is not a prime power")
        (self.p, self.k), = fac.items()
        self.q = q
        if self.k == 1:
            self._init_prime()
        else:
            self._init_extension()
        self._build_tables()

    def _init_prime(self) -> None:
        p = self.p
        self.poly = None
        for g in range(2, p):
            if all(pow(g, (p - 1) // r, p) != 1 for r in _factor(p - 1)):
                self.primitive = g
                break
        else:
            self.primitive = 1  # only p == 2 reaches here
        self._exp = [1] * (p - 1)
        for i in range(1, p - 1):
            self._exp[i] = self._exp[i - 1] * self.primitive % p

    def _init_extension(self) -> None:
        p, k, q = self.p, self.k, self.q
        divisors = [d for d in range(1, k // 2 + 1)]
        lower_monics = []
        for d in divisors:
            for tail in itertools.product(range(p), repeat=d):
                lower_monics.append(tail + (1,))
        rad = list(_factor(q - 1))
        for low in range(p ** k):
            f = self._digits(low, k) + (1,)
            if f[0] == 0:
                continue  # reducible: x divides
            if not self._is_irreducible(f, lower_monics):
                continue
            if self._is_primitive_poly(f, rad):
                self.poly = f
                break
        else:
            raise AssertionError("no primitive polynomial found")
        self.primitive = p  # the element x, digits (0, 1, 0, ...)
        x = (0, 1)
        self._exp = [1]
        cur = (1,)
        for _ in range(q - 2):
            cur = self._poly_mulmod(cur, x, self.poly)
            self._exp.append(self._undigits(cur))

    def _digits(self, n: int, width: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(width):
            out.append(n % p)
            n //= p
        return tuple(out)

    def _undigits(self, digits: Sequence[int]) -> int:
        n = 0
        for d in reversed(digits):
            n = n * self.p + d
        return n

    # polynomial helpers over F_p, little-endian coefficient tuples

    def _poly_mulmod(self, a, b, f):
        p = self.p
        res = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    res[i + j] = (res[i + j] + ai * bj) % p
        return self._poly_rem(res, f)

    def _poly_rem(self, a, f):
        p = self.p
        a = list(a)
        df = len(f) - 1
        while len(a) > df:
            lead = a[-1]
            if lead:
                shift = len(a) - 1 - df
                for i, fi in enumerate(f):
                    a[shift + i] = (a[shift + i] - lead * fi) % p
            a.pop()
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        return tuple(a)

    def _is_irreducible(self, f, lower_monics) -> bool:
        for g in lower_monics:
            if len(g) > len(f):
                continue
            if self._poly_divides(g, f):
                return False
        return True

    def _poly_divides(self, g, f) -> bool:
        p = self.p
        a = list(f)
        dg = len(g) - 1
        inv_lead = pow(g[-1], p - 2, p)
        while len(a) - 1 >= dg and any(a):
            lead = a[-1]
            if lead == 0:
                a.pop()
                continue
            coef = lead * inv_lead % p
            shift = len(a) - 1 - dg
            for i, gi in enumerate(g):
                a[shift + i] = (a[shift + i] - coef * gi) % p
            a.pop()
        return not any(a)

    def _is_primitive_poly(self, f, rad) -> bool:
        q = self.q
        x = (0, 1)
        for r in rad:
            if self._poly_pow(x, (q - 1) // r, f) == (1,):
                return False
        return self._poly_pow(x, q - 1, f) == (1,)

    def _poly_pow(self, a, e, f):
        res = (1,)
        while e:
            if e & 1:
                res = self._poly_mulmod(res, a, f)
            a = self._poly_mulmod(a, a, f)
            e >>= 1
        return res

    def _build_tables(self) -> None:
        p, q = self.p, self.q
        self._log = [0] * q
        for i, v in enumerate(self._exp):
            self._log[v] = i
        # addition on digit vectors; flat table indexed a*q + b
        add = [0] * (q * q)
        if self.k == 1:
            for a in range(q):
                row = a * q
                for b in range(q):
                    add[row + b] = (a + b) % p
        else:
            digs = [self._digits(a, self.k) for a in range(q)]
            for a in range(q):
                da = digs[a]
                row = a * q
                for b in range(q):
                    db = digs[b]
                    add[row + b] = self._undigits(tuple((x + y) % p for x, y in zip(da, db)))
        self._add = add
        self._neg = [0] * q
        for a in range(q):
            if self.k == 1:
                self._neg[a] = (-a) % p
            else:
                da = self._digits(a, self.k)
                self._neg[a] = self._undigits(tuple((-x) % p for x in da))

    # -- public arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self._add[a * self.q + b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self._add[a * self.q + self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("field inverse of zero")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("field inverse of zero")
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> list[int]:
        return list(self._exp)

    def sqrt2(self, a: int) -> int:
        """Square root in characteristic 2, where squaring is bijective."""
        if self.p != 2:
            raise ValueError("sqrt2 is a characteristic-2 shortcut")
        return self.pow(a, self.q // 2) if a else 0

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        s = 0
        for x, y in zip(u, v):
            if x and y:
                s = self.add(s, self.mul(x, y))
        return s

    def vec_add(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        add, q = self._add, self.q
        return tuple(add[x * q + y] for x, y in zip(u, v))

    def vec_scale(self, c: int, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.mul(c, x) for x in v)


# -- matrices --------------------------------------------------------------


class FqMatrix:
    __slots__ = ("field", "rows")

    def __init__(self, field: FqField, rows: Iterable[Iterable[int]]):
        self.field = field
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def identity(cls, field: FqField, n: int) -> "FqMatrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, FqMatrix) and self.rows == other.rows and self.field.q == other.field.q

    def __hash__(self) -> int:
        return hash((self.field.q, self.rows))

    def __repr__(self) -> str:
        return f"FqMatrix(q={self.field.q}, {list(map(list, self.rows))})"

    def __mul__(self, other: "FqMatrix") -> "FqMatrix":
        F = self.field
        bt = tuple(zip(*other.rows))
        return FqMatrix(F, [tuple(F.dot(row, col) for col in bt) for row in self.rows])

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Row vector action v -> v * M."""
        F = self.field
        bt = tuple(zip(*self.rows))
        return tuple(F.dot(v, col) for col in bt)

    def transpose(self) -> "FqMatrix":
        return FqMatrix(self.field, zip(*self.rows))

    def map_entries(self, fn) -> "FqMatrix":
        return FqMatrix(self.field, [[fn(x) for x in row] for row in self.rows])

    def det(self) -> int:
        F = self.field
        a = [list(r) for r in self.rows]
        n = len(a)
        d = 1
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                return 0
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                d = F.neg(d)
            d = F.mul(d, a[col][col])
            inv = F.inv(a[col][col])
            for r in range(col + 1, n):
                if a[r][col]:
                    c = F.mul(a[r][col], inv)
                    for j in range(col, n):
                        a[r][j] = F.sub(a[r][j], F.mul(c, a[col][j]))
        return d

    def inverse(self) -> "FqMatrix":
        F = self.field
        n = self.n
        a = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                raise ValueError("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            inv = F.inv(a[col][col])
            a[col] = [F.mul(inv, x) for x in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    c = a[r][col]
                    a[r] = [F.sub(x, F.mul(c, y)) for x, y in zip(a[r], a[col])]
        return FqMatrix(F, [row[n:] for row in a])

    def __pow__(self, e: int) -> "FqMatrix":
        if e < 0:
            return self.inverse() ** (-e)
        res = FqMatrix.identity(self.field, self.n)
        base = self
        while e:
            if e & 1:
                res = res * base
            base = base * base
            e >>= 1
        return res


def rref(field: FqField, rows: Sequence[Sequence[int]]) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Reduced row echelon form and pivot columns; canonical per row space."""
    F = field
    a = [list(r) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = F.inv(a[r][col])
        a[r] = [F.mul(inv, x) for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][col]:
                c = a[i][col]
                a[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in a[:r]), tuple(pivots)


@dataclass(frozen=True, order=True)
class SubspaceFq:
    """A subspace keyed by its reduced-echelon basis; hashable and canonical."""

    field_q: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_vectors(cls, field: FqField, vectors: Sequence[Sequence[int]]) -> "SubspaceFq":
        rows, _ = rref(field, vectors)
        return cls(field.q, rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains_vector(self, field: FqField, v: Sequence[int]) -> bool:
        rows, _ = rref(field, list(self.basis) + [list(v)])
        return len(rows) == self.dim


# -- classical forms -------------------------------------------------------


@dataclass(frozen=True)
class FormSpec:
    """A bilinear, quadratic, or hermitian form on F_q^dim.

    kind: symplectic | quadratic-plus | quadratic-minus | quadratic-odd
          | hermitian.
    gram holds the (polar) bilinear matrix; quad holds upper-triangular
    quadratic coefficients for the quadratic kinds (valid in every
    characteristic); q0 is the subfield order for hermitian forms, with
    conjugation a -> a^q0 applied to the second argument.
    """

    kind: str
    field_q: int
    dim: int
    gram: tuple[tuple[int, ...], ...]
    quad: tuple[tuple[int, ...], ...] | None = None
    q0: int | None = None

    @property
    def field(self) -> FqField:
        return FqField.of(self.field_q)

    def conj(self, a: int) -> int:
        return self.field.pow(a, self.q0) if a else 0

    def bilinear(self, x: Sequence[int], y: Sequence[int]) -> int:
        F = self.field
        if self.kind == "hermitian":
            y = [self.conj(v) for v in y]
        s = 0
        for i, xi in enumerate(x):
            if xi:
                s = F.add(s, F.mul(xi, F.dot(self.gram[i], y)))
        return s

    def quad_value(self, v: Sequence[int]) -> int:
        if self.quad is None:
            raise ValueError("not a quadratic form")
        F = self.field
        s = 0
        for i, vi in enumerate(v):
            if not vi:
                continue
            row = self.quad[i]
            for j in range(i, len(v)):
                if row[j] and v[j]:
                    s = F.add(s, F.mul(F.mul(vi, v[j]), row[j]))
        return s

    def is_isometry(self, M: FqMatrix) -> bool:
        n = self.dim
        rows = [M.rows[i] for i in range(n)]
        if self.quad is not None:
            for i in range(n):
                ei = tuple(1 if t == i else 0 for t in range(n))
                if self.quad_value(rows[i]) != self.quad_value(ei):
                    return False
        for i in range(n):
            for j in range(n):
                ei = tuple(1 if t == i else 0 for t in range(n))
                ej = tuple(1 if t == j else 0 for t in range(n))
                if self.bilinear(rows[i], rows[j]) != self.bilinear(ei, ej):
                    return False
        return True


def _polar_from_quad(field: FqField, quad: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    # B(x, y) = Q(x + y) - Q(x) - Q(y); on basis vectors that is the
    # off-diagonal coefficient, plus twice the diagonal on the diagonal
    n = len(quad)
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                g[i][j] = field.add(quad[i][i], quad[i][i])
            else:
                g[i][j] = quad[min(i, j)][max(i, j)]
    return tuple(tuple(r) for r in g)


def make_symplectic_form(field: FqField, m: int) -> FormSpec:
    """Hyperbolic pairs (e_i, f_i) at positions (i, n+i), m = 2n."""
    if m % 2:
        raise ValueError("symplectic forms need even dimension")
    n = m // 2
    g = [[0] * m for _ in range(m)]
    for i in range(n):
        g[i][n + i] = 1
        g[n + i][i] = field.neg(1)
    return FormSpec("symplectic", field.q, m, tuple(tuple(r) for r in g))


def _anisotropic_pair(field: FqField) -> tuple[int, int, int]:
    # lex-least (a, b, c) with a x^2 + b xy + c y^2 nonzero off the origin
    for a in range(field.q):
        for b in range(field.q):
            for c in range(field.q):
                ok = True
                for x in range(field.q):
                    for y in range(field.q):
                        if x == 0 and y == 0:
                            continue
                        val = field.add(
                            field.add(field.mul(a, field.mul(x, x)), field.mul(b, field.mul(x, y))),
                            field.mul(c, field.mul(y, y)))
                        if val == 0:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    return a, b, c
    raise AssertionError("no anisotropic binary form found")


def make_quadratic_form(field: FqField, m: int, eps: int) -> FormSpec:
    """Standard quadratic form: eps=+1 plus type, -1 minus type, 0 odd dim.

    Plus type is n hyperbolic pairs Q = sum x_i y_i; minus type replaces
    the last pair by the lex-least anisotropic binary form; odd dimension
    appends a square term.
    """
    quad = [[0] * m for _ in range(m)]
    if eps == 0:
        if m % 2 == 0:
            raise ValueError("eps=0 needs odd dimension")
        n = m // 2
        for i in range(n):
            quad[i][n + i] = 1
        quad[m - 1][m - 1] = 1
        kind = "quadratic-odd"
    elif eps == 1:
        if m % 2:
            raise ValueError("plus type needs even dimension")
        n = m // 2
        for i in range(n):
            quad[i][n + i] = 1
        kind = "quadratic-plus"
    elif eps == -1:
        if m % 2:
            raise ValueError("minus type needs even dimension")
        n = m // 2
        for i in range(n - 1):
            quad[i][n - 1 + i] = 1
        a, b, c = _anisotropic_pair(field)
        quad[m - 2][m - 2] = a
        quad[m - 2][m - 1] = b
        quad[m - 1][m - 1] = c
        kind = "quadratic-minus"
    else:
        raise ValueError("eps must be +1, -1, or 0")
    qt = tuple(tuple(r) for r in quad)
    return FormSpec(kind, field.q, m, _polar_from_quad(field, qt), qt)


def make_hermitian_form(field: FqField, m: int) -> FormSpec:
    """Standard hermitian form over F_{q0^2}: antidiagonal pairs, odd tail."""
    import math

    q0 = int(math.isqrt(field.q))
    if q0 * q0 != field.q:
        raise ValueError("hermitian forms live over square-order fields")
    g = [[0] * m for _ in range(m)]
    ell = m // 2
    for i in range(ell):
        g[i][ell + i] = 1
        g[ell + i][i] = 1
    if m % 2:
        g[m - 1][m - 1] = 1
    return FormSpec("hermitian", field.q, m, tuple(tuple(r) for r in g), None, q0)


# -- subspace classification ----------------------------------------------


@dataclass(frozen=True)
class SubspaceClass:
    dim: int
    degenerate: bool
    totally_isotropic: bool
    totally_singular: bool | None
    witt_index: int | None
    eps: str | None


def _restricted_quad(form: FormSpec, basis: Sequence[Sequence[int]]):
    F = form.field
    ell = len(basis)
    gram = [[form.bilinear(basis[i], basis[j]) for j in range(ell)] for i in range(ell)]
    quad = None
    if form.quad is not None:
        quad = [[0] * ell for _ in range(ell)]
        for i in range(ell):
            quad[i][i] = form.quad_value(basis[i])
            for j in range(i + 1, ell):
                quad[i][j] = gram[i][j]
    return gram, quad


def _gram_rank(field: FqField, gram: Sequence[Sequence[int]]) -> int:
    if not gram:
        return 0
    rows, _ = rref(field, gram)
    return len(rows)


def _enumerate_vectors(q: int, ell: int, cap: int = 1 << 16):
    if q ** ell > cap:
        raise ValueError("subspace too large to enumerate")
    return itertools.product(range(q), repeat=ell)


def _quad_eval(field: FqField, quad, v) -> int:
    s = 0
    for i, vi in enumerate(v):
        if not vi:
            continue
        for j in range(i, len(v)):
            if quad[i][j] and v[j]:
                s = field.add(s, field.mul(field.mul(vi, v[j]), quad[i][j]))
    return s


def _bil_eval(field: FqField, gram, x, y) -> int:
    s = 0
    for i, xi in enumerate(x):
        if xi:
            s = field.add(s, field.mul(xi, field.dot(gram[i], y)))
    return s


def _witt_index(field: FqField, gram, quad, ell: int) -> int:
    """Hyperbolic-pair splitting on an abstract nondegenerate quadratic space."""
    if ell == 0:
        return 0
    singular = None
    for v in _enumerate_vectors(field.q, ell):
        if any(v) and _quad_eval(field, quad, v) == 0:
            singular = v
            break
    if singular is None:
        return 0
    w = next(u for u in _enumerate_vectors(field.q, ell)
             if _bil_eval(field, gram, singular, u) != 0)
    c = field.inv(_bil_eval(field, gram, singular, w))
    w = tuple(field.mul(c, x) for x in w)
    lam = field.neg(_quad_eval(field, quad, w))
    w = field.vec_add(w, field.vec_scale(lam, singular))
    # complement: vectors orthogonal to both members of the pair
    kernel_basis = _solve_orthogonal(field, gram, [singular, w], ell)
    sub_gram = [[_bil_eval(field, gram, a, b) for b in kernel_basis] for a in kernel_basis]
    sub_quad = [[0] * len(kernel_basis) for _ in kernel_basis]
    for i, a in enumerate(kernel_basis):
        sub_quad[i][i] = _quad_eval(field, quad, a)
        for j in range(i + 1, len(kernel_basis)):
            sub_quad[i][j] = sub_gram[i][j]
    return 1 + _witt_index(field, sub_gram, sub_quad, len(kernel_basis))


def _solve_orthogonal(field: FqField, gram, vectors, ell: int):
    """Basis of the joint polar-orthogonal complement inside F_q^ell."""
    rows = [[_bil_eval(field, gram, v, tuple(1 if t == j else 0 for t in range(ell)))
             for j in range(ell)] for v in vectors]
    reduced, pivots = rref(field, rows)
    free = [j for j in range(ell) if j not in pivots]
    basis = []
    for j in free:
        v = [0] * ell
        v[j] = 1
        for r, pc in zip(reduced, pivots):
            v[pc] = field.neg(field.mul(r[j], 1))
        basis.append(tuple(v))
    return basis


def subspace_type(form: FormSpec, basis: Sequence[Sequence[int]]) -> SubspaceClass:
    """Classify a subspace under the restricted form.

    Witt index and plus/minus type are computed only for nondegenerate
    quadratic restrictions (hyperbolic splitting); symplectic restrictions
    get witt = dim/2 when nondegenerate. For hermitian forms only the
    degeneracy and isotropy flags are filled in.
    """
    F = form.field
    ell = len(basis)
    gram, quad = _restricted_quad(form, basis)
    rank = _gram_rank(F, gram)
    degenerate = rank < ell
    tot_iso = all(gram[i][j] == 0 for i in range(ell) for j in range(ell))
    tot_sing = None
    if quad is not None:
        tot_sing = tot_iso and all(quad[i][i] == 0 for i in range(ell))
    witt = None
    eps = None
    if quad is not None and not degenerate:
        witt = _witt_index(F, gram, quad, ell)
        if ell % 2 == 0:
            eps = "+" if witt == ell // 2 else "-"
        else:
            eps = "o"
    elif form.kind == "symplectic" and not degenerate:
        witt = ell // 2
    return SubspaceClass(ell, degenerate, tot_iso, tot_sing, witt, eps)


def count_singular(form: FormSpec, basis: Sequence[Sequence[int]]) -> int:
    """Nonzero vectors of the subspace on which the quadratic form vanishes."""
    F = form.field
    _, quad = _restricted_quad(form, basis)
    if quad is None:
        raise ValueError("count_singular needs a quadratic form")
    count = 0
    for coeffs in _enumerate_vectors(F.q, len(basis)):
        if any(coeffs) and _quad_eval(F, quad, coeffs) == 0:
            count += 1
    return count
