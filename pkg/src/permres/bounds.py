"""Explicit order bounds and threshold integers, evaluated exactly or in
certified interval arithmetic.

No verdict here ever comes from a bare floating-point comparison: integer
bounds use big-integer powering, real comparisons run in directed-rounding
intervals whose endpoints convert exactly to rationals, and precision
escalates through a fixed ladder until the sign of the margin is certain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

from .stabchain import PermGroup
from .structure import NO, UNKNOWN, YES, in_gamma

__all__ = [
    "BoundReport",
    "ceil_log",
    "lemma22_check",
    "m_epsilon",
    "n_c_delta",
    "theorem13_check",
    "thm13_compare",
    "formula_suite",
    "prod_bound",
    "faw_bound",
    "diag_bound",
    "subsets_bound",
    "partition_bound",
    "bcp_order_bound",
]

_DPS_LADDER = (30, 60, 120, 240)
_SCAN_FLOOR = 14  # smallest admissible threshold, ceil(5e)


@dataclass(frozen=True)
class BoundReport:
    """One bound evaluation. verdict is holds / fails only when the
    comparison is certified; None means no measured value was compared."""

    bound_name: str
    parameters: dict
    bound_value: object
    measured_value: object
    verdict: str | None


# -- exact ceiling logs ----------------------------------------------------


def ceil_log(base: int, x: int) -> int:
    """min t with base**t >= x, by integer powering only."""
    if base < 2:
        raise ValueError("log base must be >= 2")
    if x < 1:
        raise ValueError("log argument must be >= 1")
    t, p = 0, 1
    while p < x:
        p *= base
        t += 1
    assert x <= base ** t
    if t:
        assert base ** (t - 1) < x
    return t


def prod_bound(deg: int, d_q: int, b_l: int) -> int:
    return ceil_log(deg, d_q) + b_l


def faw_bound(order: int, n: int) -> int:
    return ceil_log(n, order) + 3


def diag_bound(k: int, t_order: int) -> int:
    return max(4, ceil_log(t_order, k) + 2)


def subsets_bound(m: int, k: int) -> int:
    if not 1 <= k < m:
        raise ValueError("need 1 <= k < m")
    parts = -(-m // k)
    return ceil_log(parts, m) * (parts - 1)


def partition_bound(m: int, k: int) -> int:
    if k < 2 or m % k:
        raise ValueError("k must divide m and be >= 2")
    return max(6, ceil_log(m // k, k) + 3)


def bcp_order_bound(d: int, n: int) -> int:
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    return d ** (n - 1)


_FORMULAS = {
    "prod_bound": prod_bound,
    "faw_bound": faw_bound,
    "diag_bound": diag_bound,
    "subsets_bound": subsets_bound,
    "partition_bound": partition_bound,
    "bcp_order_bound": bcp_order_bound,
}


def formula_suite(name: str, params: dict, measured: int | None = None) -> BoundReport:
    """Evaluate a closed-form bound; optionally compare a measured value
    (measured <= bound reads as holds)."""
    if name not in _FORMULAS:
        raise ValueError(f"unknown formula {name!r}; have {sorted(_FORMULAS)}")
    value = _FORMULAS[name](**params)
    verdict = None
    if measured is not None:
        verdict = "holds" if measured <= value else "fails"
    return BoundReport(name, dict(params), value, measured, verdict)


# -- certified interval helpers --------------------------------------------


def _endpoints(x) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an interval value."""
    out = []
    for sign, man, exp, _bc in x._mpi_:
        man = int(man)
        if man == 0:
            if exp != 0:
                raise ArithmeticError("nonfinite interval endpoint")
            out.append(Fraction(0))
            continue
        v = Fraction(man) * Fraction(2) ** int(exp)
        out.append(-v if sign else v)
    lo, hi = out
    return lo, hi


def _margin_sign(m: int, base: Fraction, power: Fraction) -> int:
    """Certified sign of (m/e - 1)*ln(base**power) - (3/2)*ln m.

    Positive means m**(3/2) <= (1+eps)**(m/e - 1) strictly holds, with
    1 + eps = base**power. Escalates precision until the interval excludes
    zero."""
    for dps in _DPS_LADDER:
        old = iv.dps
        try:
            iv.dps = dps
            ln1e = iv.log(iv.mpf(base.numerator) / iv.mpf(base.denominator))
            ln1e = ln1e * iv.mpf(power.numerator) / iv.mpf(power.denominator)
            margin = (iv.mpf(m) / iv.e - 1) * ln1e - iv.mpf(3) / 2 * iv.log(iv.mpf(m))
        finally:
            iv.dps = old
        lo, hi = _endpoints(margin)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    raise ArithmeticError(f"margin sign at m={m} unresolved at dps {_DPS_LADDER[-1]}")


def _mstar_cap(base: Fraction, power: Fraction) -> int:
    """Integer upper bound for 3e / (2 ln(base**power)), past which the
    margin is nondecreasing in m."""
    old = iv.dps
    try:
        iv.dps = _DPS_LADDER[0]
        ln1e = iv.log(iv.mpf(base.numerator) / iv.mpf(base.denominator))
        ln1e = ln1e * iv.mpf(power.numerator) / iv.mpf(power.denominator)
        mstar = 3 * iv.e / (2 * ln1e)
    finally:
        iv.dps = old
    _lo, hi = _endpoints(mstar)
    return int(hi) + 1


def _m_threshold(base: Fraction, power: Fraction) -> int:
    """Minimal M >= 14 such that the defining inequality holds for every
    m >= M, where 1 + eps = base**power > 1."""
    cap = max(_SCAN_FLOOR, _mstar_cap(base, power))
    last_fail = _SCAN_FLOOR - 1
    m = _SCAN_FLOOR
    while True:
        s = _margin_sign(m, base, power)
        if s < 0:
            last_fail = m
        if m >= cap and s > 0:
            break
        m += 1
    M = max(_SCAN_FLOOR, last_fail + 1)
    # contract checks: holds at M and well beyond, fails just below unless clamped
    assert _margin_sign(M, base, power) > 0
    assert _margin_sign(M + 1000, base, power) > 0
    if M > _SCAN_FLOOR:
        assert _margin_sign(M - 1, base, power) < 0
    return M


def m_epsilon(eps) -> int:
    """Least M >= 14 with m**(3/2) <= (1+eps)**(m/e - 1) for all m >= M."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return _m_threshold(1 + eps, Fraction(1))


_N_MEMO: dict[tuple[int, Fraction, Fraction], int] = {}


def _n_rec(c: int, base: Fraction, power: Fraction) -> int:
    key = (c, base, power)
    if key not in _N_MEMO:
        if c == 0:
            _N_MEMO[key] = _m_threshold(base, power)
        else:
            child = power * Fraction(3, 5)
            _N_MEMO[key] = max(_n_rec(c - 1, base, child), _m_threshold(base, child), c)
    return _N_MEMO[key]


def n_c_delta(c: int, delta) -> int:
    """Recursive threshold: N(0, d) is the m threshold of d, and N(c, d)
    is max(N(c-1, e), M(e), c) with 1 + e = (1+d)**(3/5).

    The shrunk parameter stays symbolic as (1+delta) to a rational power,
    so every comparison below is still certified."""
    delta = Fraction(delta)
    if c < 0:
        raise ValueError("c must be >= 0")
    if delta <= 0:
        raise ValueError("delta must be positive")
    return _n_rec(c, 1 + delta, Fraction(1))


# -- order bound checks ----------------------------------------------------


def lemma22_check(G: PermGroup, d: int) -> BoundReport:
    """Certified |G| < d**(degree-1) for a group with no alternating
    section of degree >= d. Exact big-integer comparison.

    The hypothesis is checked first and must resolve to a definite yes;
    d < 5 is rejected because no certificate exists down there (the d = 2
    class is empty)."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if d < 5:
        raise ValueError("no membership certificate available below d = 5")
    verdict = in_gamma(G, d)
    if verdict == NO:
        raise ValueError(f"group has an alternating section of degree >= {d}")
    if verdict == UNKNOWN:
        raise ValueError("section certificate unresolved; cannot apply the bound")
    order = G.order()
    bound = d ** (G.degree - 1)
    return BoundReport(
        "lemma22",
        {"d": d, "degree": G.degree},
        bound,
        order,
        "holds" if order < bound else "fails",
    )


def thm13_compare(order: int, n: int, d: int, delta) -> BoundReport:
    """Certified order <= ((1+delta)*d/e)**(n-1), with no hypothesis check:
    use this for tightness probes against groups outside the hypothesis.

    The comparison multiplies through by e**(n-1): the power of e is the
    only non-rational factor, so its interval endpoints against an exact
    rational decide the verdict, at escalating precision."""
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if order < 1 or n < 1 or d < 2:
        raise ValueError("need order, n >= 1 and d >= 2")
    params = {"d": d, "delta": str(delta), "degree": n}
    rhs = (Fraction(d) * (1 + delta)) ** (n - 1)  # bound times e**(n-1), exact
    verdict = None
    e_lo = e_hi = None
    for dps in _DPS_LADDER:
        old = iv.dps
        try:
            iv.dps = dps
            e_pow = iv.e ** (n - 1)
        finally:
            iv.dps = old
        e_lo, e_hi = _endpoints(e_pow)
        if order * e_hi <= rhs:
            verdict = "holds"
            break
        if order * e_lo > rhs:
            verdict = "fails"
            break
    if verdict is None:
        verdict = "inconclusive-interval"
        bound_value = None
    else:
        bound_value = (_approx(rhs / e_hi), _approx(rhs / e_lo))  # enclosure of the real bound
    return BoundReport("thm13", params, bound_value, order, verdict)


def theorem13_check(
    G: PermGroup, c: int, d: int, delta, order_cap: int = 10 ** 12
) -> BoundReport:
    """thm13_compare after verifying the hypothesis: every c-point
    stabilizer class (the whole group for c = 0) avoids alternating
    sections of degree >= d, and d clears the recursion threshold."""
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    need = n_c_delta(c, delta)
    if d < need:
        raise ValueError(f"d = {d} is below the recursion threshold {need}")
    if c == 0:
        if in_gamma(G, d, order_cap=order_cap) != YES:
            raise ValueError("section certificate unresolved or failing")
    else:
        from .search import stabilizer_scan

        rep = stabilizer_scan(G, c, f"gamma:{d}")
        if rep.verdict != "all-pass":
            raise ValueError(f"stabilizer scan came back {rep.verdict}")
    out = thm13_compare(G.order(), G.degree, d, delta)
    params = dict(out.parameters)
    params["c"] = c
    return BoundReport(out.bound_name, params, out.bound_value, out.measured_value, out.verdict)


def _approx(fr: Fraction) -> str:
    # display only; verdicts never read this
    try:
        return repr(float(fr))
    except OverflowError:
        return str(int(fr))
