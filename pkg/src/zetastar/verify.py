"""Identity suite: every numerical claim checked with its residual.

Each criterion returns a list of :class:`Check` rows.  A criterion passes
when all of its rows pass.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Union

import numpy as np

from ._nested import nested_upper_sums, reciprocal_shift_weight, riemann_zeta
from .analysis import (
    difference_quotient,
    divergence_ratio,
    graph_samples,
    invert_zstar,
    left_derivative,
    right_derivative,
    zstar,
    zstar_via_index,
)
from .closed_form import const_index_closed, hoffman_like_closed, tail2_reduction, two_n_one_closed
from .index import Index, point_from_index
from .series import DEFAULT_PARAMS, TruncationParams, aitken, bound_chain_sum, eval_finite, eval_periodic, eval_tail_l

__all__ = ["Check", "CRITERIA", "row_fields", "run_criterion", "run_suite", "brute_nested_sum", "multiset_sum", "extrapolate"]

ZETA2 = math.pi**2 / 6


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    expected: Union[float, str]
    computed: Union[float, str]
    residual: float
    passed: bool

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


def _num(x) -> str:
    if isinstance(x, str):
        return x
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return f"{x:.15g}"


def _res(x: float) -> str:
    if isinstance(x, str):
        return x
    if math.isnan(x):
        return "-"
    return f"{x:.3e}"


def row_fields(c: Check) -> List[str]:
    return [f"C{c.criterion:02d} {c.name}", _num(c.expected), _num(c.computed), _res(c.residual), c.status]


def _close(criterion: int, name: str, expected: float, computed: float, tol: float) -> Check:
    res = abs(computed - expected)
    return Check(criterion, name, expected, computed, res, bool(res <= tol))


def _timed(criterion: int, name: str, limit: float, started: float) -> Check:
    ok = time.perf_counter() - started < limit
    return Check(criterion, name, f"< {limit:g} s", "within limit" if ok else "exceeded", math.nan, ok)


# --------------------------------------------------------------------------
# independent oracles


def _tail_bound(e: int, k: int, x: float) -> float:
    """Upper bound for sum_{m > x} (1 + log m)^k / m^e, e >= 2."""
    u = math.log(x)
    c = e - 1
    total = 0.0
    for j in range(k + 1):
        total += math.perm(k, j) * (1 + u) ** (k - j) / c ** (j + 1)
    return math.exp(-c * u) * total


def brute_nested_sum(exponents: Sequence[int], floor: int, m: int = 20000, weight=None):
    """Bracket [lo, hi] for sum_{m_1 >= ... >= m_s >= floor} prod m_j^{-e_j}.

    ``lo`` is the plain sum over m_1 < m; ``hi`` adds a crude bound for the
    terms with m_1 >= m.  ``weight`` multiplies the outermost variable and is
    assumed to be at most 2.
    """
    grid = np.arange(floor, m, dtype=float)
    cur = np.ones_like(grid)
    # outermost variable first: cur(n) = sum over m_1 >= ... >= m_j >= n
    for level, e in enumerate(exponents):
        terms = cur * grid ** (-float(e))
        if weight is not None and level == 0:
            terms = terms * weight(grid)
        cur = np.cumsum(terms[::-1])[::-1]
    lo = float(cur[0])
    lead = exponents[0] + (1 if weight is not None else 0)
    scale = 2.0 if weight is not None else 1.0
    return lo, lo + scale * _tail_bound(lead, len(exponents) - 1, m - 1)


def multiset_sum(f: Callable[[int], float], size: int, m: int = 2000) -> float:
    """sum over m_1 >= ... >= m_size in [1, m] of 2^{#distinct} prod f(m_j).

    Every weakly decreasing tuple is a multiset; grouping by multiplicities
    gives the coefficient of t^size in prod_m (1 + 2 sum_c (t f(m))^c).
    """
    poly = np.zeros(size + 1)
    poly[0] = 1.0
    for k in range(1, m + 1):
        x = f(k)
        fac = np.concatenate([[1.0], 2.0 * x ** np.arange(1, size + 1)])
        poly = np.convolve(poly, fac)[: size + 1]
    return float(poly[size])


def extrapolate(seq: Sequence[float]) -> float:
    """Iterated Aitken delta-squared on a sequence of difference quotients."""
    s = list(seq)
    while len(s) >= 3:
        s = [aitken(s[i], s[i + 1], s[i + 2]) for i in range(len(s) - 2)]
    return s[-1]


# --------------------------------------------------------------------------
# criteria


def c01(p):
    t0 = time.perf_counter()
    a = eval_tail_l((), 2, p).value
    b = const_index_closed(2).value
    return [
        _close(1, "zeta*({2}^inf) tail-l", 2.0, a, 1e-9),
        _close(1, "zeta*({2}^inf) gamma product", 2.0, b, 1e-9),
        _timed(1, "runtime", 1.0, t0),
    ]


def c02(p):
    exact = 8 * math.pi / (math.exp(math.pi) - math.exp(-math.pi))
    series = eval_tail_l((), 4, p).value
    cf = const_index_closed(4)
    return [
        _close(2, "zeta*({4}^inf) series vs exact", exact, series, 1e-9),
        _close(2, "zeta*({4}^inf) series vs gamma", cf.value, series, 1e-10),
        _close(2, "zeta*({4}^inf) exact vs gamma", cf.value, exact, 1e-10),
        _close(2, "zeta*({4}^inf) product vs gamma", cf.value, cf.product, 1e-10),
    ]


def c03(p):
    exact = 2 * ZETA2 - 2
    a = eval_tail_l((3,), 2, p).value
    b = tail2_reduction((3,), p)
    return [
        _close(3, "zeta*(3,{2}^inf) tail-l vs exact", exact, a, 1e-8),
        _close(3, "zeta*(3,{2}^inf) reduction vs exact", exact, b, 1e-8),
        _close(3, "zeta*(3,{2}^inf) tail-l vs reduction", b, a, 1e-8),
    ]


def c04(p):
    q = TruncationParams(m_cap=p.m_cap, tol=1e-9, block_reps_cap=20, extrapolate=True, depth_cap=p.depth_cap)
    ev = eval_periodic((), (2, 1), q)
    cf = two_n_one_closed(1)
    return [
        _close(4, f"zeta*({{2,1}}^inf) periodic, d={ev.terms_used}", 3.0, ev.value, 1e-5),
        _close(4, "zeta*({2,1}^inf) gamma product", 3.0, cf.value, 1e-10),
        _close(4, "zeta*({2,1}^inf) product channel", 3.0, cf.product, 1e-10),
    ]


def c05(p):
    e = math.exp(math.pi)
    exact = 4 * (e + 1) / (math.pi * (e - 1))
    cf = hoffman_like_closed(0)
    series = eval_periodic((), (3, 1), p).value
    return [
        _close(5, "zeta*({3,1}^inf) periodic", exact, series, 1e-5),
        _close(5, "zeta*({3,1}^inf) gamma product", exact, cf.value, 1e-10),
        _close(5, "zeta*({3,1}^inf) product channel", exact, cf.product, 1e-10),
    ]


def c06(p):
    out = []
    for n in range(2, 6):
        block = (2,) + (1,) * (n - 2)
        out.append(_close(6, f"zeta*({{2,{{1}}^{n - 2}}}^inf)", float(n), eval_periodic((), block, p).value, 1e-5))
    return out


def _finite_indices():
    for r in (1, 2, 3):
        for k in itertools.product(range(1, 5), repeat=r):
            if k[0] >= 2:
                yield k


def c07(p):
    worst_tail, worst_z = 0.0, 0.0
    count = 0
    for k in _finite_indices():
        fin = eval_finite(k, p).value
        bumped = k[:-1] + (k[-1] + 1,)
        tail = eval_tail_l(bumped, 1, p).value
        # same index read as a point of (0, 1]: raw index has k_1 - 1
        z = point_from_index(Index((bumped[0] - 1,) + bumped[1:], (1,)))
        via_z = zstar(z, p).value
        worst_tail = max(worst_tail, abs(tail - fin))
        worst_z = max(worst_z, abs(via_z - fin))
        count += 1
    return [
        Check(7, f"tail-l (..,k_r+1,{{1}}^inf) = finite, {count} indices", 0.0, worst_tail, worst_tail,
              worst_tail <= 1e-8),
        Check(7, f"digit series Z* at the same points = finite, {count} indices", 0.0, worst_z, worst_z,
              worst_z <= 1e-8),
    ]


def c08(p):
    out = []
    for n in (2, 3):
        for a in (1, 2):
            k = ((2,) + (1,) * (n - 2)) * a + (1,)
            expected = n * riemann_zeta(a * n + 1)
            out.append(_close(8, f"zeta*({{2,{{1}}^{n - 2}}}^{a},1) = {n} zeta({a * n + 1})", expected,
                              eval_finite(k, p).value, 1e-8))
    return out


def c09(p):
    out = []
    n = 1
    s = 2 * n + 1
    for d in (1, 2):
        k = ((2,) * n + (1,)) * d
        brute = multiset_sum(lambda m: m ** -float(s), d)
        out.append(_close(9, f"unsigned representation n={n} d={d}", brute, eval_finite(k, p).value, 1e-6))
    for n in (0, 1):
        s = 2 * n + 2
        for d in (1, 2):
            k = ((2,) * n + (3,) + (2,) * n + (1,)) * d
            brute = multiset_sum(lambda m: (-1) ** m * m ** -float(s), 2 * d)
            out.append(_close(9, f"signed representation n={n} d={d}", brute, eval_finite(k, p).value, 1e-6))
    return out


def c10(p):
    a = zstar(Fraction(1, 2), p).value
    b = zstar_via_index(Fraction(1, 2), p).value
    return [
        _close(10, "Z*(1/2) digit series", ZETA2, a, 1e-8),
        _close(10, "Z*(1/2) via index", ZETA2, b, 1e-8),
        _close(10, "Z*(1/2) mutual", a, b, 1e-9),
    ]


def c11(p):
    rows = graph_samples(1024, p)
    bad = sum(1 for (_, u), (_, v) in zip(rows, rows[1:]) if not u < v)
    return [Check(11, f"strictly increasing on {len(rows)} grid points", 0, bad, float(bad), bad == 0)]


def c12(p):
    out = []
    for v in (1.2, 1.5, ZETA2, 2.0, 3.0):
        z = invert_zstar(v, p)
        out.append(_close(12, f"Z*(invert({v:.15g})), z={z}", v, zstar(z, p).value, 1e-6))
    return out


def c13(p):
    out = []
    qs = range(14, 21)
    for z in (Fraction(1, 4), Fraction(3, 8), Fraction(5, 8)):
        right = right_derivative(z, p).value
        left = left_derivative(z, p).value
        fr = extrapolate([difference_quotient(z, z + Fraction(1, 2**q), p) for q in qs])
        fl = extrapolate([difference_quotient(z - Fraction(1, 2**q), z, p) for q in qs])
        for side, exact, fd in (("right", right, fr), ("left", left, fl)):
            rel = abs(fd - exact) / abs(exact)
            out.append(Check(13, f"{side} derivative at {z} vs finite differences", fd, exact, rel, rel <= 1e-3))
    q = 16
    h = Fraction(1, 2**q)
    for z in (Fraction(1, 2), Fraction(3, 4), Fraction(7, 8)):
        rep = left_derivative(z, p)
        out.append(Check(13, f"left derivative at {z} diverges", math.inf, rep.value, math.nan, rep.diverges))
        lq = difference_quotient(z - h, z, p)
        rq = difference_quotient(z, z + h, p)
        out.append(Check(13, f"left/right quotient at {z}, h=2^-{q}", "> 10", lq / rq, math.nan, lq > 10 * rq))
    return out


def c14(p):
    t0 = time.perf_counter()
    vals = [divergence_ratio(1, q, p) for q in range(6, 17)]
    scaled = [v / (q - 2) for v, q in zip(vals, range(6, 17))]
    spread = max(scaled) / min(scaled)
    increasing = all(a < b for a, b in zip(vals, vals[1:]))
    return [
        Check(14, f"ratio/(q-2) bracket [{min(scaled):.4g}, {max(scaled):.4g}], q=6..16", "<= 4", spread,
              math.nan, spread <= 4),
        Check(14, "divergence ratio strictly increasing", "increasing", "increasing" if increasing else "not",
              math.nan, increasing),
        _timed(14, "runtime", 30.0, t0),
    ]


def _bound_instance(label, exponents, floor, bound, weight=None):
    """(label, engine value, brute-force bracket, bound) for one inequality instance."""
    lo, hi = brute_nested_sum(exponents, floor, weight=None if weight is None else weight.table)
    weights = None if weight is None else [weight] + [None] * (len(exponents) - 1)
    value = nested_upper_sums(exponents, floor, weights=weights)[-1]
    return label, value, (lo, hi), bound


def _bound_row(name, cases):
    """Engine values decide each instance; they must lie inside the brute-force bracket."""
    bad, mismatch = [], []
    for label, value, (lo, hi), bound in cases:
        if isinstance(bound, tuple):
            _, bvalue, (blo, bhi), _ = bound
            if not blo <= bvalue <= bhi:
                mismatch.append(label)
            bound = bvalue
        if not lo - 1e-12 <= value <= hi:
            mismatch.append(label)
        if value > bound:
            bad.append(label)
    computed = f"{len(bad)} violated" + (f" ({','.join(bad)})" if bad else "")
    if mismatch:
        computed += f", {len(mismatch)} outside brute-force bracket"
    return Check(15, f"{name}, {len(cases)} instances", "0 violated", computed, math.nan, not bad and not mismatch)


def c15(p):
    l51, l53, l31 = [], [], []
    for r in (1, 2, 3):
        for s in (1, 2, 3, 4):
            exps = [r + 1] + [1] * (s - 1)
            for n in range(r + 1, 7):
                l51.append(_bound_instance(f"r{r}s{s}n{n}", exps, n, bound_chain_sum(r, s, n)[0]))
            l53.append(_bound_instance(f"r{r}s{s}", exps, r, bound_chain_sum(r, s, r)[0]))
    shift = reciprocal_shift_weight()
    for a in (1, 2):
        for b in (1, 2):
            for big_a in (2, 3, 4):
                for k in itertools.product((1, 2, 3), repeat=b):
                    label = f"a{a}b{b}A{big_a}k{''.join(map(str, k))}"
                    rhs = _bound_instance(label, list(k), big_a, math.inf, weight=shift)
                    l31.append(_bound_instance(label, [2] + [1] * (a - 1) + list(k), big_a, rhs))
    return [
        _bound_row("upper bound with n > r", l51),
        _bound_row("upper bound s/(r! r^s) at n = r", l53),
        _bound_row("head-sum inequality", l31),
    ]


def c16(p):
    q = 20
    ratio = (zstar(Fraction(1, 2**q), p).value - 1.0) * 2**q
    return [_close(16, f"(Z*(2^-{q}) - 1) 2^{q}", 0.5, ratio, 1e-3)]


CRITERIA: Dict[int, Callable[[TruncationParams], List[Check]]] = {
    1: c01, 2: c02, 3: c03, 4: c04, 5: c05, 6: c06, 7: c07, 8: c08,
    9: c09, 10: c10, 11: c11, 12: c12, 13: c13, 14: c14, 15: c15, 16: c16,
}


def run_criterion(n: int, p: TruncationParams = DEFAULT_PARAMS) -> List[Check]:
    return CRITERIA[n](p)


def run_suite(p: TruncationParams = DEFAULT_PARAMS) -> List[Check]:
    out = []
    for n in sorted(CRITERIA):
        out.extend(run_criterion(n, p))
    return out
