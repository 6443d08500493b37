"""Nested upper sums with asymptotic tails.

Every quantity in this package reduces to sums of the form

    U_j(n) = sum_{m_1 >= ... >= m_j >= n}  prod_i w_i(m_i) m_i^{-k_i}

which are evaluated top-down: ``U_j(n) = sum_{m >= n} w_j(m) m^{-k_j} U_{j-1}(m)``.
Below a cutoff ``N`` the recursion is carried out explicitly as a reverse
cumulative sum; at and above ``N`` each ``U_j`` is represented by its
asymptotic power series in ``x = 1/n``, obtained by applying the
Euler-Maclaurin expansion of the Hurwitz zeta function termwise.  Because
every level has total exponent >= 2 in a convergent sum, no logarithms ever
appear in these expansions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

#: highest power of 1/n kept in tail series
SERIES_ORDER = 40
#: default cutoff between explicit summation and the asymptotic tail
DEFAULT_CUTOFF = 64


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (convention B_1 = +1/2), exact."""
    # Akiyama-Tanigawa
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


@lru_cache(maxsize=None)
def _em_coefficients(order: int) -> tuple:
    # B_{2i} / (2i)! as floats
    out = []
    i = 1
    while 2 * i <= order:
        out.append(float(bernoulli(2 * i) / math.factorial(2 * i)))
        i += 1
    return tuple(out)


@lru_cache(maxsize=None)
def hurwitz_series(s: int, order: int = SERIES_ORDER) -> np.ndarray:
    """Coefficients of the asymptotic expansion of sum_{m>=n} m^{-s} in x = 1/n.

    Requires ``s >= 2``.  The result is read-only and cached.
    """
    if s < 2:
        raise ValueError("Hurwitz tail diverges for s < 2")
    c = np.zeros(order + 1)
    if s - 1 <= order:
        c[s - 1] += 1.0 / (s - 1)
    if s <= order:
        c[s] += 0.5
    poch = float(s)  # (s)_{2i-1}
    for i, b in enumerate(_em_coefficients(order), start=1):
        p = s + 2 * i - 1
        if p > order:
            break
        c[p] += b * poch
        poch *= (s + 2 * i - 1) * (s + 2 * i)
    c.flags.writeable = False
    return c


@lru_cache(maxsize=None)
def _hurwitz_matrix(order: int) -> np.ndarray:
    h = np.zeros((order + 1, order + 1))
    for p in range(2, order + 1):
        h[:, p] = hurwitz_series(p, order)
    h.flags.writeable = False
    return h


def eval_series(c: np.ndarray, n: float) -> float:
    """Value of the series ``c`` at x = 1/n (Horner)."""
    x = 1.0 / n
    acc = 0.0
    for coef in c[::-1]:
        acc = acc * x + coef
    return acc


def hurwitz_zeta(s: int, n: int, cutoff: int = DEFAULT_CUTOFF) -> float:
    """sum_{m >= n} m^{-s} for integers s >= 2, n >= 1."""
    if s < 2:
        raise ValueError("s must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    start = max(n, cutoff)
    tail = eval_series(hurwitz_series(s), start)
    if n >= cutoff:
        return tail
    m = np.arange(n, cutoff, dtype=float)
    return math.fsum(np.concatenate([m ** (-float(s)), [tail]]))


def riemann_zeta(s: int) -> float:
    """zeta(s) for integer s >= 2."""
    return hurwitz_zeta(s, 1)


def shift(c: np.ndarray, k: int) -> np.ndarray:
    """Multiply a series by x^k (k >= 0), truncating."""
    out = np.zeros_like(c)
    if k <= len(c) - 1:
        out[k:] = c[: len(c) - k]
    return out


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: len(a)]


def series_exp(f: np.ndarray) -> np.ndarray:
    """exp of a series with zero constant term."""
    if f[0] != 0.0:
        raise ValueError("series_exp needs f(0) = 0")
    n = len(f)
    g = np.zeros(n)
    g[0] = 1.0
    kf = np.arange(n) * f
    for i in range(1, n):
        g[i] = np.dot(kf[1 : i + 1], g[i - 1 :: -1][:i]) / i
    return g


def leading_power(c: np.ndarray) -> Optional[int]:
    nz = np.flatnonzero(c)
    return int(nz[0]) if len(nz) else None


@dataclass(frozen=True)
class Weight:
    """Multiplicative weight w(m) attached to one summation level.

    ``table(m)`` evaluates w on an integer array; ``series(cutoff)`` returns the
    expansion of w in x = 1/m valid for m >= cutoff.
    """

    table: Callable[[np.ndarray], np.ndarray]
    series: Callable[[int], np.ndarray]


@dataclass(frozen=True)
class NestedSums:
    """Level values U_1(floor), ..., U_r(floor) of one nested sum."""

    values: tuple
    divergent_from: Optional[int]  # first 1-based level whose sum diverges
    cutoff: int

    def __getitem__(self, j):
        return self.values[j]

    def __len__(self):
        return len(self.values)


def nested_upper_sums(
    exponents: Sequence[int],
    floor: int = 1,
    *,
    cutoff: int = DEFAULT_CUTOFF,
    tail: bool = True,
    weights: Optional[Sequence[Optional[Weight]]] = None,
) -> NestedSums:
    """Evaluate U_j(floor) for every prefix of ``exponents``.

    Exponents may be zero (a plain upper sum over the variable).  With
    ``tail=False`` the variables are restricted to ``m < cutoff`` and nothing
    is added for the remainder; this is the plain truncated sum.
    """
    if floor < 1:
        raise ValueError("floor must be >= 1")
    if cutoff <= floor:
        cutoff = 2 * floor
    if weights is None:
        weights = [None] * len(exponents)
    order = SERIES_ORDER
    hmat = _hurwitz_matrix(order)

    m = np.arange(floor, cutoff, dtype=float)
    prev = np.ones_like(m)
    prev_series = np.zeros(order + 1)
    prev_series[0] = 1.0
    values = []
    divergent_from = None
    for level, (k, w) in enumerate(zip(exponents, weights), start=1):
        if k < 0:
            raise ValueError("exponents must be >= 0")
        terms = prev * m ** (-float(k)) if k else prev.copy()
        summand = shift(prev_series, k)
        if w is not None:
            terms = terms * w.table(m)
            summand = multiply(summand, w.series(cutoff))
        lead = leading_power(summand)
        if divergent_from is None and lead is not None and lead < 2:
            divergent_from = level
        summand[:2] = 0.0
        cur_series = hmat @ summand
        at_cutoff = eval_series(cur_series, cutoff) if tail else 0.0
        # reverse cumulative sum: small terms first
        cur = np.cumsum(terms[::-1])[::-1] + at_cutoff
        values.append(math.inf if divergent_from is not None else float(cur[0]))
        prev, prev_series = cur, cur_series
    return NestedSums(tuple(values), divergent_from, cutoff)


def hurwitz_tail_weight(l: int) -> Weight:
    """Weight prod_{s=2}^{m} s^l / (s^l - 1) for l >= 2 (constant-tail factor)."""
    if l < 2:
        raise ValueError("use the identity prod s/(s-1) = m for l = 1")

    def log_running(upto: int) -> np.ndarray:
        s = np.arange(2, upto + 1, dtype=float)
        return np.concatenate([[0.0, 0.0], np.cumsum(-np.log1p(-(s ** (-float(l)))))])

    def table(mm: np.ndarray) -> np.ndarray:
        hi = int(mm[-1]) if len(mm) else 1
        lg = log_running(hi)
        return np.exp(lg[mm.astype(int)])

    def series(cutoff: int) -> np.ndarray:
        order = SERIES_ORDER
        # P(m) = P(N-1) exp(sum_j [zeta(jl, N) - zeta(jl, m+1)] / j), N = cutoff
        log_const = log_running(cutoff - 1)[cutoff - 1]
        expo = np.zeros(order + 1)
        j = 1
        while j * l <= order + 1:
            s = j * l
            log_const += hurwitz_zeta(s, cutoff) / j
            zs = hurwitz_series(s, order).copy()
            if s <= order:
                zs[s] -= 1.0  # zeta(s, m+1) = zeta(s, m) - m^{-s}
            expo -= zs / j
            j += 1
        return math.exp(log_const) * series_exp(expo)

    return Weight(table, series)


def reciprocal_shift_weight() -> Weight:
    """Weight 1/(m - 1), m >= 2."""

    def series(cutoff: int) -> np.ndarray:
        c = np.ones(SERIES_ORDER + 1)
        c[0] = 0.0
        return c

    return Weight(lambda mm: 1.0 / (mm - 1.0), series)
