"""Closed-form values of zeta* for constant and periodic infinite indices.

Each Gamma-product formula comes with a second channel, the infinite
product over m >= 2 it was derived from, so the two can be checked against
each other.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, NamedTuple, Sequence

import numpy as np

from ._nested import hurwitz_zeta
from .errors import DomainError, Inadmissible, Pole
from .series import DEFAULT_PARAMS, TruncationParams, eval_finite

__all__ = [
    "complex_gamma",
    "roots_of_unity",
    "ClosedForm",
    "const_index_closed",
    "two_n_one_closed",
    "hoffman_like_closed",
    "staircase_closed",
    "tail2_reduction",
]

# Lanczos approximation, g = 7, n = 9
_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def complex_gamma(z: complex) -> complex:
    """Gamma function for complex arguments.

    Uses the Lanczos approximation on Re z >= 1/2 and the reflection formula
    Gamma(z) Gamma(1-z) = pi / sin(pi z) elsewhere.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise Pole(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * complex_gamma(1.0 - z))
    z -= 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * cmath.exp(-t) * x


def roots_of_unity(k: int, sign: int = 1) -> list:
    """Solutions of c^k = sign (sign = +1 or -1), generated by angle."""
    if sign == 1:
        return [cmath.exp(2j * math.pi * j / k) for j in range(k)]
    return [cmath.exp(1j * math.pi * (2 * j + 1) / k) for j in range(k)]


def _root_product(k: int, sign: int, factor: Callable[[complex], complex]):
    """prod over c^k = sign of factor(c), pairing each root with its conjugate.

    Returns (real paired product, imaginary part of the plain product).
    """
    roots = roots_of_unity(k, sign)
    plain = complex(1.0)
    for c in roots:
        plain *= factor(c)
    paired = 1.0
    if sign == 1:
        singles = [0] + ([k // 2] if k % 2 == 0 else [])
        pairs = range(1, (k + 1) // 2)
    else:
        singles = [(k - 1) // 2] if k % 2 == 1 else []
        pairs = range(k // 2)
    for j in singles:
        paired *= factor(roots[j]).real
    for j in pairs:
        paired *= abs(factor(roots[j])) ** 2
    return paired, plain.imag


class ClosedForm(NamedTuple):
    """Gamma-product value plus the independent infinite-product channel."""

    value: float
    product: float
    product_err: float
    imag_residue: float

    def __float__(self) -> float:
        return self.value


def _log_product(explicit: Callable[[np.ndarray], np.ndarray], tail_terms: Callable[[int], list], cutoff: int = 1000):
    """exp(sum_{m>=2} log-factor) with the tail m >= cutoff from Hurwitz sums."""
    m = np.arange(2, cutoff, dtype=float)
    head = explicit(m)
    tail = tail_terms(cutoff)
    err = abs(tail[-1]) + 1e-16
    total = math.fsum(np.concatenate([head, tail]))
    value = math.exp(total)
    return value, float(value * err)


def _geometric_orders(s: int, cutoff: int, odd_only: bool = False):
    j = 1
    while True:
        if s * j * math.log(cutoff) > 80:
            return
        if not odd_only or j % 2:
            yield j
        j += 1


def const_index_closed(k: int) -> ClosedForm:
    """zeta*({k}^inf) = prod_{c^k=1} Gamma(2-c) = prod_{m>=2} m^k / (m^k - 1)."""
    if k < 2:
        raise DomainError("k must be >= 2")
    value, residue = _root_product(k, 1, lambda c: complex_gamma(2 - c))

    def explicit(m):
        return -np.log1p(-(m ** (-float(k))))

    def tail(n):
        return [hurwitz_zeta(j * k, n) / j for j in _geometric_orders(k, n)]

    prod, perr = _log_product(explicit, tail)
    return ClosedForm(value, prod, perr, abs(residue))


def two_n_one_closed(n: int) -> ClosedForm:
    """zeta*(({2}^n, 1)^inf) = 2 prod_{c^{2n+1}=1} Gamma(2-c)/Gamma(2+c)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    s = 2 * n + 1
    g, residue = _root_product(s, 1, lambda c: complex_gamma(2 - c) / complex_gamma(2 + c))

    def explicit(m):
        x = m ** (-float(s))
        return np.log1p(x) - np.log1p(-x)

    def tail(cut):
        return [2 * hurwitz_zeta(j * s, cut) / j for j in _geometric_orders(s, cut, odd_only=True)]

    prod, perr = _log_product(explicit, tail)
    return ClosedForm(2 * g, 2 * prod, 2 * perr, 2 * abs(residue))


def _alternating_hurwitz(p: int, n: int) -> float:
    """sum_{m >= n} (-1)^m m^{-p}, n even."""
    even = 2.0 ** (-p) * hurwitz_zeta(p, n // 2)
    return 2 * even - hurwitz_zeta(p, n)


def hoffman_like_closed(n: int) -> ClosedForm:
    """zeta*(({2}^n, 3, {2}^n, 1)^inf)
    = 2 prod_{s=+-1} prod_{c^{2n+2}=s} Gamma(2-c)^{s} Gamma(1-c/2)^{-2s}
    = 2 prod_{m>=2} (m^{2n+2} - (-1)^m) / (m^{2n+2} + (-1)^m).

    The m = 1 variables of the underlying signed sum contribute a factor
    (-1)^c for every other variable, which turns each local factor into the
    reciprocal of the naive one.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    s = 2 * n + 2
    plus, r1 = _root_product(s, 1, lambda c: complex_gamma(2 - c) / complex_gamma(1 - c / 2) ** 2)
    minus, r2 = _root_product(s, -1, lambda c: complex_gamma(1 - c / 2) ** 2 / complex_gamma(2 - c))

    def explicit(m):
        sign = np.where(m % 2 == 0, 1.0, -1.0)
        x = sign * m ** (-float(s))
        return np.log1p(-x) - np.log1p(x)

    def tail(cut):
        return [-2 * _alternating_hurwitz(j * s, cut) / j for j in _geometric_orders(s, cut, odd_only=True)]

    prod, perr = _log_product(explicit, tail)
    residue = 2 * (abs(r1 * minus) + abs(r2 * plus))
    return ClosedForm(2 * plus * minus, 2 * prod, 2 * perr, residue)


def staircase_closed(n: int) -> float:
    """zeta*(({2, {1}^{n-2}})^inf) = n."""
    if n < 2:
        raise DomainError("n must be >= 2")
    return float(n)


def tail2_reduction(k: Sequence[int], p: TruncationParams = DEFAULT_PARAMS) -> float:
    """zeta*(k_1, ..., k_r, {2}^inf) as a signed combination of finite values.

    The inner sum over j runs from 2 to k_s - 1 in the extended sense: empty
    for k_s = 2 and minus the j = 1 term for k_s = 1.  The j = 1 term needs
    zeta*(k_1, ..., k_{s-1}, 1), which converges because k_1 >= 2.
    """
    k = tuple(int(x) for x in k)
    if not k:
        raise DomainError("empty index")
    if k[0] < 2:
        raise Inadmissible("k_1 must be >= 2")
    if any(x < 1 for x in k):
        raise DomainError("entries must be >= 1")
    inner = []
    for s, ks in enumerate(k):
        head = k[:s]
        if ks > 2:
            js, sgn = range(2, ks), 1
        elif ks == 1:
            js, sgn = (1,), -1
        else:
            continue
        for j in js:
            inner.append(sgn * (-1) ** (sum(head) + j) * eval_finite(head + (j,), p).value)
    return (-1) ** sum(k) * (2 - 2 * math.fsum(inner))
