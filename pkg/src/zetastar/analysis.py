"""The map Z* on (0, 1] and its one-sided derivatives.

For z with canonical binary digits a_1 a_2 ...,

    Z*(z) = 1 + z/2 + sum_d a_d S_d w_d,      w_d = 2^d (z - sum_{i<d} a_i 2^{-i}),

where S_d is the chain sum over the digits a_1..a_{d-1} with floor 3 and lead
exponent 2 (:func:`zetastar.series.digit_chain_sums`).  The quantities w_d lie
in [0, 2] and are computed exactly from the rational value of z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from . import _nested
from ._nested import nested_upper_sums
from .errors import DomainError, HypothesisUnmet
from .index import DigitStream, Dyadic, index_from_digits, parse_point
from .series import (
    DEFAULT_PARAMS,
    Evaluation,
    TruncationParams,
    digit_chain_sums,
    evaluate_index,
    merge_digit_exponents,
)

__all__ = [
    "ZPoint",
    "Side",
    "DerivativeReport",
    "zstar",
    "zstar_via_index",
    "right_derivative",
    "left_derivative",
    "derivative_nondyadic",
    "difference_quotient",
    "divergence_ratio",
    "invert_zstar",
    "graph_samples",
    "format_graph_csv",
]

#: constant in front of the remainder model (r - t) / 3^(r - t)
REMAINDER_CONSTANT = 10.0
#: extra digits used to check the chosen truncation depth
CHECK_DIGITS = 8


@dataclass(frozen=True)
class ZPoint:
    """A point of (0, 1] with its exact value and canonical digit stream."""

    value: Fraction
    digits: DigitStream
    approx: float

    @classmethod
    def of(cls, x: Union["ZPoint", Dyadic, Fraction, int, float, str]) -> "ZPoint":
        if isinstance(x, ZPoint):
            return x
        if isinstance(x, Dyadic):
            x = x.to_fraction()
        elif isinstance(x, str):
            x = parse_point(x)
        elif isinstance(x, float):
            if not math.isfinite(x):
                raise DomainError(f"{x} is not a point of (0, 1]")
            x = Fraction(x)
        else:
            x = Fraction(x)
        if not 0 < x <= 1:
            raise DomainError(f"{x} is outside (0, 1]")
        return cls(x, DigitStream.from_value(x), float(x))

    @property
    def exact(self) -> Optional[Dyadic]:
        if Dyadic.is_dyadic(self.value):
            return Dyadic.from_fraction(self.value)
        return None

    def __str__(self) -> str:
        d = self.exact
        if d is None or d.exponent == 0:
            return str(self.value)
        return str(d)


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"
    BOTH = "two-sided"


@dataclass(frozen=True)
class DerivativeReport:
    """One-sided (or two-sided) derivative of Z* at a point.

    ``value`` is ``inf`` when the left derivative diverges.  ``error_model``
    is the estimated truncation error of the reported value.
    """

    side: Side
    value: float
    truncation_depth: int
    error_model: float

    @property
    def diverges(self) -> bool:
        return math.isinf(self.value)


# --------------------------------------------------------------------------
# truncation depth


def _zero_positions(stream: DigitStream, limit: int, want: int = 2) -> List[int]:
    out = []
    for j in range(1, limit + 1):
        if stream.digit(j) == 0:
            out.append(j)
            if len(out) == want:
                break
    return out


def _remainder_model(stream: DigitStream, r: int, scale: float = 1.0) -> float:
    """Estimated size of the digit-series tail beyond depth r.

    ``scale = 2`` models the derivative series, whose terms carry an extra
    factor 2^d.
    """
    zeros = _zero_positions(stream, r)
    if len(zeros) >= 2:
        gap = r - zeros[1]
        return REMAINDER_CONSTANT * max(gap, 1) * (scale / 3.0) ** gap
    if len(zeros) == 1 and scale < 2:
        return REMAINDER_CONSTANT * (scale / 2.0) ** (r - zeros[0])
    return math.inf


def _depth_for(stream: DigitStream, tol: float, cap: int, scale: float = 1.0) -> int:
    """Smallest depth whose remainder model is below ``tol``, capped."""
    zeros = _zero_positions(stream, cap)
    if not zeros:
        return cap
    for r in range(zeros[-1], cap + 1):
        if _remainder_model(stream, r, scale) < tol:
            return r
    return cap


# --------------------------------------------------------------------------
# digit series


def _digit_terms(digits: Sequence[int], cutoff: int) -> List[Optional[float]]:
    # S_d where a_d = 1, None elsewhere (the term vanishes)
    sums = digit_chain_sums(digits, cutoff=cutoff)
    return [s if a else None for a, s in zip(digits, sums)]


def _weights(x: Fraction, digits: Sequence[int]) -> List[Fraction]:
    w = []
    cur = 2 * x
    for a in digits:
        w.append(cur)
        cur = 2 * (cur - a)
    return w


def _series_value(x: Fraction, digits: Sequence[int], cutoff: int) -> Tuple[float, List[float]]:
    """Z* truncated after len(digits) digits, plus the running partial sums."""
    s = _digit_terms(digits, cutoff)
    w = _weights(x, digits)
    terms = [float(wd) * sd if sd is not None else 0.0 for sd, wd in zip(s, w)]
    partial = []
    acc = []
    for t in terms:
        acc.append(t)
        partial.append(math.fsum(acc))
    total = partial[-1] if partial else 0.0
    return 1.0 + float(x) / 2 + total, partial


def zstar(z, p: TruncationParams = DEFAULT_PARAMS) -> Evaluation:
    """Z*(z) from the binary digit series.

    The depth r is the first one at which the remainder model drops below
    ``p.tol``; the value is then taken at depth r + 8 and the change between
    the two depths is folded into the error estimate.
    """
    z = ZPoint.of(z)
    if z.value == 1:
        return Evaluation(math.inf, 0.0, 0, True, "digit-series")
    cap = p.depth_cap
    r = _depth_for(z.digits, p.tol, cap - CHECK_DIGITS)
    digits = z.digits.digits(r + CHECK_DIGITS)
    value, partial = _series_value(z.value, digits, _nested.DEFAULT_CUTOFF)
    check, _ = _series_value(z.value, digits, 2 * _nested.DEFAULT_CUTOFF)
    err = max(
        abs(partial[-1] - partial[r - 1]),
        _remainder_model(z.digits, r + CHECK_DIGITS),
        abs(check - value),
    )
    return Evaluation(value, err, r + CHECK_DIGITS, err < p.tol, "digit-series")


def zstar_via_index(z, p: TruncationParams = DEFAULT_PARAMS) -> Evaluation:
    """Z*(z) as zeta*(k_1 + 1, k_2, ...) through the series engine."""
    z = ZPoint.of(z)
    idx = index_from_digits(z.digits).bump_first()
    return evaluate_index(idx, p)


def difference_quotient(x, y, p: TruncationParams = DEFAULT_PARAMS) -> float:
    """(Z*(y) - Z*(x)) / (y - x) for 0 <= x < y < 1.

    Both values are expanded to the same depth and subtracted term by term,
    so chain sums shared by the two digit streams cancel exactly.  ``x = 0``
    stands for the limit Z*(0+) = 1.
    """
    x, y = Fraction(x), Fraction(y)
    if not 0 <= x < y < 1:
        raise DomainError("need 0 <= x < y < 1")
    py = ZPoint.of(y)
    streams = [py.digits]
    if x > 0:
        streams.append(ZPoint.of(x).digits)
    r = max(_depth_for(s, p.tol * float(y - x), p.depth_cap - CHECK_DIGITS) for s in streams) + CHECK_DIGITS
    dy = py.digits.digits(r)
    sy, wy = _digit_terms(dy, _nested.DEFAULT_CUTOFF), _weights(y, dy)
    if x > 0:
        dx = ZPoint.of(x).digits.digits(r)
        sx, wx = _digit_terms(dx, _nested.DEFAULT_CUTOFF), _weights(x, dx)
    else:
        sx, wx = [None] * r, [Fraction(0)] * r
    h = y - x
    parts = [0.5]
    for d in range(r):
        if sy[d] is not None and sx[d] is not None and sy[d] == sx[d]:
            parts.append(sy[d] * float((wy[d] - wx[d]) / h))
            continue
        if sy[d] is not None:
            parts.append(sy[d] * float(wy[d] / h))
        if sx[d] is not None:
            parts.append(-sx[d] * float(wx[d] / h))
    return math.fsum(parts)


# --------------------------------------------------------------------------
# derivatives


def _dyadic_digits(z) -> Tuple[Dyadic, Tuple[int, ...]]:
    if isinstance(z, ZPoint):
        z = z.value
    if isinstance(z, str):
        z = parse_point(z)
    if isinstance(z, Dyadic):
        d = z
    else:
        if not Dyadic.is_dyadic(Fraction(z)):
            raise DomainError(f"{z} is not dyadic")
        d = Dyadic.from_fraction(z)
    if not 0 <= d.to_fraction() < 1:
        raise DomainError(f"{d} is outside [0, 1)")
    return d, d.terminating_digits()


def _right_sum(digits: Sequence[int], cutoff: int) -> float:
    s = _digit_terms(digits, cutoff)
    return math.fsum([0.5] + [math.ldexp(sd, d) for d, sd in enumerate(s, start=1) if sd is not None])


def right_derivative(z, p: TruncationParams = DEFAULT_PARAMS) -> DerivativeReport:
    """Right derivative of Z* at a dyadic z in [0, 1)."""
    _, digits = _dyadic_digits(z)
    if not digits:
        return DerivativeReport(Side.RIGHT, 0.5, 0, 0.0)
    value = _right_sum(digits, _nested.DEFAULT_CUTOFF)
    check = _right_sum(digits, 2 * _nested.DEFAULT_CUTOFF)
    return DerivativeReport(Side.RIGHT, value, len(digits), abs(value - check))


def _left_excess(digits: Sequence[int], cutoff: int) -> float:
    """2^r sum over chains of (m_r - 2) / (m_1^2 m_2 ... m_r); inf if divergent."""
    groups, _ = merge_digit_exponents(digits[:-1])
    reduced = groups[:-1] + [groups[-1] - 1]
    a = nested_upper_sums(reduced, 3, cutoff=cutoff)[-1]
    if math.isinf(a):
        return math.inf
    b = nested_upper_sums(groups, 3, cutoff=cutoff)[-1]
    return math.ldexp(a - 2 * b, len(digits))


def left_derivative(z, p: TruncationParams = DEFAULT_PARAMS) -> DerivativeReport:
    """Left derivative of Z* at a dyadic z in (0, 1).

    Infinite exactly at the points 1 - 2^-r.
    """
    d, digits = _dyadic_digits(z)
    if not digits:
        raise DomainError("the left derivative needs z > 0")
    r = len(digits)
    if all(digits):
        return DerivativeReport(Side.LEFT, math.inf, r, 0.0)
    right = right_derivative(d, p)
    vals = []
    for cutoff in (_nested.DEFAULT_CUTOFF, 2 * _nested.DEFAULT_CUTOFF):
        vals.append(_right_sum(digits, cutoff) + _left_excess(digits, cutoff))
    return DerivativeReport(Side.LEFT, vals[0], r, max(abs(vals[0] - vals[1]), right.error_model))


def derivative_nondyadic(z, p: TruncationParams = DEFAULT_PARAMS) -> DerivativeReport:
    """Derivative of Z* at a non-dyadic point (both one-sided limits agree).

    The series 1/2 + sum_d a_d S_d 2^d is truncated by the same remainder
    model as :func:`zstar`.
    """
    z = ZPoint.of(z)
    if z.digits.is_dyadic:
        raise HypothesisUnmet("digits are eventually constant; use left/right_derivative")
    r = _depth_for(z.digits, p.tol, p.depth_cap - CHECK_DIGITS, scale=2.0)
    digits = z.digits.digits(r + CHECK_DIGITS)
    s = _digit_terms(digits, _nested.DEFAULT_CUTOFF)
    terms = [math.ldexp(sd, d) if sd is not None else 0.0 for d, sd in enumerate(s, start=1)]
    value = math.fsum([0.5] + terms)
    short = math.fsum([0.5] + terms[:r])
    err = max(abs(value - short), _remainder_model(z.digits, r + CHECK_DIGITS, scale=2.0))
    return DerivativeReport(Side.BOTH, value, r + CHECK_DIGITS, err)


def divergence_ratio(p: int, q: int, params: TruncationParams = DEFAULT_PARAMS) -> float:
    """(Z*(z) - Z*(z - h)) / h at z = 1 - 2^-p, h = 2^-q.

    Grows linearly in q, reflecting the divergent left derivative at z.
    """
    p, q = int(p), int(q)
    if p < 1 or q <= p:
        raise DomainError("need 1 <= p < q")
    z = 1 - Fraction(1, 2**p)
    return difference_quotient(z - Fraction(1, 2**q), z, params)


# --------------------------------------------------------------------------
# inversion and sampling


def invert_zstar(v: float, p: TruncationParams = DEFAULT_PARAMS, depth: int = 48) -> ZPoint:
    """The point z with Z*(z) = v, to ``depth`` binary digits.

    Z* is increasing, so each digit is fixed by one comparison.  Of the two
    dyadic endpoints of the final interval the one with the smaller residual
    is returned.
    """
    v = float(v)
    if not v > 1 or math.isinf(v) or math.isnan(v):
        raise DomainError("v must be a finite number > 1")
    if depth < 1:
        raise DomainError("depth must be >= 1")
    lo = Fraction(0)
    lo_val = 1.0
    for j in range(1, depth + 1):
        cand = lo + Fraction(1, 2**j)
        val = zstar(cand, p).value
        if val <= v:
            lo, lo_val = cand, val
    hi = lo + Fraction(1, 2**depth)
    hi_val = zstar(hi, p).value
    if lo == 0 or abs(hi_val - v) < abs(lo_val - v):
        return ZPoint.of(hi)
    return ZPoint.of(lo)


def graph_samples(n: int, p: TruncationParams = DEFAULT_PARAMS) -> List[Tuple[Fraction, float]]:
    """(z, Z*(z)) at z = j / 2^K, K = ceil(log2 n), skipping z = 1."""
    n = int(n)
    if n < 2:
        raise DomainError("n must be >= 2")
    k = max(1, (n - 1).bit_length())
    den = 2**k
    return [(Fraction(j, den), zstar(Fraction(j, den), p).value) for j in range(1, den)]


def format_graph_csv(rows: Sequence[Tuple[Fraction, float]]) -> str:
    lines = ["z,zstar"]
    for z, v in rows:
        lines.append(f"{float(z):.15g},{v:.15g}")
    return "\n".join(lines) + "\n"
