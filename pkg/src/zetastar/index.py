"""Indices, binary digit streams, dyadic rationals and the maps between them.

A point z in (0, 1] and an infinite index (k_1, k_2, ...) correspond through

    z = sum_j 2^{-(k_1 + ... + k_j)}

so the 1-digits of z sit at the partial sums of the index.  Everything here is
exact: digit streams are eventually periodic and values are rationals.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence, Tuple, Union

from .errors import DomainError, NonCanonicalInput, ZeroValue

__all__ = [
    "Dyadic",
    "DigitStream",
    "Index",
    "Order",
    "canonicalize_digits",
    "index_from_digits",
    "point_from_index",
    "lex_compare",
    "parse_index",
    "parse_point",
]


def _primitive_root(block: Tuple[int, ...]) -> Tuple[int, ...]:
    n = len(block)
    for p in range(1, n + 1):
        if n % p == 0 and block[:p] * (n // p) == block:
            return block[:p]
    return block


def _normalize(prefix: Tuple[int, ...], block: Tuple[int, ...]):
    """Shortest prefix / primitive period presentation of prefix + block^inf."""
    block = _primitive_root(block)
    while prefix and prefix[-1] == block[-1]:
        prefix = prefix[:-1]
        block = block[-1:] + block[:-1]
    return prefix, block


# --------------------------------------------------------------------------
# Dyadic rationals


@dataclass(frozen=True, order=False)
class Dyadic:
    """Exact rational ``numerator / 2**exponent`` in [0, 1], lowest terms."""

    numerator: int
    exponent: int

    def __post_init__(self):
        a, n = self.numerator, self.exponent
        if n < 0 or a < 0:
            raise DomainError("Dyadic needs nonnegative numerator and exponent")
        if a > (1 << n):
            raise DomainError("Dyadic value must lie in [0, 1]")
        if a == 0:
            n = 0
        else:
            tz = (a & -a).bit_length() - 1
            shift_by = min(tz, n)
            a >>= shift_by
            n -= shift_by
        object.__setattr__(self, "numerator", a)
        object.__setattr__(self, "exponent", n)

    @classmethod
    def from_fraction(cls, x) -> "Dyadic":
        x = Fraction(x)
        d = x.denominator
        if d & (d - 1):
            raise DomainError(f"{x} is not a dyadic rational")
        return cls(x.numerator, d.bit_length() - 1)

    @staticmethod
    def is_dyadic(x) -> bool:
        d = Fraction(x).denominator
        return d & (d - 1) == 0

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __float__(self) -> float:
        return self.numerator / (1 << self.exponent) if self.exponent < 1000 else float(self.to_fraction())

    def _cmp_key(self, other) -> Tuple[Fraction, Fraction]:
        o = other.to_fraction() if isinstance(other, Dyadic) else Fraction(other)
        return self.to_fraction(), o

    def __lt__(self, other):
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp_key(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp_key(other)
        return a >= b

    def __add__(self, other: "Dyadic") -> "Dyadic":
        n = max(self.exponent, other.exponent)
        return Dyadic((self.numerator << (n - self.exponent)) + (other.numerator << (n - other.exponent)), n)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        n = max(self.exponent, other.exponent)
        return Dyadic((self.numerator << (n - self.exponent)) - (other.numerator << (n - other.exponent)), n)

    def half(self) -> "Dyadic":
        return Dyadic(self.numerator, self.exponent + 1)

    def terminating_digits(self) -> Tuple[int, ...]:
        """Digits a_1..a_r of the finite expansion (a_r = 1); empty for 0."""
        if self.numerator == 0:
            return ()
        if self.exponent == 0:
            raise DomainError("1 has no terminating expansion after the binary point")
        return tuple(int(c) for c in format(self.numerator, f"0{self.exponent}b"))

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"


# --------------------------------------------------------------------------
# Digit streams


@dataclass(frozen=True)
class DigitStream:
    """Eventually periodic binary expansion ``0.prefix (period)``.

    Construct through :meth:`from_value` or :func:`canonicalize_digits`; the
    raw constructor accepts any presentation and only normalizes it.
    """

    prefix: Tuple[int, ...]
    period: Tuple[int, ...]

    def __post_init__(self):
        prefix = tuple(int(a) for a in self.prefix)
        period = tuple(int(a) for a in self.period)
        if not period:
            raise DomainError("period must be nonempty (use (0,) for a terminating expansion)")
        if any(a not in (0, 1) for a in prefix + period):
            raise DomainError("digits must be 0 or 1")
        prefix, period = _normalize(prefix, period)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @property
    def canonical_form(self) -> bool:
        """True unless the expansion terminates (trailing zeros)."""
        return self.period != (0,) or not any(self.prefix)

    def digit(self, j: int) -> int:
        """a_j, 1-based."""
        if j < 1:
            raise IndexError(j)
        if j <= len(self.prefix):
            return self.prefix[j - 1]
        return self.period[(j - len(self.prefix) - 1) % len(self.period)]

    def digits(self, count: int) -> Tuple[int, ...]:
        return tuple(self.digit(j) for j in range(1, count + 1))

    def __iter__(self) -> Iterator[int]:
        yield from self.prefix
        while True:
            yield from self.period

    @property
    def value(self) -> Fraction:
        p = len(self.prefix)
        head = Fraction(int("".join(map(str, self.prefix)) or "0", 2), 1 << p)
        per = Fraction(int("".join(map(str, self.period)), 2), (1 << len(self.period)) - 1)
        return head + per / (1 << p)

    @property
    def is_dyadic(self) -> bool:
        return self.period in ((0,), (1,))

    @classmethod
    def from_value(cls, x) -> "DigitStream":
        """Canonical (non-terminating) expansion of a rational in (0, 1]."""
        x = Fraction(x)
        if x <= 0:
            raise ZeroValue("the all-zero stream has no canonical form") if x == 0 else DomainError(
                f"{x} is outside (0, 1]"
            )
        if x > 1:
            raise DomainError(f"{x} is outside (0, 1]")
        if x == 1:
            return cls((), (1,))
        if Dyadic.is_dyadic(x):
            digits = Dyadic.from_fraction(x).terminating_digits()
            return cls(digits[:-1] + (0,), (1,))
        # long division on the odd part of the denominator, exact
        p, q = x.numerator, x.denominator
        seen = {}
        out = []
        r = p
        while r not in seen:
            seen[r] = len(out)
            r *= 2
            out.append(r // q)
            r %= q
        start = seen[r]
        return cls(tuple(out[:start]), tuple(out[start:]))

    def __str__(self) -> str:
        return "0." + "".join(map(str, self.prefix)) + "(" + "".join(map(str, self.period)) + ")"


def canonicalize_digits(d: DigitStream) -> DigitStream:
    """Rewrite a terminating expansion ``...1 0 0 0...`` as ``...0 1 1 1...``."""
    if d.period == (0,) and not any(d.prefix):
        raise ZeroValue("the all-zero stream has no canonical form")
    if d.canonical_form:
        return d
    last = max(i for i, a in enumerate(d.prefix) if a)
    return DigitStream(d.prefix[:last] + (0,), (1,))


# --------------------------------------------------------------------------
# Indices


class Order(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class Index:
    """Index ``prefix + block^inf``; ``block=()`` means a finite index.

    A one-entry block is the constant tail {l}^inf.
    """

    prefix: Tuple[int, ...]
    block: Tuple[int, ...] = ()

    def __post_init__(self):
        prefix = tuple(int(k) for k in self.prefix)
        block = tuple(int(k) for k in self.block)
        if any(k < 1 for k in prefix + block):
            raise DomainError("index entries must be positive integers")
        if not prefix and not block:
            raise DomainError("empty index")
        if block:
            prefix, block = _normalize(prefix, block)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "block", block)

    @classmethod
    def finite(cls, entries: Sequence[int]) -> "Index":
        return cls(tuple(entries), ())

    @classmethod
    def constant_tail(cls, prefix: Sequence[int], l: int) -> "Index":
        return cls(tuple(prefix), (l,))

    @property
    def is_finite(self) -> bool:
        return not self.block

    @property
    def tail_constant(self):
        """l for a constant tail {l}^inf, else None."""
        return self.block[0] if len(self.block) == 1 else None

    @property
    def is_divergent(self) -> bool:
        """True exactly for (2, 1, 1, ...)."""
        return self.prefix == (2,) and self.block == (1,)

    @property
    def tail_kind(self) -> str:
        if self.is_finite:
            return "finite"
        return "tail-l" if len(self.block) == 1 else "periodic"

    def entry(self, j: int) -> int:
        """k_j, 1-based."""
        if j <= len(self.prefix):
            return self.prefix[j - 1]
        if not self.block:
            raise IndexError(j)
        return self.block[(j - len(self.prefix) - 1) % len(self.block)]

    def entries(self, count: int) -> Tuple[int, ...]:
        if self.is_finite:
            return self.prefix[:count]
        return tuple(self.entry(j) for j in range(1, count + 1))

    def __iter__(self) -> Iterator[int]:
        yield from self.prefix
        while self.block:
            yield from self.block

    def bump_first(self) -> "Index":
        """(k_1 + 1, k_2, ...): the shift used by the map Z*."""
        if self.prefix:
            return Index((self.prefix[0] + 1,) + self.prefix[1:], self.block)
        b = self.block
        return Index((b[0] + 1,), b[1:] + b[:1])

    def __str__(self) -> str:
        head = ",".join(map(str, self.prefix))
        if self.is_finite:
            return head + "!"
        tail = "(" + ",".join(map(str, self.block)) + ")"
        return f"{head},{tail}" if head else tail


def index_from_digits(d: DigitStream) -> Index:
    """Raw index whose partial sums are the positions of the 1-digits of ``d``.

    The first entry is *not* shifted; Z* evaluates ``bump_first()`` of it.
    """
    if not d.canonical_form:
        raise NonCanonicalInput("digit stream terminates; canonicalize it first")
    if not any(d.prefix) and not any(d.period):
        raise ZeroValue("all digits are zero")
    p, q = d.prefix, d.period
    ones_p = [i + 1 for i, a in enumerate(p) if a]
    ones_q = [i for i, a in enumerate(q) if a]
    # positions in the first two copies of the period
    first = [len(p) + 1 + i for i in ones_q]
    second = [x + len(q) for x in first]
    positions = ones_p + first
    gaps = [positions[0]] + [b - a for a, b in zip(positions, positions[1:])]
    block_positions = first + [second[0]]
    block = [b - a for a, b in zip(block_positions, block_positions[1:])]
    prefix = gaps[: len(ones_p) + 1]
    return Index(tuple(prefix), tuple(block))


def point_from_index(i: Index) -> Union[Dyadic, Fraction]:
    """The point sum_j 2^{-(k_1 + ... + k_j)}, exactly.

    Returns a :class:`Dyadic` when the value is dyadic (finite index or
    all-ones tail) and a :class:`~fractions.Fraction` otherwise.
    """
    acc = Fraction(0)
    pos = 0
    for k in i.prefix:
        pos += k
        acc += Fraction(1, 1 << pos)
    if i.block:
        # one period contributes sum_j 2^{-(offsets)}; geometric in 2^{-sum(block)}
        L = sum(i.block)
        period = Fraction(0)
        off = 0
        for k in i.block:
            off += k
            period += Fraction(1, 1 << off)
        acc += period / (1 << pos) / (1 - Fraction(1, 1 << L))
    if Dyadic.is_dyadic(acc):
        return Dyadic.from_fraction(acc)
    return acc


def lex_compare(i1: Index, i2: Index) -> Order:
    """Literal lexicographic comparison of two indices.

    A finite index that is a proper prefix of the other compares as smaller.
    """
    span = max(len(i1.prefix), len(i2.prefix)) + math.lcm(max(len(i1.block), 1), max(len(i2.block), 1))
    n1 = len(i1.prefix) if i1.is_finite else None
    n2 = len(i2.prefix) if i2.is_finite else None
    for j in range(1, span + 1):
        end1 = n1 is not None and j > n1
        end2 = n2 is not None and j > n2
        if end1 or end2:
            if end1 and end2:
                return Order.EQUAL
            return Order.LESS if end1 else Order.GREATER
        x, y = i1.entry(j), i2.entry(j)
        if x != y:
            return Order.LESS if x < y else Order.GREATER
    return Order.EQUAL


# --------------------------------------------------------------------------
# Text formats

_INDEX_RE = re.compile(r"^\s*(?P<head>[0-9,\s]*?)\s*,?\s*(?:\(\s*\{?(?P<block>[0-9,\s]+)\}?\s*\))?\s*(?P<bang>!)?\s*$")


def parse_index(text: str) -> Index:
    """Parse ``"2,1,1,({1})"``, ``"3,(2)"``, ``"(2,1)"`` or ``"4!"``.

    A bare comma list without parentheses is read as a finite index.
    """
    m = _INDEX_RE.match(text)
    if not m or (m.group("block") and m.group("bang")):
        raise DomainError(f"cannot parse index {text!r}")
    head = [int(t) for t in m.group("head").replace(" ", "").split(",") if t]
    block = [int(t) for t in (m.group("block") or "").replace(" ", "").split(",") if t]
    return Index(tuple(head), tuple(block))


_BINARY_RE = re.compile(r"^0\.(?P<pre>[01]*)(?:\((?P<per>[01]+)\)|(?P<dots>\.\.\.))$")
_POW2_RE = re.compile(r"^(?P<a>\d+)\s*/\s*2\s*\^\s*(?P<n>\d+)$")


def parse_point(text: str) -> Fraction:
    """Parse a point of [0, 1] into an exact rational.

    Accepted: ``a/2^n``, ``p/q``, decimals (``0.375``), binary strings with a
    repeat marker (``0.0111...`` repeats the last digit, ``0.(01)`` a block),
    or ``0b`` followed by a finite binary fraction.
    """
    s = text.strip()
    if s.startswith("0b"):
        body = s[2:]
        if not re.fullmatch(r"0\.[01]+|[01]", body):
            raise DomainError(f"bad binary literal {text!r}")
        if "." not in body:
            return Fraction(int(body))
        bits = body.split(".", 1)[1]
        return Fraction(int(bits, 2), 1 << len(bits))
    m = _BINARY_RE.match(s)
    if m:
        pre = m.group("pre")
        if m.group("dots"):
            if not pre:
                raise DomainError(f"nothing to repeat in {text!r}")
            return DigitStream(tuple(map(int, pre[:-1])), (int(pre[-1]),)).value
        return DigitStream(tuple(map(int, pre)), tuple(map(int, m.group("per")))).value
    m = _POW2_RE.match(s)
    if m:
        return Fraction(int(m.group("a")), 1 << int(m.group("n")))
    try:
        return Fraction(s)
    except ValueError:
        raise DomainError(f"cannot parse point {text!r}") from None
