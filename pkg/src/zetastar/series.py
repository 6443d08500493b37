"""Direct evaluation of finite and infinite multiple zeta-star values.

All evaluators share the nested-sum kernel in :mod:`zetastar._nested`.  The
error estimate of an :class:`Evaluation` is the change in value when the
explicit/asymptotic cutoff is doubled (and, for periodic tails, the last
change of the extrapolated limit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from . import _nested
from ._nested import hurwitz_tail_weight, nested_upper_sums, riemann_zeta
from .errors import DomainError, Inadmissible, NotConverged
from .index import Index

__all__ = [
    "TruncationParams",
    "Evaluation",
    "ChainSpec",
    "eval_finite",
    "eval_tail_l",
    "eval_periodic",
    "evaluate_index",
    "chain_sum",
    "digit_chain_sums",
    "merge_digit_exponents",
    "bound_chain_sum",
    "riemann_zeta",
    "aitken",
]

_EPS = 2.0**-52


@dataclass(frozen=True)
class TruncationParams:
    """Caps and targets for series truncation.

    Parameters
    ----------
    m_cap : int
        Largest cutoff M tried for the summation variables.
    tol : float
        Target absolute error.
    block_reps_cap : int
        Maximum number of repetitions of a periodic block.
    extrapolate : bool
        Add asymptotic tails above the cutoff and Aitken-accelerate periodic
        limits.  With ``False`` sums are plainly truncated.
    depth_cap : int
        Maximum number of binary digits used by the Z* digit series.
    """

    m_cap: int = 10**6
    tol: float = 1e-12
    block_reps_cap: int = 40
    extrapolate: bool = True
    depth_cap: int = 4096

    def __post_init__(self):
        if self.m_cap < 4:
            raise DomainError("m_cap must be >= 4")
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.block_reps_cap < 2:
            raise DomainError("block_reps_cap must be >= 2")
        if self.depth_cap < 8:
            raise DomainError("depth_cap must be >= 8")


DEFAULT_PARAMS = TruncationParams()


@dataclass(frozen=True)
class Evaluation:
    value: float
    err_estimate: float
    terms_used: int
    converged: bool
    method: str = ""

    @property
    def divergent(self) -> bool:
        return math.isinf(self.value)

    def __float__(self) -> float:
        return self.value


def _divergent(method: str, terms: int) -> Evaluation:
    return Evaluation(math.inf, 0.0, terms, True, method)


def _as_entries(k: Union[Index, Sequence[int]]) -> Tuple[int, ...]:
    if isinstance(k, Index):
        if not k.is_finite:
            raise DomainError("expected a finite index")
        return k.prefix
    return tuple(int(x) for x in k)


def _check_admissible(entries: Sequence[int]):
    if not entries:
        raise DomainError("empty index")
    if any(x < 1 for x in entries):
        raise DomainError("index entries must be >= 1")
    if entries[0] < 2:
        raise Inadmissible(f"first entry {entries[0]} < 2: the series diverges")


def _doubling(run, p: TruncationParams, method: str) -> Evaluation:
    """Double the cutoff until two successive values agree within tol/2."""
    n = _nested.DEFAULT_CUTOFF if p.extrapolate else 1024
    n = min(n, p.m_cap // 2)
    prev = run(n)
    if math.isinf(prev):
        return _divergent(method, n)
    while True:
        if 2 * n > p.m_cap:
            raise NotConverged(f"{method}: cutoff cap {p.m_cap} reached (last value {prev!r})")
        cur = run(2 * n)
        err = abs(cur - prev)
        if err < p.tol / 2 or err <= 16 * _EPS * abs(cur):
            return Evaluation(cur, err, 2 * n, True, method)
        prev, n = cur, 2 * n


def eval_finite(k: Union[Index, Sequence[int]], p: TruncationParams = DEFAULT_PARAMS) -> Evaluation:
    """zeta*(k_1, ..., k_r) for a finite admissible index."""
    entries = _as_entries(k)
    _check_admissible(entries)

    def run(n):
        return nested_upper_sums(entries, cutoff=n, tail=p.extrapolate)[-1]

    return _doubling(run, p, "finite")


def eval_tail_l(prefix: Sequence[int], l: int, p: TruncationParams = DEFAULT_PARAMS) -> Evaluation:
    """zeta*(k_1, ..., k_r, {l}^inf) via the constant-tail product weight.

    The last summation variable carries prod_{s=2}^{m} s^l / (s^l - 1), which
    for l = 1 is just m.  With an empty prefix the value is the limit of
    zeta*({l}^d) as d grows (see :func:`eval_periodic`).
    """
    prefix = tuple(int(x) for x in prefix)
    l = int(l)
    if l < 1:
        raise DomainError("l must be >= 1")
    if not prefix:
        if l < 2:
            raise Inadmissible("zeta*({1}^inf) has first entry 1")
        return _periodic_limit((), (l,), p)
    _check_admissible(prefix)
    if prefix == (2,) and l == 1:
        return _divergent("tail-l", 0)

    if l == 1:
        exps = prefix[:-1] + (prefix[-1] - 1,)
        weights = None
    else:
        exps = prefix
        weights = [None] * (len(prefix) - 1) + [hurwitz_tail_weight(l)]

    def run(n):
        return nested_upper_sums(exps, cutoff=n, tail=p.extrapolate, weights=weights)[-1]

    return _doubling(run, p, "tail-l")


def aitken(x0: float, x1: float, x2: float) -> float:
    """Aitken delta-squared extrapolation of three successive terms."""
    d1, d2 = x1 - x0, x2 - x1
    denom = d2 - d1
    if denom == 0.0 or abs(d2) <= 4 * _EPS * abs(x2):
        return x2
    return x2 - d2 * d2 / denom


def _periodic_limit(prefix: Tuple[int, ...], block: Tuple[int, ...], p: TruncationParams) -> Evaluation:
    reps = p.block_reps_cap
    exps = prefix + block * reps
    _check_admissible(exps)
    cutoff = _nested.DEFAULT_CUTOFF if p.extrapolate else min(4096, p.m_cap)
    sums = nested_upper_sums(exps, cutoff=cutoff, tail=p.extrapolate)
    xs = [sums[len(prefix) + d * len(block) - 1] for d in range(1, reps + 1)]
    if any(math.isinf(x) for x in xs):
        return _divergent("periodic", cutoff)
    accel = []
    prev_diff = None
    for d in range(1, reps):
        diff = xs[d] - xs[d - 1]
        if diff < -16 * _EPS * abs(xs[d]):
            raise NotConverged("block repetitions are not monotone increasing")
        if prev_diff is not None and prev_diff > 16 * _EPS * abs(xs[d]) and diff / prev_diff >= 1:
            raise NotConverged(f"successive differences do not shrink (ratio {diff / prev_diff:.3g})")
        if p.extrapolate and d >= 2:
            accel.append(aitken(xs[d - 2], xs[d - 1], xs[d]))
        if p.extrapolate and len(accel) >= 2:
            value = accel[-1]
            err = abs(accel[-1] - accel[-2])
        else:
            value, err = xs[d], abs(diff)
        floor_err = 16 * _EPS * abs(value)
        if (err < p.tol and (len(accel) >= 2 or not p.extrapolate)) or (err <= floor_err and d >= 2):
            # cutoff check on the chosen depth
            check = nested_upper_sums(exps[: len(prefix) + (d + 1) * len(block)], cutoff=2 * cutoff,
                                      tail=p.extrapolate)[-1]
            err = max(err, abs(check - xs[d]), floor_err)
            return Evaluation(value, err, (d + 1), True, "periodic")
        prev_diff = diff
    raise NotConverged(f"periodic tail: {reps} block repetitions were not enough for tol={p.tol:g}")


def eval_periodic(prefix: Sequence[int], block: Sequence[int], p: TruncationParams = DEFAULT_PARAMS) -> Evaluation:
    """zeta*(prefix, block, block, ...) as the limit over block repetitions.

    A block of equal entries is handed to :func:`eval_tail_l`; in particular an
    all-ones block is evaluated through prod s/(s-1) = m, which realizes the
    identity zeta*(..., k+1, {1}^inf) = zeta*(..., k).  The divergent index
    (2, 1, 1, ...) yields an infinite value.
    """
    prefix = tuple(int(x) for x in prefix)
    block = tuple(int(x) for x in block)
    if not block:
        raise DomainError("empty block")
    idx = Index(prefix, block)  # normalized presentation
    prefix, block = idx.prefix, idx.block
    if len(block) == 1:
        return eval_tail_l(prefix, block[0], p)
    if idx.entry(1) < 2:
        raise Inadmissible("first entry < 2")
    return _periodic_limit(prefix, block, p)


def evaluate_index(index: Index, p: TruncationParams = DEFAULT_PARAMS) -> Evaluation:
    """Dispatch on the tail type of ``index``."""
    if index.is_finite:
        return eval_finite(index.prefix, p)
    if index.tail_constant is not None:
        return eval_tail_l(index.prefix, index.tail_constant, p)
    return eval_periodic(index.prefix, index.block, p)


# --------------------------------------------------------------------------
# digit-weighted chain sums


@dataclass(frozen=True)
class ChainSpec:
    """sum_{m_1 >= ... >= m_d >= floor} a_1^{m_1-m_2} ... a_{d-1}^{m_{d-1}-m_d} / (m_1^e m_2 ... m_d)

    with 0^0 = 1, so a zero digit forces equality of the neighbouring variables.
    """

    digits: Tuple[int, ...]
    floor: int = 3
    lead_exponent: int = 2

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(a) for a in self.digits))
        if any(a not in (0, 1) for a in self.digits):
            raise DomainError("digits must be 0 or 1")
        if self.floor < 1:
            raise DomainError("floor must be >= 1")
        if self.lead_exponent < 2:
            raise DomainError("lead exponent must be >= 2")

    @property
    def depth(self) -> int:
        return len(self.digits) + 1


def merge_digit_exponents(digits: Sequence[int], lead: int = 2) -> Tuple[list, list]:
    """Collapse the chain for ``digits`` = (a_1, ..., a_{d-1}).

    Returns the exponents of the groups of equal variables and, for every
    variable 1..d, the (1-based) group it belongs to.
    """
    groups = [lead]
    member = [1]
    for a in digits:
        if a:
            groups.append(1)
        else:
            groups[-1] += 1
        member.append(len(groups))
    return groups, member


def chain_sum(spec: ChainSpec, p: TruncationParams = DEFAULT_PARAMS) -> Evaluation:
    groups, _ = merge_digit_exponents(spec.digits, spec.lead_exponent)

    def run(n):
        return nested_upper_sums(groups, spec.floor, cutoff=max(n, 2 * spec.floor), tail=p.extrapolate)[-1]

    return _doubling(run, p, "chain")


def digit_chain_sums(digits: Sequence[int], floor: int = 3, lead: int = 2, cutoff: Optional[int] = None) -> list:
    """S_d for d = 1..len(digits): the chain sum over digits a_1..a_{d-1}.

    Only entries with a_d = 1 (and the last one) are filled in; the others
    are ``None`` because they are never needed and their group is still open.
    """
    digits = tuple(digits)
    if not digits:
        return []
    groups, member = merge_digit_exponents(digits[:-1], lead)
    sums = nested_upper_sums(groups, floor, cutoff=cutoff or _nested.DEFAULT_CUTOFF)
    out = []
    for d in range(1, len(digits) + 1):
        if digits[d - 1] == 1 or d == len(digits):
            out.append(sums[member[d - 1] - 1])
        else:
            out.append(None)
    return out


def bound_chain_sum(r: int, s: int, n: int) -> Tuple[float, None]:
    """Explicit upper bound for sum_{m_1 >= ... >= m_s >= n} 1 / (m_1^{r+1} m_2 ... m_s).

    ``1 / ((n-1)...(n-r) r^s)`` for n > r and ``s / (r! r^s)`` for n = r.  The
    matching lower bounds involve unspecified constants and are returned as
    ``None``.
    """
    if r < 1 or s < 1:
        raise DomainError("r and s must be positive")
    if n < r:
        raise DomainError(f"no bound for n={n} < r={r}")
    if n == r:
        return s / (math.factorial(r) * r**s), None
    falling = math.prod(n - i for i in range(1, r + 1))
    return 1.0 / (falling * r**s), None
