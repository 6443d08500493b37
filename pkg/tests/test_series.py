import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import brute_extrapolated, double_star, hoffman_two, nsum_em
from zetastar.errors import DomainError, Inadmissible, NotConverged
from zetastar.index import Index
from zetastar.series import (
    ChainSpec,
    TruncationParams,
    aitken,
    bound_chain_sum,
    chain_sum,
    digit_chain_sums,
    eval_finite,
    eval_periodic,
    eval_tail_l,
    evaluate_index,
    merge_digit_exponents,
    riemann_zeta,
)

import mpmath as mp

ZETA2 = math.pi**2 / 6
ZETA3 = float(mp.zeta(3))
ZETA4 = math.pi**4 / 90


# -- parameters ------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs", [dict(m_cap=3), dict(tol=0.0), dict(block_reps_cap=1), dict(depth_cap=2)]
)
def test_params_validation(kwargs):
    with pytest.raises(DomainError):
        TruncationParams(**kwargs)


# -- finite values -----------------------------------------------------------


def test_zeta2():
    ev = eval_finite((2,), TruncationParams(tol=1e-9))
    assert ev.value == pytest.approx(ZETA2, abs=1e-9)
    assert ev.converged and ev.err_estimate < 1e-9


def test_large_exponent():
    direct = math.fsum(m**-20.0 for m in range(1, 50))
    assert eval_finite((20,)).value == pytest.approx(direct, abs=1e-15)
    assert eval_finite((20,)).value == pytest.approx(1.0000009539620338, abs=1e-15)


@pytest.mark.parametrize("a, b", [(2, 1), (3, 1), (2, 2), (4, 3), (3, 2)])
def test_double_values_against_hurwitz_oracle(a, b):
    assert eval_finite((a, b)).value == pytest.approx(double_star(a, b), abs=1e-12)


def test_known_double_values():
    assert eval_finite((2, 1)).value == pytest.approx(2 * ZETA3, abs=1e-13)
    assert eval_finite((3, 1)).value == pytest.approx(1.25 * ZETA4, abs=1e-13)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_constant_two(n):
    assert eval_finite((2,) * n).value == pytest.approx(hoffman_two(n), abs=1e-12)


def test_brute_force_triple():
    # [DERIVED] brute force with log-tail fit
    assert eval_finite((3, 1, 2)).value == pytest.approx(brute_extrapolated([3, 1, 2], 1), abs=1e-9)


def test_inadmissible():
    with pytest.raises(Inadmissible):
        eval_finite((1, 2))
    with pytest.raises(DomainError):
        eval_finite(())


def test_plain_truncation_path():
    p = TruncationParams(extrapolate=False, tol=1e-12)
    assert eval_finite((20,), p).value == pytest.approx(1.0000009539620338, abs=1e-15)
    with pytest.raises(NotConverged):
        eval_finite((2,), TruncationParams(extrapolate=False, m_cap=4096, tol=1e-10))


def test_index_argument():
    assert eval_finite(Index.finite((2, 1))).value == pytest.approx(2 * ZETA3, abs=1e-13)


# -- constant tails ------------------------------------------------------------


def test_tail_examples():
    assert eval_tail_l((), 2).value == pytest.approx(2.0, abs=1e-9)
    assert eval_tail_l((3,), 1).value == pytest.approx(ZETA2, abs=1e-12)
    assert eval_tail_l((3,), 2).value == pytest.approx(2 * ZETA2 - 2, abs=1e-12)


def test_divergent_marker():
    ev = eval_tail_l((2,), 1)
    assert ev.divergent and math.isinf(ev.value)
    assert evaluate_index(Index((2,), (1,))).divergent


def test_tail_is_limit_of_finite():
    limit = eval_tail_l((3,), 2).value
    prev = 0.0
    for d in range(0, 13):
        v = eval_finite((3,) + (2,) * d).value
        assert prev <= v <= limit + 1e-12
        prev = v
    assert limit - prev < 1e-3


@pytest.mark.parametrize("l", [2, 3, 4])
def test_empty_prefix_product(l):
    product = math.prod(m**l / (m**l - 1) for m in range(2, 200000))
    assert eval_tail_l((), l).value == pytest.approx(product, abs=2e-5 if l == 2 else 1e-9)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3).filter(lambda k: k[0] >= 2))
def test_ones_tail_identity(k):
    bumped = tuple(k[:-1]) + (k[-1] + 1,)
    assert eval_tail_l(bumped, 1).value == pytest.approx(eval_finite(k).value, abs=1e-8)


# -- periodic tails -------------------------------------------------------------


@pytest.mark.parametrize("block, value", [((2, 1), 3.0), ((2, 1, 1), 4.0), ((2, 1, 1, 1), 5.0)])
def test_staircase_blocks(block, value):
    ev = eval_periodic((), block)
    assert ev.value == pytest.approx(value, abs=1e-6)
    assert ev.converged


def test_hoffman_block():
    e = math.exp(math.pi)
    assert eval_periodic((), (3, 1)).value == pytest.approx(4 * (e + 1) / (math.pi * (e - 1)), abs=1e-6)


def test_periodic_routes_constant_blocks():
    assert eval_periodic((3,), (2, 2)).method == "tail-l"
    assert eval_periodic((), (2, 1)).method == "periodic"


def test_periodic_inadmissible():
    with pytest.raises(Inadmissible):
        eval_periodic((), (1, 2))


def test_periodic_block_cap():
    with pytest.raises(NotConverged):
        eval_periodic((), (2, 1), TruncationParams(block_reps_cap=3, tol=1e-14))


@given(
    st.lists(st.integers(2, 4), min_size=1, max_size=2),
    st.lists(st.integers(1, 3), min_size=1, max_size=3),
    st.integers(1, 5),
)
def test_monotone_in_depth(prefix, block, d):
    a = eval_finite(tuple(prefix) + tuple(block) * d).value
    b = eval_finite(tuple(prefix) + tuple(block) * (d + 1)).value
    assert b >= a - 1e-13


def test_aitken_geometric():
    xs = [1 - 0.5**k for k in range(3)]
    assert aitken(*xs) == pytest.approx(1.0)
    assert aitken(1.0, 1.0, 1.0) == 1.0


# -- chain sums -------------------------------------------------------------------


def test_chain_examples():
    assert chain_sum(ChainSpec(())).value == pytest.approx(ZETA2 - 1.25, abs=1e-14)
    assert chain_sum(ChainSpec((0,))).value == pytest.approx(ZETA3 - 1.125, abs=1e-14)


def test_chain_brute_force():
    # [DERIVED] 0.463266025078745, brute force in [3, 2^21] with log-tail fit
    expected = brute_extrapolated([2, 1, 1], 3)
    assert chain_sum(ChainSpec((1, 1))).value == pytest.approx(expected, abs=1e-9)
    assert chain_sum(ChainSpec((1, 1))).value == pytest.approx(0.463266025078745, abs=1e-13)


def test_chain_mixed_digits():
    # digits (1, 0): m_2 = m_3, so the chain is sum 1 / (m_1^2 m_2^2)
    oracle = nsum_em(lambda m: mp.zeta(2, m) / m**2, 3)
    assert chain_sum(ChainSpec((1, 0))).value == pytest.approx(oracle, abs=1e-13)


def test_chainspec_validation():
    with pytest.raises(DomainError):
        ChainSpec((2,))
    with pytest.raises(DomainError):
        ChainSpec((), lead_exponent=1)
    assert ChainSpec((1, 0, 1)).depth == 4


def test_merge_digit_exponents():
    assert merge_digit_exponents((0, 1, 0, 0, 1)) == ([3, 3, 1], [1, 1, 2, 2, 2, 3])


def test_digit_chain_sums_only_at_ones():
    s = digit_chain_sums((0, 1, 0, 1))
    assert s[0] is None and s[2] is None
    assert s[1] == pytest.approx(chain_sum(ChainSpec((0,))).value, abs=1e-15)
    assert s[3] == pytest.approx(chain_sum(ChainSpec((0, 1, 0))).value, abs=1e-15)


# -- explicit bounds ----------------------------------------------------------------


def test_bound_examples():
    assert bound_chain_sum(2, 1, 3)[0] == pytest.approx(0.25)
    assert bound_chain_sum(1, 1, 2)[0] == pytest.approx(1.0)
    assert bound_chain_sum(2, 3, 2)[0] == pytest.approx(0.1875)
    assert bound_chain_sum(2, 1, 3)[1] is None
    with pytest.raises(DomainError):
        bound_chain_sum(3, 1, 2)


def test_bound_actual_values():
    assert ZETA3 - 1.125 <= bound_chain_sum(2, 1, 3)[0]
    assert ZETA2 - 1 <= bound_chain_sum(1, 1, 2)[0]
    assert brute_extrapolated([3, 1, 1], 2) <= bound_chain_sum(2, 3, 2)[0]


@pytest.mark.parametrize("s", range(2, 9))
def test_growth_rate_bracket(s):
    # sum over n >= r of the chain sums, r = 2, compared with s / r^s
    from zetastar._nested import nested_upper_sums

    v = nested_upper_sums([3] + [1] * (s - 1), 2)[-1]
    assert 0.1 <= v / (s / 2**s) <= 10


def test_riemann_zeta():
    assert riemann_zeta(2) == pytest.approx(ZETA2, rel=1e-15)
    assert riemann_zeta(7) == pytest.approx(float(mp.zeta(7)), rel=1e-15)
