import cmath
import math
import random

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from oracles import gamma_product_limit
from zetastar.closed_form import (
    complex_gamma,
    const_index_closed,
    hoffman_like_closed,
    roots_of_unity,
    staircase_closed,
    tail2_reduction,
    two_n_one_closed,
)
from zetastar.errors import DomainError, Inadmissible, Pole
from zetastar.series import eval_periodic, eval_tail_l

ZETA2 = math.pi**2 / 6


# -- Gamma ------------------------------------------------------------------


def test_gamma_simple_values():
    assert complex_gamma(5) == pytest.approx(24.0, rel=1e-14)
    assert complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


def test_gamma_product_limit_oracle():
    z = 2 - 1j
    oracle = gamma_product_limit(z)
    assert abs(complex_gamma(z) - oracle) / abs(oracle) < 1e-9


@given(st.floats(0.5, 4.0), st.floats(-2.0, 2.0))
def test_gamma_strip_against_mpmath(x, y):
    z = complex(x, y)
    ref = complex(mp.gamma(mp.mpc(x, y)))
    assert abs(complex_gamma(z) - ref) / abs(ref) <= 1e-13


@given(st.floats(-3.5, 3.5), st.floats(-3.0, 3.0))
def test_gamma_conjugate_symmetry(x, y):
    z = complex(x, y)
    if y == 0 and x <= 0 and x == math.floor(x):
        return
    g = complex_gamma(z)
    gc = complex_gamma(z.conjugate())
    assert abs(gc - g.conjugate()) <= 1e-13 * max(1.0, abs(g))


@pytest.mark.parametrize("z", [0, -1, -4])
def test_gamma_poles(z):
    with pytest.raises(Pole):
        complex_gamma(z)


def test_gamma_reflection_region():
    assert complex_gamma(-0.5) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-13)


@pytest.mark.parametrize("k", [2, 3, 5, 8])
@pytest.mark.parametrize("sign", [1, -1])
def test_roots_of_unity(k, sign):
    roots = roots_of_unity(k, sign)
    assert len(roots) == k
    for c in roots:
        assert abs(c**k - sign) < 1e-13


# -- closed forms -------------------------------------------------------------


def test_const_index_examples():
    assert const_index_closed(2).value == pytest.approx(2.0, abs=1e-13)
    exact = 8 * math.pi / (math.exp(math.pi) - math.exp(-math.pi))
    assert const_index_closed(4).value == pytest.approx(exact, abs=1e-13)


@pytest.mark.parametrize("k", range(2, 9))
def test_const_index_channels(k):
    cf = const_index_closed(k)
    assert abs(cf.value - cf.product) < 1e-10
    assert cf.imag_residue < 1e-10
    assert abs(cf.value - eval_tail_l((), k).value) < 1e-8


def test_const_index_domain():
    with pytest.raises(DomainError):
        const_index_closed(1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_two_n_one(n):
    cf = two_n_one_closed(n)
    assert abs(cf.value - cf.product) < 1e-10
    block = (2,) * n + (1,)
    assert abs(cf.value - eval_periodic((), block).value) < 1e-5


def test_two_n_one_example():
    assert two_n_one_closed(1).value == pytest.approx(3.0, abs=1e-12)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_hoffman_like(n):
    cf = hoffman_like_closed(n)
    assert abs(cf.value - cf.product) < 1e-10
    block = (2,) * n + (3,) + (2,) * n + (1,)
    assert abs(cf.value - eval_periodic((), block).value) < 1e-5


def test_hoffman_like_example():
    e = math.exp(math.pi)
    assert hoffman_like_closed(0).value == pytest.approx(4 * (e + 1) / (math.pi * (e - 1)), abs=1e-12)


def test_hoffman_product_direct():
    # explicit partial product as an oracle for the product channel
    s = 2
    partial = 2 * math.prod((m**s - (-1) ** m) / (m**s + (-1) ** m) for m in range(2, 400001))
    assert hoffman_like_closed(0).product == pytest.approx(partial, abs=1e-8)


def test_staircase():
    assert staircase_closed(2) == 2.0
    assert staircase_closed(5) == 5.0
    assert staircase_closed(3) == pytest.approx(eval_periodic((), (2, 1)).value, abs=1e-6)
    with pytest.raises(DomainError):
        staircase_closed(1)


# -- reduction with a {2} tail ---------------------------------------------------


def test_tail2_examples():
    assert tail2_reduction((3,)) == pytest.approx(2 * ZETA2 - 2, abs=1e-10)
    assert tail2_reduction((2,)) == pytest.approx(2.0, abs=1e-12)
    assert tail2_reduction((2, 1)) == pytest.approx(eval_tail_l((2, 1), 2).value, abs=1e-8)


def test_tail2_inadmissible():
    with pytest.raises(Inadmissible):
        tail2_reduction((1, 3))


def test_tail2_random_indices():
    rng = random.Random(20261016)
    seen = set()
    while len(seen) < 20:
        r = rng.randint(1, 3)
        k = (rng.randint(2, 4),) + tuple(rng.randint(1, 4) for _ in range(r - 1))
        seen.add(k)
    for k in sorted(seen):
        assert tail2_reduction(k) == pytest.approx(eval_tail_l(k, 2).value, abs=1e-7), k
