"""Independent reference values, computed without the package's kernel."""

import math

import mpmath as mp
import numpy as np

mp.mp.dps = 20


def nsum_em(f, start):
    return float(mp.nsum(f, [start, mp.inf], method="euler-maclaurin"))


def double_star(a, b):
    """zeta*(a, b) = sum_{m} m^-b zeta(a, m) (Hurwitz)."""
    return nsum_em(lambda m: m**-b * mp.zeta(a, m), 1)


def hoffman_two(n):
    """zeta*({2}^n) = 2 (1 - 2^{1-2n}) zeta(2n)."""
    return float(2 * (1 - mp.mpf(2) ** (1 - 2 * n)) * mp.zeta(2 * n))


def brute_upper(exponents, floor, m):
    """Truncated sum over m > m_1 >= ... >= m_s >= floor, outermost first."""
    grid = np.arange(floor, m, dtype=float)
    cur = np.ones_like(grid)
    for e in exponents:
        cur = np.cumsum((cur * grid ** (-float(e)))[::-1])[::-1]
    return float(cur[0])


def brute_extrapolated(exponents, floor):
    """Brute-force sums at M = 2^14..2^21 fitted with (log M)^j / M^i tails."""
    ms = [2**k for k in range(14, 22)]
    vals = [brute_upper(exponents, floor, m) for m in ms]
    cols = []
    for m in ms:
        L = math.log(m)
        cols.append([1, L * L / m, L / m, 1 / m, L * L / m**2, L / m**2, 1 / m**2])
    return float(np.linalg.lstsq(np.array(cols), np.array(vals), rcond=None)[0][0])


def gamma_product_limit(z, n=10**6):
    """Gamma(z) = lim n^z n! / (z (z+1) ... (z+n)), Richardson in 1/n."""

    def g(k):
        j = np.arange(1, k + 1)
        log = z * math.log(k) + np.sum(np.log(j)) - np.log(z) - np.sum(np.log(z + j))
        return complex(np.exp(log))

    return 2 * g(2 * n) - g(n)
