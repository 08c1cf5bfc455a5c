"""Exact rational values via closed-form binomial sums.

Every quantity here is also computable by exhaustive enumeration and by the
series recurrences; this module provides the third, independent route.  All
results are fractions.Fraction (or int where the value is integral).
"""

import math
from fractions import Fraction

from .errors import DomainError

__all__ = [
    "v2",
    "expected_r_branches",
    "expected_total_branches",
    "count_paths_rdeg",
    "prob_rdeg",
    "expected_rdeg",
    "expected_fringe",
    "expected_total_fringe",
]


def v2(k):
    """2-adic valuation of k >= 1."""
    if k < 1:
        raise DomainError("valuation needs a positive integer")
    return (k & -k).bit_length() - 1


def _comb(n, k):
    # math.comb rejects negative k; treat out-of-range as 0
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def expected_r_branches(n, r):
    """Mean number of r-branches over the uniform size-n trees."""
    if n < 0 or r < 0:
        raise DomainError("n and r must be nonnegative")
    if r == 0:
        return n + 1
    step = 1 << r
    acc = 0
    lam = 1
    while n + 1 - lam * step >= 0:
        k = lam * step
        acc += lam * (
            _comb(2 * n, n + 1 - k) - 2 * _comb(2 * n, n - k) + _comb(2 * n, n - 1 - k)
        )
        lam += 1
    return Fraction((n + 1) * acc, math.comb(2 * n, n))


def expected_total_branches(n):
    """Mean of the total branch count over the uniform size-n trees."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    acc = Fraction(0)
    for k in range(1, n + 2):
        weight = (2 - Fraction(1, 1 << v2(k))) * k
        acc += weight * (
            _comb(2 * n, n + 1 - k) - 2 * _comb(2 * n, n - k) + _comb(2 * n, n - 1 - k)
        )
    return Fraction(n + 1, math.comb(2 * n, n)) * acc


def _rdeg_equal_coeff(n, r):
    """Number of length-n paths with reduction degree exactly r."""
    step = 1 << r
    acc = 0
    lam = 1
    while n - lam * step >= 0:
        k = lam * step
        acc += (
            lam
            * (-1) ** (lam - 1)
            * (_comb(2 * n - 1, n - k) - _comb(2 * n - 1, n - k - 1))
        )
        lam += 1
    return 4 ** (r + 1) * acc


def count_paths_rdeg(n, r):
    """Number of length-n paths with reduction degree exactly r."""
    if n < 1 or r < 0:
        raise DomainError("need n >= 1 and r >= 0")
    if r == 0:
        # the four atomic steps reduce in zero steps only for n = 1
        return 4 if n == 1 else 0
    return _rdeg_equal_coeff(n, r)


def prob_rdeg(n, r):
    """P(reduction degree of a uniform length-n path equals r)."""
    return Fraction(count_paths_rdeg(n, r), 4**n)


def expected_rdeg(n):
    """Mean reduction degree of a uniform length-n path."""
    if n < 1:
        raise DomainError("need n >= 1")
    acc = 0
    for k in range(1, n + 1):
        acc += (
            8 * k * ((1 << v2(k)) - 1)
            * (_comb(2 * n - 1, n - k) - _comb(2 * n - 1, n - k - 1))
        )
    return Fraction(acc, 4**n)


def expected_fringe(n, r):
    """Mean size of the r-th fringe of a uniform length-n path."""
    if n < 1 or r < 0:
        raise DomainError("need n >= 1 and r >= 0")
    step = 1 << r
    acc = Fraction(0)
    lam = 1
    while n - lam * step >= 0:
        k = lam * step
        acc += Fraction(2 * lam**3 + lam, 3) * (
            _comb(2 * n - 1, n - k) - _comb(2 * n - 1, n - k - 1)
        )
        lam += 1
    return Fraction(4 ** (r + 1), 4**n) * acc


def expected_total_fringe(n):
    """Mean of the total fringe size of a uniform length-n path."""
    if n < 1:
        raise DomainError("need n >= 1")
    acc = Fraction(0)
    for k in range(1, n + 1):
        weight = 2 * k**3 * (2 - Fraction(1, 1 << v2(k))) + k * (
            (1 << (v2(k) + 1)) - 1
        )
        acc += weight * (_comb(2 * n - 1, n - k) - _comb(2 * n - 1, n - k - 1))
    return Fraction(4, 3 * 4**n) * acc
