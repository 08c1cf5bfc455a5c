"""Floating-point asymptotic expansions and their periodic fluctuations.

Four quantities carry a 1-periodic fluctuation in log_4 n: the total branch
count of trees, the mean and the variance of the path reduction degree, and
the total fringe size of paths.  Their Fourier coefficients involve gamma,
digamma and zeta on the vertical line Re = 0 shifted by chi_k = 2*pi*i*k/log 2
and are precomputed once per (family, K) pair.
"""

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError
from .special import EULER_GAMMA, digamma_c, gamma_c, zeta_c

__all__ = [
    "FluctuationSpec",
    "AsymptoticValue",
    "map_z",
    "map_u",
    "map_sigma",
    "fluctuation",
    "asy_r_branch_mean",
    "asy_r_branch_var",
    "asy_total_branches_mean",
    "delta_branches",
    "asy_rdeg",
    "asy_count_rdeg",
    "asy_fringe",
    "theta_r",
    "asy_total_fringe_mean",
]

_LOG2 = math.log(2.0)
_SQRT_PI = math.sqrt(math.pi)


def chi(k):
    return 2j * math.pi * k / _LOG2


# ---------------------------------------------------------------------------
# holomorphic substitution maps

def map_z(u):
    """Z(u) = u/(1+u)^2, the tree-size substitution."""
    if u == -1:
        raise DomainError("Z has a pole at u = -1")
    return u / (1 + u) ** 2


def map_u(z):
    """U(z), inverse of Z on the slit domain; U(0) = 0 by continuity."""
    if z == 0:
        return 0.0 + 0.0j
    return (1 - cmath.sqrt(1 - 4 * z)) / (2 * z) - 1


def map_sigma(z):
    """sigma(z) = z^2/(1-2z)^2; satisfies sigma(Z(u)) = Z(u^2)."""
    if z == 0.5:
        raise DomainError("sigma has a pole at z = 1/2")
    return (z / (1 - 2 * z)) ** 2


# ---------------------------------------------------------------------------
# fluctuations

_FAMILIES = ("branches-total", "rdeg-mean", "rdeg-var", "fringe-total")


@dataclass(frozen=True)
class FluctuationSpec:
    """Fourier data of one 1-periodic, mean-zero fluctuation."""

    family: str
    big_k: int
    coeffs: tuple  # coefficient of e^{2 pi i k x} for k = 1..K

    def __call__(self, x):
        # conjugate symmetry: the k and -k terms sum to twice the real part
        acc = 0.0
        for k, c in enumerate(self.coeffs, start=1):
            acc += 2.0 * (c * cmath.exp(2j * math.pi * k * x)).real
        return acc


def _coeff(family, k):
    x = chi(k)
    if family == "branches-total":
        return gamma_c(x / 2) * zeta_c(x - 1) * (x - 1) / _LOG2
    if family == "rdeg-mean":
        # delta_1 = log2 * sum c_k e^{2 pi i k x}
        return _LOG2 * _c_k(k)
    if family == "rdeg-var":
        return _d_k(k) - _c_k(k) * digamma_c(1 + x / 2)
    if family == "fringe-total":
        return (
            2.0
            / (3.0 * _SQRT_PI * _LOG2)
            * gamma_c((3 + x) / 2)
            * (2 * zeta_c(x - 1) + zeta_c(x + 1))
        )
    raise DomainError(f"unknown fluctuation family {family!r}; know {_FAMILIES}")


def _c_k(k):
    x = chi(k)
    return 2.0 / (_SQRT_PI * _LOG2**2) * gamma_c((3 + x) / 2) * zeta_c(1 + x)


def _d_k(k):
    x = chi(k)
    return (
        4.0
        / (_SQRT_PI * _LOG2**2)
        * gamma_c((3 + x) / 2)
        * (digamma_c(2 + x) * zeta_c(1 + x) + zeta_c(1 + x, 1))
        - 3.0 * _c_k(k) * _LOG2
    )


@lru_cache(maxsize=None)
def fluctuation(family, big_k=20):
    if big_k < 1:
        raise DomainError("need at least one Fourier summand")
    return FluctuationSpec(
        family, big_k, tuple(_coeff(family, k) for k in range(1, big_k + 1))
    )


def delta_branches(x, big_k=20):
    return fluctuation("branches-total", big_k)(x)


# ---------------------------------------------------------------------------
# expansions

@dataclass(frozen=True)
class AsymptoticValue:
    value: float
    error_order: str
    n: int
    r: int = None
    big_k: int = None


def asy_r_branch_mean(n, r):
    """Expected number of r-branches, all printed terms through 1/n^2."""
    if n < 1 or r < 0:
        raise DomainError("need n >= 1 and r >= 0")
    q = 4.0**r
    value = (
        n / q
        + (1 + 5 / q) / 6
        + (q - 1 / q) / (20 * n)
        + (5 * q * q / 21 - 7 * q / 10 + 97 / (210 * q)) / (12 * n * n)
    )
    return AsymptoticValue(value, "O(n^-3)", n, r=r)


def asy_r_branch_var(n, r):
    """Variance of the number of r-branches, through 1/n."""
    if n < 1 or r < 0:
        raise DomainError("need n >= 1 and r >= 0")
    q = 4.0**r
    q2 = q * q
    value = (
        (q - 1) / (3 * q2) * n
        - (2 * q2 - 25 * q + 23) / (90 * q2)
        - (13 * q2 * q - 14 * q2 + 7 * q - 6) / (420 * q2 * n)
    )
    return AsymptoticValue(value, "O(n^-2)", n, r=r)


def asy_total_branches_mean(n, big_k=20):
    """Expected total branch count of a uniform size-n tree."""
    if n < 2:
        raise DomainError("need n >= 2")
    x = math.log(n) / math.log(4.0)
    zp = zeta_c(-1, 1).real
    value = (
        4.0 * n / 3.0
        + x / 6.0
        - 2.0 * zp / _LOG2
        - EULER_GAMMA / (12.0 * _LOG2)
        - 1.0 / (6.0 * _LOG2)
        + 43.0 / 36.0
        + delta_branches(x, big_k)
    )
    return AsymptoticValue(value, "O(log n / n)", n, big_k=big_k)


def asy_rdeg(n, big_k=20, which="mean"):
    """Mean or variance of the reduction degree of a uniform length-n path."""
    if n < 2:
        raise DomainError("need n >= 2")
    x = math.log(n) / math.log(4.0)
    const = (EULER_GAMMA + 2.0 - 3.0 * _LOG2) / (2.0 * _LOG2)
    d1 = fluctuation("rdeg-mean", big_k)(x)
    if which == "mean":
        return AsymptoticValue(x + const + d1, "O(n^-1)", n, big_k=big_k)
    if which != "variance":
        raise DomainError(f"unknown moment {which!r}")
    zpp0 = zeta_c(0, 2).real
    lead = (
        (math.pi**2 - 24.0 * math.log(math.pi) ** 2 - 48.0 * zpp0 - 24.0)
        / (24.0 * _LOG2**2)
        - 2.0 * math.log(math.pi) / _LOG2
        - 11.0 / 12.0
    )
    d2 = fluctuation("rdeg-var", big_k)(x)
    value = lead + d2 - 2.0 * const * d1 - d1 * d1
    return AsymptoticValue(value, "O(log n / n)", n, big_k=big_k)


def asy_count_rdeg(n, r):
    """Main term for the number of length-n paths of reduction degree r.

    Exact for r = 1 and n >= 2, since the subdominant poles vanish there.
    """
    if n < 1 or r < 1:
        raise DomainError("need n >= 1 and r >= 1")
    a = math.pi * 2.0 ** (-r - 1)
    c2 = math.cos(a) ** 2
    return (4.0 * c2) ** n * (4.0 * math.tan(a) ** 2 * n - 2.0 / c2)


def asy_fringe(n, r, which="mean"):
    """Mean or variance of the r-th fringe size of a uniform length-n path.

    The error term is exponentially small, O(n^5 theta_r^-n) with
    theta_r = 4/(2 + 2cos(2 pi/2^r)) > 1 for r >= 2; for r <= 1 the printed
    terms are exact and the error term is absent.
    """
    if n < 1 or r < 0:
        raise DomainError("need n >= 1 and r >= 0")
    q = 4.0**r
    if which == "mean":
        value = n / q + (1.0 - 1.0 / q) / 3.0
    elif which == "variance":
        value = (q - 1.0) / (3.0 * q * q) * n + (-2.0 * q * q - 5.0 * q + 7.0) / (
            45.0 * q * q
        )
    else:
        raise DomainError(f"unknown moment {which!r}")
    tag = "O(n^5 theta_r^-n)" if r >= 2 else "exact"
    return AsymptoticValue(value, tag, n, r=r)


def theta_r(r):
    """Inverse decay rate of the fringe-moment error terms, for r >= 2."""
    if r < 2:
        raise DomainError("the error term is absent for r < 2")
    return 4.0 / (2.0 + 2.0 * math.cos(2.0 * math.pi / 2.0**r))


def asy_total_fringe_mean(n, big_k=20):
    """Expected total fringe size of a uniform length-n path."""
    if n < 2:
        raise DomainError("need n >= 2")
    x = math.log(n) / math.log(4.0)
    value = (
        4.0 * n / 3.0
        + x / 3.0
        + (5.0 + 3.0 * EULER_GAMMA - 11.0 * _LOG2) / (18.0 * _LOG2)
        + fluctuation("fringe-total", big_k)(x)
    )
    return AsymptoticValue(value, "O(log n / n)", n, big_k=big_k)
