"""Complex gamma, digamma and zeta (with first and second derivatives).

Hand-rolled, double precision, targeting absolute error around 1e-10 on the
vertical lines used by the periodic fluctuations (|Im s| up to roughly 200).
All intermediate quantities with exponential growth are kept in log space so
nothing overflows on the way.
"""

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError

__all__ = [
    "EULER_GAMMA",
    "gamma_c",
    "loggamma_c",
    "digamma_c",
    "zeta_c",
    "bernoulli",
]

EULER_GAMMA = 0.5772156649015328606

# Lanczos coefficients for g = 607/128, 15 terms (Godfrey's set); this is
# the smallest standard set reaching ~1e-13 relative error in double
# precision, which the more common 9-term g=7 set does not
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

_LOG_SQRT_2PI = 0.9189385332046727418


def _is_nonpositive_int(s):
    return s.imag == 0.0 and s.real <= 0.0 and s.real == int(s.real)


def _log_sin(z):
    """log(sin z), stable for large |Im z| (branch only fixed mod 2*pi*i)."""
    if abs(z.imag) < 20.0:
        return cmath.log(cmath.sin(z))
    if z.imag > 0:
        # sin z = e^{-iz}(1 - e^{2iz}) * i/2 with |e^{2iz}| tiny
        return -1j * z + cmath.log(1.0 - cmath.exp(2j * z)) + cmath.log(0.5j)
    return 1j * z + cmath.log(1.0 - cmath.exp(-2j * z)) + cmath.log(-0.5j)


def loggamma_c(s):
    """log Gamma(s), correct modulo 2*pi*i (enough to exponentiate)."""
    s = complex(s)
    if _is_nonpositive_int(s):
        raise DomainError(f"gamma pole at {s}")
    if s.real < 0.5:
        # reflection: Gamma(s)Gamma(1-s) = pi/sin(pi s)
        return math.log(math.pi) - _log_sin(math.pi * s) - loggamma_c(1.0 - s)
    acc = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (s - 1.0 + k)
    t = s + _LANCZOS_G - 0.5
    return _LOG_SQRT_2PI + (s - 0.5) * cmath.log(t) - t + cmath.log(acc)


def gamma_c(s):
    return cmath.exp(loggamma_c(s))


def _cot(z):
    """cot z, stable for large |Im z|."""
    if abs(z.imag) < 20.0:
        return cmath.cos(z) / cmath.sin(z)
    if z.imag > 0:
        e = cmath.exp(2j * z)  # tiny
        return 1j * (e + 1.0) / (e - 1.0)
    e = cmath.exp(-2j * z)  # tiny
    return 1j * (1.0 + e) / (1.0 - e)


def digamma_c(s):
    """psi(s) = Gamma'(s)/Gamma(s)."""
    s = complex(s)
    if _is_nonpositive_int(s):
        raise DomainError(f"digamma pole at {s}")
    if s.real < 0:
        # psi(1-s) = psi(s) + pi*cot(pi*s)
        return digamma_c(1.0 - s) - math.pi * _cot(math.pi * s)
    acc = 0.0 + 0.0j
    while abs(s) < 12.0:
        acc -= 1.0 / s
        s += 1.0
    # asymptotic series: log s - 1/(2s) - sum B_{2j}/(2j s^{2j})
    inv2 = 1.0 / (s * s)
    term = inv2
    tail = 0.0 + 0.0j
    for j in range(1, 9):
        tail += float(bernoulli(2 * j)) / (2 * j) * term
        term *= inv2
    return acc + cmath.log(s) - 0.5 / s - tail


@lru_cache(maxsize=None)
def bernoulli(m):
    """Exact Bernoulli number B_m (B_1 = -1/2), as a Fraction."""
    if m == 0:
        return Fraction(1)
    # sum_{j=0}^{m} C(m+1, j) B_j = 0
    acc = Fraction(0)
    for j in range(m):
        acc += math.comb(m + 1, j) * bernoulli(j)
    return -acc / (m + 1)


def _zeta_em(s, order):
    """Euler-Maclaurin with termwise derivatives; good for Re(s) > -0.5."""
    big_n = max(30, int(1.2 * abs(s.imag)) + 1)
    # direct terms k^{-s}; derivatives bring down factors of -log k
    z0 = 0.0 + 0.0j
    z1 = 0.0 + 0.0j
    z2 = 0.0 + 0.0j
    for k in range(1, big_n):
        lk = math.log(k)
        p = cmath.exp(-s * lk)
        z0 += p
        z1 -= lk * p
        z2 += lk * lk * p
    ln = math.log(big_n)
    npow = cmath.exp(-s * ln)  # N^{-s}
    # tail integral N^{1-s}/(s-1)
    inv = 1.0 / (s - 1.0)
    t = big_n * npow * inv
    z0 += t
    z1 += t * (-ln - inv)
    z2 += t * (ln * ln + 2.0 * ln * inv + 2.0 * inv * inv)
    # boundary term N^{-s}/2
    z0 += 0.5 * npow
    z1 -= 0.5 * ln * npow
    z2 += 0.5 * ln * ln * npow
    # Bernoulli corrections B_{2j}/(2j)! * (s)_{2j-1} * N^{-s-2j+1}
    p, p1, p2 = 1.0 + 0.0j, 0.0j, 0.0j  # Pochhammer product and derivatives
    scale = float(big_n)  # N^{1-2j} deficit relative to npow, built up stepwise
    for j in range(1, 16):
        for i in (2 * j - 3, 2 * j - 2):
            if i < 0:
                continue
            f = s + i
            p2 = p2 * f + 2.0 * p1
            p1 = p1 * f + p
            p = p * f
        scale /= big_n * big_n
        coeff = float(bernoulli(2 * j) / math.factorial(2 * j)) * scale
        base = coeff * npow
        z0 += base * p
        z1 += base * (p1 - ln * p)
        z2 += base * (p2 - 2.0 * ln * p1 + ln * ln * p)
    if order == 0:
        return z0
    if order == 1:
        return z1
    return z2


def _log_zeta_left(s):
    """log zeta(s) for Re(s) <= -0.5, via the functional equation in log
    space: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)."""
    return (
        s * math.log(2.0)
        + (s - 1.0) * math.log(math.pi)
        + _log_sin(math.pi * s / 2.0)
        + loggamma_c(1.0 - s)
        + cmath.log(_zeta_em(1.0 - s, 0))
    )


def zeta_c(s, order=0):
    """zeta(s) and its first two derivatives.

    order 0 -> zeta(s), 1 -> zeta'(s), 2 -> zeta''(s).  Derivatives left of
    Re(s) = -0.5 are taken from a Cauchy integral over a small circle, since
    differentiating the functional equation termwise is not worth the code.
    """
    s = complex(s)
    if order not in (0, 1, 2):
        raise DomainError("order must be 0, 1 or 2")
    if s == 1.0:
        raise DomainError("zeta pole at s = 1")
    if s.real > -0.5:
        return _zeta_em(s, order)
    if order == 0:
        if s.imag == 0.0 and s.real == int(s.real) and int(s.real) % 2 == 0:
            return 0.0 + 0.0j  # trivial zero; the log route would hit log(0)
        return cmath.exp(_log_zeta_left(s))
    # Cauchy circle, radius small enough to stay away from s = 1
    radius = 0.25
    m = 64
    acc = 0.0 + 0.0j
    for j in range(m):
        w = cmath.exp(2j * math.pi * j / m)
        acc += zeta_c(s + radius * w, 0) / w**order
    acc /= m
    if order == 1:
        return acc / radius
    return 2.0 * acc / (radius * radius)
