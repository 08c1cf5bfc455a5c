"""Exact truncated power series over arbitrary-precision integers.

All generating-function recurrences of the toolkit live here: the
register-bounded tree series, the branch moment series, the reduction-degree
path series and the bivariate fringe series.  No floating point is used in
this module; a division that does not come out integral raises
ExactnessError instead of silently rounding.
"""

import math

from .errors import DomainError, ExactnessError

__all__ = [
    "TruncatedSeries",
    "BivariateSeries",
    "sigma_series",
    "sigma_iterate",
    "base_series",
    "b_r_series",
    "b_r_equal_series",
    "f1_series",
    "f2_series",
    "l_r_series",
    "l_r_equal_series",
    "branch_total_series",
    "fringe_moment_series",
    "h_r_bivariate",
    "catalan",
]


def catalan(n):
    return math.comb(2 * n, n) // (n + 1)


class TruncatedSeries:
    """Coefficients c_0..c_N of a formal power series, exact integers."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = tuple(coeffs)

    @classmethod
    def from_terms(cls, order, terms):
        """Build from {exponent: coefficient}, zero elsewhere."""
        c = [0] * (order + 1)
        for k, v in terms.items():
            if 0 <= k <= order:
                c[k] = v
        return cls(c)

    @property
    def order(self):
        return len(self.c) - 1

    def __getitem__(self, n):
        return self.c[n]

    def __len__(self):
        return len(self.c)

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        shown = ", ".join(str(x) for x in self.c[:8])
        more = ", ..." if len(self.c) > 8 else ""
        return f"TruncatedSeries([{shown}{more}], order={self.order})"

    def valuation(self):
        """Index of the first nonzero coefficient; order+1 if all zero."""
        for i, x in enumerate(self.c):
            if x:
                return i
        return len(self.c)

    def _check(self, other):
        if self.order != other.order:
            raise DomainError("series orders differ")

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries([a + b for a, b in zip(self.c, other.c)])

    def __sub__(self, other):
        self._check(other)
        return TruncatedSeries([a - b for a, b in zip(self.c, other.c)])

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries([a * other for a in self.c])
        self._check(other)
        n = len(self.c)
        a, b = self.c, other.c
        out = [0] * n
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j in range(n - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return TruncatedSeries(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        self._check(other)
        g0 = other.c[0]
        if g0 == 0:
            raise DomainError("division by a series with zero constant term")
        n = len(self.c)
        out = [0] * n
        for i in range(n):
            acc = self.c[i]
            for j in range(1, i + 1):
                gj = other.c[j]
                if gj:
                    acc -= gj * out[i - j]
            q, rem = divmod(acc, g0)
            if rem:
                raise ExactnessError(
                    f"non-integral quotient at coefficient {i}"
                )
            out[i] = q
        return TruncatedSeries(out)

    def compose(self, inner):
        """self(inner(z)), truncated; inner must have valuation >= 1."""
        self._check(inner)
        if inner.valuation() == 0:
            raise DomainError("composition needs a series without constant term")
        n = len(self.c)
        out = TruncatedSeries([self.c[-1]] + [0] * (n - 1))
        for k in range(n - 2, -1, -1):
            out = out * inner
            out = TruncatedSeries((out.c[0] + self.c[k],) + out.c[1:])
        return out

    def shift_mul_z(self):
        """Multiply by z (truncated)."""
        return TruncatedSeries((0,) + self.c[:-1])


def _one(order):
    return TruncatedSeries.from_terms(order, {0: 1})


def _z(order):
    return TruncatedSeries.from_terms(order, {1: 1})


def sigma_series(order):
    """z^2/(1-2z)^2; coefficient of z^n is (n-1)*2^(n-2) for n >= 2."""
    c = [0] * (order + 1)
    for n in range(2, order + 1):
        c[n] = (n - 1) << (n - 2)
    return TruncatedSeries(c)


def sigma_iterate(r, order):
    """r-fold composition of sigma with itself (r = 0 gives z)."""
    s = _z(order)
    sig = sigma_series(order)
    for _ in range(r):
        s = s.compose(sig)
    return s


_BASE_NAMES = ("catalan_B", "inv_sqrt_1m4z", "F0_second", "chain_C", "L_all")


def base_series(name, order):
    """Seed series with known closed-form integer coefficients."""
    c = [0] * (order + 1)
    if name == "catalan_B":
        for n in range(order + 1):
            c[n] = catalan(n)
    elif name == "inv_sqrt_1m4z":
        for n in range(order + 1):
            c[n] = math.comb(2 * n, n)
    elif name == "F0_second":
        for n in range(1, order + 1):
            c[n] = 2 * (2 * n - 1) * math.comb(2 * n - 2, n - 1)
    elif name == "chain_C":
        for n in range(1, order + 1):
            c[n] = 1 << (n - 1)
    elif name == "L_all":
        for n in range(1, order + 1):
            c[n] = 4**n
    else:
        raise DomainError(f"unknown base series {name!r}; know {_BASE_NAMES}")
    return TruncatedSeries(c)


def b_r_series(r, order):
    """Trees reducible to a leaf in at most r steps (register <= r)."""
    if r < 0:
        raise DomainError("r must be nonnegative")
    f = _one(order)
    chain = base_series("chain_C", order)
    sig = sigma_series(order)
    for _ in range(r):
        f = _one(order) + chain * f.compose(sig)
    return f


def b_r_equal_series(r, order):
    """Trees with register exactly r; the constant series 1 for r = 0."""
    if r == 0:
        return _one(order)
    return b_r_series(r, order) - b_r_series(r - 1, order)


def _chain_recurrence(seed, r, order):
    f = base_series(seed, order)
    chain = base_series("chain_C", order)
    sig = sigma_series(order)
    for _ in range(r):
        f = chain * f.compose(sig)
    return f


def f1_series(r, order):
    """Sum over all size-n trees of the number of r-branches, per n."""
    return _chain_recurrence("inv_sqrt_1m4z", r, order)


def f2_series(r, order):
    """Sum over all size-n trees of (#r-branches)(#r-branches - 1), per n."""
    return _chain_recurrence("F0_second", r, order)


def l_r_series(r, order):
    """Paths with reduction degree <= r."""
    if r < 0:
        raise DomainError("r must be nonnegative")
    f = TruncatedSeries.from_terms(order, {1: 4})
    sig = sigma_series(order)
    four_z = TruncatedSeries.from_terms(order, {1: 4})
    for _ in range(r):
        f = 4 * f.compose(sig) + four_z
    return f


def l_r_equal_series(r, order):
    """Paths with reduction degree exactly r."""
    if r == 0:
        return TruncatedSeries.from_terms(order, {1: 4})
    return l_r_series(r, order) - l_r_series(r - 1, order)


def branch_total_series(order):
    """Sum over all size-n trees of the total branch count, per n."""
    total = TruncatedSeries([0] * (order + 1))
    r = 0
    while (1 << r) - 1 <= order:
        total = total + f1_series(r, order)
        r += 1
    return total


def fringe_moment_series(r, order, moment="first"):
    """Moment series of the r-th fringe size, via sigma iteration.

    moment="first": coefficient of z^n is the sum of |fringe_r| over all
    paths of length n.  moment="second_factorial_combined": sum of
    X(X-1) + X, i.e. the sum of X^2.
    """
    s = sigma_iterate(r, order)
    one = _one(order)
    denom = one - 4 * s
    if moment == "first":
        return (4 ** (r + 1)) * s / (denom * denom)
    if moment == "second_factorial_combined":
        return (4 ** (r + 1)) * (s * (one + 4 * s)) / (denom * denom * denom)
    raise DomainError(f"unknown moment {moment!r}")


class BivariateSeries:
    """Series in z whose coefficients are integer polynomials in v.

    Coefficient storage: rows[n] is a dict {v-degree: int}.
    """

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [dict(row) for row in rows]

    @property
    def order(self):
        return len(self.rows) - 1

    def row(self, n):
        return dict(self.rows[n])

    def __eq__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        norm = lambda rows: [
            {k: v for k, v in r.items() if v} for r in rows
        ]
        return norm(self.rows) == norm(other.rows)

    def scale(self, factor):
        return BivariateSeries(
            [{m: factor * a for m, a in row.items()} for row in self.rows]
        )

    def add_row(self, n, m, value):
        self.rows[n][m] = self.rows[n].get(m, 0) + value

    def mul_univariate(self, g):
        """Multiply by a TruncatedSeries in z (same order)."""
        if g.order != self.order:
            raise DomainError("series orders differ")
        out = BivariateSeries([{} for _ in self.rows])
        for i, row in enumerate(self.rows):
            if not row:
                continue
            for j in range(len(self.rows) - i):
                gj = g[j]
                if not gj:
                    continue
                for m, a in row.items():
                    out.add_row(i + j, m, a * gj)
        return out

    def compose_z(self, inner):
        """Substitute z -> inner(z); v is untouched."""
        if inner.valuation() == 0:
            raise DomainError("composition needs a series without constant term")
        n = len(self.rows)
        out = BivariateSeries([dict(self.rows[-1])] + [{} for _ in range(n - 1)])
        for k in range(n - 2, -1, -1):
            out = out.mul_univariate(inner)
            for m, a in self.rows[k].items():
                out.add_row(0, m, a)
        return out

    def eval_moment(self, which="first"):
        """Collapse v: first moment sum m*c, or sum m^2*c ("second_raw")."""
        if which == "first":
            weight = lambda m: m
        elif which == "second_raw":
            weight = lambda m: m * m
        else:
            raise DomainError(f"unknown moment {which!r}")
        return TruncatedSeries(
            [sum(weight(m) * a for m, a in row.items()) for row in self.rows]
        )


def h_r_bivariate(r, order):
    """Bivariate fringe series: v marks the r-th fringe size, z the length."""
    if r < 0:
        raise DomainError("r must be nonnegative")
    rows = [{} for _ in range(order + 1)]
    for n in range(1, order + 1):
        rows[n][n] = 4**n
    h = BivariateSeries(rows)
    sig = sigma_series(order)
    for _ in range(r):
        h = h.compose_z(sig).scale(4)
    return h
