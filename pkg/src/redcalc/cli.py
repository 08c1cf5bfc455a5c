"""Command-line entry point.

Subcommands: tree / path (single-object reductions), table (exact and
asymptotic quantities, optionally cross-checked between backends), figure
(fluctuation CSV data), verify (the full invariant suite).

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 domain error,
4 cross-backend mismatch, 5 resource cap.
"""

import argparse
import math
import os
import sys
from fractions import Fraction

from . import asym, exact, oracle, series
from .errors import MismatchError, RedcalcError, ResourceCapError
from .paths import fringe_sizes, parse_path, rdeg, reduce_path, extremal_path
from .trees import (
    almost_complete,
    branch_counts,
    format_tree,
    parse_tree,
    reduce_tree,
    register,
)

FIGURE_N_CAP = 100000


def _threads(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("REDCALC_THREADS")
    if env is not None:
        return int(env)
    return os.cpu_count() or 1


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return f"{q.numerator}"
    return f"{q.numerator}/{q.denominator} ({float(q):.10g})"


# ---------------------------------------------------------------------------
# tree / path

def cmd_tree(args):
    t = parse_tree(args.tree)
    if args.action == "reduce":
        _emit(args, format_tree(reduce_tree(t)) + "\n")
    elif args.action == "register":
        _emit(args, f"{register(t)}\n")
    else:
        bc = branch_counts(t)
        parts = [f"r={r}:{c}" for r, c in enumerate(bc.counts)]
        _emit(args, " ".join(parts) + f" total:{bc.total}\n")
    return 0


def cmd_path(args):
    p = parse_path(args.path)
    if args.action == "reduce":
        _emit(args, reduce_path(p) + "\n")
    elif args.action == "rdeg":
        _emit(args, f"{rdeg(p)}\n")
    else:
        _emit(args, " ".join(str(s) for s in fringe_sizes(p)) + "\n")
    return 0


# ---------------------------------------------------------------------------
# table

def _series_family(family, r, order):
    if family == "B":
        return series.b_r_series(r, order)
    if family == "Beq":
        return series.b_r_equal_series(r, order)
    if family == "F1":
        return series.f1_series(r, order)
    if family == "F2":
        return series.f2_series(r, order)
    if family == "L":
        return series.l_r_series(r, order)
    if family == "Leq":
        return series.l_r_equal_series(r, order)
    if family == "sigma":
        return series.sigma_iterate(r, order)
    if family == "branch-total":
        return series.branch_total_series(order)
    raise RedcalcError(f"unknown series family {family!r}")


def _poly_in_v(row):
    if not row:
        return "0"
    terms = []
    for m in sorted(row, reverse=True):
        c = row[m]
        if m == 0:
            terms.append(str(c))
        elif m == 1:
            terms.append(f"{c}v")
        else:
            terms.append(f"{c}v^{m}")
    return " + ".join(terms)


def _quantity_backends(quantity, n, r, threads, cap_trees, cap_paths):
    """Exact value of one scalar quantity per backend name."""
    out = {}
    if quantity == "r-branches-mean":
        out["exact"] = exact.expected_r_branches(n, r)
        order = max(n, 1)
        cat = series.catalan(n)
        out["series"] = Fraction(series.f1_series(r, order)[n], cat)
        if n <= cap_trees:
            st = oracle.tree_stats(n, r_max=r, threads=threads, cap=cap_trees)
            out["oracle"] = st.per_r[r].mean()
    elif quantity == "branches-total-mean":
        out["exact"] = exact.expected_total_branches(n)
        out["series"] = Fraction(
            series.branch_total_series(max(n, 1))[n], series.catalan(n)
        )
        if n <= cap_trees:
            st = oracle.tree_stats(n, threads=threads, cap=cap_trees)
            out["oracle"] = st.total.mean()
    elif quantity == "rdeg-mean":
        out["exact"] = exact.expected_rdeg(n)
        if n <= cap_paths:
            st = oracle.path_stats(n, threads=threads, cap=cap_paths)
            out["oracle"] = st.rdeg.mean()
    elif quantity == "fringe-mean":
        out["exact"] = exact.expected_fringe(n, r)
        out["series"] = Fraction(
            series.fringe_moment_series(r, max(n, 1))[n], 4**n
        )
        if n <= cap_paths:
            st = oracle.path_stats(n, r_max=r, threads=threads, cap=cap_paths)
            out["oracle"] = st.per_r[r].mean()
    elif quantity == "fringe-total-mean":
        out["exact"] = exact.expected_total_fringe(n)
        if n <= cap_paths:
            st = oracle.path_stats(n, threads=threads, cap=cap_paths)
            out["oracle"] = st.total.mean()
    else:
        raise RedcalcError(f"unknown quantity {quantity!r}")
    return out


def _asymptotic_value(quantity, n, r, terms):
    if quantity == "r-branches-mean":
        return asym.asy_r_branch_mean(n, r).value
    if quantity == "branches-total-mean":
        return asym.asy_total_branches_mean(n, terms).value
    if quantity == "rdeg-mean":
        return asym.asy_rdeg(n, terms, "mean").value
    if quantity == "fringe-mean":
        return asym.asy_fringe(n, r, "mean").value
    if quantity == "fringe-total-mean":
        return asym.asy_total_fringe_mean(n, terms).value
    raise RedcalcError(f"no asymptotic backend for {quantity!r}")


def cmd_table(args):
    threads = _threads(args)
    if args.quantity == "series-coefficients":
        r = args.r if args.r is not None else 1
        order = args.order
        if args.family == "H":
            h = series.h_r_bivariate(r, order)
            if args.format == "csv":
                lines = ["family,r,n,v_degree,coeff"]
                for n in range(order + 1):
                    for m in sorted(h.row(n)):
                        lines.append(f"H,{r},{n},{m},{h.row(n)[m]}")
            else:
                lines = [f"[z^{n}] {_poly_in_v(h.row(n))}" for n in range(order + 1)]
            _emit(args, "\n".join(lines) + "\n")
            return 0
        f = _series_family(args.family, r, order)
        if args.format == "csv":
            lines = ["family,r,n,coeff"]
            lines += [f"{args.family},{r},{n},{f[n]}" for n in range(order + 1)]
            _emit(args, "\n".join(lines) + "\n")
        else:
            _emit(args, ", ".join(str(f[n]) for n in range(order + 1)) + "\n")
        return 0

    if args.quantity == "rdeg-dist":
        n = args.n
        rows = []
        for r in range(max(n.bit_length() - 1, 1) + 1):
            c = exact.count_paths_rdeg(n, r)
            if c:
                rows.append((r, c))
        if args.check and n <= args.cap_paths:
            st = oracle.path_stats(n, threads=threads, cap=args.cap_paths)
            if dict(rows) != st.rdeg_hist:
                raise MismatchError(
                    f"rdeg distribution mismatch at n={n}: "
                    f"closed form {dict(rows)} vs oracle {st.rdeg_hist}"
                )
        if args.format == "csv":
            lines = ["quantity,n,r,numerator,denominator,value"]
            for r, c in rows:
                lines.append(f"rdeg-dist,{n},{r},{c},{4**n},{c / 4**n!r}")
        else:
            lines = [f"r={r}: {c}/{4**n}" for r, c in rows]
        _emit(args, "\n".join(lines) + "\n")
        return 0

    n, r = args.n, args.r
    if args.method == "asymptotic":
        value = _asymptotic_value(args.quantity, n, r, args.terms)
        _emit(args, f"{value!r}\n")
        return 0
    values = _quantity_backends(
        args.quantity, n, r, threads, args.cap_trees, args.cap_paths
    )
    if args.check:
        distinct = set(values.values())
        if len(distinct) > 1:
            raise MismatchError(
                f"backend mismatch for {args.quantity} at n={n}, r={r}: "
                + ", ".join(f"{k}={v}" for k, v in values.items())
            )
    if args.method not in values:
        raise RedcalcError(
            f"backend {args.method!r} not applicable (have {sorted(values)})"
        )
    q = values[args.method]
    if args.format == "csv":
        lines = ["quantity,n,r,numerator,denominator,value"]
        lines.append(
            f"{args.quantity},{n},{'' if r is None else r},"
            f"{q.numerator},{q.denominator},{float(q)!r}"
        )
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _fmt_rational(q) + "\n")
    return 0


# ---------------------------------------------------------------------------
# figure

_FIGURES = {
    "branches-fluctuation": dict(
        exact=exact.expected_total_branches,
        family="branches-total",
        smooth=lambda n: (
            4.0 * n / 3.0
            + math.log(n) / math.log(4.0) / 6.0
            - 2.0 * asym.zeta_c(-1, 1).real / math.log(2.0)
            - asym.EULER_GAMMA / (12.0 * math.log(2.0))
            - 1.0 / (6.0 * math.log(2.0))
            + 43.0 / 36.0
        ),
        default_range=(2.0, 5.0),
    ),
    "fringe-fluctuation": dict(
        exact=exact.expected_total_fringe,
        family="fringe-total",
        smooth=lambda n: (
            4.0 * n / 3.0
            + math.log(n) / math.log(4.0) / 3.0
            + (5.0 + 3.0 * asym.EULER_GAMMA - 11.0 * math.log(2.0))
            / (18.0 * math.log(2.0))
        ),
        default_range=(1.0, 4.0),
    ),
}


def figure_rows(figure, x_min, x_max, points, terms):
    """Grid rows (x, n, exact, smooth, residual, delta) for one figure."""
    spec = _FIGURES[figure]
    fluc = asym.fluctuation(spec["family"], terms)
    rows = []
    seen = set()
    for i in range(points):
        x = x_min + (x_max - x_min) * i / (points - 1)
        n = round(4.0**x)
        if n < 2 or n in seen:
            continue
        seen.add(n)
        if n > FIGURE_N_CAP:
            raise ResourceCapError(f"figure grid capped at n = {FIGURE_N_CAP}")
        x_n = math.log(n) / math.log(4.0)
        ev = float(spec["exact"](n))
        smooth = spec["smooth"](n)
        rows.append((x_n, n, ev, smooth, ev - smooth, fluc(x_n)))
    return rows


def cmd_figure(args):
    x_min, x_max = _FIGURES[args.figure]["default_range"]
    if args.x_min is not None:
        x_min = args.x_min
    if args.x_max is not None:
        x_max = args.x_max
    rows = figure_rows(args.figure, x_min, x_max, args.points, args.terms)
    lines = ["x,n,exact,asymptotic_smooth,residual,delta_fourier"]
    for x, n, ev, smooth, residual, delta in rows:
        lines.append(f"{x!r},{n},{ev!r},{smooth!r},{residual!r},{delta!r}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# verify

def _verify_identities(order):
    cat = series.base_series("catalan_B", order)
    sig = series.sigma_series(order)
    chain = series.base_series("chain_C", order)
    one = series.TruncatedSeries.from_terms(order, {0: 1})
    # tree functional equation: B = 1 + C * B(sigma)
    if cat != one + chain * cat.compose(sig):
        return "tree functional equation fails"
    # path functional equation: L = 4 L(sigma) + 4z
    lat = series.base_series("L_all", order)
    four_z = series.TruncatedSeries.from_terms(order, {1: 4})
    if lat != 4 * lat.compose(sig) + four_z:
        return "path functional equation fails"
    # Touchard's identity, n <= 30
    for n in range(31):
        acc = sum(
            series.catalan(k) * 2 ** (n - 2 * k) * math.comb(n, 2 * k)
            for k in range(n // 2 + 1)
        )
        if acc != series.catalan(n + 1):
            return f"Touchard's identity fails at n={n}"
    # reduction degrees partition all paths
    for n in range(1, order + 1):
        total = sum(
            exact.count_paths_rdeg(n, r) for r in range(n.bit_length())
        )
        if total != 4**n:
            return f"rdeg counts do not sum to 4^{n}"
    return None


def _verify_three_way(tree_max, path_max, threads):
    for n in range(tree_max + 1):
        st = oracle.tree_stats(n, threads=threads)
        cat = series.catalan(n)
        order = max(n, 1)
        for r, acc in enumerate(st.per_r):
            if acc.total != series.f1_series(r, order)[n]:
                return f"tree first moment mismatch at n={n}, r={r}"
            if acc.factorial_moment_sum() != series.f2_series(r, order)[n]:
                return f"tree second moment mismatch at n={n}, r={r}"
            if acc.mean() != exact.expected_r_branches(n, r):
                return f"tree closed form mismatch at n={n}, r={r}"
        if st.total.total != series.branch_total_series(order)[n]:
            return f"branch total series mismatch at n={n}"
        if st.total.mean() != exact.expected_total_branches(n):
            return f"branch total closed form mismatch at n={n}"
        for r, count in st.register_hist.items():
            if series.b_r_equal_series(r, order)[n] != count:
                return f"register histogram mismatch at n={n}, r={r}"
    for n in range(1, path_max + 1):
        st = oracle.path_stats(n, threads=threads)
        order = max(n, 1)
        for r, count in st.rdeg_hist.items():
            if exact.count_paths_rdeg(n, r) != count:
                return f"rdeg count mismatch at n={n}, r={r}"
            if series.l_r_equal_series(r, order)[n] != count:
                return f"rdeg series mismatch at n={n}, r={r}"
        if st.rdeg.mean() != exact.expected_rdeg(n):
            return f"rdeg mean mismatch at n={n}"
        for r, acc in enumerate(st.per_r):
            if acc.total != series.fringe_moment_series(r, order)[n]:
                return f"fringe moment series mismatch at n={n}, r={r}"
            if acc.mean() != exact.expected_fringe(n, r):
                return f"fringe closed form mismatch at n={n}, r={r}"
            hrow = series.h_r_bivariate(r, order).eval_moment("first")[n]
            if acc.total != hrow:
                return f"bivariate fringe series mismatch at n={n}, r={r}"
        if st.total.mean() != exact.expected_total_fringe(n):
            return f"total fringe closed form mismatch at n={n}"
    return None


def _verify_bounds(tree_max, path_max, extremal_max, threads):
    for n in range(tree_max + 1):
        st = oracle.tree_stats(n, threads=threads)
        for r, acc in enumerate(st.per_r):
            if r == 0:
                if not (acc.min == acc.max == n + 1):
                    return f"0-branch count differs from n+1 at n={n}"
                continue
            lo = 1 if (n > 0 and r == 1) else 0
            hi = (n + 1) >> r
            if acc.count and not (acc.min == lo and (acc.max or 0) == hi):
                return f"r-branch bounds not sharp at n={n}, r={r}"
        w2 = bin(n + 1).count("1")
        if st.total.min != n + 1 + (1 if n > 0 else 0):
            return f"total branch lower bound not sharp at n={n}"
        if st.total.max != 2 * n + 2 - w2:
            return f"total branch upper bound not sharp at n={n}"
    for n in range(1, path_max + 1):
        st = oracle.path_stats(n, threads=threads)
        if st.rdeg.min != (1 if n > 1 else 0):
            return f"rdeg lower bound not sharp at n={n}"
        if st.rdeg.max != n.bit_length() - 1:
            return f"rdeg upper bound not sharp at n={n}"
        for r, acc in enumerate(st.per_r):
            if r == 0:
                if not (acc.min == acc.max == n):
                    return f"0th fringe differs from n at n={n}"
                continue
            lo = 1 if (n > 1 and r == 1) else 0
            hi = n >> r
            if not (acc.min == lo and acc.max == hi):
                return f"fringe bounds not sharp at n={n}, r={r}"
        w2 = bin(n).count("1")
        if st.total.min != n + (1 if n > 1 else 0):
            return f"total fringe lower bound not sharp at n={n}"
        if st.total.max != 2 * n - w2:
            return f"total fringe upper bound not sharp at n={n}"
    for m in range(2, 130):
        got = reduce_tree(almost_complete(m))
        want = almost_complete(m // 2)
        if format_tree(got) != format_tree(want):
            return f"almost-complete reduction fails at m={m}"
    for n in range(1, extremal_max + 1):
        p = extremal_path(n)
        if len(p) != n or (n > 1 and rdeg(p) != n.bit_length() - 1):
            return f"extremal path fails at n={n}"
    return None


def _verify_residuals():
    for r in (1, 2, 3):
        diff = abs(
            asym.asy_r_branch_mean(100, r).value
            - float(exact.expected_r_branches(100, r))
        )
        if diff > 1e-3:
            return f"r-branch mean residual {diff} at n=100, r={r}"
    for n in (256, 1024, 4096):
        checks = (
            (asym.asy_total_branches_mean(n).value, exact.expected_total_branches(n)),
            (asym.asy_rdeg(n, which="mean").value, exact.expected_rdeg(n)),
            (asym.asy_total_fringe_mean(n).value, exact.expected_total_fringe(n)),
        )
        for got, want in checks:
            if abs(got - float(want)) > 0.01:
                return f"asymptotic residual {abs(got - float(want))} at n={n}"
    for n in range(2, 65):
        got = asym.asy_count_rdeg(n, 1)
        want = exact.count_paths_rdeg(n, 1)
        if abs(got - want) > 1e-9 * want:
            return f"rdeg count expansion not exact at n={n}, r=1"
    return None


def _verify_clt(seed, samples, n):
    gen = oracle.SeededGenerator(seed)
    for kind, r in (("tree", 1), ("path", 2)):
        ks = oracle.clt_check(n, r, samples, gen.split(f"clt:{kind}"), kind=kind)
        if ks > 0.02:
            # documented one-retry policy: a stochastic threshold gets a
            # second fixed seed before the group is declared failed
            retry = oracle.clt_check(
                n, r, samples, gen.split(f"clt-retry:{kind}"), kind=kind
            )
            if retry > 0.02:
                return f"{kind} KS distance {ks} then {retry} at n={n}, r={r}"
    return None


def cmd_verify(args):
    threads = _threads(args)
    if args.full:
        scale = dict(
            order=64, tree_max=12, path_max=10, extremal_max=4096,
            clt_samples=100000, clt_n=1000,
        )
    else:
        scale = dict(
            order=32, tree_max=8, path_max=7, extremal_max=512,
            clt_samples=20000, clt_n=200,
        )
    groups = [
        ("identities", lambda: _verify_identities(scale["order"])),
        (
            "three-way-cross-validation",
            lambda: _verify_three_way(
                scale["tree_max"], scale["path_max"], threads
            ),
        ),
        (
            "bounds-and-sharpness",
            lambda: _verify_bounds(
                scale["tree_max"], scale["path_max"], scale["extremal_max"], threads
            ),
        ),
        ("asymptotic-residuals", _verify_residuals),
        (
            "clt-sampling",
            lambda: _verify_clt(args.seed, scale["clt_samples"], scale["clt_n"]),
        ),
    ]
    lines = []
    failed = False
    for name, run in groups:
        problem = run()
        if problem is None:
            lines.append(f"{name}: PASS")
        else:
            lines.append(f"{name}: FAIL ({problem})")
            failed = True
    lines.append(f"result: {'FAIL' if failed else 'PASS'}")
    _emit(args, "\n".join(lines) + "\n")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# argument parsing

def build_parser():
    parser = argparse.ArgumentParser(
        prog="redcalc",
        description="Exact and asymptotic statistics of tree and path reductions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--format", choices=("human", "csv"), default="human")
        p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("tree", help="reduce or analyze one binary tree")
    p.add_argument("action", choices=("reduce", "register", "branches"))
    p.add_argument("tree", help='tree literal, e.g. "(. (. .))"')
    common(p)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("path", help="reduce or analyze one lattice path")
    p.add_argument("action", choices=("reduce", "rdeg", "fringes"))
    p.add_argument("path", help='path literal over U, R, D, L, e.g. "RRUD"')
    common(p)
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("table", help="tabulate exact or asymptotic quantities")
    p.add_argument(
        "quantity",
        choices=(
            "r-branches-mean",
            "branches-total-mean",
            "rdeg-dist",
            "rdeg-mean",
            "fringe-mean",
            "fringe-total-mean",
            "series-coefficients",
        ),
    )
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--order", type=int, default=9)
    p.add_argument("--terms", type=int, default=20, help="Fourier summands K")
    p.add_argument(
        "--family",
        choices=("B", "Beq", "F1", "F2", "L", "Leq", "H", "sigma", "branch-total"),
        default="B",
    )
    p.add_argument(
        "--method",
        choices=("exact", "series", "oracle", "asymptotic"),
        default="exact",
    )
    p.add_argument("--check", action="store_true")
    p.add_argument("--cap-trees", type=int, default=oracle.TREE_CAP)
    p.add_argument("--cap-paths", type=int, default=oracle.PATH_CAP)
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("figure", help="export fluctuation figure data as CSV")
    p.add_argument("figure", choices=tuple(_FIGURES))
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--points", type=int, default=61)
    p.add_argument("--terms", type=int, default=20)
    common(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", help="run the invariant suite")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--quick", action="store_true")
    mode.add_argument("--full", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RedcalcError as e:
        print(f"redcalc: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
