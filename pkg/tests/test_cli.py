import csv
import io

import pytest

from redcalc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestTree:
    def test_reduce(self, capsys):
        code, out, _ = run(capsys, "tree", "reduce", "((. .) (. (. .)))")
        assert code == 0
        assert out == "(. .)\n"

    def test_register(self, capsys):
        code, out, _ = run(capsys, "tree", "register", "((. .) (. .))")
        assert code == 0
        assert out == "2\n"

    def test_branches(self, capsys):
        code, out, _ = run(capsys, "tree", "branches", "((. .) (. .))")
        assert code == 0
        assert out == "r=0:4 r=1:2 r=2:1 total:7\n"

    def test_parse_error_exit_code(self, capsys):
        code, _, err = run(capsys, "tree", "register", "((. .)")
        assert code == 2
        assert "redcalc:" in err

    def test_reduce_leaf_is_domain_error(self, capsys):
        code, _, err = run(capsys, "tree", "reduce", ".")
        assert code == 3


class TestPath:
    def test_reduce(self, capsys):
        code, out, _ = run(capsys, "path", "reduce", "RRUULD")
        assert (code, out) == (0, "RL\n")

    def test_rdeg(self, capsys):
        code, out, _ = run(capsys, "path", "rdeg", "RRUULD")
        assert (code, out) == (0, "2\n")

    def test_fringes(self, capsys):
        code, out, _ = run(capsys, "path", "fringes", "RRUULD")
        assert (code, out) == (0, "6 2 1\n")

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "path", "rdeg", "RRX")
        assert code == 2

    def test_single_step_reduce_is_domain_error(self, capsys):
        code, _, err = run(capsys, "path", "reduce", "R")
        assert code == 3


class TestTable:
    def test_exact_mean(self, capsys):
        code, out, _ = run(
            capsys, "table", "r-branches-mean", "--n", "4", "--r", "1"
        )
        assert code == 0
        assert out.startswith("10/7 ")

    def test_backends_agree(self, capsys):
        for method in ("exact", "series", "oracle"):
            code, out, _ = run(
                capsys, "table", "r-branches-mean",
                "--n", "6", "--r", "1", "--method", method, "--check",
            )
            assert code == 0
            assert out.startswith("21/11")

    def test_series_coefficients_human(self, capsys):
        code, out, _ = run(
            capsys, "table", "series-coefficients",
            "--family", "B", "--r", "2", "--order", "9",
        )
        assert code == 0
        assert out == "1, 1, 2, 5, 14, 42, 132, 428, 1416, 4744\n"

    def test_series_coefficients_csv(self, capsys):
        code, out, _ = run(
            capsys, "table", "series-coefficients",
            "--family", "L", "--r", "1", "--order", "5", "--format", "csv",
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert rows[0] == {"family": "L", "r": "1", "n": "0", "coeff": "0"}
        assert [r["coeff"] for r in rows] == ["0", "4", "16", "64", "192", "512"]

    def test_bivariate_csv(self, capsys):
        code, out, _ = run(
            capsys, "table", "series-coefficients",
            "--family", "H", "--r", "1", "--order", "4", "--format", "csv",
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        got = {(r["n"], r["v_degree"]): r["coeff"] for r in rows}
        assert got[("4", "1")] == "192"
        assert got[("4", "2")] == "64"

    def test_rdeg_dist(self, capsys):
        code, out, _ = run(capsys, "table", "rdeg-dist", "--n", "2", "--check")
        assert code == 0
        assert out == "r=1: 16/16\n"

    def test_rdeg_dist_n4(self, capsys):
        code, out, _ = run(capsys, "table", "rdeg-dist", "--n", "4")
        assert out == "r=1: 192/256\nr=2: 64/256\n"

    def test_csv_value_roundtrip(self, capsys):
        code, out, _ = run(
            capsys, "table", "fringe-mean",
            "--n", "10", "--r", "1", "--format", "csv",
        )
        assert code == 0
        (row,) = list(csv.DictReader(io.StringIO(out)))
        assert (row["numerator"], row["denominator"]) == ("11", "4")
        assert float(row["value"]) == 2.75

    def test_asymptotic_method(self, capsys):
        code, out, _ = run(
            capsys, "table", "branches-total-mean",
            "--n", "1024", "--method", "asymptotic",
        )
        assert code == 0
        from redcalc import exact

        want = float(exact.expected_total_branches(1024))
        assert abs(float(out) - want) < 0.01

    def test_oracle_respects_cap(self, capsys):
        code, _, err = run(
            capsys, "table", "rdeg-mean",
            "--n", "9", "--method", "oracle", "--cap-paths", "8",
        )
        assert code == 1
        assert "not applicable" in err


class TestFigure:
    def test_csv_shape_and_agreement(self, capsys):
        code, out, _ = run(
            capsys, "figure", "branches-fluctuation",
            "--x-min", "4", "--x-max", "5", "--points", "9",
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert rows
        for row in rows:
            n = int(row["n"])
            assert 256 <= n <= 1024
            resid = float(row["residual"])
            delta = float(row["delta_fourier"])
            assert abs(resid - delta) < 0.01

    def test_fourier_terms_saturate(self, capsys):
        _, one, _ = run(
            capsys, "figure", "fringe-fluctuation",
            "--x-min", "3", "--x-max", "4", "--points", "5", "--terms", "1",
        )
        _, many, _ = run(
            capsys, "figure", "fringe-fluctuation",
            "--x-min", "3", "--x-max", "4", "--points", "5", "--terms", "20",
        )
        d1 = [float(r["delta_fourier"]) for r in csv.DictReader(io.StringIO(one))]
        d20 = [float(r["delta_fourier"]) for r in csv.DictReader(io.StringIO(many))]
        assert max(abs(a - b) for a, b in zip(d1, d20)) < 1e-3
        assert any(abs(a - b) > 1e-9 for a, b in zip(d1, d20))

    def test_cap(self, capsys):
        code, _, err = run(
            capsys, "figure", "branches-fluctuation",
            "--x-min", "9", "--x-max", "10", "--points", "3",
        )
        assert code == 5


class TestOut:
    def test_writes_file(self, tmp_path, capsys):
        target = tmp_path / "out.txt"
        code, out, _ = run(
            capsys, "path", "rdeg", "RRUULD", "--out", str(target)
        )
        assert code == 0
        assert out == ""
        assert target.read_text() == "2\n"


class TestVerify:
    def test_quick_reports_known_honest_failure(self, capsys):
        # every group passes except the asymptotic-residual tolerance, which
        # is genuinely unattainable at its stated scale; see the acceptance
        # suite for the measured residual
        code, out, _ = run(capsys, "verify", "--quick", "--threads", "2")
        lines = out.strip().splitlines()
        status = dict(line.split(": ", 1) for line in lines)
        assert status["identities"] == "PASS"
        assert status["three-way-cross-validation"] == "PASS"
        assert status["bounds-and-sharpness"] == "PASS"
        assert status["clt-sampling"] == "PASS"
        assert status["asymptotic-residuals"].startswith("FAIL")
        assert status["result"] == "FAIL"
        assert code == 1

    def test_quick_deterministic_across_threads(self, capsys):
        _, a, _ = run(capsys, "verify", "--quick", "--seed", "7", "--threads", "1")
        _, b, _ = run(capsys, "verify", "--quick", "--seed", "7", "--threads", "4")
        assert a == b
