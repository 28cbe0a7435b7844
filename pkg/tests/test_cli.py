import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from harmonic_expansions.cli import UsageError, load_config, main, parse_range
from harmonic_expansions.verification import LAMBDA_TABLE


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


# -- ranges and config -----------------------------------------------------------

@pytest.mark.parametrize("text, want", [("1:10:1", range(1, 11)), ("1:10:3", range(1, 11, 3)), ("5", range(5, 6)), ("2:4", range(2, 5))])
def test_parse_range(text, want):
    assert parse_range(text) == want


@pytest.mark.parametrize("text", ["0:3", "5:1", "1:5:0", "a:b", "1:2:3:4", ""])
def test_parse_range_rejects(text):
    with pytest.raises(UsageError):
        parse_range(text)


def test_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# defaults\nprecision = 96  # bits\nmax-refine=3\nformat = json\n\n")
    assert load_config(path) == {"precision_bits": 96, "max_refinements": 3, "format": "json"}
    path.write_text("colour = blue\n")
    with pytest.raises(UsageError):
        load_config(path)


def test_flags_override_config(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text("format = json\nprecision = 64\n")
    code, out, _ = run(capsys, "coeffs", "dw", "2", "--config", str(path))
    assert code == 0 and json.loads(out)[0]["value"] == "1/24"
    code, out, _ = run(capsys, "coeffs", "dw", "2", "--config", str(path), "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "p,value"


# -- coeffs ---------------------------------------------------------------------

def test_coeffs_ramanujan_csv(capsys):
    code, out, _ = run(capsys, "coeffs", "ramanujan", "9", "--format", "csv")
    assert code == 0
    values = [r["value"] for r in rows_of(out)]
    assert values == [
        "1/12", "-1/120", "1/630", "-1/1680", "1/2310",
        "-191/360360", "29/30030", "-2833/1166880", "140051/17459442",
    ]


def test_coeffs_dw_one(capsys):
    code, out, _ = run(capsys, "coeffs", "dw", "1", "--format", "csv")
    assert code == 0 and out.splitlines()[1] == "1,1/24"


def test_coeffs_euler(capsys):
    code, out, _ = run(capsys, "coeffs", "euler", "3", "--format", "json")
    assert code == 0
    assert [(r["exponent"], r["value"]) for r in json.loads(out)] == [(1, "1/2"), (2, "-1/12"), (4, "1/120")]


def test_coeffs_markdown_default(capsys):
    code, out, _ = run(capsys, "coeffs", "ramanujan", "2")
    assert code == 0 and out.startswith("| p | value |")


@pytest.mark.parametrize("argv", [["coeffs", "stirling", "3"], ["coeffs", "dw", "0"], ["coeffs", "dw", "x"], ["coeffs", "dw", "3", "--format", "xml"]])
def test_coeffs_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


# -- table ----------------------------------------------------------------------

def test_table_ranking(capsys):
    code, out, _ = run(capsys, "table", "1:10:1", "all", "--format", "csv")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 40
    for n in range(2, 11):
        mags = [abs(Fraction(r["error_lo"])) for r in rows if int(r["n"]) == n]
        assert mags == sorted(mags, reverse=True)


def test_table_euler_ratio(capsys):
    code, out, _ = run(capsys, "table", "10000:10000:1", "Euler1", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert Fraction(99, 100) < Fraction(row["ratio_lo"]) and Fraction(row["ratio_hi"]) < Fraction(101, 100)
    assert row["sign"] == "over"
    assert row["truth"].count("/") == 1


def test_table_series_formula(capsys):
    code, out, _ = run(capsys, "table", "5", "RamanujanSeries(4)", "--format", "json")
    assert code == 0 and json.loads(out)[0]["ratio_lo"] == ""


@pytest.mark.parametrize("argv", [["table", "1:10:1"], ["table", "0:3", "Euler1"], ["table", "1:3", "Stirling"], ["table", "x", "Euler1"]])
def test_table_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


# -- sequences ---------------------------------------------------------------------

def test_sequences_lambda_table(capsys):
    code, out, _ = run(capsys, "sequences", "lambda", "1:28:1", "--format", "csv")
    assert code == 0
    for row in rows_of(out):
        printed = Fraction(LAMBDA_TABLE[int(row["n"])])
        assert abs(Fraction(row["value_lo"]) - printed) <= Fraction(5, 10**8)


def test_sequences_d_first_values(capsys):
    code, out, _ = run(capsys, "sequences", "d", "1:4:1", "--format", "csv")
    assert code == 0
    values = [row["value_lo"][:10] for row in rows_of(out)]
    assert values == ["3.73929751", "3.99770596", "4.08925356", "4.13081041"]


def test_sequences_c_in_unit_interval(capsys):
    code, out, _ = run(capsys, "sequences", "c", "1:100:1", "--format", "csv")
    assert code == 0
    assert all(0 < Fraction(r["value_lo"]) and Fraction(r["value_hi"]) < 1 for r in rows_of(out))


def test_sequences_limit_columns(capsys):
    code, out, _ = run(capsys, "sequences", "f", "1:3", "--limit", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert rows[0]["limit"] == "1/3"
    assert all(Fraction(r["distance_hi"]) < 0 for r in rows)


def test_sequences_theta(capsys):
    code, out, _ = run(capsys, "sequences", "theta(9)", "10", "--format", "json")
    assert code == 0 and json.loads(out)[0]["value_lo"].startswith("0.9152437")


def test_sequences_usage_error(capsys):
    assert run(capsys, "sequences", "zeta", "1:3")[0] == 2
    assert run(capsys, "sequences", "f", "3:1")[0] == 2


# -- verify -----------------------------------------------------------------------

def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "identities")
    assert code == 0 and "PASS" in out


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "coefficients", "oresme", "--format", "json")
    assert code == 0
    reports = json.loads(out)
    assert [r["suite"] for r in reports] == ["coefficients", "oresme"]
    for r in reports:
        for c in r["checks"]:
            assert set(c) <= {"label", "status", "witness"} and c["status"] == "proved"


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "bogus")
    assert code == 2 and "bogus" in err


def test_verify_all_small(capsys):
    code, out, _ = run(capsys, "verify", "all", "--n-max", "50", "--format", "csv")
    assert code == 0
    suites = {r["suite"] for r in rows_of(out)}
    assert {"oresme", "lemmas", "identities", "coefficients", "monotone", "sharp", "theta", "cesaro", "lodge"} <= suites


def test_verify_refutation_exit_code(capsys, monkeypatch):
    from harmonic_expansions import cli
    from harmonic_expansions.verification import VerificationReport

    def failing(name, cfg, n_max):
        report = VerificationReport(name)
        report.add("always false", False, {"n": 1})
        return report

    monkeypatch.setattr(cli, "run_suite", failing)
    code, out, _ = run(capsys, "verify", "oresme")
    assert code == 1 and "refuted" in out


# -- output plumbing ------------------------------------------------------------------

def test_out_file(tmp_path, capsys):
    target = tmp_path / "coeffs.csv"
    code, out, _ = run(capsys, "coeffs", "ramanujan", "3", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().splitlines()[1] == "1,1/12"


def test_output_is_deterministic(capsys):
    first = run(capsys, "table", "1:5", "all", "--format", "json")[1]
    second = run(capsys, "table", "1:5", "all", "--format", "json")[1]
    assert first == second


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "harmonic_expansions", "coeffs", "dw", "1", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.splitlines()[1] == "1,1/24"


def test_missing_command_is_usage_error(capsys):
    assert run(capsys)[0] == 2
