import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from boettcher.cli import main
from boettcher.coordinate import GermSpec
from boettcher.germ_syntax import GermSyntaxError, parse_germ
from boettcher.padic import INF, ValuationProfile
from boettcher.polynomial import RationalPolynomial
from boettcher.serialization import (
    FormatError,
    germ_from_json,
    germ_to_json,
    profile_from_json,
    series_from_json,
    series_to_json,
)
from boettcher.series import QQt, TruncatedSeries

GOLDEN = Path(__file__).parent / "golden" / "table_2_10_9.csv"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- germ syntax --------------------------------------------------------------------


def test_parse_examples():
    assert parse_germ("x^2+2x^3") == GermSpec(2, (1, 2))
    assert parse_germ("x^4 - 3/2*x^(5)") == GermSpec(4, (1, Fraction(-3, 2)))
    assert parse_germ("x^3 + 0x^4 + x^5") == GermSpec(3, (1, 0, 1))
    assert parse_germ("x^2 + 2x^3 + x^3") == GermSpec(2, (1, 3))
    g = parse_germ("x^2+2t*x^3")
    assert g.ring is QQt and g.b[1] == RationalPolynomial((0, 2))


@pytest.mark.parametrize(
    "text,pos",
    [("x^2+", 4), ("x^2 + 3 y", 8), ("x^2+x^(3", 8), ("", 0), ("x+x^2", 0), ("2x^2", 0), ("x^2+1/0x^3", 6)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(GermSyntaxError) as info:
        parse_germ(text)
    assert info.value.pos == pos


# -- serialization ------------------------------------------------------------------


@given(st.lists(st.fractions(max_denominator=50), min_size=1, max_size=10))
def test_series_json_round_trip(coeffs):
    f = TruncatedSeries(coeffs)
    assert series_from_json(json.loads(json.dumps(series_to_json(f)))).coeffs == f.coeffs


def test_qt_series_and_germ_round_trip():
    t = RationalPolynomial.t()
    f = TruncatedSeries([0, 1, t / 3], QQt)
    back = series_from_json(series_to_json(f))
    assert back.ring is QQt and back.coeffs == f.coeffs
    g = GermSpec.parametric_family(2)
    assert germ_from_json(germ_to_json(g)) == g


def test_json_rejects_floats():
    with pytest.raises(FormatError):
        germ_from_json({"m": 2, "b": [1, 0.5]})
    with pytest.raises(FormatError):
        series_from_json({"order": 3, "coeffs": ["1"]})


def test_profile_json_round_trip():
    prof = ValuationProfile(2, (0, 3, INF), "over_k_factorial")
    assert profile_from_json(prof.to_json()) == prof


# -- commands -----------------------------------------------------------------------------


def test_table_matches_golden_file(capsys):
    code, out, _ = run(capsys, "table", "2", "10", "9", "--format", "csv")
    assert code == 0
    assert out == GOLDEN.read_text()


def test_table_text_and_order_one(capsys):
    code, out, _ = run(capsys, "table", "2", "4", "--order", "2")
    assert code == 0
    assert all(line.split(": ")[1].startswith("x - x^2 + O(x^3)") for line in out.splitlines())


def test_compute_examples(capsys):
    code, out, _ = run(capsys, "compute", "--germ", "x^2+2x^3", "--order", "9")
    assert code == 0 and "+ 6884*x^9 + O(x^10)" in out
    code, out, _ = run(capsys, "compute", "--germ", "x^3", "--order", "5")
    assert "f     = x + O(x^6)" in out


def test_compute_round_trip_is_byte_identical(capsys, tmp_path):
    germ_file = tmp_path / "g.json"
    germ_file.write_text(json.dumps({"m": 4, "b": ["1", "4"]}))
    code, first, _ = run(capsys, "compute", "--germ-file", str(germ_file), "--order", "12",
                         "--normalize", "k-factorial", "--format", "json")
    assert code == 0
    data = json.loads(first)
    assert data["normalized"]["over_k_factorial"]["all_integral"]
    saved = tmp_path / "out.json"
    saved.write_text(first)
    code, second, _ = run(capsys, "compute", "--germ-file", str(saved), "--format", "json")
    assert code == 0 and second == first


def test_compute_csv_has_no_floats(capsys):
    code, out, _ = run(capsys, "compute", "--germ", "x^4+4x^5", "--order", "6", "--format", "csv")
    assert code == 0
    assert "." not in out and "661/8" in out


def test_analyze_examples(capsys):
    code, out, _ = run(capsys, "analyze", "--germ", "x^4+4x^5", "--p", "2", "--order", "64", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["radius_exponent_estimate"] == "-1"
    code, out, _ = run(capsys, "analyze", "--germ", "x^2+2x^3", "--p", "2", "--order", "50", "--format", "json")
    ords = json.loads(out)["profile"]["ords"]
    assert all(v == "inf" or v >= 0 for _, v in ords)
    code, out, _ = run(capsys, "analyze", "--germ", "x^5", "--p", "5", "--order", "6", "--format", "json")
    assert [v for _, v in json.loads(out)["profile"]["ords"]] == [0, "inf", "inf", "inf", "inf", "inf"]


def test_analyze_differences(capsys):
    code, out, _ = run(capsys, "analyze", "--germ", "x^4+16x^5", "--p", "2", "--order", "30",
                       "--diff-start", "2", "--diff-step", "4", "--format", "json")
    diffs = json.loads(out)["differences"]["values"]
    assert code == 0 and all(d == 3 for _, d in diffs)


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "analyze", "--germ", "x^2+2x^3", "--p", "4")[0] == 2
    code, _, err = run(capsys, "compute", "--germ", "x^2+2y")
    assert code == 2 and "position 5" in err
    assert run(capsys, "compute", "--germ", "x^2", "--order", "600")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    code, _, err = run(capsys, "verify", "--check", "nope")
    assert code == 2 and "mod-p-pattern" in err
    assert run(capsys, "verify", "--check", "mod-p-pattern", "--trials", "3")[0] == 2


def test_large_order_override_warns(capsys):
    code, _, err = run(capsys, "compute", "--germ", "x^2", "--order", "513", "--allow-large-order")
    assert code == 0 and "warning" in err


def test_verify_single_check(capsys):
    code, out, _ = run(capsys, "verify", "--check", "powers-of-p-congruence", "--p", "2",
                       "--max-power", "6", "--format", "json")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 1
    report = json.loads(lines[0])
    assert report["status"] == "pass"
    assert set(report) == {"check_id", "parameters", "status", "witnesses", "runtime_ms"}


def test_verify_conjecture_failure_does_not_fail_suite(capsys):
    code, out, _ = run(capsys, "verify", "--check", "valuation-growth", "--r", "6", "--format", "json")
    assert code == 0 and json.loads(out)["status"] == "fail"


def test_verify_list(capsys):
    code, out, _ = run(capsys, "verify", "--list")
    assert code == 0 and "oracle-agreement" in out
