import json
import subprocess
import sys
from fractions import Fraction

import pytest

from quotvir.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, format_value, main, parse_value, run
from quotvir.invariants import K2, QuotSetup, chi_vir_series


def values(report):
    return [parse_value(c["value"]) for c in report["coefficients"]]


@pytest.mark.parametrize(
    "argv,expected",
    [
        ("chi-vir --rank 1 --k2 1 --terms 4", [1, 0, 1, 2, 4]),
        ("euler-top --m 0 --terms 5", [1, 0, 0, 0, 0, 0]),
        ("gottsche --rank 1 --chi 1 --terms 6", [1, 1, 2, 3, 5, 7, 11]),
        ("shift-product --rank 1 --terms 3", [1, 0, 0, 0]),
        ("euler-top --m 2 --terms 3", [1, 2, 3, 4]),
    ],
)
def test_examples(argv, expected):
    status, report = run(argv.split())
    assert status == EXIT_OK
    assert values(report) == expected


def test_json_schema_and_roundtrip(capsys):
    assert main(["chi-vir", "--rank", "2", "--k2", "3/2", "--terms", "6", "--json", "--check"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert set(report) == {"command", "setup", "coefficients", "checks"}
    assert report["command"] == "chi-vir"
    assert all(set(c) == {"l", "value"} and isinstance(c["value"], str) for c in report["coefficients"])
    assert all("/" in c["value"] for c in report["coefficients"])
    assert all(set(c) == {"name", "status", "detail"} for c in report["checks"])
    expected = chi_vir_series(QuotSetup(2, {K2: Fraction(3, 2)}, 6))
    assert values(report) == list(expected)


def test_format_value():
    assert format_value(Fraction(-3, 4)) == "-3/4"
    assert format_value(5) == "5/1"
    assert parse_value("-3/4") == Fraction(-3, 4)


def test_human_output(capsys):
    assert main(["gottsche", "--chi", "1", "--terms", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("# gottsche")
    assert out.splitlines()[-1].split() == ["3", "3"]


def test_symbolic_pairing_output():
    status, report = run(["euler-top", "--m", "c1E.K + 2*c1L.K", "--terms", "2", "--rank", "2"])
    assert status == EXIT_OK
    assert report["coefficients"][1]["value"] == "c1E.K + 2*c1L.K"


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"rank": 1, "terms": 4, "pairings": {"K2": 1}}))
    status, report = run(["chi-vir", "--config", str(cfg)])
    assert status == EXIT_OK and values(report) == [1, 0, 1, 2, 4]
    status, report = run(["chi-vir", "--config", str(cfg), "--k2", "2", "--terms", "2"])
    assert values(report) == [1, 0, 2]


def test_pairing_flag():
    status, report = run(["quot1-integral", "--rank", "2", "--integrand", "e(L)^2", "--pairing", "c1E.K=3", "--pairing", "c1L.K=1"])
    assert status == EXIT_OK
    assert values(report) == [5]
    assert report["coefficients"][0]["l"] == 1


def test_quot1_missing_pairing_is_data_error():
    status, _ = run(["quot1-integral", "--rank", "2", "--integrand", "e(L)^2", "--pairing", "K2=1"])
    assert status == EXIT_DATA


def test_quot1_chi_vir_matches_series():
    status, report = run(["quot1-integral", "--rank", "3", "--integrand", "c(Tvir)"])
    assert status == EXIT_OK and values(report) == [0]


@pytest.mark.parametrize(
    "argv,code",
    [
        ([], EXIT_USAGE),
        (["frobnicate"], EXIT_USAGE),
        (["chi-vir", "--rank", "x"], EXIT_USAGE),
        (["chi-vir", "--k2", "1", "--unknown"], EXIT_USAGE),
        (["chi-vir"], EXIT_DATA),
        (["chi-vir", "--k2", "1", "--terms", "65"], EXIT_DATA),
        (["chi-vir", "--k2", "banana"], EXIT_DATA),
        (["chi-vir", "--k2", "1", "--config", "/nonexistent.json"], EXIT_DATA),
        (["collapse"], EXIT_DATA),
    ],
)
def test_exit_codes(argv, code):
    status, report = run(argv)
    assert status == code
    assert "error" in report


def test_malformed_config(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{not json")
    assert run(["gottsche", "--chi", "1", "--config", str(cfg)])[0] == EXIT_DATA


def test_terms_limit_accepted():
    status, report = run(["euler-top", "--m", "1", "--terms", "64"])
    assert status == EXIT_OK and len(report["coefficients"]) == 65


def test_segre_conventions():
    _, closed = run(["segre-line", "--rank", "2", "--a", "1", "--k2", "0", "--terms", "3"])
    status, integral = run(["segre-line", "--rank", "2", "--a", "1", "--k2", "0", "--terms", "3", "--convention", "integral", "--check"])
    assert status == EXIT_OK
    assert values(integral) == [c * (-1) ** l for l, c in enumerate(values(closed))]
    assert any(c["name"] == "segre sign convention" and c["status"] == "pass" for c in integral["checks"])


def test_extract_family():
    status, report = run(["extract-universal", "--family", "chi-vir", "--rank", "2", "--terms", "4", "--eliminate-twist", "--check"])
    assert status == EXIT_OK
    assert list(report["factors"]) == ["K2"]
    assert [parse_value(v) for v in report["factors"]["K2"]] == [1, 0, -2, -24, -159]


def test_extract_samples_file(tmp_path):
    samples = [
        {"exponents": {"c1EL.K": m}, "coefficients": [str(c) for c in [1, m, m * (m + 1) // 2]]}
        for m in (1, 2)
    ]
    path = tmp_path / "samples.json"
    path.write_text(json.dumps(samples))
    status, report = run(["extract-universal", "--samples", str(path), "--check"])
    assert status == EXIT_OK
    assert report["factors"]["c1EL.K"] == ["1/1", "1/1", "1/1"]


def test_extract_rank_deficient_samples(tmp_path):
    samples = [{"exponents": {"K2": 1, "c1E.K": 1}, "coefficients": ["1", "0", "1"]}] * 2
    path = tmp_path / "samples.json"
    path.write_text(json.dumps(samples))
    assert run(["extract-universal", "--samples", str(path)])[0] == EXIT_DATA


def test_extract_twist_violation(tmp_path):
    samples = [
        {"exponents": {"c1E.K": 1, "K2": 0}, "coefficients": ["1", "1", "0"]},
        {"exponents": {"c1E.K": 0, "K2": 1}, "coefficients": ["1", "0", "1"]},
    ]
    path = tmp_path / "samples.json"
    path.write_text(json.dumps(samples))
    assert run(["extract-universal", "--samples", str(path), "--eliminate-twist"])[0] == EXIT_DATA


def test_collapse(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"degree": 1, "f": 2, "r": 3, "coefficients": {"1,0,0": "3", "0,1,0": "2", "0,0,1": "5"}}))
    status, report = run(["collapse", "--input", str(path)])
    assert status == EXIT_OK and values(report) == [5, 1]
    path.write_text(json.dumps({"degree": 1, "f": 2, "r": 3, "coefficients": {"1,0,0": "3", "0,1,0": "7"}}))
    assert run(["collapse", "--input", str(path)])[0] == EXIT_DATA


def test_verify_command():
    status, report = run(["verify"])
    assert status == EXIT_OK
    assert len(report["checks"]) == 9
    assert all(c["status"] == "pass" for c in report["checks"])


def test_verification_failure_exit_code(monkeypatch):
    from quotvir import cli
    from quotvir.universal import CheckResult

    monkeypatch.setattr(cli, "run_all", lambda: [CheckResult("broken", False, "forced")])
    assert run(["verify"])[0] == EXIT_VERIFY


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "quotvir", "euler-top", "--m", "0", "--terms", "5", "--json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert out.returncode == 0
    assert [c["value"] for c in json.loads(out.stdout)["coefficients"]] == ["1/1"] + ["0/1"] * 5
