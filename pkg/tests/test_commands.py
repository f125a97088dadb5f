import json

import pytest

from hyperam_app import __version__
from hyperam_app.main import main


K_ARGS = ["--a", "1/2", "--b", "1/2", "--c", "1"]


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_coeffs_csv(capsys):
    code, out, _ = run(capsys, "coeffs", "F", *K_ARGS, "--order", "2")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith(f"# hyperam {__version__} | coeffs/1 | family=F")
    assert lines[1] == "n,exact,approx"
    assert lines[2:] == ["0,1,1", "1,1/4,0.25", "2,9/64,0.140625"]


def test_coeffs_log_family(capsys):
    code, out, _ = run(capsys, "coeffs", "lnFp", *K_ARGS, "--p", "1/4", "--order", "1")
    assert code == 0
    assert out.splitlines()[2:] == ["0,0,0", "1,0,0"]


def test_coeffs_exponential_family_reports_prefactor(capsys):
    code, out, _ = run(capsys, "coeffs", "Gp", *K_ARGS, "--p", "0", "--order", "2")
    assert code == 0
    assert "prefactor=e^1" in out.splitlines()[0]
    assert out.splitlines()[-1] == "2,11/64,0.171875"


def test_coeffs_json(capsys):
    code, out, _ = run(capsys, "coeffs", "Fp", *K_ARGS, "--p", "1/4", "--order", "2", "--format", "json")
    dump = json.loads(out)
    assert code == 0
    assert dump["p"] == "1/4"
    assert [row["exact"] for row in dump["rows"]] == ["1", "0", "-1/64"]


def test_global_flags_before_the_command(capsys):
    code, out, _ = run(capsys, "--order", "2", "--format", "json", "coeffs", "Fp", *K_ARGS, "--p", "1/4")
    assert code == 0
    assert [row["exact"] for row in json.loads(out)["rows"]] == ["1", "0", "-1/64"]


def test_command_position_overrides_global_flag(capsys):
    code, out, _ = run(capsys, "--order", "5", "coeffs", "F", *K_ARGS, "--order", "1")
    assert code == 0
    assert out.splitlines()[2:] == ["0,1,1", "1,1/4,0.25"]


def test_coeffs_errors(capsys):
    code, _, err = run(capsys, "coeffs", "F", "--a", "1", "--b", "1", "--c", "0")
    assert code == 2
    assert "NonPositiveParameter" in err
    code, _, err = run(capsys, "coeffs", "Fp", *K_ARGS)
    assert code == 2
    assert "needs --p" in err
    code, _, err = run(capsys, "coeffs", "F", "--a", "x", "--b", "1", "--c", "1")
    assert code == 2
    assert "ScalarParseError" in err


def test_classify_k_case(capsys):
    code, out, _ = run(capsys, "classify", *K_ARGS, "--p", "1/4")
    rows = out.splitlines()
    assert code == 0
    for expected in (
        "in_R1,true",
        "in_R2,false",
        "zero_balanced,true",
        "c_vs_ab_sum,equal",
        "ab_over_c,1/4",
        "kCk_2,7/32",
        "nCn_limit,0",
        "root_position,strictly_between",
        "tau,-1/32",
    ):
        assert expected in rows


def test_classify_notes_unordered_roots(capsys):
    code, out, _ = run(capsys, "classify", "--a", "1/2", "--b", "2", "--c", "8/5", "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert report["region"]["in_R2"] is True
    assert report["enclosures"] is None
    assert "not ordered" in report["note"]


@pytest.mark.parametrize(
    "triple, p, expected",
    [
        (K_ARGS, "1/2", 0),
        (K_ARGS, "6/25", 0),
        (["--a", "2", "--b", "2", "--c", "3"], "1/2", 3),
    ],
)
def test_verify_exit_codes(capsys, triple, p, expected):
    code, _, _ = run(capsys, "verify", "T1i", *triple, "--p", p)
    assert code == expected


def test_verify_beyond_cap(capsys):
    code, out, _ = run(capsys, "verify", "T1i", *K_ARGS, "--p", "101/100", "--cap", "400", "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert report["results"][0]["undetected_at_cap"] is True
    assert report["summary"]["undetected_at_cap"] == 1


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "T1i", *K_ARGS, "--p", "1/2", "--order", "40", "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert report["tool"] == "hyperam"
    assert report["command"] == "verify"
    row = report["results"][0]
    assert (row["p"], row["prediction"], row["verdict"], row["concordant"]) == ("1/2", "am", "all_nonneg", True)


def test_bounds_rational_grid(capsys):
    code, out, _ = run(capsys, "bounds", "rational", *K_ARGS, "--p", "1/4", "--n", "2", "--x", "0.1:0.1:9")
    lines = out.splitlines()
    assert code == 0
    assert lines[1].startswith("x,n,lower,middle,upper,ordering_holds")
    assert len(lines) == 11
    assert all(",true," in line for line in lines[2:])


def test_bounds_ratio(capsys):
    code, _, _ = run(capsys, "bounds", "ratio", *K_ARGS, "--p", "2", "--q", "2", "--r", "0.1:0.1:9")
    assert code == 0


def test_bounds_regime_violation(capsys):
    code, _, err = run(capsys, "bounds", "exp", *K_ARGS, "--p", "1/2", "--q", "1/4", "--n", "2")
    assert code == 4
    assert "RegimeViolation" in err


def test_argument_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["coeffs", "F", *K_ARGS, "--order", "6000"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out
