from fractions import Fraction

import pytest

from hyperam_app.core.errors import SweepSpecError
from hyperam_app.main import main
from hyperam_app.models.domain import ScanStatus
from hyperam_app.models.reports import POINT_COLUMNS
from hyperam_app.services.render import model_rows, to_csv
from hyperam_app.services.sweep import parse_float_grid, parse_grid, parse_sweep_spec, run_sweep


F = Fraction

K_T1I_SWEEP = """
# K case, lower endpoint of T1(i)
a = 1/2
b = 1/2
c = 1
p = 0.20:0.01:15
checks = T1i
order = 50
"""


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1:1/4:3", [F(1), F(5, 4), F(3, 2)]),
        ("1/2, 3/4", [F(1, 2), F(3, 4)]),
        ("0.5", [F(1, 2)]),
        ("1:1:0", []),
    ],
)
def test_parse_grid(text, expected):
    assert parse_grid(text) == expected


@pytest.mark.parametrize("text", ["1:2", "1:1:x", "1:1:-1"])
def test_parse_grid_rejects(text):
    with pytest.raises(SweepSpecError):
        parse_grid(text)


def test_parse_float_grid():
    assert parse_float_grid("0.25, 0.5") == [0.25, 0.5]
    assert parse_float_grid("0.1:0.2:3") == pytest.approx([0.1, 0.3, 0.5])
    with pytest.raises(SweepSpecError):
        parse_float_grid("0.1:x:3")


@pytest.mark.parametrize(
    "text, message",
    [
        ("a = 1\na = 2\nb = 1\nc = 1\nchecks = region", "duplicate"),
        ("a = 1\nb = 1\nc = 1\nchecks = region\ncolour = red", "unknown key"),
        ("a = 1\nb = 1\nc = 1", "checks"),
        ("a = 1\nb = 1\nc = 1\nchecks = T9", "unknown checks"),
        ("a = 1\nb = 1\nc = 1\nchecks = T5\nsign = 2", "sign"),
        ("a = 1\nb = 1\nc = 1\nchecks = T1i\norder = many", "integer"),
        ("a = 1\nb 1", "key = value"),
    ],
)
def test_sweep_spec_errors(text, message):
    with pytest.raises(SweepSpecError, match=message):
        parse_sweep_spec(text)


def test_k_case_lower_endpoint_sweep():
    report = run_sweep(parse_sweep_spec(K_T1I_SWEEP))
    assert len(report.results) == 15
    for row in report.results:
        expected = ScanStatus.MIXED if row.p < F(1, 4) else ScanStatus.ALL_NONNEG
        assert row.verdict is expected
        assert row.concordant is True
    assert report.summary.concordant == 15
    assert not report.failed


def test_region_sweep():
    spec = parse_sweep_spec("a = 1/2\nb = 1/2\nc = 1:1/4:9\nchecks = region")
    results = run_sweep(spec).results
    assert [row.c for row in results] == [1 + F(i, 4) for i in range(9)]
    assert all(row.in_R1 for row in results)
    assert [row.zero_balanced for row in results] == [True] + [False] * 8


def test_empty_grid():
    report = run_sweep(parse_sweep_spec("a = 1\nb = 1\nc = 1:1:0\nchecks = region"))
    assert report.results == []
    assert report.summary.rows == 0


def test_non_positive_points_are_skipped():
    spec = parse_sweep_spec("a = -1/2, 1/2\nb = 1/2\nc = 1\np = 1/2\nchecks = T1i, region")
    report = run_sweep(spec)
    statuses = [(row.a, row.check, row.status) for row in report.results]
    assert statuses[:2] == [(F(-1, 2), "T1i", "skipped"), (F(-1, 2), "region", "skipped")]
    assert report.summary.skipped == 2
    assert report.summary.concordant == 1


def test_point_errors_become_rows():
    spec = parse_sweep_spec("a = 1/2\nb = 1/2\nc = 1\nchecks = T1i")
    row = run_sweep(spec).results[0]
    assert (row.status, row.reason) == ("error", "check needs p")

    spec = parse_sweep_spec("a = 1/2\nb = 1/2\nc = 1\np = 0\nchecks = exp")
    row = run_sweep(spec).results[0]
    assert row.status == "error"
    assert "needs q" in row.reason


def test_bound_checks_in_a_sweep():
    spec = parse_sweep_spec("a = 1/2\nb = 1/2\nc = 1\np = 1/4\nchecks = rational\nn = 1\nx = 0.3, 0.6")
    results = run_sweep(spec).results
    assert [row.x for row in results] == [0.3, 0.6]
    assert all(row.ordering_holds and row.regime == "T1i" for row in results)


def test_parallel_run_matches_serial():
    spec = parse_sweep_spec("a = 1/2, 1\nb = 1/2\nc = 1, 3\np = 0:1/4:4\nchecks = T1i, T3i, region\norder = 30")
    serial = run_sweep(spec, workers=1)
    parallel = run_sweep(spec, workers=2)
    assert parallel.results == serial.results
    csv_serial = to_csv("sweep/1", POINT_COLUMNS, model_rows(serial.results))
    assert csv_serial == to_csv("sweep/1", POINT_COLUMNS, model_rows(parallel.results))


def test_sweep_command_writes_output(tmp_path, capsys):
    spec = tmp_path / "k_case.sweep"
    spec.write_text(K_T1I_SWEEP, encoding="utf-8")
    out = tmp_path / "k_case.csv"
    assert main(["sweep", str(spec), "--output", str(out), "--workers", "1"]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# hyperam")
    assert "sweep/1" in lines[0]
    assert lines[1] == ",".join(POINT_COLUMNS)
    assert len(lines) == 17
    assert capsys.readouterr().out == ""


def test_sweep_command_missing_file(tmp_path, capsys):
    assert main(["sweep", str(tmp_path / "absent.sweep")]) == 2
    assert "cannot read sweep file" in capsys.readouterr().err


FAMILY_SWEEP = """
a = 1/2, 1
b = 1/2, 2
c = 1, 8/5, 3
p = 0:1/4:5
checks = T1i, T1ii, T1iii, T2i, T2ii, T2iii, C1i, C1ii, C1iii, T3i, T3ii, T4, T5, region
order = 40
cap = 80
"""


@pytest.mark.slow
def test_eight_workers_write_the_same_csv_as_one():
    spec = parse_sweep_spec(FAMILY_SWEEP)
    serial = run_sweep(spec, workers=1)
    parallel = run_sweep(spec, workers=8)
    assert len(serial.results) >= 60 * 14
    csv_serial = to_csv("sweep/1", POINT_COLUMNS, model_rows(serial.results))
    assert csv_serial == to_csv("sweep/1", POINT_COLUMNS, model_rows(parallel.results))
    assert serial.summary == parallel.summary
