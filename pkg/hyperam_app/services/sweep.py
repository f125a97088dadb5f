"""Sweep files: parsing, grid expansion and (optionally parallel) execution.

A sweep file is ``key = value`` lines; ``#`` starts a comment. Grid values
are a single literal, a comma list, or ``start:step:count``.
"""
from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from hyperam_app import __version__
from hyperam_app.core.errors import HyperamError, SweepSpecError
from hyperam_app.core.exact import ParameterTriple, as_scalar, parse_scalar, render_scalar
from hyperam_app.core.logging import RunIdFilter
from hyperam_app.models.domain import PredictedVerdict, TheoremId
from hyperam_app.models.reports import BOUND_CHECKS, PointResult, RunReport, RunSummary, SweepSpec
from hyperam_app.services.bounds import bounds_exp, bounds_log, bounds_rational
from hyperam_app.utils.theorems import check_concordance
from hyperam_app.utils.thresholds import region


logger = logging.getLogger("hyperam.sweep")

GRID_KEYS = ("a", "b", "c", "p")
INT_KEYS = ("order", "k", "sign", "n", "cap")


def parse_grid(text: str) -> List[Fraction]:
    text = text.strip()
    if text.count(":") == 2:
        start, step, count = text.split(":")
        try:
            total = int(count)
        except ValueError as exc:
            raise SweepSpecError(f"grid count must be an integer: {text!r}") from exc
        if total < 0:
            raise SweepSpecError(f"grid count must be nonnegative: {text!r}")
        first, delta = parse_scalar(start), parse_scalar(step)
        return [first + i * delta for i in range(total)]
    if ":" in text:
        raise SweepSpecError(f"ranges take start:step:count, got {text!r}")
    return [parse_scalar(part) for part in text.split(",") if part.strip()]


def parse_float_grid(text: str) -> List[float]:
    text = text.strip()
    try:
        if ":" in text:
            start, step, count = text.split(":")
            values = float(start) + float(step) * np.arange(int(count))
            return [float(v) for v in values]
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise SweepSpecError(f"not a float grid: {text!r}") from exc


def parse_sweep_spec(text: str) -> SweepSpec:
    fields: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SweepSpecError(f"line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in fields:
            raise SweepSpecError(f"line {lineno}: duplicate key {key!r}")
        if key in GRID_KEYS:
            fields[key] = parse_grid(value)
        elif key in INT_KEYS:
            try:
                fields[key] = int(value)
            except ValueError as exc:
                raise SweepSpecError(f"line {lineno}: {key} must be an integer") from exc
        elif key == "q":
            fields[key] = parse_scalar(value)
        elif key == "x":
            fields[key] = parse_float_grid(value)
        elif key == "checks":
            fields[key] = [part.strip() for part in value.split(",") if part.strip()]
        else:
            raise SweepSpecError(f"line {lineno}: unknown key {key!r}")
    for key in ("a", "b", "c", "checks"):
        if key not in fields:
            raise SweepSpecError(f"missing required key {key!r}")
    try:
        return SweepSpec(**fields)
    except ValidationError as exc:
        raise SweepSpecError(str(exc.errors()[0]["msg"])) from exc


def grid_points(spec: SweepSpec) -> List[Tuple[Fraction, Fraction, Fraction, Optional[Fraction]]]:
    return list(itertools.product(spec.a, spec.b, spec.c, spec.p))


def concordance_row(
    params: ParameterTriple,
    p: Fraction,
    check: str,
    order: int,
    cap: Optional[int] = None,
    k: int = 0,
    sign: int = 1,
) -> PointResult:
    report = check_concordance(params, p, TheoremId(check), order, cap=cap, k=k, sign=sign)
    return PointResult(
        a=params.a,
        b=params.b,
        c=params.c,
        p=p,
        check=check,
        prediction=report.prediction.verdict,
        condition_kind=report.prediction.condition_kind,
        verdict=report.verdict.status,
        first_violation=report.verdict.first_violation,
        checked_order=report.verdict.checked_order,
        concordant=report.concordant,
        undetected_at_cap=report.undetected_at_cap,
        reason=report.prediction.reason,
    )


def _bound_rows(base: Dict[str, Any], params: ParameterTriple, p: Fraction, spec: SweepSpec, check: str) -> List[PointResult]:
    rows = []
    for x in spec.x:
        if check == "rational":
            report = bounds_rational(params, p, spec.n, x)
        elif check == "log":
            report = bounds_log(params, p, spec.n, x)
        else:
            if spec.q is None:
                raise SweepSpecError("the exp check needs q")
            report = bounds_exp(params, p, spec.q, spec.n, x)
        rows.append(
            PointResult(
                **base,
                x=x,
                lower=report.lower,
                middle=report.middle,
                upper=report.upper,
                ordering_holds=report.ordering_holds,
                regime=report.regime,
            )
        )
    return rows


def run_point(task: Tuple[Tuple[str, str, str, Optional[str]], SweepSpec, str]) -> List[PointResult]:
    """Evaluate every check of the spec at one grid point; failures become rows."""
    raw, spec, run_id = task
    RunIdFilter.run_id_var.set(run_id)
    a, b, c = (as_scalar(v) for v in raw[:3])
    p = as_scalar(raw[3]) if raw[3] is not None else None
    rows: List[PointResult] = []
    for check in spec.checks:
        base: Dict[str, Any] = {"a": a, "b": b, "c": c, "p": p, "check": check}
        if min(a, b, c) <= 0:
            logger.info("skipping (%s, %s, %s): non-positive parameter", a, b, c)
            rows.append(PointResult(**base, status="skipped", reason="non-positive parameter"))
            continue
        params = ParameterTriple(a=a, b=b, c=c)
        try:
            if check == "region":
                report = region(params)
                rows.append(
                    PointResult(
                        **base, in_R1=report.in_R1, in_R2=report.in_R2, zero_balanced=report.zero_balanced
                    )
                )
            elif p is None:
                rows.append(PointResult(**base, status="error", reason="check needs p"))
            elif check in BOUND_CHECKS:
                rows.extend(_bound_rows(base, params, p, spec, check))
            else:
                rows.append(concordance_row(params, p, check, spec.order, spec.cap, spec.k, spec.sign))
        except HyperamError as exc:
            rows.append(PointResult(**base, status="error", reason=f"{exc.__class__.__name__}: {exc}"))
    return rows


def summarize(results: Iterable[PointResult]) -> RunSummary:
    counts = dict(rows=0, concordant=0, discordant=0, outside_scope=0, undetected_at_cap=0, bounds_failed=0, skipped=0, errors=0)
    for row in results:
        counts["rows"] += 1
        if row.status == "skipped":
            counts["skipped"] += 1
        elif row.status == "error":
            counts["errors"] += 1
        if row.prediction is PredictedVerdict.OUTSIDE_SCOPE:
            counts["outside_scope"] += 1
        elif row.concordant is True:
            counts["concordant"] += 1
        elif row.concordant is False:
            counts["discordant"] += 1
        if row.undetected_at_cap:
            counts["undetected_at_cap"] += 1
        if row.ordering_holds is False:
            counts["bounds_failed"] += 1
    return RunSummary(**counts)


def _render_optional(value: Optional[Fraction]) -> Optional[str]:
    return None if value is None else render_scalar(value)


def run_sweep(spec: SweepSpec, workers: int = 1, run_id: str = "-", inputs: Optional[Dict[str, str]] = None) -> RunReport:
    """Run the sweep; results come back in lexicographic grid order whatever ``workers`` is."""
    tasks = [
        ((render_scalar(a), render_scalar(b), render_scalar(c), _render_optional(p)), spec, run_id)
        for a, b, c, p in grid_points(spec)
    ]
    logger.info("sweep over %d grid points with %d worker(s)", len(tasks), workers)
    if workers <= 1 or len(tasks) <= 1:
        chunks = [run_point(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(run_point, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    results = [row for chunk in chunks for row in chunk]
    return RunReport(
        version=__version__,
        command="sweep",
        inputs=inputs or {},
        results=results,
        summary=summarize(results),
    )
