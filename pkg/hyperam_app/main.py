from __future__ import annotations

import argparse
import logging
import sys
import uuid
from pathlib import Path
from typing import Callable, Dict, List, Optional

from hyperam_app import __version__
from hyperam_app.core.config import DEFAULT_ORDER, DEFAULT_WORKERS, ENCLOSURE_EPS, LOG_LEVEL, MAX_ORDER
from hyperam_app.core.errors import HyperamError, HypothesisViolated
from hyperam_app.core.exact import ParameterTriple, make_params, parse_scalar, render_scalar
from hyperam_app.core.logging import RunIdFilter, configure_logging
from hyperam_app.models.domain import BoundsReport, Family, PredictedVerdict, TheoremId
from hyperam_app.models.reports import POINT_COLUMNS, BoundsRow, BoundsRun, ClassifyReport, CoeffDump, CoeffRow, RunReport
from hyperam_app.services.bounds import bounds_exp, bounds_log, bounds_ratio, bounds_rational
from hyperam_app.services.render import model_rows, to_csv, to_json
from hyperam_app.services.sweep import concordance_row, parse_float_grid, parse_sweep_spec, run_sweep, summarize
from hyperam_app.utils.series import fp_coeffs, gp_reduced_coeffs, hyp_coeffs, lnfp_coeffs
from hyperam_app.utils.thresholds import classify_vs_roots, region, root_enclosures, threshold_summary


logger = logging.getLogger("hyperam.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_OUTSIDE_SCOPE = 3

BOUNDS_COLUMNS = ["x", "n", "lower", "middle", "upper", "ordering_holds", "slack_lower", "slack_upper", "regime"]


def _order(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be an integer, got {text!r}")
    if not 0 <= value <= MAX_ORDER:
        raise argparse.ArgumentTypeError(f"order must lie in [0, {MAX_ORDER}]")
    return value


def _params(args: argparse.Namespace) -> ParameterTriple:
    return make_params(parse_scalar(args.a), parse_scalar(args.b), parse_scalar(args.c))


def _emit(args: argparse.Namespace, text: str) -> None:
    target: Optional[str] = getattr(args, "output", None)
    if target:
        Path(target).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_coeffs(args: argparse.Namespace) -> int:
    params = _params(args)
    family = Family(args.family)
    p = parse_scalar(args.p) if args.p is not None else None
    if family is not Family.F and p is None:
        raise HyperamError(f"family {family.value} needs --p")
    if family is Family.F:
        series = hyp_coeffs(params, args.order)
    elif family is Family.FP:
        series = fp_coeffs(params, p, args.order)
    elif family is Family.GP:
        series = gp_reduced_coeffs(params, p, args.order)
    else:
        series = lnfp_coeffs(params, p, args.order)

    dump = CoeffDump(
        family=family.value,
        params=params.render(),
        p=p,
        order=args.order,
        prefactor_e_power=series.prefactor_e_power,
        rows=[CoeffRow(n=n, exact=v, approx=float(v)) for n, v in enumerate(series.coeffs)],
    )
    if args.format == "json":
        _emit(args, to_json(dump))
    else:
        meta = {"family": family.value, "params": params.render()}
        if p is not None:
            meta["p"] = render_scalar(p)
        if series.prefactor_e_power:
            meta["prefactor"] = f"e^{series.prefactor_e_power}"
        _emit(args, to_csv("coeffs/1", ["n", "exact", "approx"], model_rows(dump.rows), meta))
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    params = _params(args)
    position = enclosures = None
    note = ""
    try:
        if args.p is not None:
            position = classify_vs_roots(params, parse_scalar(args.p))
        enclosures = root_enclosures(params, ENCLOSURE_EPS)
    except HypothesisViolated as exc:
        note = f"roots of tau are not ordered: {exc}"
    report = ClassifyReport(
        params=params.render(),
        region=region(params),
        thresholds=threshold_summary(params),
        root_position=position,
        enclosures=enclosures,
        note=note,
    )
    if args.format == "json":
        _emit(args, to_json(report))
        return EXIT_OK

    rows: List[Dict[str, object]] = []
    for key, value in report.region:
        rows.append({"key": key, "value": value})
    summary = report.thresholds
    rows += [
        {"key": "ab_over_c", "value": summary.ab_over_c},
        {"key": "fp_upper_endpoint", "value": summary.fp_upper_endpoint},
        {"key": "fp_second_upper_endpoint", "value": summary.fp_second_upper_endpoint},
        {"key": "nCn_limit", "value": summary.nCn_limit},
    ]
    rows += [{"key": f"kCk_{k}", "value": v} for k, v in enumerate(summary.kCk, start=1)]
    if position is not None:
        rows += [{"key": "root_position", "value": position.position}, {"key": "tau", "value": position.tau}]
    if enclosures is not None:
        for name, (lo, hi) in (("p_star_low", enclosures.lower_root), ("p_star_high", enclosures.upper_root)):
            rows += [{"key": f"{name}_lo", "value": lo}, {"key": f"{name}_hi", "value": hi}]
    if note:
        rows.append({"key": "note", "value": note})
    _emit(args, to_csv("classify/1", ["key", "value"], rows, {"params": params.render()}))
    return EXIT_OK


def _run_output(args: argparse.Namespace, report: RunReport) -> None:
    if args.format == "json":
        _emit(args, to_json(report))
        return
    _emit(args, to_csv(f"{report.command}/1", POINT_COLUMNS, model_rows(report.results)))


def cmd_verify(args: argparse.Namespace) -> int:
    params = _params(args)
    p = parse_scalar(args.p)
    row = concordance_row(params, p, args.theorem, args.order, args.cap, args.k, args.sign)
    report = RunReport(
        version=__version__,
        command="verify",
        inputs={"theorem": args.theorem, "params": params.render(), "p": render_scalar(p), "order": str(args.order)},
        results=[row],
        summary=summarize([row]),
    )
    _run_output(args, report)
    if row.prediction is PredictedVerdict.OUTSIDE_SCOPE:
        return EXIT_OUTSIDE_SCOPE
    return EXIT_OK if row.concordant else EXIT_FAILED


def cmd_bounds(args: argparse.Namespace) -> int:
    params = _params(args)
    rows: List[BoundsRow] = []
    inputs = {"p": args.p, "n": str(args.n)}
    if args.family == "ratio":
        if args.q is None:
            raise HyperamError("the ratio family needs --q")
        inputs.update(q=args.q, r=args.r, s_choice=args.s_choice)
        for r in parse_float_grid(args.r):
            report = bounds_ratio(params, float(parse_scalar(args.p)), float(parse_scalar(args.q)), r, s_choice=args.s_choice)
            rows.append(BoundsRow(**dict(report), x=r))
    else:
        p = parse_scalar(args.p)
        inputs["x"] = args.x
        evaluate: Callable[[float], BoundsReport]
        if args.family == "rational":
            evaluate = lambda x: bounds_rational(params, p, args.n, x, regime=args.regime)  # noqa: E731
        elif args.family == "log":
            evaluate = lambda x: bounds_log(params, p, args.n, x, regime=args.regime)  # noqa: E731
        else:
            if args.q is None:
                raise HyperamError("the exp family needs --q")
            q = parse_scalar(args.q)
            inputs["q"] = args.q
            evaluate = lambda x: bounds_exp(params, p, q, args.n, x, regime=args.regime)  # noqa: E731
        for x in parse_float_grid(args.x):
            rows.append(BoundsRow(**dict(evaluate(x)), x=x, n=args.n))

    run = BoundsRun(family=args.family, params=params.render(), inputs=inputs, rows=rows)
    if args.format == "json":
        _emit(args, to_json(run))
    else:
        meta = {"family": args.family, "params": params.render()}
        _emit(args, to_csv("bounds/1", BOUNDS_COLUMNS, model_rows(rows), meta))
    return EXIT_OK if all(row.ordering_holds for row in rows) else EXIT_FAILED


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        text = Path(args.spec).read_text(encoding="utf-8")
    except OSError as exc:
        raise HyperamError(f"cannot read sweep file: {exc}") from exc
    spec = parse_sweep_spec(text)
    report = run_sweep(
        spec,
        workers=args.workers,
        run_id=RunIdFilter.run_id_var.get(),
        inputs={"spec": Path(args.spec).name},
    )
    _run_output(args, report)
    return EXIT_FAILED if report.failed else EXIT_OK


def _add_global_flags(parser: argparse.ArgumentParser, defaults: bool) -> None:
    """Global flags; subcommands repeat them with suppressed defaults so either position works."""

    def default(value):
        return value if defaults else argparse.SUPPRESS

    parser.add_argument("--order", type=_order, default=default(DEFAULT_ORDER), help="truncation order N")
    parser.add_argument("--format", choices=["csv", "json"], default=default("csv"))
    parser.add_argument("--workers", type=int, default=default(DEFAULT_WORKERS))
    parser.add_argument("--log-level", default=default(LOG_LEVEL))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, defaults=False)

    triple = argparse.ArgumentParser(add_help=False)
    triple.add_argument("--a", required=True)
    triple.add_argument("--b", required=True)
    triple.add_argument("--c", required=True)

    parser = argparse.ArgumentParser(
        prog="hyperam",
        description="Exact absolute-monotonicity checks for Gaussian hypergeometric families.",
    )
    parser.add_argument("--version", action="version", version=f"hyperam {__version__}")
    _add_global_flags(parser, defaults=True)
    sub = parser.add_subparsers(dest="command", required=True)

    coeffs = sub.add_parser("coeffs", parents=[common, triple], help="dump Maclaurin coefficients")
    coeffs.add_argument("family", choices=[f.value for f in Family])
    coeffs.add_argument("--p")
    coeffs.set_defaults(handler=cmd_coeffs)

    classify = sub.add_parser("classify", parents=[common, triple], help="regions, thresholds and root positions")
    classify.add_argument("--p")
    classify.set_defaults(handler=cmd_classify)

    verify = sub.add_parser("verify", parents=[common, triple], help="theorem prediction against the truncated scan")
    verify.add_argument("theorem", choices=[t.value for t in TheoremId])
    verify.add_argument("--p", required=True)
    verify.add_argument("--k", type=int, default=0, help="derivative order for T5")
    verify.add_argument("--sign", type=int, choices=[1, -1], default=1, help="direction for T5")
    verify.add_argument("--cap", type=int, default=None, help="escalation cap")
    verify.set_defaults(handler=cmd_verify)

    bounds = sub.add_parser("bounds", parents=[common, triple], help="check an inequality family on a grid")
    bounds.add_argument("family", choices=["rational", "log", "exp", "ratio"])
    bounds.add_argument("--p", required=True)
    bounds.add_argument("--q")
    bounds.add_argument("--n", type=int, default=2)
    bounds.add_argument("--x", default="0.5", help="value, comma list or start:step:count")
    bounds.add_argument("--r", default="0.5", help="grid for the ratio family")
    bounds.add_argument("--regime")
    bounds.add_argument("--s-choice", dest="s_choice", choices=["auto", "r1", "r2"], default="auto")
    bounds.set_defaults(handler=cmd_bounds)

    sweep = sub.add_parser("sweep", parents=[common], help="run checks over a parameter grid")
    sweep.add_argument("spec", help="sweep file (key = value lines)")
    sweep.add_argument("--output", help="write the artifact here instead of stdout")
    sweep.set_defaults(handler=cmd_sweep)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    RunIdFilter.run_id_var.set(uuid.uuid4().hex[:8])
    try:
        return args.handler(args)
    except HyperamError as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        sys.stderr.write(f"error: {exc.__class__.__name__}: {exc}\n")
        return exc.exit_code
