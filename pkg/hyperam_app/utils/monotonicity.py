"""Jurkat-style toolkit and truncated absolute-monotonicity verdicts.

A power series with radius 1 is absolutely monotonic on (0, 1) exactly when
all of its Maclaurin coefficients are nonnegative. Every verdict here is a
finite scan of that condition: a violation is conclusive, a clean scan only
says "nonnegative up to ``checked_order``".
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import List

from hyperam_app.core.errors import HypothesisViolated, NonpositiveDenominatorCoefficient, OrderMismatch, OrderTooSmall
from hyperam_app.core.exact import ParameterTriple, ScalarLike, as_scalar
from hyperam_app.models.domain import AMVerdict, JurkatReport, RatioTrend, ScanStatus, Trend, TruncatedSeries
from hyperam_app.utils.series import (
    binom_pow_coeffs,
    cauchy_product,
    fp_coeffs,
    gp_reduced_coeffs,
    hyp_coeffs,
    hyp_shift_coeffs,
    lnfp_coeffs,
    series_derivative,
    series_ratio,
    series_scale,
)


logger = logging.getLogger("hyperam.monotonicity")


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def test_function_coeffs(V: TruncatedSeries, p: ScalarLike) -> TruncatedSeries:
    """Coefficients of (1-x) V'(x) - p V(x): (n+1)V[n+1] - (n+p)V[n]."""
    if V.order < 1:
        raise OrderTooSmall("the test function needs order >= 1")
    p = as_scalar(p)
    coeffs = [(n + 1) * V[n + 1] - (n + p) * V[n] for n in range(V.order)]
    return TruncatedSeries(coeffs=tuple(coeffs), prefactor_e_power=V.prefactor_e_power)


# the name would otherwise be collected by pytest
test_function_coeffs.__test__ = False  # type: ignore[attr-defined]


def _require_positive(W: TruncatedSeries) -> None:
    for n, w in enumerate(W.coeffs):
        if w <= 0:
            raise NonpositiveDenominatorCoefficient(f"denominator coefficient {n} is {w}")


def ratio_monotonicity(V: TruncatedSeries, W: TruncatedSeries) -> RatioTrend:
    """Direction of V_n / W_n, decided by V_{n+1} W_n - V_n W_{n+1}."""
    if V.order != W.order:
        raise OrderMismatch(f"series orders differ: {V.order} vs {W.order}")
    _require_positive(W)
    seen = 0
    for n in range(V.order):
        s = _sign(V[n + 1] * W[n] - V[n] * W[n + 1])
        if s == 0:
            continue
        if seen == 0:
            seen = s
        elif s != seen:
            return RatioTrend(kind=Trend.MIXED, first_violation=n)
    if seen == 0:
        return RatioTrend(kind=Trend.CONSTANT)
    return RatioTrend(kind=Trend.INCREASING if seen > 0 else Trend.DECREASING)


def _consecutive_ratios_increase(Q: TruncatedSeries) -> bool:
    return all(Q[n + 2] * Q[n] >= Q[n + 1] * Q[n + 1] for n in range(Q.order - 1))


def w_ratio_increasing(p: ScalarLike, N: int) -> bool:
    """Whether W_{n+1}(p)/W_n(p) increases; true exactly when p <= 1."""
    p = as_scalar(p)
    if p <= 0:
        raise HypothesisViolated("W_n(p) is positive only for p > 0")
    closed = p <= 1
    if N >= 2:
        scanned = _consecutive_ratios_increase(binom_pow_coeffs(p, -1, N))
        if scanned != closed:
            raise RuntimeError(f"ratio scan disagrees with the closed form at p={p}")
    return closed


def w_ratio_increment(p: ScalarLike, n: int) -> Fraction:
    """W_{n+2}/W_{n+1} - W_{n+1}/W_n = (1-p)/((n+1)(n+2))."""
    return (1 - as_scalar(p)) / ((n + 1) * (n + 2))


def am_scan(S: TruncatedSeries, expect_sign: int) -> AMVerdict:
    if expect_sign not in (1, -1):
        raise ValueError("expect_sign must be +1 or -1")
    for n, x in enumerate(S.coeffs):
        if _sign(x) == -expect_sign:
            return AMVerdict(status=ScanStatus.MIXED, first_violation=n, checked_order=S.order)
    status = ScanStatus.ALL_NONNEG if expect_sign > 0 else ScanStatus.ALL_NONPOS
    return AMVerdict(status=status, checked_order=S.order)


def _signed_scan(S: TruncatedSeries, sign: int) -> AMVerdict:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return am_scan(series_scale(S, sign), 1)


def _derivative(u: TruncatedSeries, times: int) -> TruncatedSeries:
    for _ in range(times):
        u = series_derivative(u)
    return u


def minus_fp_prime_verdict(params: ParameterTriple, p: ScalarLike, N: int) -> AMVerdict:
    return _signed_scan(_derivative(fp_coeffs(params, p, N + 1), 1), -1)


def fp_second_verdict(params: ParameterTriple, p: ScalarLike, N: int, sign: int) -> AMVerdict:
    return _signed_scan(_derivative(fp_coeffs(params, p, N + 2), 2), sign)


def gp_prime_verdict(params: ParameterTriple, p: ScalarLike, N: int, sign: int) -> AMVerdict:
    # G_p = e * reduced series; e > 0 leaves every sign unchanged
    return _signed_scan(_derivative(gp_reduced_coeffs(params, p, N + 1), 1), sign)


def lnfp_k_verdict(params: ParameterTriple, p: ScalarLike, k: int, N: int, sign: int) -> AMVerdict:
    if k < 0:
        raise ValueError("derivative order k must be nonnegative")
    return _signed_scan(_derivative(lnfp_coeffs(params, p, N + k), k), sign)


def jurkat_check(Pnum: TruncatedSeries, Q: TruncatedSeries) -> JurkatReport:
    """Check the hypotheses of Jurkat's criterion for Pnum/Q and scan (Pnum/Q)'."""
    trend = ratio_monotonicity(Pnum, Q)
    q_increasing = _consecutive_ratios_increase(Q)
    derivative = series_derivative(series_ratio(Pnum, Q))

    if trend.kind is Trend.INCREASING:
        predicted, verdict = 1, am_scan(derivative, 1)
        matches = verdict.status is ScanStatus.ALL_NONNEG
    elif trend.kind is Trend.DECREASING:
        predicted, verdict = -1, am_scan(derivative, -1)
        matches = verdict.status is ScanStatus.ALL_NONPOS
    elif trend.kind is Trend.CONSTANT:
        predicted, verdict = 0, am_scan(derivative, 1)
        matches = all(x == 0 for x in derivative.coeffs)
    else:
        predicted, verdict, matches = None, am_scan(derivative, 1), False

    return JurkatReport(
        hypotheses_hold=q_increasing and trend.kind is not Trend.MIXED,
        q_ratio_increasing=q_increasing,
        ratio_trend=trend,
        predicted_sign=predicted,
        ratio_derivative_verdict=verdict,
        conclusion_matches=matches,
    )


def fp_test_closed_form(params: ParameterTriple, p: ScalarLike, N: int) -> TruncatedSeries:
    """[p - ab/c + (c-a)(c-b) n/(c(c+n))] A_n, the negated test function of F at p."""
    p = as_scalar(p)
    a, b, c = params.a, params.b, params.c
    A = hyp_coeffs(params, N)
    coeffs = [(p - params.ab_over_c + (c - a) * (c - b) * n / (c * (c + n))) * A[n] for n in range(N + 1)]
    return TruncatedSeries(coeffs=tuple(coeffs))


def gp_test_bracket_coeffs(params: ParameterTriple, p: ScalarLike, N: int) -> TruncatedSeries:
    """(ab/c)(1-x)F(a+1,b+1;c+1;x) - p, written through A_n."""
    p = as_scalar(p)
    a, b, c = params.a, params.b, params.c
    A = hyp_coeffs(params, N)
    coeffs: List[Fraction] = [params.ab_over_c - p]
    coeffs += [(a * b + (a + b - c) * n) * A[n] / (c + n) for n in range(1, N + 1)]
    return TruncatedSeries(coeffs=tuple(coeffs))


def kappa(params: ParameterTriple, p: ScalarLike, n: int) -> Fraction:
    """Coefficient factor of the second-derivative combination; kappa_0 = -tau(p)."""
    p = as_scalar(p)
    a, b, c = params.a, params.b, params.c
    s = a + b - c
    linear = 1 + (2 * a * b + 2 * s * n) / (c + n)
    constant = (s * n * (1 + a + b + 2 * a * b + c + n + s * n) + a * b * (a + 1) * (b + 1)) / (
        (n + c) * (n + c + 1)
    )
    return -p * p + linear * p - constant


def kappa_increment(params: ParameterTriple, p: ScalarLike, n: int) -> Fraction:
    p = as_scalar(p)
    a, b, c = params.a, params.b, params.c
    return 2 * (c - a) * (c - b) * (1 + a + b + a * b - (c + 2) * p - (p + c - a - b) * n) / (
        (c + n) * (1 + c + n) * (2 + c + n)
    )


def kappa_limit(params: ParameterTriple, p: ScalarLike) -> Fraction:
    p = as_scalar(p)
    return (p - params.excess) * (params.excess + 1 - p)


def kappa_combination_coeffs(params: ParameterTriple, p: ScalarLike, N: int) -> TruncatedSeries:
    """p(1-p)F + (2abp/c)(1-x)F(a+1,b+1;c+1) - K(1-x)^2 F(a+2,b+2;c+2).

    K = ab(a+1)(b+1)/(c(c+1)). Its coefficients are A_n kappa_n, and
    F_p'' = -(1-x)^(p-2) times this series.
    """
    p = as_scalar(p)
    a, b, c = params.a, params.b, params.c
    K = a * b * (a + 1) * (b + 1) / (c * (c + 1))
    one_minus_x = binom_pow_coeffs(1, 1, N)
    first = series_scale(hyp_coeffs(params, N), p * (1 - p))
    second = series_scale(cauchy_product(one_minus_x, hyp_shift_coeffs(params, 1, N)), 2 * a * b * p / c)
    third = series_scale(
        cauchy_product(binom_pow_coeffs(2, 1, N), hyp_shift_coeffs(params, 2, N)), K
    )
    coeffs = [x + y - z for x, y, z in zip(first.coeffs, second.coeffs, third.coeffs)]
    return TruncatedSeries(coeffs=tuple(coeffs))


def mu_coeffs(params: ParameterTriple, N: int) -> TruncatedSeries:
    """Coefficients of (1-x)F(a+1,b+1;c+1;x)."""
    return cauchy_product(binom_pow_coeffs(1, 1, N), hyp_shift_coeffs(params, 1, N))


def mu_lambda_ratio(params: ParameterTriple, n: int) -> Fraction:
    a, b, c = params.a, params.b, params.c
    return c * (a * b + (a + b - c) * n) / (a * b * (n + c))


def mu_lambda_increment(params: ParameterTriple, n: int) -> Fraction:
    a, b, c = params.a, params.b, params.c
    return -c * (c - a) * (c - b) / (a * b * (c + n) * (1 + c + n))


def lambda_ratio_increment(params: ParameterTriple, n: int) -> Fraction:
    """lambda_{n+2}/lambda_{n+1} - lambda_{n+1}/lambda_n for lambda_n = A_n."""
    a, b, c = params.a, params.b, params.c
    numerator = (1 + a + b - a * b) * c - 2 * a * b + (1 - a - b - 2 * a * b + 3 * c) * n + (1 - a - b + c) * n * n
    return numerator / ((1 + n) * (2 + n) * (c + n) * (1 + c + n))
