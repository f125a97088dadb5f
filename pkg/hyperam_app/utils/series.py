from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence

from hyperam_app.core.errors import (
    ConstantTermNotOne,
    NonzeroConstantTerm,
    OrderMismatch,
    OrderTooSmall,
    ZeroConstantTerm,
)
from hyperam_app.core.exact import ParameterTriple, ScalarLike, as_scalar
from hyperam_app.models.domain import TruncatedSeries


logger = logging.getLogger("hyperam.series")


def _series(coeffs: Sequence[Fraction], prefactor_e_power: int = 0) -> TruncatedSeries:
    return TruncatedSeries(coeffs=tuple(coeffs), prefactor_e_power=prefactor_e_power)


def _check_orders(u: TruncatedSeries, v: TruncatedSeries) -> None:
    if u.order != v.order:
        raise OrderMismatch(f"series orders differ: {u.order} vs {v.order}")


def hyp_coeffs(params: ParameterTriple, N: int) -> TruncatedSeries:
    """A_n = (a)_n (b)_n / ((c)_n n!) for n = 0..N, by the term-ratio recurrence."""
    a, b, c = params.a, params.b, params.c
    coeffs: List[Fraction] = [Fraction(1)]
    for n in range(N):
        coeffs.append(coeffs[-1] * (a + n) * (b + n) / ((c + n) * (n + 1)))
    return _series(coeffs)


def hyp_shift_coeffs(params: ParameterTriple, shift: int, N: int) -> TruncatedSeries:
    """Coefficients of F(a+k, b+k; c+k; x)."""
    return hyp_coeffs(
        ParameterTriple(a=params.a + shift, b=params.b + shift, c=params.c + shift), N
    )


def binom_pow_coeffs(p: ScalarLike, sign: int, N: int) -> TruncatedSeries:
    """(1-x)**(-p) for sign=-1 (W_n(p) = (p)_n/n!), (1-x)**p for sign=+1."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    q = as_scalar(p) if sign == -1 else -as_scalar(p)
    coeffs: List[Fraction] = [Fraction(1)]
    for n in range(N):
        coeffs.append(coeffs[-1] * (q + n) / (n + 1))
    return _series(coeffs)


def cauchy_product(u: TruncatedSeries, v: TruncatedSeries) -> TruncatedSeries:
    _check_orders(u, v)
    uc, vc = u.coeffs, v.coeffs
    coeffs = [sum((uc[k] * vc[n - k] for k in range(n + 1)), Fraction(0)) for n in range(len(uc))]
    return _series(coeffs, u.prefactor_e_power + v.prefactor_e_power)


def series_scale(u: TruncatedSeries, q: ScalarLike) -> TruncatedSeries:
    q = as_scalar(q)
    return _series([q * x for x in u.coeffs], u.prefactor_e_power)


def series_add(u: TruncatedSeries, v: TruncatedSeries) -> TruncatedSeries:
    _check_orders(u, v)
    if u.prefactor_e_power != v.prefactor_e_power:
        raise OrderMismatch("cannot add series carrying different powers of e")
    return _series([x + y for x, y in zip(u.coeffs, v.coeffs)], u.prefactor_e_power)


def series_sub(u: TruncatedSeries, v: TruncatedSeries) -> TruncatedSeries:
    return series_add(u, series_scale(v, -1))


def series_truncate(u: TruncatedSeries, N: int) -> TruncatedSeries:
    if N > u.order:
        raise OrderTooSmall(f"cannot truncate order {u.order} to {N}")
    return _series(u.coeffs[: N + 1], u.prefactor_e_power)


def series_exp_reduced(f: TruncatedSeries, e_power: int = 0) -> TruncatedSeries:
    """exp(f) for f[0] = 0. ``e_power`` records a constant removed by the caller."""
    if f[0] != 0:
        raise NonzeroConstantTerm(f"exp needs a zero constant term, got {f[0]}")
    fc = f.coeffs
    weighted = [k * fc[k] for k in range(len(fc))]
    g: List[Fraction] = [Fraction(1)]
    for n in range(1, len(fc)):
        acc = sum((weighted[k] * g[n - k] for k in range(1, n + 1)), Fraction(0))
        g.append(acc / n)
    return _series(g, e_power)


def series_log(f: TruncatedSeries) -> TruncatedSeries:
    """ln f for f[0] = 1. A power of e on ``f`` becomes the constant term."""
    if f[0] != 1:
        raise ConstantTermNotOne(f"log needs constant term 1, got {f[0]}")
    fc = f.coeffs
    # kc[k] holds k*C[k]
    kc: List[Fraction] = [Fraction(0)]
    for n in range(1, len(fc)):
        acc = n * fc[n] - sum((kc[k] * fc[n - k] for k in range(1, n)), Fraction(0))
        kc.append(acc)
    coeffs = [Fraction(f.prefactor_e_power)] + [kc[n] / n for n in range(1, len(fc))]
    return _series(coeffs)


def series_derivative(u: TruncatedSeries) -> TruncatedSeries:
    if u.order < 1:
        raise OrderTooSmall("derivative needs order >= 1")
    return _series([(n + 1) * u[n + 1] for n in range(u.order)], u.prefactor_e_power)


def series_reciprocal(u: TruncatedSeries) -> TruncatedSeries:
    """1/u as exp(-ln(u/u[0]))/u[0]."""
    if u[0] == 0:
        raise ZeroConstantTerm("reciprocal of a series with zero constant term")
    u0 = u[0]
    normalised = _series([x / u0 for x in u.coeffs])
    inverse = series_exp_reduced(series_scale(series_log(normalised), -1))
    return _series([x / u0 for x in inverse.coeffs], -u.prefactor_e_power)


def series_ratio(u: TruncatedSeries, v: TruncatedSeries) -> TruncatedSeries:
    return cauchy_product(u, series_reciprocal(v))


def fp_coeffs(params: ParameterTriple, p: ScalarLike, N: int) -> TruncatedSeries:
    """u_n(p): coefficients of (1-x)**p F(a,b;c;x).

    Equal to the Cauchy product of F with (1-x)**p, but computed from the
    three-term recurrence that the hypergeometric equation induces on u:
    (n+1)(n+c) u_{n+1} = [2n^2 - (2p-c-a-b+1)n - (pc-ab)] u_n
                         - (n-1+a-p)(n-1+b-p) u_{n-1}.
    """
    p = as_scalar(p)
    a, b, c = params.a, params.b, params.c
    coeffs: List[Fraction] = [Fraction(1)]
    previous = Fraction(0)
    for n in range(N):
        middle = 2 * n * n - (2 * p - c - a - b + 1) * n - (p * c - a * b)
        back = (n - 1 + a - p) * (n - 1 + b - p)
        nxt = (middle * coeffs[-1] - back * previous) / ((n + 1) * (n + c))
        previous = coeffs[-1]
        coeffs.append(nxt)
    return _series(coeffs)


def gp_reduced_coeffs(params: ParameterTriple, p: ScalarLike, N: int) -> TruncatedSeries:
    """(1-x)**p exp(F) / e as a rational series tagged with one power of e."""
    shifted = hyp_coeffs(params, N).coeffs
    exp_part = series_exp_reduced(_series((Fraction(0),) + shifted[1:]), e_power=1)
    return cauchy_product(exp_part, binom_pow_coeffs(p, 1, N))


@lru_cache(maxsize=256)
def ln_hyp_coeffs(params: ParameterTriple, N: int) -> TruncatedSeries:
    """C_n: coefficients of ln F(a,b;c;x)."""
    return series_log(hyp_coeffs(params, N))


def lnfp_coeffs(params: ParameterTriple, p: ScalarLike, N: int) -> TruncatedSeries:
    """w_n(p) = (n C_n - p)/n: coefficients of p ln(1-x) + ln F."""
    p = as_scalar(p)
    log_f = ln_hyp_coeffs(params, N)
    coeffs = [Fraction(0)] + [(n * log_f[n] - p) / n for n in range(1, N + 1)]
    return _series(coeffs)


def log_derivative_coeffs(params: ParameterTriple, N: int) -> TruncatedSeries:
    """(ab/c)(1-x)F(a+1,b+1;c+1;x) / F(a,b;c;x) = (1-x)(ln F)'.

    Coefficient n equals (n+1)C_{n+1} - n C_n.
    """
    shifted = hyp_shift_coeffs(params, 1, N)
    one_minus_x = binom_pow_coeffs(1, 1, N)
    numerator = series_scale(cauchy_product(one_minus_x, shifted), params.ab_over_c)
    logger.debug("log-derivative series for %s to order %d", params.render(), N)
    return series_ratio(numerator, hyp_coeffs(params, N))
