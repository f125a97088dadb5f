from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperam_app.core.errors import (
    ConstantTermNotOne,
    NonzeroConstantTerm,
    OrderMismatch,
    OrderTooSmall,
    ZeroConstantTerm,
)
from hyperam_app.core.exact import make_params, pochhammer
from hyperam_app.models.domain import TruncatedSeries
from hyperam_app.utils.series import (
    binom_pow_coeffs,
    cauchy_product,
    fp_coeffs,
    gp_reduced_coeffs,
    hyp_coeffs,
    hyp_shift_coeffs,
    ln_hyp_coeffs,
    lnfp_coeffs,
    log_derivative_coeffs,
    series_add,
    series_derivative,
    series_exp_reduced,
    series_log,
    series_ratio,
    series_reciprocal,
    series_scale,
    series_sub,
    series_truncate,
)
from tests.strategies import exponents, series_values, small_rationals, triples


F = Fraction


def test_hyp_coeffs_k_case(k_case):
    assert hyp_coeffs(k_case, 2).coeffs == (1, F(1, 4), F(9, 64))


@given(triples, st.integers(0, 12))
def test_hyp_coeffs_match_pochhammer_form(params, N):
    A = hyp_coeffs(params, N)
    for n in range(N + 1):
        expected = pochhammer(params.a, n) * pochhammer(params.b, n) / (pochhammer(params.c, n) * factorial(n))
        assert A[n] == expected


@given(triples)
def test_derivative_of_hyp_is_shifted_hyp(params):
    N = 8
    assert series_derivative(hyp_coeffs(params, N + 1)) == series_scale(hyp_shift_coeffs(params, 1, N), params.ab_over_c)


def test_binomial_coefficients():
    assert binom_pow_coeffs(F(1, 4), 1, 2).coeffs == (1, F(-1, 4), F(-3, 32))
    assert binom_pow_coeffs(2, -1, 3).coeffs == (1, 2, 3, 4)
    with pytest.raises(ValueError):
        binom_pow_coeffs(1, 0, 3)


def test_fp_coeffs_k_case(k_case):
    expected = (1, 0, F(-1, 64))
    assert cauchy_product(hyp_coeffs(k_case, 2), binom_pow_coeffs(F(1, 4), 1, 2)).coeffs == expected
    assert fp_coeffs(k_case, F(1, 4), 2).coeffs == expected


def test_fp_coeffs_zero_balanced_at_p_zero():
    assert fp_coeffs(make_params(1, 1, 2), 0, 2).coeffs == (1, F(1, 2), F(1, 3))


@settings(max_examples=60)
@given(triples, exponents)
def test_fp_recurrence_equals_cauchy_product(params, p):
    N = 10
    assert fp_coeffs(params, p, N) == cauchy_product(hyp_coeffs(params, N), binom_pow_coeffs(p, 1, N))


def test_exp_and_log_of_known_series():
    x = TruncatedSeries.of([0, 1, 0, 0])
    assert series_exp_reduced(x).coeffs == (1, 1, F(1, 2), F(1, 6))
    assert series_log(binom_pow_coeffs(1, 1, 3)).coeffs == (0, -1, F(-1, 2), F(-1, 3))


@given(series_values(6))
def test_exp_undoes_log(tail):
    f = TruncatedSeries.of([1] + tail)
    assert series_exp_reduced(series_log(f)) == f


@given(series_values(5), series_values(5))
def test_cauchy_product_commutes(u, v):
    su, sv = TruncatedSeries.of(u), TruncatedSeries.of(v)
    assert cauchy_product(su, sv) == cauchy_product(sv, su)


@given(series_values(5), series_values(4), small_rationals.filter(lambda q: q != 0))
def test_ratio_undoes_product(u, v_tail, v0):
    su, sv = TruncatedSeries.of(u), TruncatedSeries.of([v0] + v_tail)
    assert series_ratio(cauchy_product(su, sv), sv) == su


def test_reciprocal_of_one_minus_x_is_geometric():
    assert series_reciprocal(binom_pow_coeffs(1, 1, 5)).coeffs == (1,) * 6


def test_add_sub_scale_truncate():
    u = TruncatedSeries.of([1, 2, 3])
    v = TruncatedSeries.of([F(1, 2), 0, -1])
    assert series_add(u, v).coeffs == (F(3, 2), 2, 2)
    assert series_sub(u, u).coeffs == (0, 0, 0)
    assert series_scale(u, F(-1, 3)).coeffs == (F(-1, 3), F(-2, 3), -1)
    assert series_truncate(u, 1).coeffs == (1, 2)


def test_series_errors():
    with pytest.raises(NonzeroConstantTerm):
        series_exp_reduced(TruncatedSeries.of([1, 1]))
    with pytest.raises(ConstantTermNotOne):
        series_log(TruncatedSeries.of([2, 1]))
    with pytest.raises(ZeroConstantTerm):
        series_reciprocal(TruncatedSeries.of([0, 1]))
    with pytest.raises(OrderMismatch):
        cauchy_product(TruncatedSeries.of([1, 1]), TruncatedSeries.of([1]))
    with pytest.raises(OrderMismatch):
        series_add(TruncatedSeries.of([1], 1), TruncatedSeries.of([1]))
    with pytest.raises(OrderTooSmall):
        series_truncate(TruncatedSeries.of([1, 1]), 3)
    with pytest.raises(OrderTooSmall):
        series_derivative(TruncatedSeries.of([1]))


def test_gp_reduced_carries_one_power_of_e(k_case):
    gp = gp_reduced_coeffs(k_case, 0, 2)
    assert gp.coeffs == (1, F(1, 4), F(11, 64))
    assert gp.prefactor_e_power == 1
    assert series_log(gp)[0] == 1


def test_log_coefficients_k_case(k_case):
    assert ln_hyp_coeffs(k_case, 2).coeffs == (0, F(1, 4), F(7, 64))
    assert lnfp_coeffs(k_case, F(1, 4), 1).coeffs == (0, 0)


@settings(max_examples=25)
@given(triples)
def test_log_derivative_identity(params):
    N = 64
    C = ln_hyp_coeffs(params, N + 1)
    expected = tuple((n + 1) * C[n + 1] - n * C[n] for n in range(N + 1))
    assert log_derivative_coeffs(params, N).coeffs == expected
