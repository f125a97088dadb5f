import math

import mpmath
import pytest

from hyperam_app.core.errors import DomainError, HypothesisViolated, NonconvergentAtTolerance
from hyperam_app.core.exact import make_params
from hyperam_app.services.bounds import q_sn
from hyperam_app.services.numeric import (
    EULER_GAMMA,
    asymptotic_residual,
    beta,
    digamma,
    eval_F,
    log_gamma,
    ramanujan_R,
    value_at_one,
)
from hyperam_app.utils.thresholds import symmetric_params


def f223(x):
    """F(2,2;3;x) in closed form."""
    return 2.0 / (x * (1.0 - x)) + 2.0 * math.log1p(-x) / (x * x)


def test_eval_against_logarithm():
    result = eval_F((1.0, 1.0, 2.0), 0.5)
    assert result.value == pytest.approx(2.0 * math.log(2.0), rel=1e-12)
    assert result.method == "direct"
    assert result.tail_bound <= 1.01e-15 * result.value
    assert eval_F((1.0, 1.0, 2.0), 1e-8).value == pytest.approx(1.0 + 5e-9, rel=1e-15)


@pytest.mark.parametrize(
    "triple, x",
    [(("1/2", "1/2", 1), 0.3), (("1/2", 2, "8/5"), 0.7), ((1, 1, 3), 0.95), (("3/2", 1, 2), 0.6)],
)
def test_eval_against_mpmath(triple, x):
    params = make_params(*triple)
    expected = float(mpmath.hyp2f1(float(params.a), float(params.b), float(params.c), x))
    assert eval_F(params, x).value == pytest.approx(expected, rel=1e-12)


def test_symmetry_path_agrees_with_direct_sum(neither_triple):
    auto = eval_F(neither_triple, 0.9)
    direct = eval_F(neither_triple, 0.9, method="direct")
    assert auto.method == "symmetry"
    assert auto.value == pytest.approx(f223(0.9), rel=1e-12)
    assert direct.value == pytest.approx(auto.value, rel=1e-12)


def test_symmetry_path_uses_reflected_triple(neither_triple):
    reduced, exponent = symmetric_params(neither_triple, 0)
    assert (reduced.render(), exponent) == ("(1, 1, 3)", -1)
    exact = eval_F(neither_triple, 0.75, method="symmetry")
    floats = eval_F((2.0, 2.0, 3.0), 0.75, method="symmetry")
    reflected = eval_F(reduced, 0.75, method="direct")
    assert exact.value == pytest.approx(reflected.value / 0.25, rel=1e-14)
    assert floats.value == pytest.approx(exact.value, rel=1e-14)


def test_eval_rejects_bad_inputs(r2_triple):
    for x in (0.0, 1.0, -0.5):
        with pytest.raises(DomainError):
            eval_F((1.0, 1.0, 2.0), x)
    with pytest.raises(DomainError):
        eval_F((1.0, 1.0, 2.0), 0.5, rel_tol=0.0)
    with pytest.raises(DomainError):
        eval_F((-1.0, 1.0, 2.0), 0.5)
    with pytest.raises(NonconvergentAtTolerance):
        eval_F((1.0, 1.0, 2.0), 0.9, term_cap=5)
    with pytest.raises(HypothesisViolated):
        eval_F(r2_triple, 0.5, method="symmetry")
    with pytest.raises(ValueError):
        eval_F((1.0, 1.0, 2.0), 0.5, method="bogus")


def test_value_at_one(r1_triple, k_case):
    assert value_at_one(make_params("1/2", "1/2", 2)) == pytest.approx(4.0 / math.pi, rel=1e-13)
    assert value_at_one(r1_triple) == pytest.approx(2.0, rel=1e-13)
    with pytest.raises(HypothesisViolated):
        value_at_one(k_case)


def test_eval_close_to_the_boundary(r1_triple):
    result = eval_F(r1_triple, 1.0 - 1e-8, rel_tol=1e-5)
    assert abs(result.value - 2.0) < 2e-5


def test_gamma_helpers():
    assert beta(0.5, 0.5) == pytest.approx(math.pi, rel=1e-14)
    with pytest.raises(DomainError):
        log_gamma(0.0)


@pytest.mark.parametrize("x", [0.3, 0.5, 1.0, 2.5, 17.0])
def test_digamma(x):
    assert digamma(x) == pytest.approx(float(mpmath.digamma(x)), rel=1e-12, abs=1e-13)


def test_digamma_special_values():
    assert digamma(1.0) == pytest.approx(-EULER_GAMMA, rel=1e-13)
    with pytest.raises(DomainError):
        digamma(-1.0)


def test_ramanujan_constant():
    assert ramanujan_R(0.5, 0.5) == pytest.approx(4.0 * math.log(2.0), rel=1e-12)
    assert ramanujan_R(1.0, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_zero_balanced_residual_vanishes(k_case):
    assert abs(asymptotic_residual(k_case, 1.0 - 1e-6)) <= 1e-4


@pytest.mark.parametrize(
    "triple, expected",
    [
        (("1/2", "1/2", 1), [0.0134, 0.0019, 2.5e-4]),
        ((2, 2, 3), [-0.0369, -0.0059, -8.2e-4]),
    ],
)
def test_residual_shrinks_towards_the_boundary(triple, expected):
    params = make_params(*triple)
    residuals = [asymptotic_residual(params, x) for x in (0.99, 0.999, 0.9999)]
    assert residuals == pytest.approx(expected, rel=0.05)
    assert abs(residuals[0]) > abs(residuals[1]) > abs(residuals[2])


def test_residual_needs_a_singular_case(r1_triple):
    with pytest.raises(HypothesisViolated):
        asymptotic_residual(r1_triple, 0.9)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("x", [0.3, 0.5, 0.7])
def test_remainder_signs_in_r1(n, x):
    for params in (make_params("1/2", "1/2", 1), make_params(1, 1, 3)):
        assert q_sn(params, 0, n, 2.0, x) < 0
        assert q_sn(params, params.ab_over_c, n, 2.0, x) > 0


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("x", [0.3, 0.5, 0.7])
def test_remainder_signs_in_r2(r2_triple, n, x):
    assert q_sn(r2_triple, "5/8", n, 2.0, x) < 0
    assert q_sn(r2_triple, "9/10", n, 2.0, x) > 0


def test_remainder_rejects_small_q(k_case):
    with pytest.raises(DomainError):
        q_sn(k_case, 0, 1, 1.0, 0.5)
