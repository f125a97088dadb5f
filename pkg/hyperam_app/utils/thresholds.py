from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

from hyperam_app.core.errors import HypothesisViolated
from hyperam_app.core.exact import ParameterTriple, ScalarLike, as_scalar, make_params
from hyperam_app.models.domain import (
    Comparison,
    RegionReport,
    RootEnclosure,
    RootPosition,
    RootPositionKind,
    ThresholdSummary,
)
from hyperam_app.utils.series import ln_hyp_coeffs


def tau(params: ParameterTriple, p: ScalarLike) -> Fraction:
    """p^2 - (1 + 2ab/c) p + ab(a+1)(b+1)/(c(c+1)).

    The constant term equals 2 u_2 at p = 0; its roots are
    1/2 + ab/c -+ sqrt(1/4 + ab(c-a)(c-b)/(c^2(c+1))).
    """
    p = as_scalar(p)
    a, b, c = params.a, params.b, params.c
    return p * p - (1 + 2 * params.ab_over_c) * p + a * b * (a + 1) * (b + 1) / (c * (c + 1))


def vertex(params: ParameterTriple) -> Fraction:
    return Fraction(1, 2) + params.ab_over_c


def discriminant_excess(params: ParameterTriple) -> Fraction:
    return params.radius_term


def _require_ordered_roots(params: ParameterTriple) -> None:
    if (params.c - params.a) * (params.c - params.b) < 0:
        raise HypothesisViolated(f"(c-a)(c-b) < 0 for {params.render()}")


def classify_vs_roots(params: ParameterTriple, p: ScalarLike) -> RootPosition:
    _require_ordered_roots(params)
    p = as_scalar(p)
    t = tau(params, p)
    left = p < vertex(params)
    if t < 0:
        kind = RootPositionKind.STRICTLY_BETWEEN
    elif t == 0:
        kind = RootPositionKind.EQUALS_PSTAR_LOW if left else RootPositionKind.EQUALS_PSTAR_HIGH
    else:
        kind = RootPositionKind.BELOW_PSTAR_LOW if left else RootPositionKind.ABOVE_PSTAR_HIGH
    return RootPosition(position=kind, tau=t)


def at_or_above_low_root(position: RootPosition) -> bool:
    return position.position is not RootPositionKind.BELOW_PSTAR_LOW


def at_or_above_high_root(position: RootPosition) -> bool:
    return position.position in (RootPositionKind.EQUALS_PSTAR_HIGH, RootPositionKind.ABOVE_PSTAR_HIGH)


def _bisect(params: ParameterTriple, lo: Fraction, hi: Fraction, eps: Fraction, rising: bool) -> Tuple[Fraction, Fraction]:
    # invariant: tau changes sign on [lo, hi] (nonneg at the outer end)
    for end in (lo, hi):
        if tau(params, end) == 0:
            return end, end
    while hi - lo > eps:
        mid = (lo + hi) / 2
        t = tau(params, mid)
        if t == 0:
            return mid, mid
        if (t < 0) == rising:
            lo = mid
        else:
            hi = mid
    return lo, hi


def root_enclosures(params: ParameterTriple, eps: ScalarLike) -> RootEnclosure:
    """Rational intervals of width <= eps around p_* and p^*."""
    _require_ordered_roots(params)
    eps = as_scalar(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    v = vertex(params)
    # sqrt(1/4 + D) <= 1/2 + D
    half_width = Fraction(1, 2) + discriminant_excess(params)
    low = _bisect(params, v - half_width, v, eps, rising=False)
    high = _bisect(params, v, v + half_width, eps, rising=True)
    return RootEnclosure(lower_root=low, upper_root=high)


def _compare(x: Fraction, y: Fraction) -> Comparison:
    if x < y:
        return Comparison.LESS
    if x == y:
        return Comparison.EQUAL
    return Comparison.GREATER


def region(params: ParameterTriple) -> RegionReport:
    a, b, c = params.a, params.b, params.c
    spread = (c - a) * (c - b)
    base = c >= a + b - 1
    return RegionReport(
        in_R1=base and (1 + a + b - a * b) * c >= 2 * a * b and spread >= 0,
        in_R2=base and spread <= 0,
        c_vs_ab_sum=_compare(c, a + b),
        c_ge_abc_combined=c >= a + b + a * b,
        zero_balanced=c == a + b,
        max_ab_lt_c=max(a, b) < c,
    )


def nCn_sequence(params: ParameterTriple, K: int) -> List[Fraction]:
    """[1*C_1, 2*C_2, ..., K*C_K]."""
    log_f = ln_hyp_coeffs(params, K)
    return [n * log_f[n] for n in range(1, K + 1)]


def kCk(params: ParameterTriple, k: int) -> Fraction:
    if k < 1:
        raise ValueError("k must be at least 1")
    return k * ln_hyp_coeffs(params, k)[k]


def nCn_limit(params: ParameterTriple) -> Fraction:
    return max(Fraction(0), params.excess)


def symmetric_params(params: ParameterTriple, p: ScalarLike) -> Tuple[ParameterTriple, Fraction]:
    """(1-x)^p F(a,b;c;x) = (1-x)^(p+c-a-b) F(c-a,c-b;c;x)."""
    a, b, c = params.a, params.b, params.c
    if not max(a, b) < c:
        raise HypothesisViolated(f"symmetry reduction needs max(a, b) < c, got {params.render()}")
    return make_params(c - a, c - b, c), as_scalar(p) - params.excess


def gp_reverse_applicable(params: ParameterTriple) -> bool:
    a, b = params.a, params.b
    return params.c == a + b and a + b >= 2 * a * b * (a + b + 1)


def gp_reverse_threshold(params: ParameterTriple) -> Fraction:
    """Lower end of the p-range where -G_p' is AM in the zero-balanced case.

    Uses ab(2a+2b+1)/((a+b)(a+b+1)). The logarithmic inequality built on the
    same result is sometimes quoted with ab(2a+2b+1)/(a+b), which is larger
    by the factor a+b+1; that form is not used here.
    """
    a, b = params.a, params.b
    return a * b * (2 * a + 2 * b + 1) / ((a + b) * (a + b + 1))


def threshold_summary(params: ParameterTriple, kmax: int = 5) -> ThresholdSummary:
    return ThresholdSummary(
        ab_over_c=params.ab_over_c,
        fp_upper_endpoint=params.excess + 1,
        fp_second_upper_endpoint=params.excess + 2,
        kCk=nCn_sequence(params, kmax),
        nCn_limit=nCn_limit(params),
    )
