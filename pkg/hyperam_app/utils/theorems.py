from __future__ import annotations

import logging
from fractions import Fraction
from typing import List, Optional

from hyperam_app.core.config import ESCALATION_CAP
from hyperam_app.core.exact import ParameterTriple, ScalarLike, as_scalar, render_scalar
from hyperam_app.models.domain import (
    AMVerdict,
    ConcordanceReport,
    ConditionKind,
    PredictedVerdict,
    ScanStatus,
    TheoremId,
    TheoremPrediction,
)
from hyperam_app.utils.monotonicity import (
    fp_second_verdict,
    gp_prime_verdict,
    lnfp_k_verdict,
    minus_fp_prime_verdict,
)
from hyperam_app.utils.thresholds import (
    at_or_above_high_root,
    at_or_above_low_root,
    classify_vs_roots,
    gp_reverse_applicable,
    gp_reverse_threshold,
    kCk,
    region,
)


logger = logging.getLogger("hyperam.theorems")

IFF = ConditionKind.IFF
SUFFICIENT = ConditionKind.SUFFICIENT_ONLY


def _predict(theorem_id: TheoremId, holds: bool, kind: ConditionKind, reason: str) -> TheoremPrediction:
    if holds:
        verdict = PredictedVerdict.AM
    elif kind is IFF:
        verdict = PredictedVerdict.NOT_AM
    else:
        verdict = PredictedVerdict.OUTSIDE_SCOPE
    return TheoremPrediction(verdict=verdict, condition_kind=kind, theorem_id=theorem_id, reason=reason)


def _outside(theorem_id: TheoremId, kind: ConditionKind, reason: str) -> TheoremPrediction:
    return TheoremPrediction(
        verdict=PredictedVerdict.OUTSIDE_SCOPE, condition_kind=kind, theorem_id=theorem_id, reason=reason
    )


def _fp_family(params: ParameterTriple, p: Fraction, theorem_id: TheoremId) -> TheoremPrediction:
    a, b, c = params.a, params.b, params.c
    family = theorem_id.value[:2]
    part = theorem_id.value[2:]
    if family == "T1":
        in_scope, hypothesis, top = c >= a + b, "c >= a+b", Fraction(1)
    elif family == "C1":
        in_scope, hypothesis, top = c == a + b, "c = a+b", Fraction(1)
    else:
        in_scope, hypothesis, top = max(a, b) < c < a + b, "max(a,b) < c < a+b", params.excess + 1
    kind = SUFFICIENT if part == "iii" else IFF
    if not in_scope:
        return _outside(theorem_id, kind, f"hypothesis {hypothesis} fails")

    if part == "i":
        low = params.ab_over_c
        return _predict(theorem_id, low <= p <= top, kind, f"ab/c={render_scalar(low)} <= p <= {render_scalar(top)}")
    position = classify_vs_roots(params, p)
    if part == "ii":
        holds = at_or_above_low_root(position) and p <= top
        return _predict(theorem_id, holds, kind, f"p_* <= p <= {render_scalar(top)} ({position.position.value})")
    holds = at_or_above_high_root(position) and p <= top + 1
    return _predict(theorem_id, holds, kind, f"p^* <= p <= {render_scalar(top + 1)} ({position.position.value})")


def _t5(params: ParameterTriple, p: Fraction, k: int, sign: int) -> TheoremPrediction:
    report = region(params)
    tid = TheoremId.T5
    threshold = params.ab_over_c if k <= 1 else kCk(params, k)
    label = "ab/c" if k <= 1 else f"{k}C_{k}"
    if report.in_R1:
        if sign > 0:
            s0 = max(Fraction(0), params.excess)
            return _predict(tid, p <= s0, IFF, f"R1: p <= max(0,a+b-c)={render_scalar(s0)}")
        return _predict(tid, p >= threshold, IFF, f"R1: p >= {label}={render_scalar(threshold)}")
    if report.in_R2:
        if sign > 0:
            return _predict(tid, p <= threshold, IFF, f"R2: p <= {label}={render_scalar(threshold)}")
        return _predict(tid, p >= params.excess, IFF, f"R2: p >= a+b-c={render_scalar(params.excess)}")
    return _outside(tid, IFF, "triple lies in neither R1 nor R2")


def theorem_prediction(
    params: ParameterTriple, p: ScalarLike, theorem_id: TheoremId, k: int = 0, sign: int = 1
) -> TheoremPrediction:
    """What the stated theorem predicts for (params, p).

    ``k`` and ``sign`` only matter for T5: the derivative order of ln F_p and
    whether the function or its negative is examined.
    """
    p = as_scalar(p)
    a, b, c = params.a, params.b, params.c
    tid = TheoremId(theorem_id)
    if tid.value[:2] in ("T1", "T2", "C1"):
        return _fp_family(params, p, tid)
    if tid is TheoremId.T3i:
        if c > a + b:
            return _outside(tid, IFF, "hypothesis c <= a+b fails")
        low = params.ab_over_c
        return _predict(tid, p <= low, IFF, f"p <= ab/c={render_scalar(low)}")
    if tid is TheoremId.T3ii:
        if not gp_reverse_applicable(params):
            return _outside(tid, SUFFICIENT, "needs c = a+b and a+b >= 2ab(a+b+1)")
        low = gp_reverse_threshold(params)
        return _predict(tid, low <= p <= 1, SUFFICIENT, f"{render_scalar(low)} <= p <= 1")
    if tid is TheoremId.T4:
        if c < a + b + a * b:
            return _outside(tid, IFF, "hypothesis c >= a+b+ab fails")
        low = params.ab_over_c
        return _predict(tid, low <= p <= 1, IFF, f"ab/c={render_scalar(low)} <= p <= 1")
    return _t5(params, p, k, sign)


def verdict_for(
    params: ParameterTriple, p: ScalarLike, theorem_id: TheoremId, N: int, k: int = 0, sign: int = 1
) -> AMVerdict:
    """Run the truncated verdict op that the theorem speaks about."""
    tid = TheoremId(theorem_id)
    suffix = tid.value[2:]
    if tid.value[:2] in ("T1", "T2", "C1"):
        if suffix == "i":
            return minus_fp_prime_verdict(params, p, N)
        return fp_second_verdict(params, p, N, -1 if suffix == "ii" else 1)
    if tid is TheoremId.T3i:
        return gp_prime_verdict(params, p, N, 1)
    if tid in (TheoremId.T3ii, TheoremId.T4):
        return gp_prime_verdict(params, p, N, -1)
    return lnfp_k_verdict(params, p, k, N, sign)


def check_concordance(
    params: ParameterTriple,
    p: ScalarLike,
    theorem_id: TheoremId,
    order: int,
    cap: Optional[int] = None,
    k: int = 0,
    sign: int = 1,
) -> ConcordanceReport:
    """Compare a theorem's prediction with the truncated scan.

    A predicted ``not_am`` whose scan is clean doubles the order up to ``cap``;
    if the violation still does not show, the point is reported as
    undetected at the cap rather than as a contradiction.
    """
    cap = ESCALATION_CAP if cap is None else cap
    prediction = theorem_prediction(params, p, theorem_id, k=k, sign=sign)
    tried: List[int] = [order]
    verdict = verdict_for(params, p, theorem_id, order, k=k, sign=sign)
    clean = verdict.status is not ScanStatus.MIXED

    if prediction.verdict is PredictedVerdict.OUTSIDE_SCOPE:
        return ConcordanceReport(prediction=prediction, verdict=verdict, concordant=None, orders_tried=tried)
    if prediction.verdict is PredictedVerdict.AM:
        return ConcordanceReport(prediction=prediction, verdict=verdict, concordant=clean, orders_tried=tried)

    current = order
    while clean and current < cap:
        current = min(max(2 * current, 1), cap)
        logger.info("escalating %s at p=%s to order %d", prediction.theorem_id.value, render_scalar(as_scalar(p)), current)
        verdict = verdict_for(params, p, theorem_id, current, k=k, sign=sign)
        tried.append(current)
        clean = verdict.status is not ScanStatus.MIXED
    return ConcordanceReport(
        prediction=prediction,
        verdict=verdict,
        concordant=True,
        undetected_at_cap=clean,
        orders_tried=tried,
    )
