"""Numeric checks of the rational, logarithmic, exponential and ratio bounds on F.

Every evaluator returns a BoundsReport whose ``ordering_holds`` only turns
true when both slacks exceed the numerical budget: eight machine epsilons
scaled by the magnitudes involved, plus the certified tail of ``eval_F``.
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from hyperam_app.core.config import EVAL_REL_TOL
from hyperam_app.core.errors import DomainError, RegimeViolation
from hyperam_app.core.exact import ParameterTriple, ScalarLike, as_scalar, render_scalar
from hyperam_app.models.domain import BoundsReport, PredictedVerdict, TheoremId
from hyperam_app.services.numeric import eval_F
from hyperam_app.utils.series import fp_coeffs, gp_reduced_coeffs, lnfp_coeffs
from hyperam_app.utils.theorems import theorem_prediction
from hyperam_app.utils.thresholds import nCn_sequence, region


logger = logging.getLogger("hyperam.bounds")

EPS = float(np.finfo(np.float64).eps)
INF = math.inf

# (regime, minimum n, roles swapped)
RATIONAL_REGIMES: Tuple[Tuple[TheoremId, int, bool], ...] = (
    (TheoremId.T1i, 0, False),
    (TheoremId.T1ii, 1, False),
    (TheoremId.T1iii, 1, True),
    (TheoremId.T2i, 0, False),
    (TheoremId.T2ii, 1, False),
    (TheoremId.T2iii, 1, True),
)

LOG_REGIMES: Tuple[TheoremId, ...] = (TheoremId.T3i, TheoremId.T3ii, TheoremId.T4)


def _check_x(x: float) -> float:
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    return x


def _check_n(n: int) -> int:
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    return n


def _report(
    lower: float, middle: float, upper: float, tail: float, regime: str, scale: float = 0.0
) -> BoundsReport:
    finite = [abs(v) for v in (lower, middle, upper) if math.isfinite(v)]
    budget = 8.0 * EPS * max(finite + [scale, 1.0]) + tail
    slack_lower = middle - lower
    slack_upper = upper - middle
    return BoundsReport(
        lower=lower,
        middle=middle,
        upper=upper,
        ordering_holds=slack_lower > budget and slack_upper > budget,
        slack_lower=slack_lower,
        slack_upper=slack_upper,
        regime=regime,
    )


def _floats(coeffs: Sequence[Fraction]) -> np.ndarray:
    return np.array([float(c) for c in coeffs], dtype=np.float64)


def _select(
    candidates: Sequence[str],
    requested: Optional[str],
    check: Callable[[str], Optional[str]],
) -> str:
    """First candidate whose ``check`` returns no failure; the requested one if given."""
    pool = [requested] if requested is not None else list(candidates)
    if requested is not None and requested not in candidates:
        raise RegimeViolation(f"unknown regime {requested!r}; choose from {', '.join(candidates)}")
    failures: List[str] = []
    for name in pool:
        failure = check(name)
        if failure is None:
            logger.info("regime %s selected", name)
            return name
        failures.append(f"{name}: {failure}")
    raise RegimeViolation("no regime applies; " + "; ".join(failures))


def _theorem_check(params: ParameterTriple, p: Fraction, n: int, min_n: int) -> Callable[[str], Optional[str]]:
    def check(name: str) -> Optional[str]:
        prediction = theorem_prediction(params, p, TheoremId(name))
        if prediction.verdict is not PredictedVerdict.AM:
            return f"{prediction.reason} fails"
        if n < min_n:
            return f"n >= {min_n} fails"
        return None

    return check


def bounds_rational(
    params: ParameterTriple,
    p: ScalarLike,
    n: int,
    x: float,
    regime: Optional[str] = None,
    rel_tol: float = EVAL_REL_TOL,
) -> BoundsReport:
    """Two-sided rational bounds on F from the partial sums of u_j(p).

    With S_n = sum_{j<=n} u_j x^j, the pair is
    (S_n - (sum_{j<=n} u_j) x^(n+1)) / (1-x)^p and S_{n+1} / (1-x)^p;
    the (iii) regimes swap which of them is the lower bound.
    """
    p, n, x = as_scalar(p), _check_n(n), _check_x(x)
    specs = {tid.value: (min_n, swapped) for tid, min_n, swapped in RATIONAL_REGIMES}

    def check(name: str) -> Optional[str]:
        return _theorem_check(params, p, n, specs[name][0])(name)

    chosen = _select(list(specs), regime, check)
    swapped = specs[chosen][1]

    u = _floats(fp_coeffs(params, p, n + 1).coeffs)
    weight = (1.0 - x) ** float(p)
    head = P.polyval(x, u[: n + 1])
    truncated = (head - u[: n + 1].sum() * x ** (n + 1)) / weight
    extended = (head + u[n + 1] * x ** (n + 1)) / weight
    lower, upper = (extended, truncated) if swapped else (truncated, extended)

    evaluation = eval_F(params, x, rel_tol=rel_tol)
    scale = float(P.polyval(x, np.abs(u))) / weight
    return _report(lower, evaluation.value, upper, evaluation.tail_bound, chosen, scale)


def bounds_log(
    params: ParameterTriple,
    p: ScalarLike,
    n: int,
    x: float,
    regime: Optional[str] = None,
    rel_tol: float = EVAL_REL_TOL,
) -> BoundsReport:
    """Logarithmic bounds on F from the coefficients v_j of (1-x)^p exp(F).

    T3i gives a lower bound only, T3ii an upper bound only, T4 both.
    """
    p, n, x = as_scalar(p), _check_n(n), _check_x(x)
    candidates = [tid.value for tid in LOG_REGIMES]
    chosen = _select(candidates, regime, _theorem_check(params, p, n, 0))

    # e is applied in floating point only here
    v = math.e * _floats(gp_reduced_coeffs(params, p, n + 1).coeffs)
    log_weight = float(p) * math.log1p(-x)
    head = P.polyval(x, v[: n + 1])

    def log_of(value: float) -> float:
        return math.log(value) - log_weight if value > 0 else -INF

    if chosen == TheoremId.T3i.value:
        lower, upper = log_of(head), INF
    elif chosen == TheoremId.T3ii.value:
        lower, upper = -INF, log_of(head)
    else:
        lower = log_of(head - v[: n + 1].sum() * x ** (n + 1))
        upper = log_of(head + v[n + 1] * x ** (n + 1))

    evaluation = eval_F(params, x, rel_tol=rel_tol)
    conditioning = float(P.polyval(x, np.abs(v))) / abs(head) if head else INF
    return _report(lower, evaluation.value, upper, evaluation.tail_bound, chosen, conditioning)


def _exp_refinements(params: ParameterTriple, p: Fraction, q: Fraction, n: int, name: str) -> Tuple[Optional[int], Optional[int], str]:
    """Smallest refinement index on each side, with a failure note when a side has none."""
    thresholds = dict(enumerate(nCn_sequence(params, n), start=1))
    s0 = max(Fraction(0), params.excess)
    if name == "R1":
        k_low = 1 if p <= s0 else None
        k_high = next((k for k, t in thresholds.items() if q >= t), None)
        note = f"p <= {render_scalar(s0)} and q >= kC_k for some k <= n"
    else:
        k_low = next((k for k, t in thresholds.items() if p <= t), None)
        k_high = 1 if q >= params.excess else None
        note = f"p <= kC_k for some k <= n and q >= a+b-c={render_scalar(params.excess)}"
    return k_low, k_high, note


def bounds_exp(
    params: ParameterTriple,
    p: ScalarLike,
    q: ScalarLike,
    n: int,
    x: float,
    regime: Optional[str] = None,
    rel_tol: float = EVAL_REL_TOL,
) -> BoundsReport:
    """exp(sum_{j<=n} w_j(p) x^j)/(1-x)^p < F < the same expression at q.

    The refinement index k <= n is searched per side; the selected regime is
    reported as ``R1`` or ``R2``, with ``:k=K`` when a refinement was needed.
    """
    p, q, n, x = as_scalar(p), as_scalar(q), _check_n(n), _check_x(x)
    membership = region(params)
    found: Dict[str, int] = {}

    def check(name: str) -> Optional[str]:
        if not (membership.in_R1 if name == "R1" else membership.in_R2):
            return f"{params.render()} not in {name}"
        if n < 1:
            return "n >= 1 fails"
        k_low, k_high, note = _exp_refinements(params, p, q, n, name)
        if k_low is None or k_high is None:
            return f"{note} fails"
        found[name] = max(k_low, k_high)
        return None

    chosen = _select(["R1", "R2"], regime, check)
    k = found[chosen]
    label = chosen if k <= 1 else f"{chosen}:k={k}"

    def side(s: Fraction) -> float:
        w = _floats(lnfp_coeffs(params, s, n).coeffs)
        return math.exp(float(P.polyval(x, w)) - float(s) * math.log1p(-x))

    lower, upper = side(p), side(q)
    evaluation = eval_F(params, x, rel_tol=rel_tol)
    return _report(lower, evaluation.value, upper, evaluation.tail_bound, label)


def bounds_ratio(
    params: ParameterTriple,
    p: float,
    q: float,
    r: float,
    s_choice: str = "auto",
    rel_tol: float = EVAL_REL_TOL,
) -> BoundsReport:
    """Closed-form bounds on F(r^p) / F(r^(p/q)) for p, q > 1."""
    p, q = float(p), float(q)
    if not (p > 1.0 and q > 1.0):
        raise RegimeViolation(f"p and q must exceed 1, got p={p!r}, q={q!r}")
    r = _check_x(r)
    membership = region(params)
    if s_choice == "auto":
        s_choice = "r1" if membership.in_R1 else "r2" if membership.in_R2 else ""
        if not s_choice:
            raise RegimeViolation(f"{params.render()} lies in neither R1 nor R2")
    elif s_choice not in ("r1", "r2"):
        raise RegimeViolation(f"unknown choice {s_choice!r}; choose auto, r1 or r2")
    elif not (membership.in_R1 if s_choice == "r1" else membership.in_R2):
        raise RegimeViolation(f"{params.render()} not in {s_choice.upper()}")

    a, b, c = params.a, params.b, params.c
    ab_c = float(params.ab_over_c)
    quad = float(a * b * (c - a) * (c - b) / (2 * c * c * (c + 1)))
    x, y = r**p, r ** (p / q)
    base = (1.0 - y) / (1.0 - x)
    if s_choice == "r1":
        s0 = float(max(Fraction(0), params.excess))
        lower = base**ab_c * math.exp(quad * (y * y - x * x))
        upper = base**s0 * math.exp((s0 - ab_c) * (y - x))
    else:
        lower = base ** float(params.excess) * math.exp(float((a - c) * (c - b) / c) * (y - x))
        upper = base**ab_c * math.exp(quad * (y * y - x * x))

    near, far = eval_F(params, x, rel_tol=rel_tol), eval_F(params, y, rel_tol=rel_tol)
    middle = near.value / far.value
    tail = middle * (near.tail_bound / near.value + far.tail_bound / far.value)
    return _report(lower, middle, upper, tail, s_choice.upper())


def q_sn(params: ParameterTriple, s: ScalarLike, n: int, q: float, x: float, rel_tol: float = EVAL_REL_TOL) -> float:
    """Q_{s,n}(x): the normalised remainder behind the ratio bounds.

    With y = x^(1/q) and D = y - x it is
    ln[(1-x)^s F(x) / ((1-y)^s F(y))] / D - sum_{j<=n} w_j(s) (x^j - y^j) / D.
    """
    x = _check_x(x)
    if not q > 1.0:
        raise DomainError(f"q must exceed 1, got {q!r}")
    s = as_scalar(s)
    y = x ** (1.0 / q)
    gap = y - x
    fs = float(s)
    log_ratio = (
        fs * math.log1p(-x)
        + math.log(eval_F(params, x, rel_tol=rel_tol).value)
        - fs * math.log1p(-y)
        - math.log(eval_F(params, y, rel_tol=rel_tol).value)
    )
    w = _floats(lnfp_coeffs(params, s, n).coeffs)
    powers = np.arange(n + 1, dtype=np.float64)
    correction = float(np.dot(w, x**powers - y**powers))
    return (log_ratio - correction) / gap
