from __future__ import annotations

import logging
import math
from typing import Optional, Tuple, Union

import numpy as np

from hyperam_app.core.config import EVAL_REL_TOL, EVAL_TERM_CAP
from hyperam_app.core.errors import DomainError, HypothesisViolated, NonconvergentAtTolerance
from hyperam_app.core.exact import ParameterTriple
from hyperam_app.models.domain import EvalResult
from hyperam_app.utils.thresholds import symmetric_params


logger = logging.getLogger("hyperam.numeric")

EULER_GAMMA = 0.577215664901532860606512090082

# B_2k / (2k) for k = 1..7
_DIGAMMA_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

_CHUNK = 1 << 16

Params = Union[ParameterTriple, Tuple[float, float, float]]


def _floats(params: Params) -> Tuple[float, float, float]:
    if isinstance(params, ParameterTriple):
        return float(params.a), float(params.b), float(params.c)
    a, b, c = (float(v) for v in params)
    if not (a > 0 and b > 0 and c > 0):
        raise DomainError(f"parameters must be positive, got {(a, b, c)}")
    return a, b, c


def _check_unit_interval(x: float) -> None:
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")


def _sum_series(a: float, b: float, c: float, x: float, rel_tol: float, term_cap: int) -> Tuple[float, int, float]:
    """Sum F(a,b;c;x) term by term; returns (value, terms_used, tail_bound).

    After term m every later ratio t_{j+1}/t_j is at most
    rho_m = x (1 + max(0, a+b-c-1)/(m+1) + max(0, ab-c)/((c+m)(m+1))),
    so once rho_m < 1 the tail is bounded by t_m rho_m / (1 - rho_m).
    """
    alpha = max(0.0, a + b - c - 1.0)
    beta = max(0.0, a * b - c)
    total = 0.0
    start = 0
    first = 1.0
    while start < term_cap:
        size = min(_CHUNK, term_cap - start)
        n = np.arange(start, start + size, dtype=np.float64)
        ratios = (a + n) * (b + n) * x / ((c + n) * (n + 1.0))
        terms = first * np.concatenate(([1.0], np.cumprod(ratios[:-1])))
        partial = total + np.cumsum(terms)
        rho = x * (1.0 + alpha / (n + 1.0) + beta / ((c + n) * (n + 1.0)))
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(rho < 1.0, terms * rho / (1.0 - rho), np.inf)
        done = np.nonzero(tail <= rel_tol * np.abs(partial))[0]
        if done.size:
            j = int(done[0])
            # pairwise re-summation of the accepted prefix
            value = total + float(np.sum(terms[: j + 1]))
            return value, start + j + 1, float(tail[j])
        total = float(partial[-1])
        first = float(terms[-1] * ratios[-1])
        start += size
    raise NonconvergentAtTolerance(f"term cap {term_cap} reached before relative tail <= {rel_tol:g}")


def eval_F(
    params: Params,
    x: float,
    rel_tol: float = EVAL_REL_TOL,
    method: str = "auto",
    term_cap: int = EVAL_TERM_CAP,
) -> EvalResult:
    """F(a,b;c;x) on (0,1) with a certified relative tail.

    ``auto`` switches to F = (1-x)^(c-a-b) F(c-a,c-b;c;x) when c < a+b and
    both c-a and c-b are positive.
    """
    _check_unit_interval(x)
    if not rel_tol > 0:
        raise DomainError("rel_tol must be positive")
    a, b, c = _floats(params)
    reducible = c - a > 0 and c - b > 0
    if method == "auto":
        method = "symmetry" if c < a + b and reducible else "direct"
    if method == "symmetry":
        if isinstance(params, ParameterTriple):
            reduced, exponent = symmetric_params(params, 0)
            ra, rb, rc = _floats(reduced)
            exponent = float(exponent)
        else:
            if not reducible:
                raise HypothesisViolated("symmetry evaluation needs c > max(a, b)")
            ra, rb, rc, exponent = c - a, c - b, c, c - a - b
        factor = (1.0 - x) ** exponent
        value, used, tail = _sum_series(ra, rb, rc, x, rel_tol, term_cap)
        return EvalResult(value=factor * value, terms_used=used, tail_bound=factor * tail, method="symmetry")
    if method != "direct":
        raise ValueError(f"unknown evaluation method {method!r}")
    value, used, tail = _sum_series(a, b, c, x, rel_tol, term_cap)
    return EvalResult(value=value, terms_used=used, tail_bound=tail, method="direct")


def log_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"log-gamma needs a positive argument, got {x!r}")
    return math.lgamma(x)


def beta(a: float, b: float) -> float:
    return math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))


def value_at_one(params: ParameterTriple) -> float:
    """Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b)), the limit of F at 1 when c > a+b."""
    if params.c <= params.a + params.b:
        raise HypothesisViolated(f"F(1) is finite only for c > a+b, got {params.render()}")
    a, b, c = _floats(params)
    return math.exp(log_gamma(c) + log_gamma(c - a - b) - log_gamma(c - a) - log_gamma(c - b))


def digamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"digamma needs a positive argument, got {x!r}")
    shift = 0.0
    while x < 10.0:
        shift -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for coeff in _DIGAMMA_ASYMPTOTIC:
        series += coeff * power
        power *= inv2
    return shift + math.log(x) - 0.5 / x - series


def ramanujan_R(a: float, b: float) -> float:
    if not (a > 0 and b > 0):
        raise DomainError("R(a, b) needs a, b > 0")
    return -2.0 * EULER_GAMMA - digamma(a) - digamma(b)


def asymptotic_residual(params: ParameterTriple, x: float, rel_tol: Optional[float] = None) -> float:
    """Residual of the boundary asymptotic of F at x -> 1.

    Zero-balanced: B(a,b)F + ln(1-x) - R(a,b). For c < a+b:
    F (1-x)^(a+b-c) Gamma(a)Gamma(b)/(Gamma(c)Gamma(a+b-c)) - 1.
    Closer than 1e-4 to the boundary the default tolerance loosens to 1e-6.
    """
    _check_unit_interval(x)
    if params.c > params.a + params.b:
        raise HypothesisViolated(f"no singular asymptotic for c > a+b, got {params.render()}")
    if rel_tol is None:
        rel_tol = 1e-10 if 1.0 - x >= 1e-4 else 1e-6
    a, b, c = _floats(params)
    value = eval_F(params, x, rel_tol=rel_tol).value
    if params.c == params.a + params.b:
        return beta(a, b) * value + math.log1p(-x) - ramanujan_R(a, b)
    s = a + b - c
    scale = math.exp(log_gamma(a) + log_gamma(b) - log_gamma(c) - log_gamma(s))
    return value * (1.0 - x) ** s * scale - 1.0
