from __future__ import annotations

from enum import Enum as PyEnum
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from hyperam_app.core.exact import Scalar


class ScanStatus(PyEnum):
    ALL_NONNEG = "all_nonneg"
    ALL_NONPOS = "all_nonpos"
    MIXED = "mixed"


class Trend(PyEnum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSTANT = "constant"
    MIXED = "mixed"


class Comparison(PyEnum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class RootPositionKind(PyEnum):
    BELOW_PSTAR_LOW = "below_pstar_low"
    EQUALS_PSTAR_LOW = "equals_pstar_low"
    STRICTLY_BETWEEN = "strictly_between"
    EQUALS_PSTAR_HIGH = "equals_pstar_high"
    ABOVE_PSTAR_HIGH = "above_pstar_high"


class PredictedVerdict(PyEnum):
    AM = "am"
    NOT_AM = "not_am"
    OUTSIDE_SCOPE = "outside_scope"


class ConditionKind(PyEnum):
    IFF = "iff"
    SUFFICIENT_ONLY = "sufficient_only"


class TheoremId(PyEnum):
    T1i = "T1i"
    T1ii = "T1ii"
    T1iii = "T1iii"
    T2i = "T2i"
    T2ii = "T2ii"
    T2iii = "T2iii"
    C1i = "C1i"
    C1ii = "C1ii"
    C1iii = "C1iii"
    T3i = "T3i"
    T3ii = "T3ii"
    T4 = "T4"
    T5 = "T5"


class Family(PyEnum):
    F = "F"
    FP = "Fp"
    GP = "Gp"
    LNFP = "lnFp"


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class TruncatedSeries(_Frozen):
    """e**prefactor_e_power * sum(coeffs[n] x**n), truncated at ``order``."""

    coeffs: Tuple[Scalar, ...]
    prefactor_e_power: int = 0

    @field_validator("coeffs")
    @classmethod
    def non_empty(cls, v: Tuple[Fraction, ...]) -> Tuple[Fraction, ...]:
        if not v:
            raise ValueError("a truncated series needs at least the constant term")
        return v

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    @classmethod
    def of(cls, values, prefactor_e_power: int = 0) -> "TruncatedSeries":
        return cls(coeffs=tuple(values), prefactor_e_power=prefactor_e_power)


class AMVerdict(_Frozen):
    status: ScanStatus
    first_violation: Optional[int] = None
    checked_order: int

    @model_validator(mode="after")
    def _violation_matches_status(self) -> "AMVerdict":
        if self.status is ScanStatus.MIXED:
            if self.first_violation is None or self.first_violation > self.checked_order:
                raise ValueError("mixed verdict needs a violation index within the checked order")
        elif self.first_violation is not None:
            raise ValueError("only mixed verdicts carry a violation index")
        return self


class RatioTrend(_Frozen):
    kind: Trend
    first_violation: Optional[int] = None


class JurkatReport(_Frozen):
    hypotheses_hold: bool
    q_ratio_increasing: bool
    ratio_trend: RatioTrend
    predicted_sign: Optional[int] = None
    ratio_derivative_verdict: AMVerdict
    conclusion_matches: bool


class RegionReport(_Frozen):
    in_R1: bool
    in_R2: bool
    c_vs_ab_sum: Comparison
    c_ge_abc_combined: bool
    zero_balanced: bool
    max_ab_lt_c: bool


class RootPosition(_Frozen):
    position: RootPositionKind
    tau: Scalar


class RootEnclosure(_Frozen):
    lower_root: Tuple[Scalar, Scalar]
    upper_root: Tuple[Scalar, Scalar]


class ThresholdSummary(_Frozen):
    ab_over_c: Scalar
    fp_upper_endpoint: Scalar
    fp_second_upper_endpoint: Scalar
    kCk: List[Scalar]
    nCn_limit: Scalar


class TheoremPrediction(_Frozen):
    verdict: PredictedVerdict
    condition_kind: ConditionKind
    theorem_id: TheoremId
    reason: str = ""


class ConcordanceReport(_Frozen):
    prediction: TheoremPrediction
    verdict: AMVerdict
    concordant: Optional[bool] = None
    undetected_at_cap: bool = False
    orders_tried: List[int]


class EvalResult(_Frozen):
    value: float
    terms_used: int
    tail_bound: float
    rigorous: bool = True
    method: str = "direct"


class BoundsReport(_Frozen):
    lower: float
    middle: float
    upper: float
    ordering_holds: bool
    slack_lower: float
    slack_upper: float
    regime: str = ""
