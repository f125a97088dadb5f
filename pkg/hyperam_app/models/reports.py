from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import Field, field_validator

from hyperam_app.core.config import DEFAULT_ORDER
from hyperam_app.core.exact import Scalar
from hyperam_app.models.domain import (
    BoundsReport,
    ConditionKind,
    PredictedVerdict,
    RegionReport,
    RootEnclosure,
    RootPosition,
    ScanStatus,
    TheoremId,
    ThresholdSummary,
    _Frozen,
)


BOUND_CHECKS = ("rational", "log", "exp")
KNOWN_CHECKS = tuple(t.value for t in TheoremId) + ("region",) + BOUND_CHECKS


class CoeffRow(_Frozen):
    n: int
    exact: Scalar
    approx: float


class CoeffDump(_Frozen):
    family: str
    params: str
    p: Optional[Scalar] = None
    order: int
    prefactor_e_power: int = 0
    rows: List[CoeffRow]


class ClassifyReport(_Frozen):
    params: str
    region: RegionReport
    thresholds: ThresholdSummary
    root_position: Optional[RootPosition] = None
    enclosures: Optional[RootEnclosure] = None
    note: str = ""


class BoundsRow(BoundsReport):
    x: float
    n: Optional[int] = None


class BoundsRun(_Frozen):
    family: str
    params: str
    inputs: Dict[str, str]
    rows: List[BoundsRow]


class SweepSpec(_Frozen):
    """A parsed sweep file: expanded parameter grids plus the checks to run."""

    a: List[Scalar]
    b: List[Scalar]
    c: List[Scalar]
    p: List[Optional[Scalar]] = Field(default_factory=lambda: [None])
    order: int = DEFAULT_ORDER
    checks: List[str]
    k: int = 0
    sign: int = 1
    q: Optional[Scalar] = None
    n: int = 2
    x: List[float] = Field(default_factory=lambda: [0.5])
    cap: Optional[int] = None

    @field_validator("checks")
    @classmethod
    def known_checks(cls, v: List[str]) -> List[str]:
        unknown = [c for c in v if c not in KNOWN_CHECKS]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")
        if not v:
            raise ValueError("at least one check is required")
        return v

    @field_validator("sign")
    @classmethod
    def unit_sign(cls, v: int) -> int:
        if v not in (1, -1):
            raise ValueError("sign must be 1 or -1")
        return v


class PointResult(_Frozen):
    """One row of a run: a grid point, one check, and whatever that check produced."""

    a: Scalar
    b: Scalar
    c: Scalar
    p: Optional[Scalar] = None
    check: str
    status: str = "ok"
    prediction: Optional[PredictedVerdict] = None
    condition_kind: Optional[ConditionKind] = None
    verdict: Optional[ScanStatus] = None
    first_violation: Optional[int] = None
    checked_order: Optional[int] = None
    concordant: Optional[bool] = None
    undetected_at_cap: Optional[bool] = None
    in_R1: Optional[bool] = None
    in_R2: Optional[bool] = None
    zero_balanced: Optional[bool] = None
    x: Optional[float] = None
    lower: Optional[float] = None
    middle: Optional[float] = None
    upper: Optional[float] = None
    ordering_holds: Optional[bool] = None
    regime: Optional[str] = None
    reason: str = ""


class RunSummary(_Frozen):
    rows: int = 0
    concordant: int = 0
    discordant: int = 0
    outside_scope: int = 0
    undetected_at_cap: int = 0
    bounds_failed: int = 0
    skipped: int = 0
    errors: int = 0


class RunReport(_Frozen):
    tool: str = "hyperam"
    version: str
    command: str
    inputs: Dict[str, str]
    results: List[PointResult]
    summary: RunSummary

    @property
    def failed(self) -> bool:
        return self.summary.discordant > 0 or self.summary.bounds_failed > 0


POINT_COLUMNS: List[str] = list(PointResult.model_fields)
