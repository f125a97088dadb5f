from __future__ import annotations


class HyperamError(Exception):
    """Base error. ``exit_code`` is what the CLI returns when it escapes a command."""

    exit_code: int = 2

    def __init__(self, detail: str = "") -> None:
        super().__init__(detail)
        self.detail = detail

    def __str__(self) -> str:
        return self.detail or self.__class__.__name__


class NonPositiveParameter(HyperamError):
    pass


class ScalarParseError(HyperamError):
    pass


class OrderMismatch(HyperamError):
    pass


class OrderTooSmall(HyperamError):
    pass


class NonzeroConstantTerm(HyperamError):
    pass


class ConstantTermNotOne(HyperamError):
    pass


class ZeroConstantTerm(HyperamError):
    pass


class HypothesisViolated(HyperamError):
    pass


class NonpositiveDenominatorCoefficient(HyperamError):
    pass


class DomainError(HyperamError):
    pass


class NonconvergentAtTolerance(HyperamError):
    pass


class RegimeViolation(HyperamError):
    exit_code = 4


class SweepSpecError(HyperamError):
    pass
