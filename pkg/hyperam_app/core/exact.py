from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Any, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer, model_validator

from hyperam_app.core.errors import NonPositiveParameter, ScalarParseError


ExactScalar = Fraction

ScalarLike = Union[Fraction, int, str]


def parse_scalar(text: str) -> Fraction:
    """Read ``"n"``, ``"p/q"`` or a finite decimal literal exactly."""
    raw = text.strip()
    if not raw:
        raise ScalarParseError("empty rational literal")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScalarParseError(f"not a rational literal: {text!r}") from exc


def render_scalar(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_scalar(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rational scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise ValueError(f"expected an exact rational, got {type(value).__name__}")


def _coerce(value: Any) -> Fraction:
    try:
        return as_scalar(value)
    except ScalarParseError as exc:
        raise ValueError(str(exc)) from exc


Scalar = Annotated[
    Fraction,
    BeforeValidator(_coerce),
    PlainSerializer(render_scalar, return_type=str, when_used="json"),
]


def pochhammer(q: ScalarLike, n: int) -> Fraction:
    """Rising factorial (q)_n = q(q+1)...(q+n-1); (q)_0 = 1."""
    if n < 0:
        raise ValueError("pochhammer order must be nonnegative")
    q = as_scalar(q)
    result = Fraction(1)
    for k in range(n):
        result *= q + k
    return result


class ParameterTriple(BaseModel):
    """Hypergeometric parameters (a, b, c), all strictly positive."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: Scalar
    b: Scalar
    c: Scalar

    @model_validator(mode="after")
    def _positive(self) -> "ParameterTriple":
        if self.a <= 0 or self.b <= 0 or self.c <= 0:
            raise ValueError("a, b and c must be positive")
        return self

    @property
    def ab_over_c(self) -> Fraction:
        return self.a * self.b / self.c

    @property
    def excess(self) -> Fraction:
        """a + b - c."""
        return self.a + self.b - self.c

    @property
    def radius_term(self) -> Fraction:
        """ab(c-a)(c-b)/(c^2(c+1)), the discriminant excess over 1/4."""
        a, b, c = self.a, self.b, self.c
        return a * b * (c - a) * (c - b) / (c * c * (c + 1))

    def render(self) -> str:
        return f"({render_scalar(self.a)}, {render_scalar(self.b)}, {render_scalar(self.c)})"


def make_params(a: ScalarLike, b: ScalarLike, c: ScalarLike) -> ParameterTriple:
    a, b, c = as_scalar(a), as_scalar(b), as_scalar(c)
    for name, value in (("a", a), ("b", b), ("c", c)):
        if value <= 0:
            raise NonPositiveParameter(f"{name} must be positive, got {render_scalar(value)}")
    return ParameterTriple(a=a, b=b, c=c)
