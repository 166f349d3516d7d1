"""
Pydantic models for delpezzo-lines.

Defines the records exchanged between services and emitted in reports.
"""

import re
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import Rational, sign

# =============================================================================
# Enums
# =============================================================================


class Side(str, Enum):
    """Which half Q+ / Q- of the real cone carries a tritangent section."""

    PLUS = "plus"
    MINUS = "minus"


class Species(str, Enum):
    """Hyperbolic or elliptic, for real lines and tritangent sections alike."""

    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"


class ReportStatus(str, Enum):
    """Overall outcome of a command."""

    PASS = "pass"
    FAIL = "fail"


# =============================================================================
# Helpers
# =============================================================================

_DYNKIN_TERM = re.compile(r"^(\d*)([ADE])(\d+)$")


def dynkin_rank(label: str) -> int:
    """
    Rank of a Dynkin label such as "E8", "D4+A1", "4A1" or "0".

    Raises:
        ValueError: On malformed labels.
    """
    if label == "0":
        return 0
    total = 0
    for term in label.split("+"):
        match = _DYNKIN_TERM.match(term)
        if match is None:
            raise ValueError(f"malformed Dynkin label: {label!r}")
        multiplicity = int(match.group(1) or 1)
        total += multiplicity * int(match.group(3))
    return total


def format_rational(value: Any) -> str:
    """Serialize a rational as a "num/den" string."""
    r = Rational(value)
    return f"{r.p}/{r.q}"


# =============================================================================
# Deformation Classes
# =============================================================================


class DeformationClass(BaseModel):
    """One of the eleven real deformation classes with its expected data."""

    model_config = ConfigDict(frozen=True)

    label: str
    topology: str
    smith_type: str
    eigen_type: str
    arrangement: str
    expected_lines: int = Field(..., ge=0, le=240)
    expected_h: int = Field(..., ge=0)
    expected_e: int = Field(..., ge=0)
    expected_h1_dim: int = Field(..., ge=1, le=9)
    components: int = Field(..., ge=1)
    bertini_partner: str

    @field_validator("eigen_type")
    @classmethod
    def validate_eigen_type(cls, v: str) -> str:
        """Eigen type must parse as a Dynkin label."""
        dynkin_rank(v)
        return v

    @model_validator(mode="after")
    def validate_counts(self) -> "DeformationClass":
        """Counts add up and differ by twice the eigen rank."""
        if self.expected_h + self.expected_e != self.expected_lines:
            raise ValueError(f"{self.label}: h + e != number of real lines")
        if self.expected_h - self.expected_e != 2 * self.eigen_rank:
            raise ValueError(f"{self.label}: h - e != 2 * rank({self.eigen_type})")
        return self

    @property
    def eigen_rank(self) -> int:
        return dynkin_rank(self.eigen_type)

    @property
    def signed_sum(self) -> int:
        return self.expected_h - self.expected_e


# =============================================================================
# Counts and Verdicts
# =============================================================================


class LineCount(BaseModel):
    """Hyperbolic / elliptic split of the real lines."""

    model_config = ConfigDict(frozen=True)

    hyperbolic: int = Field(..., ge=0)
    elliptic: int = Field(..., ge=0)
    signed_sum: int

    @model_validator(mode="after")
    def validate_signed_sum(self) -> "LineCount":
        if self.signed_sum != self.hyperbolic - self.elliptic:
            raise ValueError("signed_sum must equal hyperbolic - elliptic")
        return self

    @property
    def total(self) -> int:
        return self.hyperbolic + self.elliptic


class TritangentVerdict(BaseModel):
    """Classification of one real tritangent section."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    side: Side
    species: Species
    resultant: Rational
    positive_real_tangencies: int = Field(..., ge=0, le=3)
    real_tangencies: int = Field(..., ge=1, le=3)

    @model_validator(mode="after")
    def validate_sign_rule(self) -> "TritangentVerdict":
        """Odd positive count, positive resultant and hyperbolic species go together."""
        if self.resultant == 0:
            raise ValueError("resultant must be nonzero")
        odd = self.positive_real_tangencies % 2 == 1
        positive = bool(self.resultant > 0)
        hyperbolic = self.species == Species.HYPERBOLIC
        if not (odd == positive == hyperbolic):
            raise ValueError("species, tangency parity and resultant sign disagree")
        if self.positive_real_tangencies > self.real_tangencies:
            raise ValueError("more positive tangencies than real tangencies")
        return self

    def to_payload(self) -> dict[str, Any]:
        return {
            "side": self.side.value,
            "species": self.species.value,
            "resultant": format_rational(self.resultant),
            "real_tangencies": self.real_tangencies,
            "positive_real_tangencies": self.positive_real_tangencies,
        }


class GramReport(BaseModel):
    """Moment matrix of p4 over the roots of q3, next to the resultant sign."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: tuple[tuple[Rational, ...], ...]
    determinant: Rational
    resultant_sign: int
    discriminant_sign: int
    shear: int = 0

    @property
    def determinant_sign(self) -> int:
        return int(sign(self.determinant))

    @property
    def signs_agree(self) -> bool:
        return self.determinant_sign == self.resultant_sign

    def to_payload(self) -> dict[str, Any]:
        return {
            "matrix": [[format_rational(x) for x in row] for row in self.matrix],
            "determinant": format_rational(self.determinant),
            "determinant_sign": self.determinant_sign,
            "resultant_sign": self.resultant_sign,
            "discriminant_sign": self.discriminant_sign,
            "signs_agree": self.signs_agree,
            "shear": self.shear,
        }


# =============================================================================
# Checks and Reports
# =============================================================================


class CheckResult(BaseModel):
    """Outcome of one acceptance check."""

    group: str
    name: str
    passed: bool
    detail: dict[str, Any] = Field(default_factory=dict)


class Report(BaseModel):
    """Top-level CLI report."""

    command: str
    status: ReportStatus
    version: str
    payload: dict[str, Any] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == ReportStatus.PASS
