from fractions import Fraction
from typing import Self

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveInt,
    field_serializer,
    model_validator,
)

from rcclab.domain.models.group import GroupFingerprint
from rcclab.domain.models.rcc import FastPathCertificate


def _fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


class AutomorphismRecord(BaseModel):
    """Analysis of one automorphism, as written to reports and log files."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    index: NonNegativeInt
    order: PositiveInt
    zeta: dict[PositiveInt, PositiveInt]
    lambda_value: Fraction = Field(alias="lambda")
    rcc: bool
    witness: NonNegativeInt | None = None
    certificate: FastPathCertificate | None = None
    certificates: list[FastPathCertificate] | None = None

    @field_serializer("lambda_value")
    def serialize_lambda(self, value: Fraction) -> str:
        return _fraction_text(value)

    @property
    def points(self) -> int:
        return sum(self.zeta.values())

    @property
    def max_length(self) -> int:
        return max(self.zeta)


class GroupSummary(BaseModel):
    """Group-level verdict over the analysed automorphisms.

    ``exhaustive`` is False when a sample stood in for Aut(G); the verdict then
    only covers the sample.
    """

    model_config = ConfigDict(frozen=True)

    order: PositiveInt
    tag: str | None = None
    fingerprint: GroupFingerprint
    automorphism_count: NonNegativeInt
    exhaustive: bool
    rcc_group: bool
    lambda_group: Fraction | None = None
    non_rcc_count: NonNegativeInt = 0
    certified_count: NonNegativeInt = 0

    @field_serializer("lambda_group")
    def serialize_lambda(self, value: Fraction | None) -> str | None:
        return None if value is None else _fraction_text(value)


class Report(BaseModel):
    """Everything ``analyze`` prints for one input.

    ``packaged`` is the automorphism shipped with a constructed instance; it
    counts towards the group verdict even when Aut(G) was only sampled.
    """

    model_config = ConfigDict(frozen=True)

    input: str
    summary: GroupSummary
    records: list[AutomorphismRecord]
    packaged: AutomorphismRecord | None = None

    @model_validator(mode="after")
    def validate_consistency(self) -> Self:
        for record in [*self.records, *([self.packaged] if self.packaged else [])]:
            if record.points != self.summary.order:
                raise ValueError(f"record {record.index} covers {record.points} points")
        verdicts = [r.rcc for r in self.records]
        if self.packaged is not None:
            verdicts.append(self.packaged.rcc)
        if self.summary.rcc_group != all(verdicts):
            raise ValueError("group verdict must be the conjunction of the records")
        if self.summary.automorphism_count != len(self.records):
            raise ValueError("automorphism count does not match the records")
        return self
