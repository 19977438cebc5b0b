from typing import Any

from pydantic import BaseModel, ConfigDict, PositiveInt

from rcclab.domain.models.automorphism import Automorphism
from rcclab.domain.models.group import FiniteGroup


class ExpectedProperties(BaseModel):
    """What a construction claims about its output. Unset fields are not claimed."""

    model_config = ConfigDict(frozen=True)

    group_order: PositiveInt
    automorphism_order: PositiveInt
    rcc: bool
    zeta: dict[PositiveInt, PositiveInt] | None = None
    fixed_subgroup_order: PositiveInt | None = None
    fixed_subgroup_normal: bool | None = None
    coset_cycle_lengths: dict[PositiveInt, PositiveInt] | None = None
    """Element index of a coset representative mapped to the single cycle length on that coset."""
    coset_size: PositiveInt | None = None


class ConstructedInstance(BaseModel):
    """A group, an automorphism of it, and the properties the construction promises."""

    model_config = ConfigDict(frozen=True)

    name: str
    group: FiniteGroup
    automorphism: Automorphism
    expected: ExpectedProperties


class InstanceCheck(BaseModel):
    """One re-derived property of a ConstructedInstance."""

    model_config = ConfigDict(frozen=True)

    name: str
    expected: Any
    actual: Any

    @property
    def passed(self) -> bool:
        return bool(self.expected == self.actual)
