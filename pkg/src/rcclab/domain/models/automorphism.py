from functools import cached_property
from math import lcm
from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, NonNegativeInt, PositiveInt, model_validator

from rcclab.domain.models.group import FiniteGroup
from rcclab.domain.models.permutation import cycle_census, is_permutation, permutation_order


class Automorphism(BaseModel):
    """A certified automorphism stored as the permutation of element indices."""

    model_config = ConfigDict(frozen=True)

    group: FiniteGroup
    perm: tuple[int, ...]

    @model_validator(mode="after")
    def validate_automorphism(self) -> Self:
        group = self.group
        if len(self.perm) != group.order or not is_permutation(self.perm):
            raise ValueError("automorphism must permute the group elements")
        if self.perm[group.identity] != group.identity:
            raise ValueError("automorphism must fix the identity")
        images = np.array(self.perm, dtype=np.int64)
        left = images[group.table]
        right = group.table[np.ix_(images, images)]
        if not np.array_equal(left, right):
            a, b = (int(x) for x in np.argwhere(left != right)[0])
            raise ValueError(f"not multiplicative at ({a}, {b})")
        return self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.perm == other.perm and self.group == other.group

    def __hash__(self) -> int:
        return hash(self.perm)

    def __repr__(self) -> str:
        return f"Automorphism(order={self.order}, group={self.group!r})"

    def __call__(self, g: int) -> int:
        return self.perm[g]

    @cached_property
    def order(self) -> int:
        return permutation_order(self.perm)

    @property
    def images(self) -> np.ndarray:  # type: ignore[type-arg]
        return np.array(self.perm, dtype=np.int64)

    @property
    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.perm))

    def compose(self, inner: "Automorphism") -> "Automorphism":
        """self after inner."""
        return Automorphism(group=self.group, perm=tuple(self.perm[x] for x in inner.perm))

    def inverse(self) -> "Automorphism":
        result = [0] * len(self.perm)
        for x, image in enumerate(self.perm):
            result[image] = x
        return Automorphism(group=self.group, perm=tuple(result))

    def power(self, exponent: int) -> "Automorphism":
        base = self if exponent >= 0 else self.inverse()
        images = np.arange(self.group.order, dtype=np.int64)
        step = base.images
        exponent = abs(exponent)
        while exponent:
            if exponent & 1:
                images = step[images]
            step = step[step]
            exponent >>= 1
        return Automorphism(group=self.group, perm=tuple(int(x) for x in images))


class CycleStructure(BaseModel):
    """zeta_d for every cycle length d: the number of points on cycles of length d."""

    model_config = ConfigDict(frozen=True)

    counts: dict[PositiveInt, PositiveInt]

    @model_validator(mode="after")
    def validate_counts(self) -> Self:
        if not self.counts:
            raise ValueError("cycle structure of an empty set")
        for length, points in self.counts.items():
            if points % length:
                raise ValueError(f"{points} points cannot fill cycles of length {length}")
        if 1 not in self.counts:
            raise ValueError("the identity element is always a fixed point")
        return self

    @classmethod
    def of_permutation(cls, perm: tuple[int, ...]) -> "CycleStructure":
        return cls(counts=cycle_census(perm))

    def zeta(self, length: int) -> int:
        return self.counts.get(length, 0)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(sorted(self.counts))

    @property
    def max_length(self) -> int:
        return max(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def order(self) -> int:
        return lcm(*self.counts)

    def cycle_count(self, length: int) -> int:
        return self.zeta(length) // length


class AffineMapReport(BaseModel):
    """The map g -> g0 * alpha(g) and what is known about its order.

    ``order_bound`` is o1 * o2 for abelian groups, where o1 = ord(alpha) and o2
    is the largest order of a fixed point of alpha.
    """

    model_config = ConfigDict(frozen=True)

    images: tuple[int, ...]
    bijective: bool
    tail: NonNegativeInt
    period: PositiveInt
    automorphism_order: PositiveInt
    max_fixed_point_order: PositiveInt
    order_bound: PositiveInt | None = None

    @property
    def order(self) -> int | None:
        """Functional order, defined only for bijections."""
        return self.period if self.bijective else None

    @property
    def bound_holds(self) -> bool | None:
        if self.order_bound is None or self.order is None:
            return None
        return self.order_bound % self.order == 0
