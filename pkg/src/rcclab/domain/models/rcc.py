from enum import StrEnum
from fractions import Fraction
from math import lcm
from typing import Self

from pydantic import (
    BaseModel,
    ConfigDict,
    NonNegativeInt,
    PositiveInt,
    field_serializer,
    model_validator,
)


class RccVerdict(BaseModel):
    """Whether an automorphism has a cycle of length equal to its order.

    ``witness`` is an element on a regular cycle when the condition holds.
    """

    model_config = ConfigDict(frozen=True)

    holds: bool
    order: PositiveInt
    lengths: tuple[PositiveInt, ...]
    witness: NonNegativeInt | None = None

    @model_validator(mode="after")
    def validate_witness(self) -> Self:
        if lcm(*self.lengths) != self.order:
            raise ValueError("cycle lengths must have the order as lcm")
        if self.holds:
            if self.witness is None or self.order not in self.lengths:
                raise ValueError("a holding verdict needs an element on a regular cycle")
        elif self.witness is not None or max(self.lengths) >= self.order:
            raise ValueError("a failing verdict has no regular cycle")
        return self

    @property
    def max_length(self) -> int:
        return max(self.lengths)


class CertificateKind(StrEnum):
    TWO_PRIME_ORDER = "two_prime_order"
    COPRIME_ORDER = "coprime_order"
    NILPOTENT_GROUP = "nilpotent_group"
    LAMBDA_THIRD = "lambda_third"


class FastPathCertificate(BaseModel):
    """A sufficient condition for the RCC that holds for one automorphism."""

    model_config = ConfigDict(frozen=True)

    kind: CertificateKind
    automorphism_order: PositiveInt
    group_order: PositiveInt
    primes: tuple[PositiveInt, ...] = ()
    lambda_value: Fraction | None = None

    @field_serializer("lambda_value")
    def serialize_lambda(self, value: Fraction | None) -> str | None:
        return None if value is None else f"{value.numerator}/{value.denominator}"

    @model_validator(mode="after")
    def validate_claim(self) -> Self:
        match self.kind:
            case CertificateKind.TWO_PRIME_ORDER:
                if len(self.primes) > 2:
                    raise ValueError("order has more than two prime divisors")
            case CertificateKind.LAMBDA_THIRD:
                if self.lambda_value is None or self.lambda_value < Fraction(1, 3):
                    raise ValueError("lambda below 1/3")
            case CertificateKind.COPRIME_ORDER:
                if any(self.group_order % p == 0 for p in self.primes):
                    raise ValueError("automorphism order shares a prime with the group order")
        return self


class DominanceReport(BaseModel):
    """p-adic valuations of the cycle lengths of x, y and xy."""

    model_config = ConfigDict(frozen=True)

    p: PositiveInt
    length_x: PositiveInt
    length_y: PositiveInt
    length_product: PositiveInt
    valuation_x: NonNegativeInt
    valuation_y: NonNegativeInt
    valuation_product: NonNegativeInt

    @property
    def applicable(self) -> bool:
        return self.valuation_x != self.valuation_y

    @property
    def holds(self) -> bool | None:
        if not self.applicable:
            return None
        return self.valuation_product == max(self.valuation_x, self.valuation_y)


class PqrReport(BaseModel):
    """Cycle census of a non-RCC automorphism whose order is a product of three primes."""

    model_config = ConfigDict(frozen=True)

    applicable: bool
    reason: str = ""
    primes: tuple[PositiveInt, ...] = ()
    zeta: dict[PositiveInt, PositiveInt] = {}
    group_order: PositiveInt | None = None
    fixed_subgroup_order: PositiveInt | None = None
    fixed_subgroup_normal: bool | None = None
    failures: tuple[str, ...] = ()

    @property
    def holds(self) -> bool | None:
        return not self.failures if self.applicable else None


class RegularGeneratingSet(BaseModel):
    """Lifts x_i of a regular basis of G/Frat(G) with cycle lengths p^k_i * ford.

    ``p`` is None only for the trivial group, which has no generators.
    """

    model_config = ConfigDict(frozen=True)

    p: PositiveInt | None
    m: NonNegativeInt
    r: NonNegativeInt
    ford: PositiveInt
    elements: tuple[NonNegativeInt, ...]
    exponents: tuple[NonNegativeInt, ...]
    cycle_lengths: tuple[PositiveInt, ...]

    @model_validator(mode="after")
    def validate_lengths(self) -> Self:
        if not len(self.elements) == len(self.exponents) == len(self.cycle_lengths) == self.r:
            raise ValueError("one exponent and cycle length per generator")
        if self.p is None:
            if self.m or self.r:
                raise ValueError("only the trivial group has no prime")
            return self
        for k, length in zip(self.exponents, self.cycle_lengths, strict=True):
            if length != self.p**k * self.ford:
                raise ValueError(f"cycle length {length} is not {self.p}^{k} * {self.ford}")
        return self

    @property
    def exponent_bound(self) -> int:
        return (self.m - self.r) * self.r


class HallReport(BaseModel):
    """|Aut_Frat(G)| against the bound p^((m-r)r)."""

    model_config = ConfigDict(frozen=True)

    p: PositiveInt
    m: NonNegativeInt
    r: NonNegativeInt
    kernel_size: PositiveInt

    @property
    def bound(self) -> int:
        return self.p ** ((self.m - self.r) * self.r)

    @property
    def divides(self) -> bool:
        return self.bound % self.kernel_size == 0


class ProductReport(BaseModel):
    """Largest cycle lengths of two factor automorphisms and of their product."""

    model_config = ConfigDict(frozen=True)

    max_first: PositiveInt
    max_second: PositiveInt
    max_product: PositiveInt
    factors_rcc: bool
    product_rcc: bool
    coprime_orders: bool

    @property
    def holds(self) -> bool | None:
        if not (self.coprime_orders and self.factors_rcc):
            return None
        return self.product_rcc and self.max_product == lcm(self.max_first, self.max_second)
