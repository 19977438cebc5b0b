from collections.abc import Iterable, Sequence
from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, PositiveInt, field_validator, model_validator
from sympy import isprime

MAX_PRIME = 2**31

type IntMatrix = np.ndarray[tuple[int, int], np.dtype[np.int64]]


def _check_prime(p: int) -> int:
    if p > MAX_PRIME or not isprime(p):
        raise ValueError(f"modulus must be a prime <= 2^31, got {p}")
    return p


class GFPoly(BaseModel):
    """Dense polynomial over GF(p), coefficients lowest degree first.

    The zero polynomial has an empty coefficient tuple.
    """

    model_config = ConfigDict(frozen=True)

    p: PositiveInt
    coeffs: tuple[int, ...] = ()

    @field_validator("p")
    @classmethod
    def validate_p(cls, v: int) -> int:
        return _check_prime(v)

    @model_validator(mode="after")
    def validate_coeffs(self) -> Self:
        if any(c < 0 or c >= self.p for c in self.coeffs):
            raise ValueError(f"coefficients must lie in [0, {self.p})")
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("coefficients must be trimmed (nonzero leading coefficient)")
        return self

    @classmethod
    def from_coeffs(cls, p: int, coeffs: Iterable[int]) -> "GFPoly":
        """Reduce mod p and trim, lowest degree first."""
        reduced = [int(c) % p for c in coeffs]
        while reduced and reduced[-1] == 0:
            reduced.pop()
        return cls(p=p, coeffs=tuple(reduced))

    @classmethod
    def from_gf(cls, p: int, dense: Sequence[int]) -> "GFPoly":
        """Build from a sympy galoistools list (highest degree first)."""
        return cls.from_coeffs(p, reversed([int(c) for c in dense]))

    @classmethod
    def monomial(cls, p: int, degree: int, coefficient: int = 1) -> "GFPoly":
        return cls.from_coeffs(p, [0] * degree + [coefficient])

    @classmethod
    def one(cls, p: int) -> "GFPoly":
        return cls(p=p, coeffs=(1,))

    def to_gf(self) -> list[int]:
        """Coefficients highest degree first, as sympy galoistools expects."""
        return list(reversed(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            monomial = {0: "", 1: "X"}.get(power, f"X^{power}")
            if not monomial:
                terms.append(str(c))
            elif c == 1:
                terms.append(monomial)
            else:
                terms.append(f"{c}*{monomial}")
        return " + ".join(terms)


class GFMatrix(BaseModel):
    """Square matrix over GF(p), row-major."""

    model_config = ConfigDict(frozen=True)

    p: PositiveInt
    n: PositiveInt
    entries: tuple[tuple[int, ...], ...]

    @field_validator("p")
    @classmethod
    def validate_p(cls, v: int) -> int:
        return _check_prime(v)

    @model_validator(mode="after")
    def validate_entries(self) -> Self:
        if len(self.entries) != self.n or any(len(row) != self.n for row in self.entries):
            raise ValueError(f"matrix must be {self.n}x{self.n}")
        if any(x < 0 or x >= self.p for row in self.entries for x in row):
            raise ValueError(f"entries must lie in [0, {self.p})")
        return self

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]]) -> "GFMatrix":
        """Reduce mod p; the row count fixes n."""
        return cls(
            p=p, n=len(rows), entries=tuple(tuple(int(x) % p for x in row) for row in rows)
        )

    @classmethod
    def from_array(cls, p: int, array: IntMatrix) -> "GFMatrix":
        return cls.from_rows(p, np.asarray(array, dtype=np.int64).tolist())

    @classmethod
    def identity(cls, p: int, n: int) -> "GFMatrix":
        return cls.from_array(p, np.eye(n, dtype=np.int64))

    @property
    def array(self) -> IntMatrix:
        return np.array(self.entries, dtype=np.int64).reshape(self.n, self.n)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)


class FrobeniusDecomposition(BaseModel):
    """Change of basis U and the invariant factors p_1 | ... | p_s of a matrix A.

    U^-1 A U is the block-diagonal matrix of the companion matrices of the factors.
    """

    model_config = ConfigDict(frozen=True)

    basis_change: GFMatrix
    invariant_factors: tuple[GFPoly, ...]

    @model_validator(mode="after")
    def validate_factors(self) -> Self:
        p = self.basis_change.p
        if any(f.p != p for f in self.invariant_factors):
            raise ValueError("invariant factors must share the matrix modulus")
        if any(not f.is_monic or f.degree < 1 for f in self.invariant_factors):
            raise ValueError("invariant factors must be monic of positive degree")
        if sum(f.degree for f in self.invariant_factors) != self.basis_change.n:
            raise ValueError("invariant factor degrees must add up to the dimension")
        return self

    @property
    def minimal_polynomial(self) -> GFPoly:
        return self.invariant_factors[-1]
