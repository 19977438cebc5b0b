from collections.abc import Iterable
from typing import Any, Self

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    NonNegativeInt,
    PositiveInt,
    PrivateAttr,
    field_validator,
    model_validator,
)

type Table = np.ndarray[tuple[int, int], np.dtype[np.int64]]
type Perm = np.ndarray[tuple[int], np.dtype[np.int64]]


class FiniteGroup(BaseModel):
    """A finite group given by its full multiplication table.

    ``table[i, j]`` is the index of ``g_i * g_j``. Instances are only created
    through ``group_kernel.validate_group``, which certifies the axioms.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: PositiveInt
    labels: tuple[str, ...]
    table: np.ndarray  # type: ignore[type-arg]
    identity: NonNegativeInt = 0
    generators: tuple[int, ...] | None = None
    tag: str | None = None

    _cache: dict[str, Any] = PrivateAttr(default_factory=dict)

    @field_validator("table", mode="before")
    @classmethod
    def validate_table(cls, v: Any) -> Table:
        table = np.array(v, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError("multiplication table must be square")
        table.flags.writeable = False
        return table

    @model_validator(mode="after")
    def validate_shape(self) -> Self:
        if self.table.shape[0] != self.order:
            raise ValueError(f"table has {self.table.shape[0]} rows for order {self.order}")
        if len(self.labels) != self.order:
            raise ValueError(f"{len(self.labels)} labels for order {self.order}")
        if self.identity >= self.order:
            raise ValueError("identity index out of range")
        if self.generators is not None and any(
            g < 0 or g >= self.order for g in self.generators
        ):
            raise ValueError("generator index out of range")
        return self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (
            self.order == other.order
            and self.identity == other.identity
            and bool(np.array_equal(self.table, other.table))
        )

    def __hash__(self) -> int:
        return hash((self.order, self.identity, self.table.tobytes()))

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}, tag={self.tag!r})"

    def _cached(self, key: str, factory: Any) -> Any:
        if key not in self._cache:
            self._cache[key] = factory()
        return self._cache[key]

    @property
    def rows(self) -> list[list[int]]:
        """The table as nested lists, for scalar lookups in tight loops."""
        result: list[list[int]] = self._cached("rows", self.table.tolist)
        return result

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    @property
    def inverses(self) -> Perm:
        def compute() -> Perm:
            result = np.argmax(self.table == self.identity, axis=1).astype(np.int64)
            result.flags.writeable = False
            return result

        inverses: Perm = self._cached("inverses", compute)
        return inverses

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def power(self, a: int, exponent: int) -> int:
        base = a if exponent >= 0 else self.inv(a)
        exponent = abs(exponent)
        result = self.identity
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    @property
    def element_orders(self) -> tuple[int, ...]:
        def compute() -> tuple[int, ...]:
            rows = self.rows
            orders = []
            for g in range(self.order):
                x, n = g, 1
                while x != self.identity:
                    x = rows[x][g]
                    n += 1
                orders.append(n)
            return tuple(orders)

        orders: tuple[int, ...] = self._cached("element_orders", compute)
        return orders

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))


class Subgroup(BaseModel):
    """A subgroup of a certified FiniteGroup, members sorted by index."""

    model_config = ConfigDict(frozen=True)

    parent: FiniteGroup
    members: tuple[int, ...]

    @field_validator("members", mode="before")
    @classmethod
    def sort_members(cls, v: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted({int(x) for x in v}))

    @model_validator(mode="after")
    def validate_subgroup(self) -> Self:
        parent = self.parent
        if not self.members or self.members[0] < 0 or self.members[-1] >= parent.order:
            raise ValueError("subgroup members must be valid element indices")
        if parent.identity not in self.members:
            raise ValueError("subgroup must contain the identity")
        members = np.array(self.members, dtype=np.int64)
        products = parent.table[np.ix_(members, members)]
        if not np.isin(products, members).all():
            raise ValueError("subgroup is not closed under multiplication")
        if parent.order % len(self.members):
            raise ValueError(
                f"subgroup of size {len(self.members)} cannot live in a group of "
                f"order {parent.order}"
            )
        return self

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g: object) -> bool:
        return g in self.member_set

    @property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @property
    def is_trivial(self) -> bool:
        return len(self.members) == 1

    @property
    def is_whole(self) -> bool:
        return len(self.members) == self.parent.order


class GroupHom(BaseModel):
    """A homomorphism given by the image of every element."""

    model_config = ConfigDict(frozen=True)

    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]

    @model_validator(mode="after")
    def validate_hom(self) -> Self:
        if len(self.images) != self.source.order:
            raise ValueError("one image per source element is required")
        images = np.array(self.images, dtype=np.int64)
        if images.min() < 0 or images.max() >= self.target.order:
            raise ValueError("image index out of range")
        left = images[self.source.table]
        right = self.target.table[np.ix_(images, images)]
        if not np.array_equal(left, right):
            a, b = (int(x) for x in np.argwhere(left != right)[0])
            raise ValueError(f"not multiplicative at ({a}, {b})")
        return self

    def __call__(self, g: int) -> int:
        return self.images[g]

    @property
    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.target.order

    @property
    def kernel_members(self) -> tuple[int, ...]:
        return tuple(g for g, image in enumerate(self.images) if image == self.target.identity)


class GroupFingerprint(BaseModel):
    """Cheap isomorphism invariants. Equal fingerprints do not imply isomorphism."""

    model_config = ConfigDict(frozen=True)

    order: PositiveInt
    order_multiset: dict[int, int]
    abelian: bool
    center_size: PositiveInt
