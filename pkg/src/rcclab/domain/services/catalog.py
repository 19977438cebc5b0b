"""Standard small groups as certified multiplication tables."""

import json
import re
from collections.abc import Iterator, Sequence
from functools import reduce
from itertools import permutations, product
from typing import Any

import numpy as np
from sympy import factorint, isprime
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.utilities.iterables import partitions

from rcclab.domain.errors import BoundExceededError, PreconditionError, UnknownCatalogError
from rcclab.domain.models.config import DEFAULT_CONFIG, AnalysisConfig
from rcclab.domain.models.group import FiniteGroup
from rcclab.domain.services.group_kernel import direct_product, semidirect_product, validate_group

MAX_SYMMETRIC_DEGREE = 6

_SPEC_PATTERN = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\((.*)\))?\s*$")

# sign, unit for the product of the quaternion units 1, i, j, k
_QUATERNION_UNITS = (
    ((1, 0), (1, 1), (1, 2), (1, 3)),
    ((1, 1), (-1, 0), (1, 3), (-1, 2)),
    ((1, 2), (-1, 3), (-1, 0), (1, 1)),
    ((1, 3), (1, 2), (-1, 1), (-1, 0)),
)


def _check_order(order: int, config: AnalysisConfig) -> None:
    if order > config.max_group_order:
        raise BoundExceededError("max_group_order", config.max_group_order, order)


def cyclic(n: int, config: AnalysisConfig = DEFAULT_CONFIG) -> FiniteGroup:
    if n < 1:
        raise PreconditionError("cyclic groups need n >= 1")
    _check_order(n, config)
    k = np.arange(n)
    return validate_group(
        (k[:, None] + k[None, :]) % n,
        generators=[1] if n > 1 else [],
        tag=f"cyclic({n})",
        config=config,
    )


def _retag(group: FiniteGroup, tag: str) -> FiniteGroup:
    return group.model_copy(update={"tag": tag})


def abelian(
    *parts_per_prime: Sequence[int], config: AnalysisConfig = DEFAULT_CONFIG
) -> FiniteGroup:
    """Product of cyclic groups of the given orders, e.g. abelian([2, 2], [3]).

    Each argument lists prime powers of one prime; element indices are mixed
    radix with the first factor fastest.
    """
    orders = [q for part in parts_per_prime for q in part]
    if not orders:
        return _retag(cyclic(1, config), "abelian()")
    for q in orders:
        if q < 2 or len(factorint(q)) != 1:
            raise PreconditionError(f"abelian factors must be prime powers, got {q}")
    _check_order(int(np.prod(orders)), config)
    group = reduce(
        lambda acc, q: direct_product(acc, cyclic(q, config), config),
        orders[1:],
        cyclic(orders[0], config),
    )
    description = ",".join(json.dumps(list(part)).replace(" ", "") for part in parts_per_prime)
    return _retag(group, f"abelian({description})")


def elementary_abelian(p: int, n: int, config: AnalysisConfig = DEFAULT_CONFIG) -> FiniteGroup:
    """(Z/p)^n with element sum_i k_i p^i."""
    if not isprime(p):
        raise PreconditionError(f"{p} is not prime")
    if n < 1:
        raise PreconditionError("rank must be positive")
    _check_order(p**n, config)
    digits = np.array(list(product(range(p), repeat=n)), dtype=np.int64)[:, ::-1]
    weights = p ** np.arange(n, dtype=np.int64)
    table = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    return validate_group(
        table,
        labels=["(" + ",".join(str(d) for d in row) + ")" for row in digits],
        generators=[p**i for i in range(n)],
        tag=f"elementary_abelian({p},{n})",
        config=config,
    )


def dihedral(n: int, config: AnalysisConfig = DEFAULT_CONFIG) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; r^k s^f has index k + n f."""
    if n < 1:
        raise PreconditionError("dihedral groups need n >= 1")
    _check_order(2 * n, config)
    rotations, flip = cyclic(n, config), cyclic(2, config)
    negation = [(-k) % n for k in range(n)]
    group = semidirect_product(rotations, flip, [list(range(n)), negation], config)
    labels = [f"r{k}" if f == 0 else f"r{k}s" for f in range(2) for k in range(n)]
    return group.model_copy(update={"tag": f"dihedral({n})", "labels": tuple(labels)})


def quaternion8(config: AnalysisConfig = DEFAULT_CONFIG) -> FiniteGroup:
    """Q8 with indices 1, i, j, k, -1, -i, -j, -k."""
    table = []
    for a in range(8):
        row = []
        for b in range(8):
            sign, unit = _QUATERNION_UNITS[a % 4][b % 4]
            if (a >= 4) != (b >= 4):
                sign = -sign
            row.append(unit if sign > 0 else unit + 4)
        table.append(row)
    return validate_group(
        table,
        labels=["1", "i", "j", "k", "-1", "-i", "-j", "-k"],
        generators=[1, 2],
        tag="quaternion8",
        config=config,
    )


def _permutation_table(perms: list[tuple[int, ...]]) -> np.ndarray:  # type: ignore[type-arg]
    """Table of (s * t)(x) = s(t(x)) for permutations listed in lexicographic order."""
    array = np.array(perms, dtype=np.int64)
    size, degree = array.shape
    composed = array[np.arange(size)[:, None, None], array[None, :, :]]
    weights = degree ** np.arange(degree - 1, -1, -1, dtype=np.int64)
    codes = array @ weights
    return np.searchsorted(codes, composed @ weights)


def _cycle_label(perm: tuple[int, ...]) -> str:
    cycles = Permutation(list(perm)).cyclic_form
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycles) or "()"


def symmetric(n: int, config: AnalysisConfig = DEFAULT_CONFIG) -> FiniteGroup:
    """S_n on lexicographically ordered permutations of range(n)."""
    if not 1 <= n <= MAX_SYMMETRIC_DEGREE:
        raise PreconditionError(
            f"symmetric groups are available for 1 <= n <= {MAX_SYMMETRIC_DEGREE}"
        )
    perms = list(permutations(range(n)))
    _check_order(len(perms), config)
    index = {perm: i for i, perm in enumerate(perms)}
    generators = []
    if n > 1:
        transposition = (1, 0, *range(2, n))
        rotation = (*range(1, n), 0)
        generators = sorted({index[transposition], index[rotation]})
    return validate_group(
        _permutation_table(perms),
        labels=[_cycle_label(p) for p in perms],
        generators=generators,
        tag=f"symmetric({n})",
        config=config,
    )


def heisenberg(p: int, config: AnalysisConfig = DEFAULT_CONFIG) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over GF(p); (a, b, c) has index a + p b + p^2 c."""
    if not isprime(p):
        raise PreconditionError(f"{p} is not prime")
    _check_order(p**3, config)
    index = np.arange(p**3)
    a, b, c = index % p, (index // p) % p, index // (p * p)
    new_a = (a[:, None] + a[None, :]) % p
    new_b = (b[:, None] + b[None, :]) % p
    new_c = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    return validate_group(
        new_a + p * new_b + p * p * new_c,
        labels=[f"({x},{y},{z})" for x, y, z in zip(a, b, c, strict=True)],
        generators=[1, p],
        tag=f"heisenberg({p})",
        config=config,
    )


def permutation_group(
    degree: int,
    generators: Sequence[Sequence[Sequence[int]]],
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> FiniteGroup:
    """The group generated by permutations given as lists of cycles on range(degree)."""
    if degree < 1:
        raise PreconditionError("degree must be positive")
    try:
        gens = [Permutation([list(c) for c in cycles], size=degree) for cycles in generators]
    except (ValueError, TypeError) as e:
        raise PreconditionError(f"invalid permutation generators: {e}") from e
    if any(g.size != degree for g in gens):
        raise PreconditionError(f"generators move points outside range({degree})")
    group = PermutationGroup(gens or [Permutation(list(range(degree)))])
    _check_order(int(group.order()), config)
    perms = sorted(tuple(int(x) for x in g.array_form) for g in group.generate())
    index = {perm: i for i, perm in enumerate(perms)}
    return validate_group(
        _permutation_table(perms),
        labels=[_cycle_label(p) for p in perms],
        generators=[index[tuple(g.array_form)] for g in gens],
        tag=f"permutation_group({degree})",
        config=config,
    )


def abelian_group_types(order: int) -> Iterator[list[list[int]]]:
    """Every abelian group of the given order, as prime-power parts per prime."""
    per_prime = []
    for p, k in sorted(factorint(order).items()):
        shapes = [
            sorted((p**part for part, count in shape.items() for _ in range(count)), reverse=True)
            for shape in partitions(k)
        ]
        per_prime.append(shapes)
    for choice in product(*per_prime):
        yield [list(part) for part in choice]


def abelian_groups(
    max_order: int, config: AnalysisConfig = DEFAULT_CONFIG
) -> Iterator[FiniteGroup]:
    """All abelian groups of order 2..max_order, one per isomorphism type."""
    for order in range(2, max_order + 1):
        for parts in abelian_group_types(order):
            yield abelian(*parts, config=config)


_BUILDERS: dict[str, Any] = {
    "cyclic": cyclic,
    "abelian": abelian,
    "elementary_abelian": elementary_abelian,
    "dihedral": dihedral,
    "quaternion8": quaternion8,
    "symmetric": symmetric,
    "heisenberg": heisenberg,
}


def catalog(name: str, *params: Any, config: AnalysisConfig = DEFAULT_CONFIG) -> FiniteGroup:
    """Look up a catalog group by name, e.g. catalog("dihedral", 5)."""
    builder = _BUILDERS.get(name)
    if builder is None:
        raise UnknownCatalogError(
            f"unknown catalog group '{name}'; known: {', '.join(sorted(_BUILDERS))}"
        )
    try:
        group: FiniteGroup = builder(*params, config=config)
    except TypeError as e:
        raise PreconditionError(f"bad parameters for {name}: {e}") from e
    return group


def parse_catalog_spec(text: str) -> tuple[str, list[Any]]:
    """Split "abelian([2,2],[3])" into ("abelian", [[2, 2], [3]])."""
    match = _SPEC_PATTERN.match(text)
    if match is None:
        raise UnknownCatalogError(f"cannot parse catalog name '{text}'")
    name, arguments = match.group(1), match.group(2)
    if not arguments:
        return name, []
    try:
        params = json.loads(f"[{arguments}]")
    except json.JSONDecodeError as e:
        raise UnknownCatalogError(f"cannot parse parameters of '{text}': {e}") from e
    return name, params


def catalog_from_spec(text: str, config: AnalysisConfig = DEFAULT_CONFIG) -> FiniteGroup:
    name, params = parse_catalog_spec(text)
    return catalog(name, *params, config=config)
