"""Structural operations on finite groups given by multiplication tables."""

from collections import Counter, deque
from collections.abc import Iterable, Sequence
from itertools import combinations
from math import comb
from typing import Any

import numpy as np
from loguru import logger
from sympy import factorint

from rcclab.domain.errors import (
    BoundExceededError,
    GenerationError,
    GroupAxiomError,
    InvariantViolationError,
    NotNormalError,
    PreconditionError,
)
from rcclab.domain.models.config import DEFAULT_CONFIG, AnalysisConfig
from rcclab.domain.models.group import FiniteGroup, GroupFingerprint, GroupHom, Subgroup, Table

_EXHAUSTIVE_GENERATOR_COMBINATIONS = 50_000


# --- certification ---------------------------------------------------------


def _first_bad_line(table: Table, axis: int) -> int | None:
    n = table.shape[0]
    ordered = np.sort(table, axis=axis)
    expected = np.arange(n).reshape((1, n) if axis == 1 else (n, 1))
    bad = np.nonzero(~(ordered == expected).all(axis=axis))[0]
    return int(bad[0]) if bad.size else None


def _find_identity(table: Table) -> int:
    n = table.shape[0]
    arange = np.arange(n)
    left = (table == arange).all(axis=1)
    right = (table.T == arange).all(axis=1)
    candidates = np.nonzero(left & right)[0]
    if not candidates.size:
        raise GroupAxiomError("identity", "no element acts as a two-sided identity")
    return int(candidates[0])


def _check_associative_exhaustive(table: Table) -> None:
    for a in range(table.shape[0]):
        left = table[table[a]]
        right = table[a][table]
        if not np.array_equal(left, right):
            b, c = (int(x) for x in np.argwhere(left != right)[0])
            raise GroupAxiomError("associativity", f"(g{a}*g{b})*g{c} != g{a}*(g{b}*g{c})")


def _check_associative_light(table: Table, generators: Sequence[int]) -> None:
    """Light's test: associativity against a generating set suffices."""
    for s in generators:
        left = table[:, s][table]
        right = table[:, table[:, s]]
        if not np.array_equal(left, right):
            a, b = (int(x) for x in np.argwhere(left != right)[0])
            raise GroupAxiomError("associativity", f"(g{a}*g{b})*g{s} != g{a}*(g{b}*g{s})")


def validate_group(
    table: Any,
    labels: Sequence[str] | None = None,
    generators: Sequence[int] | None = None,
    tag: str | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> FiniteGroup:
    """Certify a candidate multiplication table.

    Raises GroupAxiomError naming the first violated axiom.
    """
    try:
        candidate = np.array(table, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise GroupAxiomError("shape", f"table is not an integer matrix: {e}") from e
    if candidate.ndim != 2 or candidate.shape[0] != candidate.shape[1] or not candidate.size:
        raise GroupAxiomError("shape", f"table must be a non-empty square, got {candidate.shape}")
    n = candidate.shape[0]
    if n > config.max_group_order:
        raise BoundExceededError("max_group_order", config.max_group_order, n)
    if candidate.min() < 0 or candidate.max() >= n:
        raise GroupAxiomError("closure", f"entries must be element indices in [0, {n})")
    if (row := _first_bad_line(candidate, axis=1)) is not None:
        raise GroupAxiomError("latin square", f"row {row} repeats an element")
    if (col := _first_bad_line(candidate, axis=0)) is not None:
        raise GroupAxiomError("latin square", f"column {col} repeats an element")
    identity = _find_identity(candidate)

    if n <= config.associativity_exhaustive_bound:
        _check_associative_exhaustive(candidate)
    else:
        light_generators = generators or _greedy_generators(candidate, identity)
        _check_associative_light(candidate, light_generators)

    group = FiniteGroup(
        order=n,
        labels=tuple(labels) if labels is not None else tuple(str(i) for i in range(n)),
        table=candidate,
        identity=identity,
        generators=tuple(generators) if generators is not None else None,
        tag=tag,
    )
    if generators is not None and len(_close(group, generators)) != n:
        raise GenerationError(f"generators {list(generators)} do not generate the group")
    return group


# --- subgroups -------------------------------------------------------------


def _close(
    group: FiniteGroup,
    generators: Iterable[int],
    base: frozenset[int] | None = None,
) -> frozenset[int]:
    """Subgroup generated by ``base`` (already a subgroup) and ``generators``.

    The result is grown as a union of left cosets of ``base``.
    """
    rows = group.rows
    gens = list(generators)
    base_members = list(base) if base is not None else [group.identity]
    members = set(base_members)
    reps = deque([group.identity])
    while reps:
        x = reps.popleft()
        for s in gens:
            y = rows[s][x]
            if y not in members:
                members.update(rows[y][h] for h in base_members)
                reps.append(y)
    return frozenset(members)


def _greedy_generators(table: Table, identity: int) -> list[int]:
    rows = table.tolist()
    n = len(rows)
    members = {identity}
    chosen: list[int] = []
    while len(members) < n:
        g = next(x for x in range(n) if x not in members)
        chosen.append(g)
        frontier = deque(members)
        while frontier:
            x = frontier.popleft()
            for s in chosen:
                y = rows[x][s]
                if y not in members:
                    members.add(y)
                    frontier.append(y)
    return chosen


def subgroup_closure(group: FiniteGroup, generators: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing the given elements."""
    gens = list(generators)
    if any(g < 0 or g >= group.order for g in gens):
        raise PreconditionError(f"generator index out of range in {gens}")
    return Subgroup(parent=group, members=_close(group, gens))


def whole_group(group: FiniteGroup) -> Subgroup:
    return Subgroup(parent=group, members=range(group.order))


def is_normal(group: FiniteGroup, subgroup: Subgroup | Iterable[int]) -> bool:
    members = np.array(
        subgroup.members if isinstance(subgroup, Subgroup) else sorted(set(subgroup)),
        dtype=np.int64,
    )
    table = group.table
    conjugates = table[table[:, members], group.inverses[:, None]]
    return bool(np.isin(conjugates, members).all())


def center(group: FiniteGroup) -> Subgroup:
    table = group.table
    return Subgroup(parent=group, members=np.nonzero((table == table.T).all(axis=1))[0])


def _commutators(group: FiniteGroup, left: Sequence[int], right: Sequence[int]) -> set[int]:
    """All [x, y] = x^-1 y^-1 x y for x in left, y in right."""
    table, inverses = group.table, group.inverses
    xs = np.array(left, dtype=np.int64)[:, None]
    ys = np.array(right, dtype=np.int64)[None, :]
    values = table[table[inverses[xs], inverses[ys]], table[xs, ys]]
    return {int(v) for v in np.unique(values)}


def commutator_subgroup(group: FiniteGroup) -> Subgroup:
    everything = range(group.order)
    return subgroup_closure(group, _commutators(group, everything, everything))


def power_subgroup(group: FiniteGroup, p: int) -> Subgroup:
    """Subgroup generated by all p-th powers."""
    return subgroup_closure(group, {group.power(g, p) for g in range(group.order)})


def burnside_subgroup(group: FiniteGroup, p: int) -> Subgroup:
    """G' G^p."""
    derived = commutator_subgroup(group).members
    powers = power_subgroup(group, p).members
    return subgroup_closure(group, set(derived) | set(powers))


def lower_central_series(group: FiniteGroup) -> list[Subgroup]:
    """G = gamma_1 >= gamma_2 >= ... until the series stabilizes."""
    series = [whole_group(group)]
    everything = range(group.order)
    while True:
        following = subgroup_closure(group, _commutators(group, series[-1].members, everything))
        if following.members == series[-1].members:
            return series
        series.append(following)


def nilpotency_class(group: FiniteGroup) -> int | None:
    """Class c with gamma_{c+1} = 1, or None when the group is not nilpotent."""
    series = lower_central_series(group)
    if not series[-1].is_trivial:
        return None
    return len(series) - 1


def is_nilpotent(group: FiniteGroup) -> bool:
    cached: bool = group._cached("nilpotent", lambda: nilpotency_class(group) is not None)  # noqa: SLF001
    return cached


def conjugacy_class_sizes(group: FiniteGroup) -> tuple[int, ...]:
    def compute() -> tuple[int, ...]:
        table, inverses = group.table, group.inverses
        return tuple(
            int(np.unique(table[table[:, g], inverses]).size) for g in range(group.order)
        )

    sizes: tuple[int, ...] = group._cached("class_sizes", compute)  # noqa: SLF001
    return sizes


def prime_of_p_group(group: FiniteGroup) -> int | None:
    """p when |G| = p^m with m >= 1."""
    factors = factorint(group.order)
    if len(factors) != 1:
        return None
    return int(next(iter(factors)))


def fingerprint(group: FiniteGroup) -> GroupFingerprint:
    return GroupFingerprint(
        order=group.order,
        order_multiset=dict(sorted(Counter(group.element_orders).items())),
        abelian=group.is_abelian,
        center_size=center(group).order,
    )


def minimal_generating_set(
    group: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG
) -> tuple[int, ...]:
    """Fewest generators, then least indices.

    Sizes whose combination count is too large fall back to a greedy choice that
    always adds the least element giving the largest closure.
    """
    if group.order == 1:
        return ()
    candidates = [g for g in range(group.order) if g != group.identity]
    if group.order in {group.element_orders[g] for g in candidates}:
        return (next(g for g in candidates if group.element_orders[g] == group.order),)
    for k in range(2, config.max_generators + 1):
        if comb(len(candidates), k) > _EXHAUSTIVE_GENERATOR_COMBINATIONS:
            break
        for subset in combinations(candidates, k):
            if len(_close(group, subset)) == group.order:
                return subset
    return _greedy_largest_closure(group)


def _greedy_largest_closure(group: FiniteGroup) -> tuple[int, ...]:
    chosen: list[int] = []
    current = frozenset([group.identity])
    while len(current) < group.order:
        best, best_members = -1, current
        for g in range(group.order):
            if g in current:
                continue
            joined = _close(group, [*chosen, g], current)
            if len(joined) > len(best_members):
                best, best_members = g, joined
        chosen.append(best)
        current = best_members
    logger.debug(f"greedy generating set for order {group.order}: {chosen}")
    return tuple(chosen)


# --- quotients and products ------------------------------------------------


def quotient(group: FiniteGroup, normal: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """G/N on least coset representatives, with the canonical projection."""
    if not is_normal(group, normal):
        raise NotNormalError(f"subgroup of order {normal.order} is not normal")
    rows = group.rows
    coset_of = [-1] * group.order
    reps: list[int] = []
    for g in range(group.order):
        if coset_of[g] >= 0:
            continue
        for m in normal.members:
            coset_of[rows[g][m]] = len(reps)
        reps.append(g)
    coset_array = np.array(coset_of, dtype=np.int64)
    rep_array = np.array(reps, dtype=np.int64)
    table = coset_array[group.table[np.ix_(rep_array, rep_array)]]
    generators = None
    if group.generators is not None:
        trivial_coset = coset_of[group.identity]
        generators = sorted({coset_of[g] for g in group.generators} - {trivial_coset}) or None
    factor = validate_group(
        table,
        labels=[f"{group.labels[r]}N" for r in reps],
        generators=generators,
        tag=f"{group.tag}/N" if group.tag else None,
    )
    return factor, GroupHom(source=group, target=factor, images=tuple(coset_of))


def direct_product(
    first: FiniteGroup, second: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG
) -> FiniteGroup:
    """Component-wise product; (a, b) has index a + |first| * b."""
    n1, n2 = first.order, second.order
    if n1 * n2 > config.max_group_order:
        raise BoundExceededError("max_group_order", config.max_group_order, n1 * n2)
    a, b = first.table, second.table
    table = (a[None, :, None, :] + n1 * b[:, None, :, None]).reshape(n1 * n2, n1 * n2)
    labels = [f"({x},{y})" for y in second.labels for x in first.labels]
    generators = None
    if first.generators is not None and second.generators is not None:
        generators = [g + n1 * second.identity for g in first.generators] + [
            first.identity + n1 * h for h in second.generators
        ]
    tag = f"{first.tag}x{second.tag}" if first.tag and second.tag else None
    return validate_group(table, labels=labels, generators=generators, tag=tag, config=config)


def _check_action(normal: FiniteGroup, acting: FiniteGroup, phi: Table) -> None:
    if phi.shape != (acting.order, normal.order):
        raise PreconditionError("action needs one permutation of N per element of H")
    for h, perm in enumerate(phi):
        if np.unique(perm).size != normal.order:
            raise PreconditionError(f"action image of h{h} is not a bijection")
        if not np.array_equal(perm[normal.table], normal.table[np.ix_(perm, perm)]):
            raise PreconditionError(f"action image of h{h} is not an automorphism")
    hs = np.arange(acting.order)
    composed = phi[hs[:, None, None], phi[None, :, :]]
    if not np.array_equal(phi[acting.table], composed):
        raise PreconditionError("action is not a homomorphism H -> Aut(N)")


def semidirect_product(
    normal: FiniteGroup,
    acting: FiniteGroup,
    action: Sequence[Sequence[int]],
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> FiniteGroup:
    """N x| H with (n1, h1)(n2, h2) = (n1 * phi_h1(n2), h1 h2).

    ``action[h]`` lists the images of the elements of N under phi_h; (n, h) has
    index n + |N| * h.
    """
    nn, nh = normal.order, acting.order
    if nn * nh > config.max_group_order:
        raise BoundExceededError("max_group_order", config.max_group_order, nn * nh)
    phi = np.array(action, dtype=np.int64)
    _check_action(normal, acting, phi)

    h1 = np.arange(nh)[:, None, None, None]
    n1 = np.arange(nn)[None, :, None, None]
    h2 = np.arange(nh)[None, None, :, None]
    n2 = np.arange(nn)[None, None, None, :]
    twisted = normal.table[n1, phi[h1, n2]]
    table = (twisted + nn * acting.table[h1, h2]).reshape(nn * nh, nn * nh)
    labels = [f"({x},{y})" for y in acting.labels for x in normal.labels]
    generators = None
    if normal.generators is not None and acting.generators is not None:
        generators = [g + nn * acting.identity for g in normal.generators] + [
            normal.identity + nn * h for h in acting.generators
        ]
    return validate_group(table, labels=labels, generators=generators, config=config)


# --- Frattini subgroup -----------------------------------------------------


def subgroup_lattice(
    group: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG
) -> dict[frozenset[int], bool]:
    """Every subgroup, mapped to whether it is maximal.

    Subgroups are grown from the trivial one by adjoining one element per coset.
    """
    if group.order > config.frattini_order_bound:
        raise BoundExceededError("frattini_order_bound", config.frattini_order_bound, group.order)
    rows = group.rows
    whole = frozenset(range(group.order))
    trivial = frozenset([group.identity])
    generators_of: dict[frozenset[int], list[int]] = {trivial: []}
    lattice: dict[frozenset[int], bool] = {}
    queue = deque([trivial])
    while queue:
        current = queue.popleft()
        covered: set[int] = set(current)
        has_proper_extension = False
        for g in range(group.order):
            if g in covered:
                continue
            covered.update(rows[h][g] for h in current)
            joined = _close(group, [*generators_of[current], g], current)
            if joined == whole:
                continue
            has_proper_extension = True
            if joined not in generators_of:
                generators_of[joined] = [*generators_of[current], g]
                queue.append(joined)
        lattice[current] = current != whole and not has_proper_extension
    lattice.setdefault(whole, False)
    return lattice


def maximal_subgroups(
    group: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG
) -> list[Subgroup]:
    lattice = subgroup_lattice(group, config)
    return [
        Subgroup(parent=group, members=members)
        for members in sorted(lattice, key=lambda s: (len(s), sorted(s)))
        if lattice[members]
    ]


def frattini(group: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG) -> Subgroup:
    """Intersection of the maximal subgroups.

    For p-groups the result is checked against G' G^p. The result is cached on the group.
    """
    if group.order > config.frattini_order_bound:
        raise BoundExceededError("frattini_order_bound", config.frattini_order_bound, group.order)
    result: Subgroup = group._cached("frattini", lambda: _frattini(group, config))  # noqa: SLF001
    return result


def _frattini(group: FiniteGroup, config: AnalysisConfig) -> Subgroup:
    members = set(range(group.order))
    for maximal in maximal_subgroups(group, config):
        members &= maximal.member_set
    result = Subgroup(parent=group, members=members)
    p = prime_of_p_group(group)
    if p is not None:
        burnside = burnside_subgroup(group, p)
        if burnside.members != result.members:
            raise InvariantViolationError(
                f"Frattini subgroup of order {result.order} differs from G'G^p of order "
                f"{burnside.order}"
            )
    return result
