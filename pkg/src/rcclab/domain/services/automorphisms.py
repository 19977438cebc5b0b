"""Building, enumerating and analysing automorphisms of finite groups."""

import random
from collections.abc import Sequence
from math import lcm, prod

import numpy as np
from loguru import logger
from sympy import factorint

from rcclab.domain.errors import (
    BoundExceededError,
    GenerationError,
    InvariantViolationError,
    NotAdmissibleError,
    NotNormalError,
    PreconditionError,
)
from rcclab.domain.models.automorphism import AffineMapReport, Automorphism, CycleStructure
from rcclab.domain.models.config import DEFAULT_CONFIG, AnalysisConfig
from rcclab.domain.models.gf import GFMatrix
from rcclab.domain.models.group import FiniteGroup, GroupHom, Subgroup
from rcclab.domain.services import gf_linalg
from rcclab.domain.services.group_kernel import (
    conjugacy_class_sizes,
    frattini,
    is_normal,
    minimal_generating_set,
    quotient,
    subgroup_closure,
)
from rcclab.domain.models.permutation import point_cycle_lengths, tail_and_period

_SAMPLE_ATTEMPTS_PER_AUTOMORPHISM = 200


# --- construction ----------------------------------------------------------


def _extend(
    group: FiniteGroup,
    generators: Sequence[int],
    images: Sequence[int],
    target: FiniteGroup | None = None,
) -> list[int] | None:
    """Images of the subgroup generated by ``generators`` under g_i -> images[i].

    Returns -1 outside that subgroup, or None when the assignment is not a
    homomorphism on it.
    """
    codomain = target or group
    rows, target_rows = group.rows, codomain.rows
    mapping = [-1] * group.order
    mapping[group.identity] = codomain.identity
    frontier = [group.identity]
    pairs = list(zip(generators, images, strict=True))
    while frontier:
        x = frontier.pop()
        image_x = mapping[x]
        for s, t in pairs:
            y = rows[x][s]
            image_y = target_rows[image_x][t]
            if mapping[y] < 0:
                mapping[y] = image_y
                frontier.append(y)
            elif mapping[y] != image_y:
                return None
    return mapping


def hom_from_generator_images(
    group: FiniteGroup,
    generators: Sequence[int],
    images: Sequence[int],
    target: FiniteGroup | None = None,
) -> GroupHom | None:
    """The homomorphism extending g_i -> images[i], if there is one.

    Images are read in ``target`` (default: ``group`` itself).
    """
    if len(generators) != len(images):
        raise PreconditionError("one image per generator is required")
    codomain = target or group
    if len(subgroup_closure(group, generators)) != group.order:
        raise GenerationError(f"{list(generators)} do not generate the group")
    mapping = _extend(group, generators, images, codomain)
    if mapping is None:
        return None
    return GroupHom(source=group, target=codomain, images=tuple(mapping))


def automorphism_from_generator_images(
    group: FiniteGroup, generators: Sequence[int], images: Sequence[int]
) -> Automorphism | None:
    """Upgrade the generated homomorphism to an automorphism when it is bijective.

    Its order equals the lcm of the least periods of the generators.
    """
    hom = hom_from_generator_images(group, generators, images)
    if hom is None or not hom.is_injective:
        return None
    automorphism = Automorphism(group=group, perm=hom.images)
    periods = [generator_period(automorphism, g) for g in generators]
    if lcm(*periods) != automorphism.order:
        raise InvariantViolationError("automorphism order differs from lcm of generator periods")
    return automorphism


def generator_period(automorphism: Automorphism, g: int) -> int:
    """Least e >= 1 with alpha^e(g) = g."""
    x, e = automorphism(g), 1
    while x != g:
        x = automorphism(x)
        e += 1
    return e


def identity_automorphism(group: FiniteGroup) -> Automorphism:
    return Automorphism(group=group, perm=tuple(range(group.order)))


def inner_automorphism(group: FiniteGroup, x: int) -> Automorphism:
    """g -> x g x^-1."""
    table = group.table
    images = table[table[x], group.inverses[x]]
    return Automorphism(group=group, perm=tuple(int(g) for g in images))


def direct_product_automorphism(
    first: Automorphism, second: Automorphism, product: FiniteGroup
) -> Automorphism:
    """alpha x beta on a product built by ``group_kernel.direct_product``."""
    n1 = first.group.order
    if product.order != n1 * second.group.order:
        raise PreconditionError("product group does not match the factors")
    perm = tuple(first(g % n1) + n1 * second(g // n1) for g in range(product.order))
    return Automorphism(group=product, perm=perm)


# --- elementary abelian groups ---------------------------------------------


def elementary_abelian_rank(group: FiniteGroup) -> tuple[int, int] | None:
    """(p, n) when G is elementary abelian of order p^n with n >= 1."""
    factors = factorint(group.order)
    if len(factors) != 1 or not group.is_abelian:
        return None
    ((p, n),) = factors.items()
    if any(o not in (1, p) for o in group.element_orders):
        return None
    return int(p), int(n)


def basis_coordinates(
    group: FiniteGroup, basis: Sequence[int], p: int
) -> dict[tuple[int, ...], int]:
    """Element sum_i v_i * b_i of an elementary abelian group, for every vector v."""
    elements = {(): group.identity}
    for b in basis:
        elements = {
            (*vector, c): group.mul(g, group.power(b, c))
            for vector, g in elements.items()
            for c in range(p)
        }
    return elements


def _coordinates(g: int, p: int, n: int) -> list[int]:
    return [(g // p**i) % p for i in range(n)]


def automorphism_from_matrix(
    group: FiniteGroup, matrix: GFMatrix, basis: Sequence[int] | None = None
) -> Automorphism:
    """v -> Av on an elementary abelian group.

    Without a basis, element k has coordinates given by its digits k_i in base p.
    """
    p, n = matrix.p, matrix.n
    if group.order != p**n:
        raise PreconditionError(
            f"matrix over GF({p})^{n} cannot act on a group of order {group.order}"
        )
    if basis is None:
        coordinates = np.array([_coordinates(g, p, n) for g in range(group.order)], dtype=np.int64)
        images = (coordinates @ matrix.array.T) % p
        weights = p ** np.arange(n, dtype=np.int64)
        return Automorphism(group=group, perm=tuple(int(x) for x in images @ weights))
    if len(basis) != n:
        raise PreconditionError(f"a basis of GF({p})^{n} needs {n} elements, got {len(basis)}")
    element_of = basis_coordinates(group, basis, p)
    if len(set(element_of.values())) != group.order:
        raise PreconditionError(f"{list(basis)} is not a basis of the group")
    perm = [0] * group.order
    for vector, g in element_of.items():
        image = (matrix.array @ np.array(vector, dtype=np.int64)) % p
        perm[g] = element_of[tuple(int(x) for x in image)]
    return Automorphism(group=group, perm=tuple(perm))


def matrix_from_automorphism(automorphism: Automorphism, p: int, n: int) -> GFMatrix:
    """Matrix whose column j holds the digits of alpha(p^j)."""
    columns = [_coordinates(automorphism(p**j), p, n) for j in range(n)]
    return GFMatrix.from_rows(p, [[columns[j][i] for j in range(n)] for i in range(n)])


# --- enumeration -----------------------------------------------------------


def _image_candidates(group: FiniteGroup, generators: Sequence[int]) -> list[list[int]]:
    orders = group.element_orders
    classes = conjugacy_class_sizes(group)
    return [
        [x for x in range(group.order) if orders[x] == orders[g] and classes[x] == classes[g]]
        for g in generators
    ]


def search_space(group: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG) -> int:
    generators = minimal_generating_set(group, config)
    return prod(len(c) for c in _image_candidates(group, generators))


def _check_enumerable(group: FiniteGroup, config: AnalysisConfig) -> tuple[int, ...]:
    if group.order > config.max_aut_order:
        raise BoundExceededError("max_aut_order", config.max_aut_order, group.order)
    rank = elementary_abelian_rank(group)
    if rank is not None and rank[1] >= config.elementary_abelian_rank_limit:
        raise BoundExceededError(
            "elementary_abelian_rank_limit", config.elementary_abelian_rank_limit - 1, rank[1]
        )
    generators = minimal_generating_set(group, config)
    if len(generators) > config.max_generators:
        raise GenerationError(
            f"no generating set with at most {config.max_generators} elements was found"
        )
    return generators


def enumerate_automorphisms(
    group: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG
) -> list[Automorphism]:
    """All of Aut(G), sorted by permutation.

    Generator images are chosen by backtracking among elements of equal order
    and equal class size; partial assignments that already fail to be injective
    homomorphisms on the generated subgroup are cut.
    """
    generators = _check_enumerable(group, config)
    candidates = _image_candidates(group, generators)
    space = prod(len(c) for c in candidates)
    if space > config.max_search_space:
        raise BoundExceededError("max_search_space", config.max_search_space, space)
    logger.debug(
        f"Aut search on order {group.order}: generators {list(generators)}, "
        f"candidates {[len(c) for c in candidates]}"
    )

    found: list[tuple[int, ...]] = []
    pruned = 0
    assignment: list[int] = []

    def search(level: int) -> None:
        nonlocal pruned
        if level == len(generators):
            found.append(tuple(mapping_stack[-1]))
            return
        for image in candidates[level]:
            assignment.append(image)
            mapping = _extend(group, generators[: level + 1], assignment)
            if mapping is not None and _is_injective(mapping):
                mapping_stack.append(mapping)
                search(level + 1)
                mapping_stack.pop()
            else:
                pruned += 1
            assignment.pop()

    mapping_stack: list[list[int]] = []
    if generators:
        search(0)
    else:
        found.append(tuple(range(group.order)))
    logger.debug(f"Aut search found {len(found)} automorphisms, pruned {pruned} branches")
    return [Automorphism(group=group, perm=perm) for perm in sorted(found)]


def _is_injective(mapping: list[int]) -> bool:
    assigned = [m for m in mapping if m >= 0]
    return len(set(assigned)) == len(assigned)


def sample_automorphisms(
    group: FiniteGroup, count: int, config: AnalysisConfig = DEFAULT_CONFIG
) -> list[Automorphism]:
    """Random automorphisms from random generator images, seeded by ``config.seed``.

    Used where the exhaustive search is refused. Elementary abelian groups draw
    random invertible matrices acting on a minimal generating set instead.
    """
    rng = random.Random(config.seed)
    rank = elementary_abelian_rank(group)
    generators = minimal_generating_set(group, config)
    if rank is not None:
        p, n = rank
        return [
            automorphism_from_matrix(
                group, gf_linalg.random_invertible_matrix(p, n, rng), basis=generators
            )
            for _ in range(count)
        ]
    candidates = _image_candidates(group, generators)
    sampled: list[Automorphism] = []
    for _ in range(count * _SAMPLE_ATTEMPTS_PER_AUTOMORPHISM):
        if len(sampled) == count:
            break
        images = [rng.choice(c) for c in candidates]
        mapping = _extend(group, generators, images)
        if mapping is not None and _is_injective(mapping):
            sampled.append(Automorphism(group=group, perm=tuple(mapping)))
    if len(sampled) < count:
        logger.warning(f"only {len(sampled)} of {count} sampled automorphisms were found")
    return sampled


def automorphisms_or_sample(
    group: FiniteGroup, sample_size: int, config: AnalysisConfig = DEFAULT_CONFIG
) -> tuple[list[Automorphism], bool]:
    """Aut(G) when the search is allowed, else a seeded sample; the flag says which."""
    try:
        return enumerate_automorphisms(group, config), True
    except (BoundExceededError, GenerationError) as e:
        logger.warning(f"Aut enumeration refused for {group.tag or group.order}: {e.message}")
        return sample_automorphisms(group, sample_size, config), False


def is_closed_under_composition(automorphisms: Sequence[Automorphism]) -> bool:
    """Whether the list is a group under composition."""
    if not automorphisms or not any(a.is_identity for a in automorphisms):
        return False
    perms = np.array([a.perm for a in automorphisms], dtype=np.int64)
    known = {row.tobytes() for row in perms}
    for inner in perms:
        if any(row.tobytes() not in known for row in perms[:, inner]):
            return False
    return all(row.tobytes() in known for row in np.argsort(perms, axis=1))


# --- analysis --------------------------------------------------------------


def cycle_structure(automorphism: Automorphism) -> CycleStructure:
    structure = CycleStructure.of_permutation(automorphism.perm)
    if structure.total != automorphism.group.order:
        raise InvariantViolationError("cycle structure does not cover the group")
    if structure.order != automorphism.order:
        raise InvariantViolationError("lcm of cycle lengths differs from the order")
    return structure


def cycle_lengths(automorphism: Automorphism) -> list[int]:
    """Cycle length of every element, indexed by element."""
    return point_cycle_lengths(automorphism.perm)


def per_subgroup(automorphism: Automorphism, e: int) -> Subgroup:
    """{g : alpha^e(g) = g}."""
    if e < 1:
        raise PreconditionError("period must be positive")
    images = automorphism.power(e).perm
    return Subgroup(
        parent=automorphism.group, members=(g for g, x in enumerate(images) if g == x)
    )


def fixed_subgroup(automorphism: Automorphism) -> Subgroup:
    return per_subgroup(automorphism, 1)


def is_admissible(automorphism: Automorphism, subgroup: Subgroup) -> bool:
    return {automorphism(g) for g in subgroup.members} == subgroup.member_set


def induced_quotient_automorphism(
    automorphism: Automorphism,
    normal: Subgroup,
    projection: GroupHom | None = None,
) -> Automorphism:
    """The automorphism of G/N with pi(alpha(g)) = induced(pi(g)).

    A projection from an earlier ``quotient`` call may be passed to skip
    rebuilding G/N.
    """
    group = automorphism.group
    if not is_normal(group, normal):
        raise NotNormalError("quotient needs a normal subgroup")
    if not is_admissible(automorphism, normal):
        raise NotAdmissibleError("automorphism does not map the subgroup onto itself")
    if projection is None:
        _, projection = quotient(group, normal)
    factor = projection.target
    images = [-1] * factor.order
    for g in range(group.order):
        coset = projection(g)
        if images[coset] < 0:
            images[coset] = projection(automorphism(g))
    return Automorphism(group=factor, perm=tuple(images))


def frattini_quotient(
    group: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG
) -> tuple[Subgroup, FiniteGroup, GroupHom]:
    """Frat(G), G/Frat(G) and the projection."""
    frat = frattini(group, config)
    factor, projection = group._cached("frattini_quotient", lambda: quotient(group, frat))  # noqa: SLF001
    return frat, factor, projection


def ford(automorphism: Automorphism, config: AnalysisConfig = DEFAULT_CONFIG) -> int:
    """Order of the automorphism induced on G/Frat(G)."""
    frat, _, projection = frattini_quotient(automorphism.group, config)
    return induced_quotient_automorphism(automorphism, frat, projection).order


def affine_map(automorphism: Automorphism, g0: int) -> AffineMapReport:
    """A(g) = g0 * alpha(g).

    For abelian groups the order is checked to divide o1 * o2.
    """
    group = automorphism.group
    images = tuple(group.mul(g0, automorphism(g)) for g in range(group.order))
    tail, period = tail_and_period(images)
    fixed = fixed_subgroup(automorphism)
    max_fixed_order = max(group.element_orders[g] for g in fixed.members)
    bound = automorphism.order * max_fixed_order if group.is_abelian else None
    report = AffineMapReport(
        images=images,
        bijective=len(set(images)) == len(images),
        tail=tail,
        period=period,
        automorphism_order=automorphism.order,
        max_fixed_point_order=max_fixed_order,
        order_bound=bound,
    )
    if report.bound_holds is False:
        raise InvariantViolationError(
            f"affine map order {report.order} does not divide {bound} for g0={g0}"
        )
    return report
