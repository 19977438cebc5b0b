"""Explicit non-RCC groups and their automorphisms, each shipped with the properties it claims."""

from collections.abc import Sequence
from math import prod

import numpy as np
from loguru import logger
from sympy import factorint, isprime

from rcclab.domain.errors import BoundExceededError, InvariantViolationError, PreconditionError
from rcclab.domain.models.automorphism import Automorphism
from rcclab.domain.models.config import DEFAULT_CONFIG, AnalysisConfig
from rcclab.domain.models.construction import ConstructedInstance, ExpectedProperties, InstanceCheck
from rcclab.domain.models.group import FiniteGroup
from rcclab.domain.services.automorphisms import (
    automorphism_from_generator_images,
    cycle_lengths,
    cycle_structure,
    direct_product_automorphism,
    fixed_subgroup,
    inner_automorphism,
)
from rcclab.domain.services.catalog import cyclic
from rcclab.domain.services.group_kernel import (
    direct_product,
    is_normal,
    semidirect_product,
    validate_group,
)
from rcclab.domain.services.rcc import check_rcc

SG120_8_RADICES = (5, 3, 2, 4)
SG120_8_GENERATORS = (1, 5, 15, 30)


def f_function(o: int) -> int:
    """Multiplicative, with f(2^n) = 2^(n+1) and f(p^n) = p^n for odd p."""
    if o < 1:
        raise PreconditionError("f is defined on positive integers")
    return prod(p ** (k + 1) if p == 2 else p**k for p, k in factorint(o).items())


# --- G_o -------------------------------------------------------------------


def _sign_action(moduli: Sequence[int], signs: Sequence[int]) -> list[int]:
    """(x_1, x_2, x_3) -> (s_1 x_1, s_2 x_2, s_3 x_3) on Z/m_1 x Z/m_2 x Z/m_3."""
    m1, m2, m3 = moduli
    s1, s2, s3 = signs
    images = []
    for g in range(m1 * m2 * m3):
        x1, x2, x3 = g % m1, (g // m1) % m2, g // (m1 * m2)
        images.append((s1 * x1) % m1 + m1 * ((s2 * x2) % m2 + m2 * ((s3 * x3) % m3)))
    return images


def construct_Go(
    primes: Sequence[int],
    exponents: Sequence[int] = (1, 1, 1),
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> ConstructedInstance:
    """A group of order 4 f(o) with a non-RCC automorphism of order o = prod p_i^k_i.

    B = Z/f(p_1^k_1) x Z/f(p_2^k_2) x Z/f(p_3^k_3) is extended by the Klein
    group generated by a_1, a_2, where a_i is the identity on B_i and inverts
    the other two factors. The automorphism is conjugation by b_1 b_2 b_3; it
    fixes B and has a single cycle length o / p_i^k_i on each coset a_i B.
    """
    if len(primes) != 3 or len(exponents) != 3:
        raise PreconditionError("G_o needs exactly three prime powers")
    if not all(isprime(p) for p in primes) or not primes[0] < primes[1] < primes[2]:
        raise PreconditionError(f"primes must be increasing distinct primes, got {list(primes)}")
    if any(k < 1 for k in exponents):
        raise PreconditionError("exponents must be positive")
    powers = [p**k for p, k in zip(primes, exponents, strict=True)]
    o = prod(powers)
    moduli = [f_function(q) for q in powers]
    base_order = prod(moduli)
    if 4 * base_order > config.max_group_order:
        raise BoundExceededError("max_group_order", config.max_group_order, 4 * base_order)

    b1, b2, b3 = (cyclic(m, config) for m in moduli)
    base = direct_product(direct_product(b1, b2, config), b3, config)
    klein = direct_product(cyclic(2, config), cyclic(2, config), config)
    # Klein element a + 2b is a_1^a a_2^b
    action = [
        _sign_action(moduli, ((-1) ** b, (-1) ** a, (-1) ** (a + b)))
        for b in range(2)
        for a in range(2)
    ]
    group = semidirect_product(base, klein, action, config)
    group = group.model_copy(update={"tag": f"G_{o}"})
    generator_product = 1 + moduli[0] + moduli[0] * moduli[1]
    automorphism = inner_automorphism(group, generator_product)

    coset_lengths = {base_order * h: o // powers[h - 1] for h in (1, 2, 3)}
    zeta = {1: base_order} | {length: base_order for length in coset_lengths.values()}
    logger.debug(f"G_{o}: |B| = {base_order}, coset lengths {sorted(coset_lengths.values())}")
    return ConstructedInstance(
        name=f"G_{o}",
        group=group,
        automorphism=automorphism,
        expected=ExpectedProperties(
            group_order=4 * f_function(o),
            automorphism_order=o,
            rcc=False,
            zeta=zeta,
            fixed_subgroup_order=base_order,
            coset_cycle_lengths=coset_lengths,
            coset_size=base_order,
        ),
    )


def _unit_power_automorphism(p: int, k: int, config: AnalysisConfig) -> Automorphism:
    """x -> (1 + p) x on Z/p^(k+1), of order p^k for odd p."""
    n = p ** (k + 1)
    group = cyclic(n, config)
    return Automorphism(group=group, perm=tuple(((1 + p) * x) % n for x in range(n)))


def construct_many_prime(o: int, config: AnalysisConfig = DEFAULT_CONFIG) -> ConstructedInstance:
    """A non-RCC automorphism of order o, for o with at least three prime divisors.

    G_(p_1^k_1 p_2^k_2 p_3^k_3) times Z/p_i^(k_i+1) for the remaining primes.
    """
    factors = sorted(factorint(o).items())
    if len(factors) < 3:
        raise PreconditionError(f"{o} has fewer than three distinct prime divisors")
    head, tail = factors[:3], factors[3:]
    head_order = prod(p**k for p, k in head)
    size = 4 * f_function(head_order) * prod(p ** (k + 1) for p, k in tail)
    if size > config.max_group_order:
        raise BoundExceededError("max_group_order", config.max_group_order, size)

    instance = construct_Go([p for p, _ in head], [k for _, k in head], config)
    group, automorphism = instance.group, instance.automorphism
    for p, k in tail:
        factor = _unit_power_automorphism(p, k, config)
        group = direct_product(group, factor.group, config)
        automorphism = direct_product_automorphism(automorphism, factor, group)
    if not tail:
        return instance
    group = group.model_copy(update={"tag": f"many_prime({o})"})
    return ConstructedInstance(
        name=f"many_prime({o})",
        group=group,
        automorphism=automorphism.model_copy(update={"group": group}),
        expected=ExpectedProperties(group_order=size, automorphism_order=o, rcc=False),
    )


# --- SmallGroup(120, 8) ----------------------------------------------------


def sg120_8_index(k1: int, k2: int, k3: int, k4: int) -> int:
    """Normal form (k1, k2, k3, k4) in Z/5 x Z/3 x Z/2 x Z/4, k1 fastest."""
    return k1 % 5 + 5 * (k2 % 3 + 3 * (k3 % 2 + 2 * (k4 % 4)))


def sg120_8_coordinates(g: int) -> tuple[int, int, int, int]:
    return g % 5, (g // 5) % 3, (g // 15) % 2, g // 30


def sg120_8_table() -> np.ndarray:  # type: ignore[type-arg]
    """(k1 + (-1)^k3 l1, k2 + (-1)^k4 l2, k3 + l3, k4 + l4)."""
    k1, k2, k3, k4 = (np.array(c)[:, None] for c in zip(*map(sg120_8_coordinates, range(120))))
    l1, l2, l3, l4 = (c.T for c in (k1, k2, k3, k4))
    return (
        (k1 + (-1) ** k3 * l1) % 5
        + 5 * ((k2 + (-1) ** k4 * l2) % 3 + 3 * ((k3 + l3) % 2 + 2 * ((k4 + l4) % 4)))
    )


def sg120_8_tower(config: AnalysisConfig = DEFAULT_CONFIG) -> FiniteGroup:
    """Z/5 x| (Z/3 x| (Z/2 x Z/4)) built from semidirect products."""
    z5, z3 = cyclic(5, config), cyclic(3, config)
    top = direct_product(cyclic(2, config), cyclic(4, config), config)
    # (k3, k4) acts on Z/3 by (-1)^k4
    inner_action = [[((-1) ** (h // 2) * x) % 3 for x in range(3)] for h in range(top.order)]
    middle = semidirect_product(z3, top, inner_action, config)
    # (k2, k3, k4) acts on Z/5 by (-1)^k3
    outer_action = [
        [((-1) ** ((h // 3) % 2) * x) % 5 for x in range(5)] for h in range(middle.order)
    ]
    return semidirect_product(z5, middle, outer_action, config)


def sg120_8_alpha_formula(g: int) -> int:
    """(k1 + k3, k2 + [k4 odd], k3, -k4 + 2 k3)."""
    k1, k2, k3, k4 = sg120_8_coordinates(g)
    return sg120_8_index(k1 + k3, k2 + (k4 % 2), k3, -k4 + 2 * k3)


def construct_sg120_8(config: AnalysisConfig = DEFAULT_CONFIG) -> ConstructedInstance:
    """The order-120 group with a non-RCC automorphism of order 30.

    The table from the normal-form formula must equal the semidirect tower
    table, and the automorphism from generator images
    x1 -> x1, x2 -> x2, x3 -> x1 x3 x4^2, x4 -> x2 x4^3 must equal the
    closed formula.
    """
    x1, x2, x3, x4 = SG120_8_GENERATORS
    labels = [str(sg120_8_coordinates(g)).replace(" ", "") for g in range(120)]
    group = validate_group(
        sg120_8_table(),
        labels=labels,
        generators=SG120_8_GENERATORS,
        tag="sg120_8",
        config=config,
    )
    tower = sg120_8_tower(config)
    if not np.array_equal(tower.table, group.table):
        raise InvariantViolationError("semidirect tower differs from the normal-form table")

    images = [
        x1,
        x2,
        group.mul(group.mul(x1, x3), group.power(x4, 2)),
        group.mul(x2, group.power(x4, 3)),
    ]
    automorphism = automorphism_from_generator_images(group, SG120_8_GENERATORS, images)
    if automorphism is None:
        raise InvariantViolationError("generator images do not extend to an automorphism")
    if automorphism.perm != tuple(sg120_8_alpha_formula(g) for g in range(120)):
        raise InvariantViolationError("generator-image automorphism differs from the formula")

    return ConstructedInstance(
        name="sg120_8",
        group=group,
        automorphism=automorphism,
        expected=ExpectedProperties(
            group_order=120,
            automorphism_order=30,
            rcc=False,
            zeta={1: 30, 6: 30, 10: 30, 15: 30},
            fixed_subgroup_order=30,
            fixed_subgroup_normal=True,
        ),
    )


# --- verification ----------------------------------------------------------


def verify_instance(instance: ConstructedInstance) -> list[InstanceCheck]:
    """Re-derive every claimed property from the group and automorphism alone."""
    expected = instance.expected
    group, automorphism = instance.group, instance.automorphism
    checks = [
        InstanceCheck(name="group_order", expected=expected.group_order, actual=group.order),
        InstanceCheck(
            name="automorphism_order",
            expected=expected.automorphism_order,
            actual=automorphism.order,
        ),
        InstanceCheck(name="rcc", expected=expected.rcc, actual=check_rcc(automorphism).holds),
    ]
    if expected.zeta is not None:
        actual_zeta = cycle_structure(automorphism).counts
        checks.append(InstanceCheck(name="zeta", expected=expected.zeta, actual=actual_zeta))
    if expected.fixed_subgroup_order is not None or expected.fixed_subgroup_normal is not None:
        fixed = fixed_subgroup(automorphism)
        if expected.fixed_subgroup_order is not None:
            checks.append(
                InstanceCheck(
                    name="fixed_subgroup_order",
                    expected=expected.fixed_subgroup_order,
                    actual=fixed.order,
                )
            )
        if expected.fixed_subgroup_normal is not None:
            checks.append(
                InstanceCheck(
                    name="fixed_subgroup_normal",
                    expected=expected.fixed_subgroup_normal,
                    actual=is_normal(group, fixed),
                )
            )
    if expected.coset_cycle_lengths is not None and expected.coset_size is not None:
        lengths = cycle_lengths(automorphism)
        for start, length in expected.coset_cycle_lengths.items():
            observed = sorted(set(lengths[start : start + expected.coset_size]))
            checks.append(
                InstanceCheck(name=f"coset_lengths[{start}]", expected=[length], actual=observed)
            )
    return checks
