"""Regular cycle condition verdicts, fast paths and the structural checks around them."""

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from loguru import logger
from sympy import factorint

from rcclab.domain.errors import InvariantViolationError, PreconditionError
from rcclab.domain.models.automorphism import Automorphism
from rcclab.domain.models.config import DEFAULT_CONFIG, AnalysisConfig
from rcclab.domain.models.gf import GFMatrix
from rcclab.domain.models.group import FiniteGroup, GroupHom, Subgroup
from rcclab.domain.models.rcc import (
    CertificateKind,
    DominanceReport,
    FastPathCertificate,
    HallReport,
    PqrReport,
    ProductReport,
    RccVerdict,
    RegularGeneratingSet,
)
from rcclab.domain.services import gf_linalg
from rcclab.domain.services.automorphisms import (
    basis_coordinates,
    cycle_lengths,
    cycle_structure,
    direct_product_automorphism,
    enumerate_automorphisms,
    fixed_subgroup,
    frattini_quotient,
    induced_quotient_automorphism,
)
from rcclab.domain.services.group_kernel import (
    direct_product,
    is_nilpotent,
    is_normal,
    minimal_generating_set,
    prime_of_p_group,
    subgroup_closure,
)

ONE_THIRD = Fraction(1, 3)
ONE_HALF = Fraction(1, 2)


def valuation(n: int, p: int) -> int:
    """Exponent of the prime p in n."""
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def prime_divisors(n: int) -> tuple[int, ...]:
    return tuple(sorted(int(q) for q in factorint(n)))


# --- verdicts --------------------------------------------------------------


def check_rcc(automorphism: Automorphism) -> RccVerdict:
    lengths = cycle_lengths(automorphism)
    order = automorphism.order
    witness = next((g for g, length in enumerate(lengths) if length == order), None)
    return RccVerdict(
        holds=witness is not None,
        order=order,
        lengths=tuple(sorted(set(lengths))),
        witness=witness,
    )


def lambda_value(automorphism: Automorphism) -> Fraction:
    """Largest cycle length over |G|, exactly."""
    return Fraction(max(cycle_lengths(automorphism)), automorphism.group.order)


def lambda_group(group: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG) -> Fraction:
    return max(lambda_value(a) for a in enumerate_automorphisms(group, config))


def is_rcc_group(group: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG) -> bool:
    return all(check_rcc(a).holds for a in enumerate_automorphisms(group, config))


def fixed_point_free(automorphism: Automorphism) -> bool:
    """Only the identity is fixed."""
    return fixed_subgroup(automorphism).is_trivial


# --- fast paths ------------------------------------------------------------


def applicable_certificates(automorphism: Automorphism) -> list[FastPathCertificate]:
    """Every fast-path certificate that applies, in priority order."""
    group = automorphism.group
    order = automorphism.order
    primes = prime_divisors(order)
    ratio = lambda_value(automorphism)

    def certificate(kind: CertificateKind) -> FastPathCertificate:
        return FastPathCertificate(
            kind=kind,
            automorphism_order=order,
            group_order=group.order,
            primes=primes,
            lambda_value=ratio if kind is CertificateKind.LAMBDA_THIRD else None,
        )

    applicable = {
        CertificateKind.TWO_PRIME_ORDER: len(primes) <= 2,
        CertificateKind.COPRIME_ORDER: gcd(order, group.order) == 1,
        CertificateKind.NILPOTENT_GROUP: is_nilpotent(group),
        CertificateKind.LAMBDA_THIRD: ratio >= ONE_THIRD,
    }
    return [certificate(kind) for kind, holds in applicable.items() if holds]


def fast_path(automorphism: Automorphism) -> FastPathCertificate | None:
    certificates = applicable_certificates(automorphism)
    return certificates[0] if certificates else None


# --- dominance -------------------------------------------------------------


def dominance_check(automorphism: Automorphism, x: int, y: int, p: int) -> DominanceReport:
    """Valuations at p of the cycle lengths of x, y and xy.

    When the first two differ, the third must be their maximum.
    """
    lengths = cycle_lengths(automorphism)
    product = automorphism.group.mul(x, y)
    report = DominanceReport(
        p=p,
        length_x=lengths[x],
        length_y=lengths[y],
        length_product=lengths[product],
        valuation_x=valuation(lengths[x], p),
        valuation_y=valuation(lengths[y], p),
        valuation_product=valuation(lengths[product], p),
    )
    if report.holds is False:
        raise InvariantViolationError(
            f"nu_{p} of the cycle length of g{x}*g{y} is {report.valuation_product}, "
            f"expected {max(report.valuation_x, report.valuation_y)}"
        )
    return report


def two_prime_divisibility_violations(automorphism: Automorphism) -> list[tuple[int, int]]:
    """Prime pairs p, q of ord(alpha) with no cycle length divisible by p^a q^b.

    a and b are the full exponents of p and q in the order; the list is empty
    for every automorphism.
    """
    order = automorphism.order
    lengths = cycle_structure(automorphism).lengths
    violations = []
    for p, q in combinations(prime_divisors(order), 2):
        target = p ** valuation(order, p) * q ** valuation(order, q)
        if not any(length % target == 0 for length in lengths):
            violations.append((p, q))
    return violations


def pqr_structure_check(automorphism: Automorphism) -> PqrReport:
    """Census of a non-RCC automorphism of order pqr.

    zeta_1 = zeta_pq = zeta_pr = zeta_qr, |G| = 4 zeta_1, no other cycle
    lengths, and the fixed subgroup is normal.
    """
    order = automorphism.order
    factors = factorint(order)
    if len(factors) != 3 or any(e != 1 for e in factors.values()):
        return PqrReport(
            applicable=False, reason=f"order {order} is not a product of three primes"
        )
    if check_rcc(automorphism).holds:
        return PqrReport(applicable=False, reason="automorphism satisfies the RCC")

    p, q, r = sorted(int(x) for x in factors)
    group = automorphism.group
    structure = cycle_structure(automorphism)
    fixed = fixed_subgroup(automorphism)
    zeta_1 = structure.zeta(1)
    failures = []
    if {structure.zeta(p * q), structure.zeta(p * r), structure.zeta(q * r)} != {zeta_1}:
        failures.append("zeta_1, zeta_pq, zeta_pr, zeta_qr are not all equal")
    if group.order != 4 * zeta_1:
        failures.append(f"|G| = {group.order} is not 4 * zeta_1 = {4 * zeta_1}")
    if set(structure.lengths) != {1, p * q, p * r, q * r}:
        failures.append(f"unexpected cycle lengths {structure.lengths}")
    normal = is_normal(group, fixed)
    if not normal:
        failures.append("fixed subgroup is not normal")
    report = PqrReport(
        applicable=True,
        primes=(p, q, r),
        zeta=structure.counts,
        group_order=group.order,
        fixed_subgroup_order=fixed.order,
        fixed_subgroup_normal=normal,
        failures=tuple(failures),
    )
    if failures:
        raise InvariantViolationError("; ".join(failures))
    return report


# --- p-groups --------------------------------------------------------------


@dataclass(frozen=True)
class _FrattiniLayout:
    """Per-group data shared by every automorphism lifted through G/Frat(G)."""

    frat: Subgroup
    projection: GroupHom
    basis: tuple[int, ...]
    element_of: dict[tuple[int, ...], int]
    vector_of: dict[int, tuple[int, ...]]
    cosets: dict[int, list[int]]


def _frattini_layout(group: FiniteGroup, p: int, config: AnalysisConfig) -> _FrattiniLayout:
    def build() -> _FrattiniLayout:
        frat, factor, projection = frattini_quotient(group, config)
        basis = minimal_generating_set(factor, config)
        element_of = basis_coordinates(factor, basis, p)
        cosets: dict[int, list[int]] = defaultdict(list)
        for g in range(group.order):
            cosets[projection(g)].append(g)
        return _FrattiniLayout(
            frat=frat,
            projection=projection,
            basis=basis,
            element_of=element_of,
            vector_of={g: v for v, g in element_of.items()},
            cosets=dict(cosets),
        )

    layout: _FrattiniLayout = group._cached("frattini_layout", build)  # noqa: SLF001
    return layout


def regular_generating_set_pgroup(
    automorphism: Automorphism, config: AnalysisConfig = DEFAULT_CONFIG
) -> RegularGeneratingSet:
    """Generators of a p-group whose cycle lengths are p^k_i * ford(alpha).

    A regular basis of G/Frat(G) under the induced automorphism is lifted
    through each Frat-coset to the element of least cycle length. The
    quotient, its basis and the coset lists are built once per group.
    """
    group = automorphism.group
    p = prime_of_p_group(group)
    if p is None:
        if group.order == 1:
            return RegularGeneratingSet(
                p=None, m=0, r=0, ford=1, elements=(), exponents=(), cycle_lengths=()
            )
        raise PreconditionError(f"group of order {group.order} is not a p-group")
    m = valuation(group.order, p)
    layout = _frattini_layout(group, p, config)
    r = len(layout.basis)
    if p**r * layout.frat.order != group.order:
        raise InvariantViolationError(
            f"G/Frat(G) of order {group.order // layout.frat.order} needs {r} generators"
        )
    induced = induced_quotient_automorphism(automorphism, layout.frat, layout.projection)
    ford_value = induced.order

    columns = [layout.vector_of[induced(b)] for b in layout.basis]
    matrix = GFMatrix.from_rows(p, [[columns[j][i] for j in range(r)] for i in range(r)])
    regular_vectors = gf_linalg.regular_basis(matrix, config)

    lengths = cycle_lengths(automorphism)
    elements, exponents, chosen_lengths = [], [], []
    for vector in regular_vectors:
        lift = min(layout.cosets[layout.element_of[vector]], key=lambda g: (lengths[g], g))
        length = lengths[lift]
        k = valuation(length // ford_value, p)
        if length != p**k * ford_value:
            raise InvariantViolationError(f"cycle length {length} is not p^k * ford({ford_value})")
        if k > (m - r) * r:
            raise InvariantViolationError(f"exponent {k} exceeds (m - r) r = {(m - r) * r}")
        elements.append(lift)
        exponents.append(k)
        chosen_lengths.append(length)
    if not subgroup_closure(group, elements).is_whole:
        raise InvariantViolationError("lifted basis does not generate the group")
    logger.debug(f"regular generating set {elements} with exponents {exponents}")
    return RegularGeneratingSet(
        p=p,
        m=m,
        r=r,
        ford=ford_value,
        elements=tuple(elements),
        exponents=tuple(exponents),
        cycle_lengths=tuple(chosen_lengths),
    )


def hall_check(
    group: FiniteGroup,
    automorphisms: list[Automorphism],
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> HallReport:
    """Size of the kernel of Aut(G) -> Aut(G/Frat(G)) for a p-group.

    ``automorphisms`` should be all of Aut(G) for the bound to be meaningful.
    """
    p = prime_of_p_group(group)
    if p is None:
        raise PreconditionError(f"group of order {group.order} is not a p-group")
    frat, factor, projection = frattini_quotient(group, config)
    kernel = [
        a
        for a in automorphisms
        if induced_quotient_automorphism(a, frat, projection).is_identity
    ]
    return HallReport(
        p=p,
        m=valuation(group.order, p),
        r=valuation(factor.order, p),
        kernel_size=len(kernel),
    )


def lifted_bases_generate(group: FiniteGroup, config: AnalysisConfig = DEFAULT_CONFIG) -> bool:
    """Whether lifts of a basis of G/Frat(G) generate G.

    Each basis coset is tried at every one of its elements while the other
    cosets stay at their least element.
    """
    _, factor, projection = frattini_quotient(group, config)
    basis = minimal_generating_set(factor, config)
    cosets = [[g for g in range(group.order) if projection(g) == b] for b in basis]
    least = [coset[0] for coset in cosets]
    for i, coset in enumerate(cosets):
        for g in coset:
            lift = [*least[:i], g, *least[i + 1 :]]
            if not subgroup_closure(group, lift).is_whole:
                return False
    return True


# --- products --------------------------------------------------------------


def product_maximum_check(
    first: Automorphism, second: Automorphism, config: AnalysisConfig = DEFAULT_CONFIG
) -> ProductReport:
    """Largest cycle length and RCC verdict of alpha x beta against its factors."""
    product_group = direct_product(first.group, second.group, config)
    product = direct_product_automorphism(first, second, product_group)
    return ProductReport(
        max_first=max(cycle_lengths(first)),
        max_second=max(cycle_lengths(second)),
        max_product=max(cycle_lengths(product)),
        factors_rcc=check_rcc(first).holds and check_rcc(second).holds,
        product_rcc=check_rcc(product).holds,
        coprime_orders=gcd(first.group.order, second.group.order) == 1,
    )

