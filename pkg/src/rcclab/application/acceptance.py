"""The acceptance suite: ten self-contained, seeded checks of the whole toolkit."""

import random
import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import pairwise, product

import numpy as np
from loguru import logger

from rcclab.domain.errors import RccLabError
from rcclab.domain.models.automorphism import Automorphism
from rcclab.domain.models.config import AnalysisConfig
from rcclab.domain.models.gf import GFMatrix, GFPoly
from rcclab.domain.models.group import FiniteGroup
from rcclab.domain.services import gf_linalg
from rcclab.domain.services.automorphisms import (
    affine_map,
    automorphisms_or_sample,
    cycle_lengths,
    cycle_structure,
    direct_product_automorphism,
    enumerate_automorphisms,
    identity_automorphism,
    is_closed_under_composition,
)
from rcclab.domain.services.catalog import (
    abelian,
    abelian_groups,
    cyclic,
    dihedral,
    elementary_abelian,
    heisenberg,
    quaternion8,
    symmetric,
)
from rcclab.domain.services.constructions import (
    construct_Go,
    construct_sg120_8,
    f_function,
    verify_instance,
)
from rcclab.domain.services.group_kernel import (
    burnside_subgroup,
    direct_product,
    frattini,
    prime_of_p_group,
)
from rcclab.domain.services.rcc import (
    ONE_HALF,
    ONE_THIRD,
    check_rcc,
    dominance_check,
    fixed_point_free,
    hall_check,
    lambda_value,
    lifted_bases_generate,
    pqr_structure_check,
    prime_divisors,
    product_maximum_check,
    regular_generating_set_pgroup,
    two_prime_divisibility_violations,
    valuation,
)

CENSUS_MAX_ORDER = 64
CENSUS_MAX_DIHEDRAL_ORDER = 100
SYMMETRIC_AUT_ORDERS = {3: 6, 4: 24, 5: 120}
EXTENDED_SYMMETRIC_AUT_ORDERS = {6: 1440}
CLOSURE_CHECK_MAX_AUT = 2000


class AcceptanceFailure(Exception):
    """A check observed something other than what it requires."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


@dataclass
class CheckResult:
    """Outcome of one acceptance check."""

    name: str
    passed: bool
    detail: str
    duration_seconds: float


@dataclass
class CensusTally:
    groups: int = 0
    sampled_groups: list[str] = field(default_factory=list)
    automorphisms: int = 0
    non_rcc: list[str] = field(default_factory=list)
    two_prime_violations: list[str] = field(default_factory=list)
    few_primes_not_rcc: list[str] = field(default_factory=list)
    large_lambda_not_rcc: list[str] = field(default_factory=list)
    half_lambda_with_fixed_points: list[str] = field(default_factory=list)
    not_closed: list[str] = field(default_factory=list)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise AcceptanceFailure(message)


def _first(items: list[str], limit: int = 3) -> str:
    return ", ".join(items[:limit]) + (" ..." if len(items) > limit else "")


class AcceptanceSuite:
    """Runs the acceptance checks in order; every random choice derives from ``config.seed``.

    The keyword arguments scale the suite down for quick runs; the defaults are the full suite.
    """

    def __init__(
        self,
        config: AnalysisConfig,
        extended: bool = False,
        trials: int = 10_000,
        random_matrices: int = 200,
        frobenius_matrices: int = 500,
        census_max_order: int = CENSUS_MAX_ORDER,
        dihedral_max_order: int = CENSUS_MAX_DIHEDRAL_ORDER,
    ) -> None:
        self._config = config
        self._extended = extended
        self._trials = trials
        self._random_matrices = random_matrices
        self._frobenius_matrices = frobenius_matrices
        self._census_max_order = census_max_order
        self._dihedral_max_order = dihedral_max_order

    @property
    def checks(self) -> dict[str, Callable[[], str]]:
        return {
            "sg120_8_counterexample": self.check_sg120_8,
            "g_o_family": self.check_g_o_family,
            "sub_120_census": self.check_census,
            "symmetric_groups": self.check_symmetric_groups,
            "regular_basis": self.check_regular_basis,
            "p_group_generators": self.check_p_group_generators,
            "dominance": self.check_dominance,
            "large_cycles": self.check_large_cycles,
            "gf_linalg_oracles": self.check_gf_linalg_oracles,
            "direct_products": self.check_direct_products,
        }

    def run(self, only: list[str] | None = None) -> list[CheckResult]:
        selected = {name: check for name, check in self.checks.items() if not only or name in only}
        unknown = set(only or []) - set(self.checks)
        if unknown:
            raise ValueError(f"unknown acceptance checks: {', '.join(sorted(unknown))}")
        logger.info(f"Running {len(selected)} acceptance checks (seed {self._config.seed})")
        results = [self._run_check(name, check) for name, check in selected.items()]
        passed = sum(r.passed for r in results)
        logger.info(
            f"Acceptance completed in {sum(r.duration_seconds for r in results):.2f}s: "
            f"{passed} passed, {len(results) - passed} failed"
        )
        return results

    def _run_check(self, name: str, check: Callable[[], str]) -> CheckResult:
        logger.debug(f"Starting check {name}")
        start_time = time.perf_counter()
        try:
            detail = check()
            passed = True
        except (AcceptanceFailure, RccLabError) as e:
            detail = e.message
            passed = False
        duration = time.perf_counter() - start_time
        if passed:
            logger.info(f"\033[32mPASS ✓\033[0m: {name} ({duration:.2f}s) - {detail}")
        else:
            logger.warning(f"\033[31mFAIL ✗\033[0m: {name} ({duration:.2f}s) - {detail}")
        return CheckResult(name=name, passed=passed, detail=detail, duration_seconds=duration)

    # --- constructions -----------------------------------------------------

    def check_sg120_8(self) -> str:
        instance = construct_sg120_8(self._config)
        alpha = instance.automorphism
        failed = [c.name for c in verify_instance(instance) if not c.passed]
        _require(not failed, f"claimed properties do not hold: {failed}")
        structure = cycle_structure(alpha)
        _require(alpha.order == 30, f"ord(alpha) = {alpha.order}")
        _require(
            structure.counts == {1: 30, 6: 30, 10: 30, 15: 30}, f"zeta = {structure.counts}"
        )
        _require(not check_rcc(alpha).holds, "alpha has a regular cycle")
        _require(instance.group.order == 4 * structure.zeta(1), "|G| != 4 zeta_1")
        report = pqr_structure_check(alpha)
        _require(bool(report.holds), f"order-pqr census failed: {report.failures}")
        return f"|G| = 120, ord = 30, zeta = {structure.counts}, fix normal of order 30"

    def check_g_o_family(self) -> str:
        cases = {(3, 5, 7): {1, 15, 21, 35}, (2, 3, 5): {1, 6, 10, 15}}
        details = []
        for primes, lengths in cases.items():
            instance = construct_Go(primes, config=self._config)
            o = primes[0] * primes[1] * primes[2]
            failed = [c.name for c in verify_instance(instance) if not c.passed]
            _require(not failed, f"{instance.name}: claimed properties do not hold: {failed}")
            _require(
                instance.group.order == 4 * f_function(o),
                f"{instance.name}: |G| = {instance.group.order}",
            )
            observed = set(cycle_structure(instance.automorphism).lengths)
            _require(observed == lengths, f"{instance.name}: cycle lengths {sorted(observed)}")
            _require(not check_rcc(instance.automorphism).holds, f"{instance.name} is RCC")
            details.append(f"{instance.name}: |G| = {instance.group.order}")
        return ", ".join(details)

    # --- census ------------------------------------------------------------

    def census_groups(self) -> Iterator[FiniteGroup]:
        """The catalog groups of order below 120 the census covers."""
        limit = self._census_max_order
        yield from abelian_groups(limit, self._config)
        for n in range(3, self._dihedral_max_order // 2 + 1):
            yield dihedral(n, self._config)
        yield quaternion8(self._config)
        for n in (3, 4):
            yield symmetric(n, self._config)
        yield heisenberg(3, self._config)
        for p in (2, 3, 5, 7):
            for n in range(2, 7):
                if p**n <= limit:
                    yield elementary_abelian(p, n, self._config)

    @cached_property
    def census(self) -> CensusTally:
        """One pass over every census automorphism, shared by the checks that need it."""
        tally = CensusTally()
        for group in self.census_groups():
            automorphisms, exhaustive = automorphisms_or_sample(
                group, self._random_matrices, self._config
            )
            name = group.tag or str(group.order)
            tally.groups += 1
            if not exhaustive:
                tally.sampled_groups.append(name)
            checkable = exhaustive and len(automorphisms) <= CLOSURE_CHECK_MAX_AUT
            if checkable and not is_closed_under_composition(automorphisms):
                tally.not_closed.append(name)
            for automorphism in automorphisms:
                self._tally(tally, name, automorphism)
        logger.debug(f"Census covered {tally.groups} groups, {tally.automorphisms} automorphisms")
        return tally

    def _tally(self, tally: CensusTally, name: str, automorphism: Automorphism) -> None:
        tally.automorphisms += 1
        verdict = check_rcc(automorphism)
        where = f"{name}#{tally.automorphisms}"
        if not verdict.holds:
            tally.non_rcc.append(where)
            if len(prime_divisors(automorphism.order)) <= 2:
                tally.few_primes_not_rcc.append(where)
        if two_prime_divisibility_violations(automorphism):
            tally.two_prime_violations.append(where)
        ratio = lambda_value(automorphism)
        if ratio >= ONE_THIRD and not verdict.holds:
            tally.large_lambda_not_rcc.append(where)
        if ratio > ONE_HALF and not fixed_point_free(automorphism):
            tally.half_lambda_with_fixed_points.append(where)

    def check_census(self) -> str:
        tally = self.census
        _require(
            not tally.not_closed,
            f"Aut(G) not closed under composition: {_first(tally.not_closed)}",
        )
        _require(not tally.non_rcc, f"automorphisms without a regular cycle: {_first(tally.non_rcc)}")
        sampled = f", sampled: {_first(tally.sampled_groups)}" if tally.sampled_groups else ""
        return f"{tally.groups} groups, {tally.automorphisms} automorphisms, all RCC{sampled}"

    def check_symmetric_groups(self) -> str:
        expected = dict(SYMMETRIC_AUT_ORDERS)
        if self._extended:
            expected |= EXTENDED_SYMMETRIC_AUT_ORDERS
        details = []
        for n, aut_order in expected.items():
            automorphisms = enumerate_automorphisms(symmetric(n, self._config), self._config)
            _require(len(automorphisms) == aut_order, f"|Aut(S_{n})| = {len(automorphisms)}")
            failing = [a for a in automorphisms if not check_rcc(a).holds]
            _require(not failing, f"S_{n} has {len(failing)} non-RCC automorphisms")
            details.append(f"|Aut(S_{n})| = {aut_order}")
        return ", ".join(details)

    # --- linear algebra ----------------------------------------------------

    def _matrices(self, p: int, n: int, rng: random.Random) -> Iterator[GFMatrix]:
        if p == 2 and n <= 4:
            yield from gf_linalg.general_linear_group(p, n)
        else:
            for _ in range(self._random_matrices):
                yield gf_linalg.random_invertible_matrix(p, n, rng)

    def _check_regular_basis(self, matrix: GFMatrix) -> None:
        p, n = matrix.p, matrix.n
        basis = gf_linalg.regular_basis(matrix, self._config)
        order = gf_linalg.matrix_order(matrix, self._config)
        _, lengths = gf_linalg.vector_cycle_lengths(matrix, self._config)
        weights = [p ** (n - 1 - i) for i in range(n)]
        vector_lengths = [lengths[sum(x * w for x, w in zip(v, weights, strict=True))] for v in basis]
        _require(len(basis) == n, f"{len(basis)} vectors for n = {n}")
        _require(
            gf_linalg.rank(np.array(basis), p) == n, f"dependent regular basis over GF({p})^{n}"
        )
        _require(
            all(length == order for length in vector_lengths),
            f"cycle lengths {vector_lengths} for order {order}",
        )

    def check_regular_basis(self) -> str:
        rng = random.Random(self._config.seed)
        checked = 0
        for p, max_n in ((2, 9), (3, 5), (5, 4)):
            for n in range(1, max_n + 1):
                for matrix in self._matrices(p, n, rng):
                    self._check_regular_basis(matrix)
                    checked += 1
        return f"{checked} matrices"

    def _monic_polynomials(self) -> Iterator[GFPoly]:
        """Monic polynomials with a unit constant term: GF(2) up to degree 10, GF(3) up to 6."""
        for p, max_degree in ((2, 10), (3, 6)):
            for degree in range(1, max_degree + 1):
                for middle in product(range(p), repeat=degree - 1):
                    for constant in range(1, p):
                        yield GFPoly.from_coeffs(p, [constant, *middle, 1])

    def _check_frobenius(self, a: GFMatrix) -> None:
        decomposition = gf_linalg.frobenius_form(a, self._config)
        u = decomposition.basis_change
        factors = decomposition.invariant_factors
        conjugated = gf_linalg.matrix_mul(gf_linalg.matrix_mul(gf_linalg.matrix_inverse(u), a), u)
        companions = gf_linalg.block_diagonal([gf_linalg.companion_matrix(f) for f in factors])
        _require(conjugated == companions, f"U^-1 A U is not in normal form over GF({a.p})")
        for smaller, larger in pairwise(factors):
            _, remainder = gf_linalg.poly_divmod(larger, smaller)
            _require(remainder.is_zero, f"{smaller} does not divide {larger}")
        product_of_factors = reduce(gf_linalg.poly_mul, factors, GFPoly.one(a.p))
        _require(
            product_of_factors == gf_linalg.charpoly(a),
            "invariant factors do not multiply to the characteristic polynomial",
        )

    def check_gf_linalg_oracles(self) -> str:
        polys = 0
        for f in self._monic_polynomials():
            by_factors = gf_linalg.poly_order_by_factorization(f, self._config)
            by_iteration = gf_linalg.poly_order_by_iteration(f)
            _require(
                by_factors == by_iteration,
                f"order of {f} over GF({f.p}): {by_factors} vs {by_iteration}",
            )
            polys += 1

        rng = random.Random(self._config.seed)
        matrices = 0
        for p, n in product((2, 3, 5), range(1, 7)):
            for _ in range(self._frobenius_matrices):
                self._check_frobenius(gf_linalg.random_matrix(p, n, rng))
                matrices += 1
        return f"{polys} polynomials, {matrices} matrices"

    # --- p-groups ----------------------------------------------------------

    def _check_p_group(self, group: FiniteGroup, p: int) -> tuple[int, bool]:
        """Automorphisms checked, and whether Hall's bound could be checked on all of Aut(G)."""
        name = group.tag or str(group.order)
        frat = frattini(group, self._config)
        _require(frat.members == burnside_subgroup(group, p).members, f"{name}: Frat(G) != G'G^p")
        _require(lifted_bases_generate(group, self._config), f"{name}: a lifted basis fails")
        automorphisms, exhaustive = automorphisms_or_sample(
            group, self._random_matrices, self._config
        )
        for automorphism in automorphisms:
            generating = regular_generating_set_pgroup(automorphism, self._config)
            _require(
                all(k <= generating.exponent_bound for k in generating.exponents),
                f"{name}: exponents {generating.exponents} exceed {generating.exponent_bound}",
            )
        if exhaustive:
            hall = hall_check(group, automorphisms, self._config)
            _require(
                hall.divides,
                f"{name}: |Aut_Frat| = {hall.kernel_size} does not divide {hall.bound}",
            )
        return len(automorphisms), exhaustive

    def check_p_group_generators(self) -> str:
        groups = automorphisms_checked = hall_checked = 0
        for group in self.census_groups():
            p = prime_of_p_group(group)
            if p is None or group.order > self._census_max_order:
                continue
            count, exhaustive = self._check_p_group(group, p)
            groups += 1
            automorphisms_checked += count
            hall_checked += exhaustive
        return (
            f"{groups} p-groups, {automorphisms_checked} automorphisms, "
            f"Hall bound on {hall_checked} full automorphism groups"
        )

    # --- cycle-length properties ------------------------------------------

    def _trial_pool(self) -> list[Automorphism]:
        groups = [
            cyclic(12, self._config),
            cyclic(30, self._config),
            abelian([4, 2], [3], config=self._config),
            abelian([2, 2], [9], config=self._config),
            dihedral(6, self._config),
            dihedral(10, self._config),
            quaternion8(self._config),
            symmetric(4, self._config),
            heisenberg(3, self._config),
        ]
        return [a for g in groups for a in enumerate_automorphisms(g, self._config)]

    def check_dominance(self) -> str:
        tally = self.census
        _require(
            not tally.two_prime_violations,
            f"two-prime divisibility fails: {_first(tally.two_prime_violations)}",
        )
        _require(
            not tally.few_primes_not_rcc,
            f"order with <= 2 primes but not RCC: {_first(tally.few_primes_not_rcc)}",
        )

        rng = random.Random(self._config.seed)
        pool = [a for a in self._trial_pool() if a.order > 1]
        trials = attempts = 0
        while trials < self._trials:
            attempts += 1
            _require(attempts <= 100 * self._trials, f"only {trials} applicable trials found")
            automorphism = rng.choice(pool)
            group = automorphism.group
            x, y = rng.randrange(group.order), rng.randrange(group.order)
            p = rng.choice(prime_divisors(automorphism.order))
            lengths = cycle_lengths(automorphism)
            if valuation(lengths[x], p) == valuation(lengths[y], p):
                continue
            dominance_check(automorphism, x, y, p)
            trials += 1
        return f"{trials} dominance trials, {tally.automorphisms} automorphisms checked"

    def check_large_cycles(self) -> str:
        tally = self.census
        _require(
            not tally.large_lambda_not_rcc,
            f"lambda >= 1/3 but not RCC: {_first(tally.large_lambda_not_rcc)}",
        )
        _require(
            not tally.half_lambda_with_fixed_points,
            f"lambda > 1/2 with fixed points: {_first(tally.half_lambda_with_fixed_points)}",
        )
        rng = random.Random(self._config.seed)
        pool = [a for a in self._trial_pool() if a.group.is_abelian]
        for _ in range(self._trials):
            automorphism = rng.choice(pool)
            affine_map(automorphism, rng.randrange(automorphism.group.order))
        return f"{tally.automorphisms} automorphisms, {self._trials} affine trials"

    # --- products ----------------------------------------------------------

    def check_direct_products(self) -> str:
        instance = construct_sg120_8(self._config)
        for k in (2, 3, 7):
            factor = cyclic(k, self._config)
            group = direct_product(instance.group, factor, self._config)
            alpha = direct_product_automorphism(
                instance.automorphism, identity_automorphism(factor), group
            )
            _require(not check_rcc(alpha).holds, f"SG(120,8) x Z/{k} carries an RCC alpha x 1")

        pairs = [
            (cyclic(4, self._config), cyclic(9, self._config)),
            (abelian([2, 2], config=self._config), cyclic(9, self._config)),
            (cyclic(8, self._config), cyclic(5, self._config)),
            (quaternion8(self._config), cyclic(3, self._config)),
            (dihedral(3, self._config), cyclic(5, self._config)),
        ]
        products = 0
        for first_group, second_group in pairs:
            firsts = enumerate_automorphisms(first_group, self._config)
            seconds = enumerate_automorphisms(second_group, self._config)
            for first in firsts:
                for second in seconds:
                    report = product_maximum_check(first, second, self._config)
                    _require(
                        report.holds is not False,
                        f"max cycle {report.max_product} != lcm({report.max_first}, "
                        f"{report.max_second})",
                    )
                    products += 1
        return f"alpha x 1 non-RCC for k = 2, 3, 7; {products} coprime products"
