from collections.abc import Callable

import pytest

from rcclab.domain.errors import (
    BoundExceededError,
    GenerationError,
    NotAdmissibleError,
    NotNormalError,
    PreconditionError,
)
from rcclab.domain.models.automorphism import Automorphism
from rcclab.domain.models.config import AnalysisConfig
from rcclab.domain.models.gf import GFMatrix, GFPoly
from rcclab.domain.models.group import FiniteGroup, Subgroup
from rcclab.domain.services import automorphisms, gf_linalg
from rcclab.domain.services.catalog import abelian, cyclic, elementary_abelian
from rcclab.domain.services.group_kernel import direct_product, subgroup_closure


class TestConstruction:
    def test_automorphism_model_rejects_non_homomorphisms(self, cyclic6: FiniteGroup) -> None:
        with pytest.raises(ValueError, match="multiplicative"):
            Automorphism(group=cyclic6, perm=(0, 2, 1, 3, 4, 5))
        with pytest.raises(ValueError, match="identity"):
            Automorphism(group=cyclic6, perm=(1, 0, 2, 3, 4, 5))

    def test_from_generator_images(self, cyclic6: FiniteGroup, negation: Automorphism) -> None:
        assert automorphisms.automorphism_from_generator_images(cyclic6, [1], [5]) == negation

    def test_non_injective_images_give_none(self, cyclic6: FiniteGroup) -> None:
        assert automorphisms.automorphism_from_generator_images(cyclic6, [1], [3]) is None

    def test_hom_into_another_group(self) -> None:
        z6 = cyclic(6)

        hom = automorphisms.hom_from_generator_images(cyclic(3), [1], [2], target=z6)

        assert hom is not None
        assert hom.images == (0, 2, 4)
        assert automorphisms.hom_from_generator_images(cyclic(3), [1], [1], target=z6) is None

    def test_generator_images_must_match_generators(self, cyclic6: FiniteGroup) -> None:
        with pytest.raises(PreconditionError):
            automorphisms.hom_from_generator_images(cyclic6, [1], [1, 5])
        with pytest.raises(GenerationError):
            automorphisms.hom_from_generator_images(cyclic6, [2], [4])

    def test_generator_period(self, negation: Automorphism) -> None:
        assert automorphisms.generator_period(negation, 1) == 2
        assert automorphisms.generator_period(negation, 3) == 1

    def test_inner_automorphisms(self, s3: FiniteGroup, q8: FiniteGroup) -> None:
        assert automorphisms.inner_automorphism(s3, 1).order == 2
        assert automorphisms.inner_automorphism(q8, 4).is_identity

    def test_direct_product_automorphism(
        self, cyclic6: FiniteGroup, negation: Automorphism
    ) -> None:
        z2 = cyclic(2)
        product = direct_product(cyclic6, z2)

        alpha = automorphisms.direct_product_automorphism(
            negation, automorphisms.identity_automorphism(z2), product
        )

        assert alpha.order == 2
        assert alpha(1 + 6) == 5 + 6

    def test_power_and_inverse(self, q8: FiniteGroup) -> None:
        alpha = automorphisms.automorphism_from_generator_images(q8, [1, 2], [2, 3])
        assert alpha is not None

        assert alpha.order == 3
        assert alpha.power(3).is_identity
        assert alpha.power(-1) == alpha.inverse() == alpha.power(2)
        assert alpha.compose(alpha.inverse()).is_identity


class TestElementaryAbelian:
    @pytest.mark.parametrize(
        ("group_factory", "expected"),
        [
            (lambda: cyclic(2), (2, 1)),
            (lambda: elementary_abelian(3, 2), (3, 2)),
            (lambda: cyclic(4), None),
            (lambda: cyclic(6), None),
        ],
    )
    def test_rank(
        self, group_factory: Callable[[], FiniteGroup], expected: tuple[int, int] | None
    ) -> None:
        assert automorphisms.elementary_abelian_rank(group_factory()) == expected

    def test_matrix_action(self) -> None:
        """A companion matrix of X^3 + X + 1 permutes the seven nonzero vectors in one cycle."""
        group = elementary_abelian(2, 3)
        matrix = gf_linalg.companion_matrix(GFPoly.from_coeffs(2, [1, 1, 0, 1]))

        alpha = automorphisms.automorphism_from_matrix(group, matrix)

        assert alpha.order == 7
        assert automorphisms.cycle_structure(alpha).counts == {1: 1, 7: 7}
        assert automorphisms.matrix_from_automorphism(alpha, 2, 3) == matrix

    def test_matrix_action_on_a_basis(self, klein_identity_last: FiniteGroup) -> None:
        swap = GFMatrix.from_rows(2, [[0, 1], [1, 0]])

        alpha = automorphisms.automorphism_from_matrix(klein_identity_last, swap, basis=[0, 2])

        assert alpha.perm == (2, 1, 0, 3)

    def test_matrix_basis_must_be_independent(self, klein_identity_last: FiniteGroup) -> None:
        with pytest.raises(PreconditionError, match="not a basis"):
            automorphisms.automorphism_from_matrix(
                klein_identity_last, GFMatrix.identity(2, 2), basis=[0, 0]
            )

    def test_matrix_size_must_match(self, klein: FiniteGroup) -> None:
        with pytest.raises(PreconditionError):
            automorphisms.automorphism_from_matrix(klein, GFMatrix.identity(2, 3))


class TestEnumeration:
    @pytest.mark.parametrize(
        ("group_factory", "expected"),
        [
            (lambda: cyclic(1), 1),
            (lambda: cyclic(6), 2),
            (lambda: cyclic(8), 4),
            (lambda: elementary_abelian(2, 2), 6),
            (lambda: elementary_abelian(2, 3), 168),
            (lambda: elementary_abelian(3, 2), 48),
        ],
    )
    def test_automorphism_group_orders(
        self, group_factory: Callable[[], FiniteGroup], expected: int
    ) -> None:
        found = automorphisms.enumerate_automorphisms(group_factory())

        assert len(found) == expected
        assert automorphisms.is_closed_under_composition(found)

    @pytest.mark.parametrize(("fixture", "expected"), [("s3", 6), ("d4", 8), ("q8", 24)])
    def test_nonabelian_automorphism_group_orders(
        self, fixture: str, expected: int, request: pytest.FixtureRequest
    ) -> None:
        found = automorphisms.enumerate_automorphisms(request.getfixturevalue(fixture))

        assert len(found) == expected
        assert len({a.perm for a in found}) == expected
        assert automorphisms.is_closed_under_composition(found)

    def test_enumeration_is_sorted(self, cyclic6: FiniteGroup) -> None:
        found = automorphisms.enumerate_automorphisms(cyclic6)

        assert [a.perm for a in found] == [(0, 1, 2, 3, 4, 5), (0, 5, 4, 3, 2, 1)]

    def test_search_space(self, cyclic6: FiniteGroup) -> None:
        assert automorphisms.search_space(cyclic6) == 2

    @pytest.mark.parametrize(
        ("config", "bound"),
        [
            (AnalysisConfig(max_aut_order=4), "max_aut_order"),
            (AnalysisConfig(max_search_space=1), "max_search_space"),
        ],
    )
    def test_bounds_refuse_enumeration(
        self, cyclic6: FiniteGroup, config: AnalysisConfig, bound: str
    ) -> None:
        with pytest.raises(BoundExceededError) as exc_info:
            automorphisms.enumerate_automorphisms(cyclic6, config)

        assert exc_info.value.bound == bound

    def test_large_elementary_abelian_rank_is_refused(self) -> None:
        with pytest.raises(BoundExceededError) as exc_info:
            automorphisms.enumerate_automorphisms(elementary_abelian(2, 5))

        assert exc_info.value.bound == "elementary_abelian_rank_limit"

    def test_too_many_generators_is_refused(self, klein: FiniteGroup) -> None:
        with pytest.raises(GenerationError):
            automorphisms.enumerate_automorphisms(klein, AnalysisConfig(max_generators=1))

    def test_sampling_fallback(self, klein: FiniteGroup) -> None:
        config = AnalysisConfig(max_generators=1)

        sampled, exhaustive = automorphisms.automorphisms_or_sample(klein, 5, config)
        again, _ = automorphisms.automorphisms_or_sample(klein, 5, config)

        assert not exhaustive
        assert len(sampled) == 5
        assert [a.perm for a in sampled] == [a.perm for a in again]

    def test_sampling_elementary_abelian_uses_matrices(self) -> None:
        group = elementary_abelian(2, 5)

        sampled, exhaustive = automorphisms.automorphisms_or_sample(group, 10)

        assert not exhaustive
        assert len(sampled) == 10

    def test_untagged_elementary_abelian_samples_matrices(self) -> None:
        group = abelian([2, 2, 2, 2, 2])

        sampled, exhaustive = automorphisms.automorphisms_or_sample(group, 10)

        assert not exhaustive
        assert len(sampled) == 10
        assert all(alpha.group.order == 32 for alpha in sampled)

    def test_relabelled_elementary_abelian_samples_matrices(
        self, klein_identity_last: FiniteGroup
    ) -> None:
        config = AnalysisConfig(max_generators=1)
        found = {a.perm for a in automorphisms.enumerate_automorphisms(klein_identity_last)}

        sampled = automorphisms.sample_automorphisms(klein_identity_last, 8, config)

        assert len(sampled) == 8
        assert {a.perm for a in sampled} <= found

    def test_exhaustive_when_allowed(self, s3: FiniteGroup) -> None:
        found, exhaustive = automorphisms.automorphisms_or_sample(s3, 5)

        assert exhaustive
        assert len(found) == 6

    def test_closure_check_detects_missing_elements(self) -> None:
        found = automorphisms.enumerate_automorphisms(cyclic(5))

        assert not automorphisms.is_closed_under_composition(found[:2])
        assert not automorphisms.is_closed_under_composition([])


class TestAnalysis:
    def test_cycle_structure_of_negation(self, negation: Automorphism) -> None:
        structure = automorphisms.cycle_structure(negation)

        assert structure.counts == {1: 2, 2: 4}
        assert structure.cycle_count(2) == 2
        assert structure.max_length == 2
        assert automorphisms.cycle_lengths(negation) == [1, 2, 2, 1, 2, 2]

    def test_per_and_fixed_subgroups(self, negation: Automorphism) -> None:
        assert automorphisms.fixed_subgroup(negation).members == (0, 3)
        assert automorphisms.per_subgroup(negation, 2).is_whole
        with pytest.raises(PreconditionError):
            automorphisms.per_subgroup(negation, 0)

    def test_induced_quotient_automorphism(
        self, cyclic6: FiniteGroup, negation: Automorphism
    ) -> None:
        normal = subgroup_closure(cyclic6, [3])

        induced = automorphisms.induced_quotient_automorphism(negation, normal)

        assert induced.group.order == 3
        assert induced.perm == (0, 2, 1)

    def test_induced_quotient_needs_normal_subgroup(self, s3: FiniteGroup) -> None:
        alpha = automorphisms.identity_automorphism(s3)

        with pytest.raises(NotNormalError):
            automorphisms.induced_quotient_automorphism(alpha, subgroup_closure(s3, [1]))

    def test_induced_quotient_needs_admissible_subgroup(self, klein: FiniteGroup) -> None:
        swap = Automorphism(group=klein, perm=(0, 2, 1, 3))
        subgroup = Subgroup(parent=klein, members=(0, 1))

        assert not automorphisms.is_admissible(swap, subgroup)
        with pytest.raises(NotAdmissibleError):
            automorphisms.induced_quotient_automorphism(swap, subgroup)

    def test_frattini_quotient_of_q8(self, q8: FiniteGroup) -> None:
        frat, factor, projection = automorphisms.frattini_quotient(q8)

        assert frat.members == (0, 4)
        assert factor.order == 4
        assert factor.is_abelian
        assert projection.kernel_members == (0, 4)

    def test_ford(self, q8: FiniteGroup) -> None:
        rotation = automorphisms.automorphism_from_generator_images(q8, [1, 2], [2, 3])
        assert rotation is not None

        assert automorphisms.ford(rotation) == 3
        assert automorphisms.ford(automorphisms.inner_automorphism(q8, 1)) == 1

    def test_affine_map_on_abelian_group(self, negation: Automorphism) -> None:
        report = automorphisms.affine_map(negation, 1)

        assert report.images == (1, 0, 5, 4, 3, 2)
        assert report.bijective
        assert report.tail == 0
        assert report.order == 2
        assert report.order_bound == 4
        assert report.bound_holds

    def test_affine_translation(self, cyclic6: FiniteGroup) -> None:
        report = automorphisms.affine_map(automorphisms.identity_automorphism(cyclic6), 1)

        assert report.order == 6
        assert report.order_bound == 6

    def test_affine_map_on_nonabelian_group_has_no_bound(self, s3: FiniteGroup) -> None:
        report = automorphisms.affine_map(automorphisms.inner_automorphism(s3, 3), 1)

        assert report.bijective
        assert report.order_bound is None
        assert report.bound_holds is None
