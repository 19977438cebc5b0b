import ast
from fractions import Fraction
from pathlib import Path

import pytest

import rcclab.domain.models
from rcclab.domain.models.automorphism import CycleStructure
from rcclab.domain.models.config import DEFAULT_SEED, AnalysisConfig
from rcclab.domain.models.gf import FrobeniusDecomposition, GFMatrix, GFPoly
from rcclab.domain.models.group import FiniteGroup, GroupHom
from rcclab.domain.models.rcc import RegularGeneratingSet
from rcclab.domain.models.report import AutomorphismRecord, GroupSummary, Report
from rcclab.domain.services.catalog import cyclic
from rcclab.domain.services.group_kernel import fingerprint


class TestAnalysisConfig:
    def test_defaults(self) -> None:
        config = AnalysisConfig()

        assert config.max_group_order == 5040
        assert config.max_aut_order == 720
        assert config.seed == DEFAULT_SEED

    @pytest.mark.parametrize(
        "overrides",
        [
            {"max_group_order": 0},
            {"max_group_order": 100},
            {"max_group_order": 600, "max_aut_order": 600, "associativity_exhaustive_bound": 601},
            {"iteration_degree_bound": -1},
        ],
    )
    def test_invalid_bounds(self, overrides: dict[str, int]) -> None:
        with pytest.raises(ValueError):
            AnalysisConfig(**overrides)

    def test_unknown_fields_are_rejected(self) -> None:
        with pytest.raises((TypeError, ValueError)):
            AnalysisConfig(**{"max_groups": 3})  # type: ignore[arg-type]

    def test_with_overridden_max_order_clamps_dependent_bounds(self) -> None:
        config = AnalysisConfig().with_overridden_max_order(100)

        assert config.max_group_order == 100
        assert config.max_aut_order == 100
        assert config.associativity_exhaustive_bound == 100

    @pytest.mark.parametrize("value", [0, -5, True])
    def test_with_overridden_max_order_needs_positive_int(self, value: int) -> None:
        with pytest.raises(ValueError, match="positive integer"):
            AnalysisConfig().with_overridden_max_order(value)

    def test_with_seed(self) -> None:
        assert AnalysisConfig().with_seed(7).seed == 7


class TestGF:
    def test_poly_must_be_over_a_prime_field(self) -> None:
        with pytest.raises(ValueError, match="prime"):
            GFPoly(p=4, coeffs=(1,))

    def test_poly_must_be_trimmed(self) -> None:
        with pytest.raises(ValueError, match="trimmed"):
            GFPoly(p=2, coeffs=(1, 0))

    def test_from_coeffs_reduces_and_trims(self) -> None:
        assert GFPoly.from_coeffs(5, [6, 5, 10]).coeffs == (1,)
        assert GFPoly.from_coeffs(5, [0, 0]).is_zero

    def test_galoistools_order_is_reversed(self) -> None:
        f = GFPoly.from_gf(3, [1, 0, 2])

        assert f.coeffs == (2, 0, 1)
        assert f.to_gf() == [1, 0, 2]

    @pytest.mark.parametrize(
        ("coeffs", "text"),
        [((2, 0, 1), "X^2 + 2"), ((1, 1), "X + 1"), ((0, 2, 1), "X^2 + 2*X"), ((), "0")],
    )
    def test_poly_display(self, coeffs: tuple[int, ...], text: str) -> None:
        assert str(GFPoly(p=3, coeffs=coeffs)) == text

    def test_matrix_shape_is_checked(self) -> None:
        with pytest.raises(ValueError, match="2x2"):
            GFMatrix(p=3, n=2, entries=((1, 0), (0,)))

    def test_matrix_from_rows_reduces(self) -> None:
        matrix = GFMatrix.from_rows(3, [[4, -1], [0, 3]])

        assert matrix.entries == ((1, 2), (0, 0))
        assert matrix.column(1) == (2, 0)

    def test_frobenius_degrees_must_fill_dimension(self) -> None:
        with pytest.raises(ValueError, match="dimension"):
            FrobeniusDecomposition(
                basis_change=GFMatrix.identity(2, 2),
                invariant_factors=(GFPoly.from_coeffs(2, [1, 1]),),
            )


class TestCycleStructure:
    def test_counts_must_fill_cycles(self) -> None:
        with pytest.raises(ValueError, match="cannot fill"):
            CycleStructure(counts={1: 1, 2: 3})

    def test_identity_is_always_fixed(self) -> None:
        with pytest.raises(ValueError, match="identity"):
            CycleStructure(counts={2: 2})

    def test_derived_values(self) -> None:
        structure = CycleStructure.of_permutation((0, 2, 1, 4, 5, 3))

        assert structure.counts == {1: 1, 2: 2, 3: 3}
        assert structure.order == 6
        assert structure.total == 6
        assert structure.cycle_count(3) == 1
        assert structure.zeta(5) == 0


class TestGroupHom:
    def test_projection_onto_z2(self, cyclic6: FiniteGroup) -> None:
        hom = GroupHom(source=cyclic6, target=cyclic(2), images=(0, 1, 0, 1, 0, 1))

        assert hom.kernel_members == (0, 2, 4)
        assert hom.is_surjective
        assert not hom.is_injective

    def test_non_multiplicative_map(self, cyclic6: FiniteGroup) -> None:
        with pytest.raises(ValueError, match="multiplicative"):
            GroupHom(source=cyclic6, target=cyclic(2), images=(0, 1, 1, 1, 0, 1))


def _record(index: int, rcc: bool, zeta: dict[int, int]) -> AutomorphismRecord:
    return AutomorphismRecord(
        index=index,
        order=max(zeta),
        zeta=zeta,
        lambda_value=Fraction(max(zeta), sum(zeta.values())),
        rcc=rcc,
        witness=1 if rcc else None,
    )


class TestReport:
    def _summary(self, group: FiniteGroup, rcc_group: bool, count: int) -> GroupSummary:
        return GroupSummary(
            order=group.order,
            fingerprint=fingerprint(group),
            automorphism_count=count,
            exhaustive=True,
            rcc_group=rcc_group,
        )

    def test_record_serializes_lambda_by_alias(self) -> None:
        data = _record(0, True, {1: 2, 2: 4}).model_dump(mode="json", by_alias=True)

        assert data["lambda"] == "1/3"
        assert data["zeta"] == {"1": 2, "2": 4}

    def test_consistent_report(self, cyclic6: FiniteGroup) -> None:
        records = [_record(0, True, {1: 6}), _record(1, True, {1: 2, 2: 4})]

        report = Report(input="z6.json", summary=self._summary(cyclic6, True, 2), records=records)

        assert report.summary.rcc_group

    def test_verdict_must_match_records(self, cyclic6: FiniteGroup) -> None:
        with pytest.raises(ValueError, match="conjunction"):
            Report(
                input="z6.json",
                summary=self._summary(cyclic6, False, 1),
                records=[_record(0, True, {1: 6})],
            )

    def test_packaged_record_counts_toward_verdict(self, cyclic6: FiniteGroup) -> None:
        packaged = _record(0, False, {1: 2, 2: 4})

        report = Report(
            input="z6.json",
            summary=self._summary(cyclic6, False, 1),
            records=[_record(0, True, {1: 6})],
            packaged=packaged,
        )

        assert report.packaged == packaged

    def test_records_must_cover_the_group(self, cyclic6: FiniteGroup) -> None:
        with pytest.raises(ValueError, match="covers 4 points"):
            Report(
                input="z6.json",
                summary=self._summary(cyclic6, True, 1),
                records=[_record(0, True, {1: 4})],
            )

    def test_count_must_match(self, cyclic6: FiniteGroup) -> None:
        with pytest.raises(ValueError, match="count"):
            Report(
                input="z6.json",
                summary=self._summary(cyclic6, True, 3),
                records=[_record(0, True, {1: 6})],
            )


class TestRegularGeneratingSet:
    def test_trivial_group_has_no_prime(self) -> None:
        result = RegularGeneratingSet(
            p=None, m=0, r=0, ford=1, elements=(), exponents=(), cycle_lengths=()
        )

        assert result.exponent_bound == 0

    def test_missing_prime_needs_trivial_group(self) -> None:
        with pytest.raises(ValueError, match="trivial group"):
            RegularGeneratingSet(
                p=None, m=1, r=1, ford=1, elements=(1,), exponents=(0,), cycle_lengths=(1,)
            )

    def test_lengths_must_match_exponents(self) -> None:
        with pytest.raises(ValueError, match="not 2"):
            RegularGeneratingSet(
                p=2, m=2, r=1, ford=3, elements=(1,), exponents=(1,), cycle_lengths=(3,)
            )


def test_models_do_not_import_services() -> None:
    package = Path(rcclab.domain.models.__file__).parent
    imported = {
        node.module
        for path in package.glob("*.py")
        for node in ast.walk(ast.parse(path.read_text(encoding="utf-8")))
        if isinstance(node, ast.ImportFrom) and node.module
    }

    assert not {name for name in imported if name.startswith("rcclab.domain.services")}
