import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcclab.domain.models import permutation


def test_is_permutation() -> None:
    assert permutation.is_permutation([2, 0, 1])
    assert permutation.is_permutation([])
    assert not permutation.is_permutation([0, 0, 1])
    assert not permutation.is_permutation([0, 3, 1])


def test_cycle_census_counts_points() -> None:
    """(0 1)(2 3 4) with 5 fixed: two points on 2-cycles, three on a 3-cycle."""
    perm = [1, 0, 3, 4, 2, 5]

    assert permutation.point_cycle_lengths(perm) == [2, 2, 3, 3, 3, 1]
    assert permutation.cycle_census(perm) == {1: 1, 2: 2, 3: 3}
    assert permutation.permutation_order(perm) == 6


def test_compose_and_inverse() -> None:
    perm = [1, 2, 0]

    assert permutation.compose(perm, perm).tolist() == [2, 0, 1]
    assert permutation.compose(perm, permutation.inverse(perm)).tolist() == [0, 1, 2]


def test_power_rejects_negative_exponent() -> None:
    with pytest.raises(ValueError, match="non-negative"):
        permutation.power([1, 0], -1)


@pytest.mark.parametrize(
    ("mapping", "expected"),
    [
        ([1, 2, 0], (0, 3)),
        ([0, 0, 1, 2], (3, 1)),
        ([1, 0, 1, 2], (2, 2)),
        ([0], (0, 1)),
        ([], (0, 1)),
    ],
)
def test_tail_and_period(mapping: list[int], expected: tuple[int, int]) -> None:
    assert permutation.tail_and_period(mapping) == expected


self_maps = st.integers(min_value=1, max_value=8).flatmap(
    lambda n: st.lists(st.integers(min_value=0, max_value=n - 1), min_size=n, max_size=n)
)


@settings(derandomize=True, max_examples=100, deadline=None)
@given(self_maps)
def test_tail_and_period_is_least(mapping: list[int]) -> None:
    tail, period = permutation.tail_and_period(mapping)

    assert (
        permutation.power(mapping, tail + period).tolist()
        == permutation.power(mapping, tail).tolist()
    )
    if tail:
        assert (
            permutation.power(mapping, tail - 1 + period).tolist()
            != permutation.power(mapping, tail - 1).tolist()
        )


@settings(derandomize=True, max_examples=100, deadline=None)
@given(st.permutations(list(range(9))))
def test_order_of_a_permutation(perm: list[int]) -> None:
    order = permutation.permutation_order(perm)

    assert permutation.power(perm, order).tolist() == list(range(9))
    assert sum(permutation.cycle_census(perm).values()) == 9
