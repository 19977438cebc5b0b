from dataclasses import replace

from pydantic import ConfigDict, NonNegativeInt, PositiveInt
from pydantic.dataclasses import dataclass

DEFAULT_SEED = 20240229


@dataclass(frozen=True, config=ConfigDict(extra="forbid"))
class AnalysisConfig:
    """Size bounds and defaults shared by every algorithm."""

    max_group_order: PositiveInt = 5040
    associativity_exhaustive_bound: PositiveInt = 512
    max_aut_order: PositiveInt = 720
    max_generators: PositiveInt = 4
    max_search_space: PositiveInt = 10_000_000
    elementary_abelian_rank_limit: PositiveInt = 5
    enumeration_bound: PositiveInt = 2**16
    iteration_degree_bound: NonNegativeInt = 12
    max_trial_divisors: PositiveInt = 2**20
    frattini_order_bound: PositiveInt = 256
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.max_aut_order > self.max_group_order:
            raise ValueError("max_aut_order must be <= max_group_order")
        if self.associativity_exhaustive_bound > self.max_group_order:
            raise ValueError("associativity_exhaustive_bound must be <= max_group_order")

    def with_overridden_max_order(self, max_order: int) -> "AnalysisConfig":
        """Create a new config with a different group-order cap."""
        if not isinstance(max_order, int) or isinstance(max_order, bool) or max_order <= 0:
            raise ValueError("Overridden max order must be a positive integer")
        return replace(
            self,
            max_group_order=max_order,
            max_aut_order=min(self.max_aut_order, max_order),
            associativity_exhaustive_bound=min(self.associativity_exhaustive_bound, max_order),
        )

    def with_seed(self, seed: int) -> "AnalysisConfig":
        return replace(self, seed=seed)


DEFAULT_CONFIG = AnalysisConfig()
