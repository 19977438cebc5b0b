"""Domain error hierarchy."""


class RccLabError(Exception):
    """Base class for every error raised by rcclab."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ModulusMismatchError(RccLabError):
    """Operands live over different prime fields."""


class ZeroPolynomialError(RccLabError):
    """The zero polynomial was passed where a nonzero one is required."""


class NotMonicError(RccLabError):
    """A monic polynomial was required."""


class ZeroConstantTermError(RccLabError):
    """X is not a unit modulo a polynomial with vanishing constant term."""


class DegreeBoundError(RccLabError):
    """A polynomial exceeds the configured factorization bound."""


class SingularMatrixError(RccLabError):
    """An invertible matrix was required."""


class GroupAxiomError(RccLabError):
    """A candidate multiplication table violates a group axiom."""

    def __init__(self, axiom: str, detail: str):
        super().__init__(f"{axiom} violated: {detail}")
        self.axiom = axiom
        self.detail = detail


class NotNormalError(RccLabError):
    """A subgroup is not normal in its parent."""


class NotAdmissibleError(RccLabError):
    """A subgroup is not mapped onto itself by an automorphism."""


class GenerationError(RccLabError):
    """A set of elements does not generate the group it should."""


class BoundExceededError(RccLabError):
    """A configured size bound would be exceeded."""

    def __init__(self, bound: str, limit: int, actual: int):
        super().__init__(f"bound '{bound}' exceeded: {actual} > {limit}")
        self.bound = bound
        self.limit = limit
        self.actual = actual


class PreconditionError(RccLabError):
    """An operation was called outside its domain."""


class UnknownCatalogError(RccLabError):
    """The catalog has no group under the requested name."""


class InvalidInputError(RccLabError):
    """Serialized input could not be decoded."""


class InvariantViolationError(RccLabError):
    """An internal cross-check between two independent computations failed."""
