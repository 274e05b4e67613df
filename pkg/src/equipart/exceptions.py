"""Exception hierarchy shared across the package."""


class EquipartError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(EquipartError):
    """Operands live in different rings or have mismatched lengths."""


class RangeError(EquipartError):
    """An exponent tuple or index lies outside the ring's bounds."""


class FamilyDomainError(EquipartError):
    """Family generator parameters violate the family's preconditions."""


class DimensionMismatchError(EquipartError):
    """Strict certification requires exactly k*d linear forms."""


class InfeasibleByCountingError(DimensionMismatchError):
    """More scalar conditions than k*d degrees of freedom: the instance
    cannot hold at this dimension, so no certificate is attempted."""


class ContradictionError(EquipartError):
    """A claimed dimension lies below the counting lower bound."""


class InternalConsistencyError(EquipartError):
    """A construction-time self-check failed (e.g. a family instance
    that is not tight)."""


class ConfigurationError(EquipartError):
    """Invalid user-supplied configuration (mass specs, labels, solver
    settings)."""


class SearchSpaceError(EquipartError):
    """Atlas refusal: the candidate count estimate exceeds the limit."""

    def __init__(self, estimate: int, limit: int):
        super().__init__(
            f"search space too large: ~{estimate} candidates exceeds limit {limit}"
        )
        self.estimate = estimate
        self.limit = limit
