"""Shared exception types.

Every failure mode that a caller can reasonably branch on gets its own
class; anything else is a plain ValueError.
"""


class Sl2TateError(Exception):
    """Base class for all package-specific errors."""


class ReduciblePolynomial(Sl2TateError):
    pass


class BasisNotClosed(Sl2TateError):
    pass


class IntegralBasisRequired(Sl2TateError):
    """Degree >= 3 field outside the built-in families needs an explicit basis."""


class IndexDivisor(Sl2TateError):
    """Prime divides the index of every available monogenic generator; the
    caller must supply a basis-adapted generator."""


class NotInvertible(Sl2TateError):
    pass


class SearchExhausted(Sl2TateError):
    """A bounded enumeration (relation search, principal generator search,
    module basis search) hit its cap without succeeding."""


class RelationSearchIncomplete(SearchExhausted):
    """Class-group relation lattice never reached full rank within the cap."""


class NeedsBackendData(Sl2TateError):
    """Invariants outside the built-in range and no ingested fixture matches."""


class SchemaViolation(Sl2TateError):
    pass


class ConsistencyFailure(Sl2TateError):
    """An ingested fixture contradicts an exactly checkable invariant."""


class RegularityViolated(Sl2TateError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedCase(Sl2TateError):
    pass


class EmbeddingInvalid(Sl2TateError):
    """Claimed field embedding does not satisfy the minimal polynomial."""
