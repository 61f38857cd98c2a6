"""Shared exception types.

Exit-code mapping in the CLI: InvalidInputError-family errors map to exit
code 4; refuted / inconclusive outcomes are ordinary return values, not
exceptions.
"""


class TorusForgeError(Exception):
    """Base class for all library errors."""


class InvalidInputError(TorusForgeError):
    """Input violates a documented precondition."""


class EndpointRootError(InvalidInputError):
    """A Sturm-count endpoint is a root of the polynomial; perturb and retry."""


class BadPrimeError(InvalidInputError):
    """The prime divides a leading coefficient or a denominator."""


class UnsupportedParameterError(InvalidInputError):
    """Parameter outside the supported family (e.g. reducible trinomial degree)."""


class InvalidQuadrupleError(InvalidInputError):
    """An admissibility predicate failed."""

    def __init__(self, predicate: str, message: str = ""):
        self.predicate = predicate
        super().__init__(message or f"quadruple invariant violated: {predicate}")


class RankDeficientError(InvalidInputError):
    """Lattice basis vectors are linearly dependent."""


class PrecisionError(TorusForgeError):
    """Entries do not carry enough certified precision for the requested scale."""


class PrecisionExhaustedError(TorusForgeError):
    """The precision ladder reached its cap without separating the data."""


class DependencyError(TorusForgeError):
    """A required certificate or report is missing or not verified."""


class InternalCheckError(TorusForgeError):
    """Two routes that must agree exactly disagreed (transcription bug)."""


class NoExtensionError(TorusForgeError):
    """The family could not be extended within the search budget."""

    def __init__(self, blocking: str):
        self.blocking = blocking
        super().__init__(f"no extension found: {blocking}")


class StoreError(TorusForgeError):
    """Certificate store corruption or failed re-verification on load."""
