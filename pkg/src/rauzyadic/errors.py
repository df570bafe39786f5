"""Shared exception types.

Every refusal in the library is a typed exception; operations never
silently truncate or guess.
"""


class RauzyadicError(Exception):
    """Base class for all library errors."""


class HorizonExceeded(RauzyadicError):
    """A factor-set query went past the oracle's certified horizon."""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


class IdentityViolation(RauzyadicError):
    """A complexity identity failed, signalling an inconsistent oracle."""


class AlphabetMismatch(RauzyadicError):
    """Word or morphism used over the wrong alphabet."""


class NotRightProper(RauzyadicError):
    """Left conjugate requested for a morphism that is not right proper."""


class NotInCatalog(RauzyadicError):
    """Morphism matches no schema of the decomposition catalog."""


class NonGrowing(RauzyadicError):
    """Directive word fails to grow letter images."""


class NoStabilization(RauzyadicError):
    """Factor sets failed to stabilize within the configured window."""


class EnumerationBudgetExceeded(RauzyadicError):
    """Circuit enumeration hit its expansion budget."""


class OutOfClass(RauzyadicError):
    """Graph violates the special-vertex case analysis for slope <= 2."""


class ChainBlocked(RauzyadicError):
    """No right-special extension exists (periodicity or horizon)."""


class RuleViolation(RauzyadicError):
    """Circuits contradict the assignment rule for their graph type."""


class NoSchemaMatch(RauzyadicError):
    """Extracted morphism matches no evolution schema for its shapes."""


class AmbiguousMatch(RauzyadicError):
    """Two schema rows on one edge matched the same morphism."""


class OrderingViolation(RauzyadicError):
    """Double-bispecial split violates the strong-last ordering."""


class UnsupportedCase(RauzyadicError):
    """Step sequence matches no length-computation case."""


class NotContractible(RauzyadicError):
    """No right-proper contraction found within the window."""


class Mismatch(RauzyadicError):
    """Cross-validation divergence between generation and extraction."""
