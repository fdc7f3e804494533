"""Exception types raised across the package."""


class CsftError(Exception):
    """Base class for all package errors."""


class CompositionError(CsftError):
    """Morphisms are not composable (object or family mismatch)."""


class DomainError(CsftError):
    """An argument lies outside the domain of an operation."""


class EnumerationError(CsftError):
    """A requested enumeration would be infinite."""


class ContractLoopError(CsftError):
    """Attempt to contract an edge whose endpoints coincide."""


class NotAnEdgeError(CsftError):
    """The half-edge given is external, so there is no edge to contract."""


class GluingError(CsftError):
    """Legs cannot be glued (wrong sides or family mismatch)."""


class SingularError(CsftError):
    """A matrix that had to be inverted is singular."""


class ClosedMorphismError(CsftError):
    """Graphs without external legs are not morphisms we evaluate."""


class ContextError(CsftError):
    """Graph and evaluation context disagree (usually the family)."""


class ValidationError(CsftError):
    """Malformed input data; ``index`` points at the offending entry."""

    def __init__(self, message, index=None):
        super().__init__(message if index is None else f"{message} (index {index})")
        self.index = index
