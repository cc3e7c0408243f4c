"""Exception hierarchy for eatforge.

Bounded searches never raise on exhaustion; they return explicit outcome
values instead. The exceptions here signal malformed input or a broken
resource limit.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from eatforge.chase import SaturationState


class EatforgeError(Exception):
    """Base class for all eatforge errors."""


class TheoryParseError(EatforgeError):
    """Syntax or signature error in a theory DSL source."""

    def __init__(self, message: str, line: int = 0, col: int = 0) -> None:
        """Initialize with a location.

        Args:
            message: Human readable description.
            line: 1-based line number (0 when unknown).
            col: 1-based column number (0 when unknown).

        """
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class SortError(EatforgeError):
    """A term or environment entry has the wrong sort."""


class ResourceLimitError(EatforgeError):
    """Element cap exceeded during saturation."""

    def __init__(self, message: str, partial: SaturationState) -> None:
        """Keep the partial state for dumping."""
        super().__init__(message)
        self.partial = partial


class EnumerationIndexError(EatforgeError, IndexError):
    """Gödel index out of range for a sort."""


class CategoryLawError(EatforgeError):
    """A finite category or functor violates a law at construction."""


class ArityError(EatforgeError):
    """Expression evaluated with the wrong number of arguments."""


class CertificateViolationError(EatforgeError):
    """A total-graph presentation failed its totality certificate."""

    def __init__(self, message: str, node: int, step: int) -> None:
        """Record where the certificate broke."""
        super().__init__(message)
        self.node = node
        self.step = step


class MalformedCodeError(EatforgeError):
    """A natural number is not a valid list code."""


class TheoryValidationError(EatforgeError):
    """A presentation failed validation where a valid one is required."""

    def __init__(self, message: str, diagnostics: list[str]) -> None:
        """Keep the diagnostic messages."""
        super().__init__(message)
        self.diagnostics = diagnostics


class ProvenanceError(EatforgeError):
    """Replaying a provenance log did not reproduce the recorded events."""


class SExprError(EatforgeError, ValueError):
    """Malformed s-expression or witness bundle."""
