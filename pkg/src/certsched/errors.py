"""Shared exception types."""

from __future__ import annotations


class CertschedError(Exception):
    """Base class for all package errors."""


class ScenarioParseError(CertschedError):
    """Input text is not valid JSON."""


class ScenarioValidationError(CertschedError):
    """A scenario document violates an invariant.

    Carries the dotted path of the offending field so callers can surface
    actionable messages (and the HTTP layer can echo it).
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class UnknownOrderError(CertschedError):
    """An order id does not exist in the instance."""


class AlreadyScheduledError(CertschedError):
    """Why-not queried for an order that is in the optimal schedule."""


class NotScheduledError(CertschedError):
    """Why queried for an order that is not in the optimal schedule."""


class PartialAssignmentError(CertschedError):
    """An assignment does not cover every model variable."""


class ResourceLimitExceeded(CertschedError):
    """Solver hit its node or time limit before reaching a verdict."""


class InvalidAtomError(CertschedError):
    """A correction atom cannot be applied to the scenario."""
