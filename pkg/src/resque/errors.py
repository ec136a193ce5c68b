"""Exception types raised across the package."""


class ResqueError(Exception):
    """Base class for all package errors."""


class ElementInSetError(ResqueError, ValueError):
    pass


class EmptyCandidatesError(ResqueError, ValueError):
    pass


class OverlapError(ResqueError, ValueError):
    pass


class EmptyLedgerError(ResqueError, ValueError):
    pass


class KappaRangeError(ResqueError, ValueError):
    pass


class NoRemovableStageError(ResqueError, RuntimeError):
    pass


class StageRangeError(ResqueError, IndexError):
    pass


class InvalidProbabilityError(ResqueError, ValueError):
    pass


class InvalidOptError(ResqueError, ValueError):
    pass


class InstanceTooLargeError(ResqueError, ValueError):
    pass


class InstanceMismatchError(ResqueError, ValueError):
    pass


class MalformedTraceError(ResqueError, ValueError):
    pass


class UnknownSiteError(ResqueError, KeyError):
    pass


class InvalidConfigError(ResqueError, ValueError):
    pass


class ParseError(ResqueError, ValueError):
    """Input file could not be parsed; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingHeaderError(ParseError):
    pass


class NonFiniteCoordinateError(ParseError):
    pass
