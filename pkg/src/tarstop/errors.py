"""Exception hierarchy shared across the package."""


class TarstopError(Exception):
    """Base class for all package errors."""


class ParseError(TarstopError):
    """A run or qrels file line could not be parsed."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class ValidationError(TarstopError):
    """Parsed data violates a structural invariant (duplicates, missing topics)."""


class ComputationError(TarstopError):
    """A numeric computation left its valid domain (overflow, divergence)."""


class InsufficientDataError(TarstopError):
    """Not enough examined documents to bin or fit."""


class NoSignalError(TarstopError):
    """All binned counts are zero; no rate can be estimated."""


class FitError(ComputationError):
    """The least-squares fit failed to converge."""
