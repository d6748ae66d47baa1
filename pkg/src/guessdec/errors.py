"""Exception hierarchy shared by every guessdec module."""


class GuessDecError(Exception):
    """Base class for all errors raised by guessdec."""


class InputError(GuessDecError, ValueError):
    """Bad argument: wrong length, out-of-range value, unknown option."""


class DegenerateCodeError(GuessDecError):
    """Parity-check matrix does not have full row rank."""


class CodeFormatError(GuessDecError):
    """A code file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CapacityError(GuessDecError):
    """Requested computation exceeds a hard size guard."""


class PatternBudgetError(GuessDecError):
    """Pattern-generator frontier grew past its configured cap."""


class ResolutionError(GuessDecError):
    """Too few samples to resolve the requested tail probability."""

    def __init__(self, message, min_samples):
        super().__init__(message)
        self.min_samples = min_samples
