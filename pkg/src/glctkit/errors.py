"""Exception types shared across the toolkit."""


class GlctkitError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(GlctkitError):
    """Invalid argument, malformed value, or violated precondition."""


class ParseError(ValidationError):
    """Malformed file content; message carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericalError(GlctkitError):
    """A numerical routine could not produce a reliable result."""
