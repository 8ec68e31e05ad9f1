"""Exception hierarchy shared by every module."""


class KiColorError(Exception):
    """Base class for all errors raised by kicolor."""


class DomainError(KiColorError, ValueError):
    """An argument violates the documented precondition of an operation."""


class ParseError(DomainError):
    """Malformed textual input. ``line`` is 1-based, or ``None`` when unknown."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedPaletteError(DomainError):
    """Palette wider than a single 64-bit word."""


class ResourceExceeded(KiColorError):
    """A configured work budget (node-expansion cap, size limit) was exceeded."""
