"""Exception types shared across the package."""


class LexauditError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LexauditError):
    """Input bytes could not be parsed (malformed line, missing field)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(LexauditError):
    """Well-formed input violates a documented constraint."""


class ConfigError(ValidationError):
    """Invalid configuration (incompatible profile, missing file, bad flag)."""
