"""Exception hierarchy shared by every module."""


class RainfadeError(Exception):
    """Base class for all package errors."""


class DomainError(RainfadeError, ValueError):
    """An argument lies outside the domain of a model operation."""


class SearchExhaustedError(RainfadeError):
    """A bounded search hit its ceiling without meeting the target."""


class ConfigError(RainfadeError):
    """A configuration file could not be read or parsed."""

    def __init__(self, message, *, path=None, line=None, field=None):
        self.message = message
        self.path = path
        self.line = line
        self.field = field
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ValidationError(ConfigError):
    """A configuration value violates a declared invariant."""
