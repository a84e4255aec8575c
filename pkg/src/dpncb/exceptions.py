"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside an operation's mathematical domain."""


class ConfigError(ValueError):
    """A name, preset, or configuration document is invalid."""


class StateError(RuntimeError):
    """A policy or runner was driven outside its legal state machine."""


class ShapeError(ValueError):
    """Aggregation inputs disagree in shape (e.g. mismatched horizons)."""


class AuditError(RuntimeError):
    """An empirical privacy audit could not produce an estimate."""
