"""Exception types shared across the package.

The CLI maps these onto process exit codes; see cli.py.
"""

from __future__ import annotations


class TwoslitError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(TwoslitError, ValueError):
    """An operation received a value outside its documented domain."""


class InvalidStateError(TwoslitError, RuntimeError):
    """An operation was called in a configuration that forbids it."""


class ConfigError(TwoslitError, ValueError):
    """Configuration file problem. Carries the offending key path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class PhysicsValidationError(TwoslitError, ValueError):
    """A configuration failed physical validation (see ValidationReport)."""

    def __init__(self, report):
        self.report = report
        msgs = "; ".join(i.message for i in report.issues if i.severity == "error")
        super().__init__(msgs or "validation failed")


class NoFringesError(TwoslitError, ValueError):
    """A profile has no dominant oscillation to measure."""


class NumericalError(TwoslitError, ArithmeticError):
    """A computation produced non-finite values."""
