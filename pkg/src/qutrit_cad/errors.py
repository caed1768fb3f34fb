"""Exception types raised across the package."""

from __future__ import annotations


class QutritCADError(Exception):
    """Base class for all package errors."""


class NotHermitian(QutritCADError, ValueError):
    pass


class NoConvergence(QutritCADError, ArithmeticError):
    pass


class DimensionMismatch(QutritCADError, ValueError):
    pass


class NotNormalized(QutritCADError, ValueError):
    pass


class OutOfRange(QutritCADError, ValueError):
    pass


class ZeroProbability(QutritCADError, ArithmeticError):
    """Post-selected state has (numerically) zero weight; no conditional state exists."""


class ParseError(QutritCADError, ValueError):
    """Malformed configuration. ``path`` is the dotted location of the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path or '<root>'}: {message}")


class ValidationError(QutritCADError, ValueError):
    """Semantically invalid configuration; ``violations`` lists every problem found."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class IncompleteGrid(QutritCADError, ValueError):
    pass
