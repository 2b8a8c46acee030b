from __future__ import annotations


class LegdgaError(Exception):
    """Base class for every error raised by legdga."""


class RingMismatchError(LegdgaError, TypeError):
    pass


class UnknownGeneratorError(LegdgaError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else "unknown generator"


class GradingError(LegdgaError, ValueError):
    pass


class DiagramError(LegdgaError, ValueError):
    """Invalid diagram data, optionally located in an input file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class SchemaError(LegdgaError, ValueError):
    pass


class AxiomError(LegdgaError, ValueError):
    """A DGA, augmentation or morphism fails one of its defining identities."""

    def __init__(self, message: str, residuals: dict | None = None):
        super().__init__(message)
        self.residuals = residuals or {}


class NotAFieldError(LegdgaError, ValueError):
    pass


class OrderBoundError(LegdgaError, ValueError):
    pass
