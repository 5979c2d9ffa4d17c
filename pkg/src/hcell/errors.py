"""Exception types raised across the package."""

from __future__ import annotations


class HcellError(Exception):
    """Base class for every error raised by this package."""


class NonAdmissibleIdeal(HcellError, ValueError):
    pass


class InconsistentBound(HcellError, ValueError):
    pass


class NotSelfInjective(HcellError):
    pass


class CharTooSmall(HcellError, ArithmeticError):
    pass


class NonSplitField(HcellError, ArithmeticError):
    pass


class NotHopfIdeal(HcellError, ValueError):
    pass


class WeightNotClosed(HcellError, ValueError):
    pass


class PresentationFailure(HcellError):
    pass


class GroupTooLarge(HcellError, ValueError):
    pass


class SizeBound(HcellError, ValueError):
    pass


class NotAbelian(HcellError, ValueError):
    pass


class SchemaError(HcellError, ValueError):
    """Malformed input file; ``path`` locates the offending key."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class SemanticError(HcellError, ValueError):
    """Well-formed input whose content is mathematically inconsistent."""
