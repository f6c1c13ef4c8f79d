"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class DtrigError(Exception):
    """Base class for all errors raised by :mod:`dtrig`."""


class ShapeError(DtrigError, ValueError):
    """Operands have incompatible or invalid dimensions."""


class DomainError(DtrigError, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularMatrixError(DtrigError, ArithmeticError):
    """A matrix failed the LU pivot test."""


class UndefinedAtIndex(SingularMatrixError):
    """A tangent-type function does not exist at index ``k``."""

    def __init__(self, name: str, k: int):
        super().__init__(f"{name} is undefined at k={k} (matrix fails the pivot test)")
        self.name = name
        self.k = k


class ConvergenceError(DtrigError, RuntimeError):
    """An iterative kernel ran out of its iteration budget."""


class ValidationError(DtrigError, ValueError):
    """Coefficients do not satisfy the defining conditions of their kind.

    The failing :class:`~dtrig.report.ResidualReport` is kept on ``report``.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class InternalInconsistencyError(DtrigError, RuntimeError):
    """A property guaranteed by theory was violated numerically."""
