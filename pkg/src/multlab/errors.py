"""Exception types shared across the package."""

from __future__ import annotations


class MultlabError(Exception):
    """Base class for package-specific failures."""


class DomainError(MultlabError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """Evaluation requested at a pole (non-positive integer of Gamma)."""


class InfeasibleError(DomainError):
    """Constraint data admits no interpolating object (|u|^2 + |v| > 1)."""


class DimensionMismatchError(MultlabError, ValueError):
    """Grid shapes of two operands disagree."""


class GridTooLargeError(MultlabError, ValueError):
    """Dense assembly requested beyond the supported grid size."""


class CancellationError(DomainError):
    """A mean-zero expansion was required but the constant term is nonzero."""


class ZeroFunctionError(DomainError):
    """The operation is undefined for the identically-zero input."""


class NonpositiveSampleError(DomainError):
    """Strictly positive samples were required."""


class DivergentWeightError(DomainError):
    """A tabulated density fails its exponential integrability check."""


class BranchSelectionError(DomainError):
    """Parameters sit on a boundary where no table branch applies."""


class InsufficientDataError(MultlabError, ValueError):
    """Too few usable samples for a fit."""


class DegenerateCurveError(MultlabError, ValueError):
    """Every admissible bound fits the data; the fit is meaningless."""


class AliasingError(MultlabError, RuntimeError):
    """Requested bandwidth exceeds what the evaluation grid resolves."""


class QuadratureError(MultlabError, RuntimeError):
    """Adaptive quadrature stopped before reaching the requested tolerance.

    The ``achieved`` attribute carries the error estimate that was reached.
    """

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error bound {achieved:.3e})")
        self.achieved = achieved
