from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from delinf.reports import CheckReport  # pragma: no cover


class DelinfError(Exception):
    """
    Base class for every error raised by delinf.

    Attributes:
        code: A stable, machine-readable identifier echoed by the command line.
    """

    code = "error"

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": str(self)}


class DocumentError(DelinfError):
    """Raised when an algebra or diagram document cannot be parsed."""

    code = "parse_error"


class DegreeError(DelinfError, ValueError):
    """Raised when an element or argument list has the wrong degree or arity."""

    code = "degree_mismatch"


class SpaceMismatchError(DelinfError, ValueError):
    """Raised when objects defined over different spaces are combined."""

    code = "space_mismatch"


class StructureError(DelinfError):
    """
    Raised when a structural identity fails.

    Attributes:
        report: The check report holding the first failure, when available.
    """

    code = "structure_failure"

    def __init__(self, message: str, report: CheckReport | None = None):
        super().__init__(message)
        self.report = report

    def to_dict(self) -> dict[str, Any]:
        data = super().to_dict()
        if self.report is not None:
            data["report"] = self.report.to_dict()
        return data


class NotMaurerCartanError(DelinfError):
    """Raised when an element required to be Maurer-Cartan is not."""

    code = "not_maurer_cartan"


class NotInImageError(DelinfError):
    """Raised when an exact linear solve has no solution."""

    code = "not_in_image"


class ConvergenceError(DelinfError):
    """Raised when a fixed-point iteration does not stabilize within its bound."""

    code = "no_convergence"


class HornFillingError(DelinfError):
    """Raised for inconsistent horn data or an unfillable lifting problem."""

    code = "unfillable_horn"


class BudgetExceededError(DelinfError):
    """Raised when a cochain computation exceeds the configured budget."""

    code = "budget_exceeded"


class CutoffError(DelinfError):
    """Raised when a totalization is requested beyond the levels a diagram carries."""

    code = "cutoff_violation"


__all__ = [
    "BudgetExceededError",
    "ConvergenceError",
    "CutoffError",
    "DegreeError",
    "DelinfError",
    "DocumentError",
    "HornFillingError",
    "NotInImageError",
    "NotMaurerCartanError",
    "SpaceMismatchError",
    "StructureError",
]
