from typing import Iterable, List, Optional


class FrtppError(Exception):
    pass


class ValidationError(FrtppError):
    """
    Raised when user supplied data or configuration breaks a documented rule.

    Attributes:
        violations (List[str]): One line per broken rule, in the order they were found.
    """
    def __init__(self, violations: Iterable[str], context: Optional[str] = None):
        self.violations: List[str] = list(violations)
        self.context = context
        head = f"{context}: " if context else ""
        super().__init__(head + "; ".join(self.violations))


class InvalidFormatError(ValidationError):
    pass


class PostureError(ValidationError):
    pass


class ReportError(ValidationError):
    pass


class DegenerateStatisticError(FrtppError):
    pass


class DegenerateDenominatorError(DegenerateStatisticError):
    pass


class NoCompliersInArmError(DegenerateStatisticError):
    pass


class AllDrawsDegenerateError(FrtppError):
    pass


class CombinatorialBoundError(FrtppError):
    pass


class ChecksumMismatchError(FrtppError):
    pass
