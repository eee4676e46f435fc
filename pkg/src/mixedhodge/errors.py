"""Exceptions raised by the mixed Hodge structure toolkit."""

from collections.abc import Sequence


class MixedHodgeError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(MixedHodgeError):
    def __init__(self, operation: str, left: int, right: int) -> None:
        self.operation = operation
        self.left = left
        self.right = right
        super().__init__(f"{operation}: ambient dimensions differ ({left} != {right})")


class BackendMismatchError(MixedHodgeError):
    def __init__(self, operation: str, left: str, right: str) -> None:
        self.operation = operation
        self.left = left
        self.right = right
        super().__init__(f"{operation}: backends differ ({left} != {right})")


class NonIntegralMatrixError(MixedHodgeError):
    """Raised when an integer matrix is required and a non-integer entry is found."""


class InvalidStructureError(MixedHodgeError):
    def __init__(self, subject: str, failures: Sequence[str]) -> None:
        self.subject = subject
        self.failures = tuple(failures)
        super().__init__(f"invalid {subject}: {'; '.join(self.failures)}")


class NotSurjectiveError(MixedHodgeError):
    """Raised when g admits no integral right inverse."""


class NotRSplitError(MixedHodgeError):
    def __init__(self, subject: str, witness: tuple[int, int]) -> None:
        self.subject = subject
        self.witness = witness
        p, q = witness
        super().__init__(
            f"{subject} is not R-split: conj(I^{{{p},{q}}}) != I^{{{q},{p}}}",
        )


class WeightMismatchError(MixedHodgeError):
    """Raised when structures do not sit on the required weight levels."""


class InternalConsistencyError(MixedHodgeError):
    """Raised when a construction guaranteed for valid input fails."""


class AssumptionError(MixedHodgeError):
    """Raised when a checked consequence of a structural lemma does not hold."""


class PairingError(MixedHodgeError):
    """Raised for pairings that are not unimodular or have incompatible shapes."""


class InfeasibleHodgeNumbersError(MixedHodgeError):
    """Raised when Hodge numbers cannot describe a pure structure."""


class PoleProximityError(MixedHodgeError):
    def __init__(self, point: complex, radius: float) -> None:
        self.point = point
        self.radius = radius
        super().__init__(f"point {point!r} lies within {radius:g} of a lattice pole")


class CycleSearchError(MixedHodgeError):
    def __init__(self, attempts: int, clearance: float) -> None:
        self.attempts = attempts
        self.clearance = clearance
        super().__init__(
            f"no pole-free cycle found after {attempts} attempts "
            f"(clearance {clearance:g})",
        )


class DocumentError(MixedHodgeError):
    """Raised when an input document matches none of the known document kinds."""
