"""Smith normal form over the integers and the lattice helpers built on it."""

from dataclasses import dataclass

import numpy as np

from .errors import NonIntegralMatrixError, NotSurjectiveError
from .linalg import Matrix, freeze, to_integer


def _integer_identity(size: int) -> Matrix:
    matrix = np.zeros((size, size), dtype=object)
    for index in range(size):
        matrix[index, index] = 1
    return matrix


@dataclass(frozen=True, slots=True)
class SmithForm:
    """U @ M @ V = D with U, V unimodular and d_1 | d_2 | ... on the diagonal."""

    left: Matrix
    diagonal: Matrix
    right: Matrix
    left_inverse: Matrix
    right_inverse: Matrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        size = min(self.diagonal.shape)
        return tuple(
            int(self.diagonal[index, index])
            for index in range(size)
            if self.diagonal[index, index] != 0
        )

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


class _Reduction:
    """Row and column operations on D, mirrored into U, V and their inverses."""

    def __init__(self, matrix: Matrix) -> None:
        rows, columns = matrix.shape
        self.work = matrix.copy()
        self.left = _integer_identity(rows)
        self.left_inverse = _integer_identity(rows)
        self.right = _integer_identity(columns)
        self.right_inverse = _integer_identity(columns)

    def add_row(self, target: int, source: int, factor: int) -> None:
        self.work[target] += factor * self.work[source]
        self.left[target] += factor * self.left[source]
        self.left_inverse[:, source] -= factor * self.left_inverse[:, target]

    def add_column(self, target: int, source: int, factor: int) -> None:
        self.work[:, target] += factor * self.work[:, source]
        self.right[:, target] += factor * self.right[:, source]
        self.right_inverse[source] -= factor * self.right_inverse[target]

    def swap_rows(self, first: int, second: int) -> None:
        if first == second:
            return
        self.work[[first, second]] = self.work[[second, first]]
        self.left[[first, second]] = self.left[[second, first]]
        self.left_inverse[:, [first, second]] = self.left_inverse[:, [second, first]]

    def swap_columns(self, first: int, second: int) -> None:
        if first == second:
            return
        self.work[:, [first, second]] = self.work[:, [second, first]]
        self.right[:, [first, second]] = self.right[:, [second, first]]
        self.right_inverse[[first, second]] = self.right_inverse[[second, first]]

    def negate_row(self, index: int) -> None:
        self.work[index] *= -1
        self.left[index] *= -1
        self.left_inverse[:, index] *= -1

    def smallest_entry(self, start: int) -> tuple[int, int] | None:
        best: tuple[int, int, int] | None = None
        rows, columns = self.work.shape
        for row in range(start, rows):
            for column in range(start, columns):
                value = self.work[row, column]
                if value != 0 and (best is None or abs(value) < best[0]):
                    best = (abs(value), row, column)
        return None if best is None else (best[1], best[2])

    def clear_cross(self, pivot: int) -> bool:
        """Reduce row and column `pivot` by the pivot entry; True when both are clear."""
        rows, columns = self.work.shape
        lead = self.work[pivot, pivot]
        clear = True
        for row in range(pivot + 1, rows):
            quotient = self.work[row, pivot] // lead
            if quotient:
                self.add_row(row, pivot, -quotient)
            clear = clear and self.work[row, pivot] == 0
        for column in range(pivot + 1, columns):
            quotient = self.work[pivot, column] // lead
            if quotient:
                self.add_column(column, pivot, -quotient)
            clear = clear and self.work[pivot, column] == 0
        return clear

    def indivisible_row(self, pivot: int) -> int | None:
        rows, columns = self.work.shape
        lead = self.work[pivot, pivot]
        for row in range(pivot + 1, rows):
            for column in range(pivot + 1, columns):
                if self.work[row, column] % lead != 0:
                    return row
        return None


def smith_normal_form(matrix: Matrix) -> SmithForm:
    """Return U, D, V with U @ M @ V = D, D diagonal and each d_i dividing d_{i+1}."""
    reduction = _Reduction(to_integer(matrix))
    for pivot in range(min(reduction.work.shape)):
        while True:
            position = reduction.smallest_entry(pivot)
            if position is None:
                break
            reduction.swap_rows(pivot, position[0])
            reduction.swap_columns(pivot, position[1])
            if not reduction.clear_cross(pivot):
                continue
            row = reduction.indivisible_row(pivot)
            if row is None:
                break
            reduction.add_row(pivot, row, 1)
        if reduction.work[pivot, pivot] < 0:
            reduction.negate_row(pivot)
    return SmithForm(
        left=freeze(reduction.left),
        diagonal=freeze(reduction.work),
        right=freeze(reduction.right),
        left_inverse=freeze(reduction.left_inverse),
        right_inverse=freeze(reduction.right_inverse),
    )


def saturation_basis(vectors: Matrix) -> Matrix:
    """Return an integral basis (as columns) of the saturation of the integer span."""
    form = smith_normal_form(vectors)
    return form.left_inverse[:, : form.rank].copy()


def is_saturated_injection(matrix: Matrix) -> bool:
    """True when the columns are independent and span a saturated sublattice."""
    form = smith_normal_form(matrix)
    return form.rank == matrix.shape[1] and all(
        factor == 1 for factor in form.invariant_factors
    )


def is_surjective(matrix: Matrix) -> bool:
    form = smith_normal_form(matrix)
    return form.rank == matrix.shape[0] and all(
        factor == 1 for factor in form.invariant_factors
    )


def integral_right_inverse(matrix: Matrix) -> Matrix:
    """Return an integer s with matrix @ s = I, for an integral surjection."""
    form = smith_normal_form(matrix)
    rows = matrix.shape[0]
    if form.rank != rows or any(factor != 1 for factor in form.invariant_factors):
        msg = f"integer matrix with invariant factors {form.invariant_factors} is not surjective onto Z^{rows}"
        raise NotSurjectiveError(msg)
    return form.right[:, :rows] @ form.left


def integral_kernel(matrix: Matrix) -> Matrix:
    """Return a lattice basis (as columns) of the integer kernel."""
    form = smith_normal_form(matrix)
    return form.right[:, form.rank :].copy()


def is_unimodular(matrix: Matrix) -> bool:
    rows, columns = matrix.shape
    if rows != columns:
        return False
    form = smith_normal_form(matrix)
    return form.rank == rows and all(factor == 1 for factor in form.invariant_factors)


def unimodular_inverse(matrix: Matrix) -> Matrix:
    """Return the exact integer inverse of a unimodular matrix."""
    if not is_unimodular(matrix):
        msg = "matrix is not unimodular"
        raise NonIntegralMatrixError(msg)
    form = smith_normal_form(matrix)
    return form.right @ form.left


def lattice_gcd(values: Matrix) -> int:
    """Return the non-negative generator of the ideal spanned by the entries."""
    row = to_integer(values).reshape(1, -1)
    if row.shape[1] == 0:
        return 0
    factors = smith_normal_form(row).invariant_factors
    return factors[0] if factors else 0
