"""Matrices and subspaces over the exact and float backends.

A matrix is a two-dimensional numpy array. Object dtype holds exact
Gaussian rationals (or integers, which are promoted on use); complex128
holds float values. Subspaces keep a column reduced-echelon basis so that
exact equality is an entry-wise comparison.
"""

from collections.abc import Iterable, Iterator, Sequence
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Final, Self

import numpy as np
from numpy.typing import NDArray

from .errors import BackendMismatchError, DimensionMismatchError, NonIntegralMatrixError
from .scalars import ONE, ZERO, Backend, GaussianRational

type Matrix = NDArray[Any]

DEFAULT_RANK_TOLERANCE: Final = 1e-9

_rank_tolerance: ContextVar[float] = ContextVar(
    "rank_tolerance",
    default=DEFAULT_RANK_TOLERANCE,
)

_coerce_entries = np.frompyfunc(GaussianRational.coerce, 1, 1)
_real_entries = np.frompyfunc(lambda value: GaussianRational.coerce(value).real, 1, 1)
_imag_entries = np.frompyfunc(lambda value: GaussianRational.coerce(value).imag, 1, 1)


def rank_tolerance() -> float:
    return _rank_tolerance.get()


@contextmanager
def use_rank_tolerance(tolerance: float) -> Iterator[None]:
    """Scope the relative singular-value threshold used by float rank decisions."""
    if not tolerance > 0:
        msg = "rank tolerance must be positive"
        raise ValueError(msg)
    token = _rank_tolerance.set(tolerance)
    try:
        yield
    finally:
        _rank_tolerance.reset(token)


def backend_of(matrix: Matrix) -> Backend:
    return Backend.EXACT if matrix.dtype == object else Backend.FLOAT


def freeze(matrix: Matrix) -> Matrix:
    matrix.setflags(write=False)
    return matrix


def exact_matrix(rows: Iterable[Iterable[object]], *, columns: int | None = None) -> Matrix:
    """Build an exact matrix from rows of ints, Fractions, scalar text or Gaussian rationals."""
    data = [[GaussianRational.coerce(value) for value in row] for row in rows]
    if not data:
        return np.empty((0, columns or 0), dtype=object)
    matrix = np.empty((len(data), len(data[0])), dtype=object)
    for index, row in enumerate(data):
        matrix[index, :] = row
    return matrix


def float_matrix(rows: Iterable[Iterable[complex]], *, columns: int | None = None) -> Matrix:
    data = [list(row) for row in rows]
    if not data:
        return np.empty((0, columns or 0), dtype=complex)
    return np.array(data, dtype=complex)


def integer_matrix(rows: Iterable[Iterable[int]], *, columns: int | None = None) -> Matrix:
    data = [[int(value) for value in row] for row in rows]
    if not data:
        return np.empty((0, columns or 0), dtype=object)
    matrix = np.empty((len(data), len(data[0])), dtype=object)
    for index, row in enumerate(data):
        matrix[index, :] = row
    return matrix


def columns_matrix(vectors: Sequence[Sequence[object]], ambient: int, backend: Backend) -> Matrix:
    """Stack vectors as the columns of an ambient x len(vectors) matrix."""
    if backend is Backend.EXACT:
        rows = exact_matrix(vectors, columns=ambient)
    else:
        rows = float_matrix(
            ([complex(value) for value in vector] for vector in vectors),  # type: ignore[arg-type]
            columns=ambient,
        )
    if rows.shape[1] != ambient:
        raise DimensionMismatchError("columns_matrix", rows.shape[1], ambient)
    return rows.T.copy()


def identity(size: int, backend: Backend) -> Matrix:
    if backend is Backend.FLOAT:
        return np.eye(size, dtype=complex)
    matrix = np.full((size, size), ZERO, dtype=object)
    for index in range(size):
        matrix[index, index] = ONE
    return matrix


def zeros(rows: int, columns: int, backend: Backend) -> Matrix:
    if backend is Backend.FLOAT:
        return np.zeros((rows, columns), dtype=complex)
    return np.full((rows, columns), ZERO, dtype=object)


def as_backend(matrix: Matrix, backend: Backend) -> Matrix:
    """Promote integer or exact entries to the requested backend."""
    if backend is Backend.FLOAT:
        if matrix.dtype == object:
            return np.array([complex(value) for value in matrix.flat], dtype=complex).reshape(matrix.shape)
        return matrix.astype(complex)
    if matrix.dtype != object:
        raise BackendMismatchError("as_backend", "float", "exact")
    if matrix.size == 0:
        return matrix.copy()
    return _coerce_entries(matrix).astype(object)


def is_integral(matrix: Matrix) -> bool:
    if matrix.dtype != object:
        return False
    for value in matrix.flat:
        if isinstance(value, int):
            continue
        scalar = GaussianRational.coerce(value)
        if scalar.imag != 0 or scalar.real.denominator != 1:
            return False
    return True


def to_integer(matrix: Matrix) -> Matrix:
    """Return the same matrix with plain int entries, or raise NonIntegralMatrixError."""
    if not is_integral(matrix):
        msg = "matrix has non-integer entries"
        raise NonIntegralMatrixError(msg)
    result = np.empty(matrix.shape, dtype=object)
    for index, value in np.ndenumerate(matrix):
        result[index] = value if isinstance(value, int) else int(GaussianRational.coerce(value).real)
    return result


def conjugate(matrix: Matrix) -> Matrix:
    return np.conjugate(matrix)


def real_part(matrix: Matrix) -> Matrix:
    if matrix.dtype != object:
        return matrix.real.astype(complex)
    if matrix.size == 0:
        return matrix.copy()
    return as_backend(_real_entries(matrix).astype(object), Backend.EXACT)


def imag_part(matrix: Matrix) -> Matrix:
    if matrix.dtype != object:
        return matrix.imag.astype(complex)
    if matrix.size == 0:
        return matrix.copy()
    return as_backend(_imag_entries(matrix).astype(object), Backend.EXACT)


def is_real(matrix: Matrix) -> bool:
    if matrix.dtype == object:
        return all(GaussianRational.coerce(value).imag == 0 for value in matrix.flat)
    scale = max(float(np.abs(matrix).max(initial=0.0)), 1.0)
    return float(np.abs(matrix.imag).max(initial=0.0)) <= rank_tolerance() * scale


def hstack(matrices: Sequence[Matrix], rows: int, backend: Backend) -> Matrix:
    parts = [matrix for matrix in matrices if matrix.shape[1] > 0]
    if not parts:
        return zeros(rows, 0, backend)
    return np.hstack(parts)


def _exact_rows(matrix: Matrix) -> list[list[GaussianRational]]:
    return [[GaussianRational.coerce(value) for value in row] for row in matrix]


def _exact_rref(
    rows: list[list[GaussianRational]],
    columns: int,
    *,
    stop_column: int | None = None,
) -> tuple[list[list[GaussianRational]], list[int]]:
    pivots: list[int] = []
    current = 0
    last = columns if stop_column is None else stop_column
    for column in range(last):
        if current == len(rows):
            break
        pivot = next((index for index in range(current, len(rows)) if rows[index][column]), None)
        if pivot is None:
            continue
        rows[current], rows[pivot] = rows[pivot], rows[current]
        lead = rows[current][column]
        if lead != ONE:
            rows[current] = [value / lead if value else value for value in rows[current]]
        pivot_row = rows[current]
        for index, row in enumerate(rows):
            if index == current:
                continue
            factor = row[column]
            if factor:
                rows[index] = [
                    value - factor * other if other else value
                    for value, other in zip(row, pivot_row, strict=True)
                ]
        pivots.append(column)
        current += 1
    return rows, pivots


def _float_threshold(matrix: Matrix) -> float:
    scale = float(np.abs(matrix).max(initial=0.0))
    return rank_tolerance() * max(scale, 1.0)


def _float_rref(matrix: Matrix) -> tuple[Matrix, list[int]]:
    work = matrix.astype(complex, copy=True)
    threshold = _float_threshold(work)
    pivots: list[int] = []
    current = 0
    row_count, column_count = work.shape
    for column in range(column_count):
        if current == row_count:
            break
        candidate = current + int(np.argmax(np.abs(work[current:, column])))
        if abs(work[candidate, column]) <= threshold:
            work[current:, column] = 0
            continue
        work[[current, candidate]] = work[[candidate, current]]
        work[current] /= work[current, column]
        for index in range(row_count):
            if index != current:
                work[index] -= work[index, column] * work[current]
        pivots.append(column)
        current += 1
    work[np.abs(work) <= threshold] = 0
    return work, pivots


def rref(matrix: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Return the reduced row echelon form and its pivot columns."""
    if backend_of(matrix) is Backend.FLOAT:
        reduced, pivots = _float_rref(matrix)
        return reduced, tuple(pivots)
    rows, pivots = _exact_rref(_exact_rows(matrix), matrix.shape[1])
    return exact_matrix(rows, columns=matrix.shape[1]), tuple(pivots)


def rank(matrix: Matrix) -> int:
    if matrix.size == 0:
        return 0
    if backend_of(matrix) is Backend.FLOAT:
        singular_values = np.linalg.svd(matrix, compute_uv=False)
        if singular_values[0] == 0:
            return 0
        return int(np.count_nonzero(singular_values > rank_tolerance() * singular_values[0]))
    _, pivots = _exact_rref(_exact_rows(matrix), matrix.shape[1])
    return len(pivots)


def kernel(matrix: Matrix) -> Matrix:
    """Return a matrix whose columns span the right kernel."""
    row_count, column_count = matrix.shape
    backend = backend_of(matrix)
    if row_count == 0:
        return identity(column_count, backend)
    if column_count == 0:
        return zeros(0, 0, backend)
    if backend is Backend.FLOAT:
        _, singular_values, vh = np.linalg.svd(matrix)
        if singular_values.size == 0 or singular_values[0] == 0:
            return np.eye(column_count, dtype=complex)
        matrix_rank = int(np.count_nonzero(singular_values > rank_tolerance() * singular_values[0]))
        return vh[matrix_rank:].conj().T.copy()
    rows, pivots = _exact_rref(_exact_rows(matrix), column_count)
    free = [column for column in range(column_count) if column not in pivots]
    basis = zeros(column_count, len(free), Backend.EXACT)
    for position, column in enumerate(free):
        basis[column, position] = ONE
        for row_index, pivot in enumerate(pivots):
            value = rows[row_index][column]
            if value:
                basis[pivot, position] = -value
    return basis


def solve(matrix: Matrix, rhs: Matrix) -> Matrix | None:
    """Return one X with matrix @ X = rhs, or None when the system is inconsistent."""
    if matrix.shape[0] != rhs.shape[0]:
        raise DimensionMismatchError("solve", matrix.shape[0], rhs.shape[0])
    column_count = matrix.shape[1]
    if backend_of(matrix) is Backend.FLOAT or backend_of(rhs) is Backend.FLOAT:
        left = as_backend(matrix, Backend.FLOAT)
        right = as_backend(rhs, Backend.FLOAT)
        if column_count == 0:
            return np.zeros((0, rhs.shape[1]), dtype=complex) if np.allclose(right, 0) else None
        solution, *_ = np.linalg.lstsq(left, right, rcond=None)
        residual = float(np.abs(left @ solution - right).max(initial=0.0))
        scale = max(float(np.abs(right).max(initial=0.0)), float(np.abs(left).max(initial=0.0)), 1.0)
        if residual > 1e3 * rank_tolerance() * scale:
            return None
        return solution
    augmented = [
        left + right
        for left, right in zip(_exact_rows(matrix), _exact_rows(rhs), strict=True)
    ]
    rows, pivots = _exact_rref(augmented, column_count + rhs.shape[1], stop_column=column_count)
    for row in rows[len(pivots):]:
        if any(row[column_count:]):
            return None
    solution = zeros(column_count, rhs.shape[1], Backend.EXACT)
    for row_index, pivot in enumerate(pivots):
        solution[pivot, :] = rows[row_index][column_count:]
    return solution


def inverse(matrix: Matrix) -> Matrix:
    size = matrix.shape[0]
    if matrix.shape != (size, size):
        raise DimensionMismatchError("inverse", matrix.shape[0], matrix.shape[1])
    backend = backend_of(matrix)
    if backend is Backend.FLOAT:
        if rank(matrix) < size:
            msg = "matrix is singular"
            raise ZeroDivisionError(msg)
        return np.linalg.inv(matrix)
    solution = solve(matrix, identity(size, Backend.EXACT))
    if solution is None:
        msg = "matrix is singular"
        raise ZeroDivisionError(msg)
    return solution


def left_inverse(matrix: Matrix) -> Matrix:
    """Return L with L @ matrix = I for a matrix of full column rank."""
    transpose = matrix.T
    if backend_of(matrix) is Backend.FLOAT:
        return np.linalg.pinv(matrix)
    gram = as_backend(transpose @ matrix, Backend.EXACT)
    return inverse(gram) @ as_backend(transpose, Backend.EXACT)


def determinant(matrix: Matrix) -> GaussianRational | complex:
    size = matrix.shape[0]
    if matrix.shape != (size, size):
        raise DimensionMismatchError("determinant", matrix.shape[0], matrix.shape[1])
    if backend_of(matrix) is Backend.FLOAT:
        return complex(np.linalg.det(matrix))
    rows = _exact_rows(matrix)
    result = ONE
    for column in range(size):
        pivot = next((index for index in range(column, size) if rows[index][column]), None)
        if pivot is None:
            return ZERO
        if pivot != column:
            rows[column], rows[pivot] = rows[pivot], rows[column]
            result = -result
        lead = rows[column][column]
        result = result * lead
        for index in range(column + 1, size):
            factor = rows[index][column] / lead
            if factor:
                rows[index] = [
                    value - factor * other
                    for value, other in zip(rows[index], rows[column], strict=True)
                ]
    return result


@dataclass(frozen=True, slots=True, eq=False)
class Subspace:
    """A subspace of C^ambient stored by a column reduced-echelon basis."""

    ambient: int
    basis: Matrix
    backend: Backend

    @classmethod
    def zero(cls, ambient: int, backend: Backend = Backend.EXACT) -> Self:
        return cls(ambient, freeze(zeros(ambient, 0, backend)), backend)

    @classmethod
    def full(cls, ambient: int, backend: Backend = Backend.EXACT) -> Self:
        return cls(ambient, freeze(identity(ambient, backend)), backend)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient

    def contains(self, vectors: Matrix) -> bool:
        if vectors.shape[0] != self.ambient:
            raise DimensionMismatchError("contains", self.ambient, vectors.shape[0])
        if vectors.shape[1] == 0:
            return True
        combined = hstack([self.basis, as_backend(vectors, self.backend)], self.ambient, self.backend)
        return rank(combined) == self.dim

    def is_subspace_of(self, other: "Subspace") -> bool:
        _require_compatible("is_subspace_of", self, other)
        return other.contains(self.basis)

    def is_real(self) -> bool:
        return is_real(self.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        if (self.ambient, self.dim, self.backend) != (other.ambient, other.dim, other.backend):
            return False
        if self.backend is Backend.EXACT:
            return bool(np.array_equal(self.basis, other.basis))
        return self.contains(other.basis)

    def __hash__(self) -> int:
        return hash((self.ambient, self.dim, self.backend))

    def __repr__(self) -> str:
        return f"Subspace(ambient={self.ambient}, dim={self.dim}, backend={self.backend.value})"


def _require_compatible(operation: str, left: Subspace, right: Subspace) -> None:
    if left.ambient != right.ambient:
        raise DimensionMismatchError(operation, left.ambient, right.ambient)
    if left.backend is not right.backend:
        raise BackendMismatchError(operation, left.backend.value, right.backend.value)


def span(vectors: Matrix, backend: Backend | None = None) -> Subspace:
    """Return the subspace spanned by the columns of vectors."""
    ambient = vectors.shape[0]
    resolved = backend if backend is not None else backend_of(vectors)
    columns = as_backend(vectors, resolved)
    if columns.shape[1] == 0:
        return Subspace.zero(ambient, resolved)
    if resolved is Backend.EXACT:
        rows, pivots = _exact_rref(_exact_rows(columns.T), ambient)
        basis = exact_matrix(rows[: len(pivots)], columns=ambient).T.copy()
        return Subspace(ambient, freeze(basis), resolved)
    matrix_rank = rank(columns)
    if matrix_rank == 0:
        return Subspace.zero(ambient, resolved)
    left, _, _ = np.linalg.svd(columns, full_matrices=False)
    reduced, pivots = _float_rref(left[:, :matrix_rank].T)
    basis = reduced[: len(pivots)].T.copy()
    return Subspace(ambient, freeze(basis), resolved)


def kernel_subspace(matrix: Matrix) -> Subspace:
    return span(kernel(matrix), backend_of(matrix))


def subspace_sum(left: Subspace, right: Subspace) -> Subspace:
    _require_compatible("sum", left, right)
    return span(hstack([left.basis, right.basis], left.ambient, left.backend), left.backend)


def intersect(left: Subspace, right: Subspace) -> Subspace:
    """Return the intersection via the kernel of [U | -V]."""
    _require_compatible("intersect", left, right)
    if left.is_zero() or right.is_zero():
        return Subspace.zero(left.ambient, left.backend)
    if left.is_full():
        return right
    if right.is_full():
        return left
    coefficients = kernel(np.hstack([left.basis, -right.basis]))
    return span(left.basis @ coefficients[: left.dim], left.backend)


def annihilator(space: Subspace) -> Subspace:
    """Return the annihilator in the dual space under the bilinear evaluation pairing."""
    if space.is_zero():
        return Subspace.full(space.ambient, space.backend)
    return span(kernel(space.basis.T.copy()), space.backend)


def conjugate_subspace(space: Subspace) -> Subspace:
    if space.is_zero():
        return space
    return span(conjugate(space.basis), space.backend)


def image(matrix: Matrix, space: Subspace) -> Subspace:
    """Return the span of matrix applied to the subspace."""
    if matrix.shape[1] != space.ambient:
        raise DimensionMismatchError("image", matrix.shape[1], space.ambient)
    if space.is_zero():
        return Subspace.zero(matrix.shape[0], space.backend)
    return span(as_backend(matrix, space.backend) @ space.basis, space.backend)


def sum_all(spaces: Iterable[Subspace], ambient: int, backend: Backend) -> Subspace:
    result = Subspace.zero(ambient, backend)
    for space in spaces:
        result = subspace_sum(result, space)
    return result


def rational_entries(matrix: Matrix) -> list[list[Fraction]]:
    """Return the real parts of an exact real matrix as Fractions."""
    return [[GaussianRational.coerce(value).real for value in row] for row in matrix]
