import numpy as np
import pytest

from mixedhodge.errors import BackendMismatchError, DimensionMismatchError
from mixedhodge.linalg import (
    Subspace,
    annihilator,
    conjugate_subspace,
    determinant,
    exact_matrix,
    intersect,
    kernel_subspace,
    rank,
    solve,
    subspace_sum,
    use_rank_tolerance,
)
from mixedhodge.scalars import I, Backend
from tests.structure_helpers import vectors_span


def test_intersect_coordinate_planes_gives_shared_axis() -> None:
    # Given
    first = vectors_span([[1, 0, 0], [0, 1, 0]], 3)
    second = vectors_span([[0, 1, 0], [0, 0, 1]], 3)

    # When
    common = intersect(first, second)

    # Then
    assert common == vectors_span([[0, 1, 0]], 3)


def test_intersect_is_idempotent() -> None:
    # Given
    space = vectors_span([[1, I, 2], [0, 1, "1/2"]], 3)

    # When / Then
    assert intersect(space, space) == space


def test_intersect_conjugate_lines_is_zero() -> None:
    # Given
    line = vectors_span([[1, I]], 2)

    # When
    common = intersect(line, conjugate_subspace(line))

    # Then
    assert common.is_zero()


@pytest.mark.parametrize(
    ("first", "second"),
    [
        ([[1, 0, 0, 0], [0, 1, 1, 0]], [[0, 1, 1, 0], [0, 0, 0, 1]]),
        ([[1, I, 0, 0]], [[1, -I, 0, 0], [0, 0, 1, 1]]),
        ([[1, 2, 3, 4], [0, 1, 0, 1], [1, 1, 1, 1]], [[1, 3, 3, 5], [2, 0, 0, 1]]),
    ],
)
def test_sum_and_intersection_dimensions_add_up(first: list[list[object]], second: list[list[object]]) -> None:
    # Given
    left = vectors_span(first, 4)
    right = vectors_span(second, 4)

    # When
    total = subspace_sum(left, right)
    common = intersect(left, right)

    # Then
    assert total.dim + common.dim == left.dim + right.dim


def test_conjugate_subspace_conjugates_basis_and_is_an_involution() -> None:
    # Given
    line = vectors_span([[1, I]], 2)

    # When
    conjugate = conjugate_subspace(line)

    # Then
    assert conjugate == vectors_span([[1, -I]], 2)
    assert conjugate_subspace(conjugate) == line
    assert conjugate_subspace(vectors_span([[1, 2]], 2)) == vectors_span([[1, 2]], 2)


def test_subspace_equality_ignores_spanning_set() -> None:
    # Given
    first = vectors_span([[1, 1, 0], [0, 1, 1]], 3)
    second = vectors_span([[1, 2, 1], [1, 0, -1], [2, 2, 0]], 3)

    # When / Then
    assert first == second
    assert first.dim == 2


def test_annihilator_pairs_to_zero_without_conjugation() -> None:
    # Given
    line = vectors_span([[1, I]], 2)

    # When
    dual_line = annihilator(line)

    # Then
    assert dual_line.dim == 1
    assert np.all(dual_line.basis.T @ line.basis == 0)


def test_solve_returns_none_for_inconsistent_system() -> None:
    # Given
    matrix = exact_matrix([[1, 1], [2, 2]])
    rhs = exact_matrix([[1], [3]])

    # When / Then
    assert solve(matrix, rhs) is None


def test_solve_finds_exact_solution() -> None:
    # Given
    matrix = exact_matrix([[2, 1], [1, 3]])
    rhs = exact_matrix([[3], [4]])

    # When
    solution = solve(matrix, rhs)

    # Then
    assert solution is not None
    assert np.array_equal(matrix @ solution, rhs)


def test_kernel_and_determinant_agree_on_singular_matrix() -> None:
    # Given
    matrix = exact_matrix([[1, 2, 3], [2, 4, 6], [0, 1, 1]])

    # When / Then
    assert determinant(matrix) == 0
    assert kernel_subspace(matrix).dim == 1
    assert rank(matrix) == 2


def test_intersect_rejects_different_ambient_dimensions() -> None:
    # When / Then
    with pytest.raises(DimensionMismatchError):
        intersect(Subspace.full(2), Subspace.full(3))


def test_intersect_rejects_mixed_backends() -> None:
    # When / Then
    with pytest.raises(BackendMismatchError):
        intersect(Subspace.full(2), Subspace.full(2, Backend.FLOAT))


def test_float_backend_matches_exact_dimensions() -> None:
    # Given
    first = vectors_span([[1, 0, 0], [0, 1, 0]], 3, Backend.FLOAT)
    second = vectors_span([[0, 1, 0], [0, 0, 1]], 3, Backend.FLOAT)

    # When
    common = intersect(first, second)

    # Then
    assert common.dim == 1
    assert common == vectors_span([[0, 2.5, 0]], 3, Backend.FLOAT)


def test_rank_tolerance_scope_controls_float_rank() -> None:
    # Given
    matrix = np.array([[1.0, 0.0], [0.0, 1e-6]], dtype=complex)

    # When / Then
    assert rank(matrix) == 2
    with use_rank_tolerance(1e-3):
        assert rank(matrix) == 1
    assert rank(matrix) == 2


def test_rank_tolerance_must_be_positive() -> None:
    # When / Then
    with pytest.raises(ValueError, match="positive"), use_rank_tolerance(0.0):
        pass
