from fractions import Fraction

import numpy as np
import pytest

from mixedhodge.errors import NonIntegralMatrixError
from mixedhodge.linalg import Subspace, exact_matrix, identity
from mixedhodge.scalars import Backend, GaussianRational
from mixedhodge.torus import (
    DEFAULT_TORUS_TOLERANCE,
    TorusQuotient,
    complex_lattice_torus,
    period_torus,
    real_torus,
    torus_tolerance,
    use_torus_tolerance,
)


@pytest.mark.parametrize(
    ("values", "expected"),
    [
        (["1", "-2"], True),
        (["1/2", "0"], False),
        (["i", "0"], False),
        (["3", "7/7"], True),
    ],
)
def test_real_torus_zero_test(values: list[str], expected: bool) -> None:
    # Given
    torus = real_torus(2)

    # When
    element = torus.element(exact_matrix([values]).reshape(-1))

    # Then
    assert element.is_zero() is expected


def test_canonical_form_reduces_lattice_coordinates() -> None:
    # Given
    element = real_torus(1).element(exact_matrix([["5/2+3*i"]]).reshape(-1))

    # When
    canonical = element.canonical_form()

    # Then
    assert canonical.canonical
    assert canonical.representative[0] == GaussianRational(Fraction(1, 2), 3)
    assert canonical == element
    assert canonical.canonical_form() is canonical


def test_negative_coordinates_reduce_into_unit_interval() -> None:
    # Given
    element = real_torus(1).element(exact_matrix([["-1/3"]]).reshape(-1))

    # When
    canonical = element.canonical_form()

    # Then
    assert canonical.representative[0] == Fraction(2, 3)


def test_torus_arithmetic() -> None:
    # Given
    torus = real_torus(1)
    half = torus.element(exact_matrix([["1/2"]]).reshape(-1))

    # When / Then
    assert (half + half).is_zero()
    assert (half - half).is_zero()
    assert -half == half
    assert half != torus.element(exact_matrix([["1/3"]]).reshape(-1))


def test_elements_of_different_quotients_do_not_combine() -> None:
    # Given
    left = real_torus(1).element(exact_matrix([[0]]).reshape(-1))
    right = period_torus(2).element(exact_matrix([[0]]).reshape(-1))

    # When / Then
    with pytest.raises(ValueError, match="cannot combine"):
        _ = left + right
    assert left != right


@pytest.mark.parametrize(
    ("period", "value", "expected"),
    [
        (2, "4", True),
        (2, "1", False),
        (0, "0", True),
        (0, "1/2", False),
    ],
)
def test_period_torus(period: int, value: str, expected: bool) -> None:
    # Given
    torus = period_torus(period)

    # When / Then
    assert torus.element(exact_matrix([[value]]).reshape(-1)).is_zero() is expected


@pytest.mark.parametrize("period", [0.5, 2.25, -1.5])
def test_exact_period_torus_rejects_non_integral_period(period: float) -> None:
    # When / Then
    with pytest.raises(NonIntegralMatrixError, match="exact period must be an integer"):
        period_torus(period)


def test_float_period_torus_keeps_fractional_period() -> None:
    # Given
    torus = period_torus(0.5, Backend.FLOAT)

    # When / Then
    assert torus.element(np.array([1.0 + 0j])).is_zero()
    assert not torus.element(np.array([0.25 + 0j])).is_zero()


def test_lattice_dependent_on_kernel_is_rejected() -> None:
    # When / Then
    with pytest.raises(ValueError, match="not independent"):
        TorusQuotient(
            label="degenerate",
            shape=(1,),
            lattice=identity(1, Backend.EXACT),
            backend=Backend.EXACT,
            kernel=Subspace.full(1),
        )


def test_float_lattice_torus_uses_tolerance() -> None:
    # Given
    torus = complex_lattice_torus((1.0, 1j), "C/Z[i]")

    # When / Then
    assert torus.tolerance == DEFAULT_TORUS_TOLERANCE
    assert torus.element(np.array([2.0 - 3j + 1e-10])).is_zero()
    assert not torus.element(np.array([0.5 + 0j])).is_zero()


def test_torus_tolerance_scope() -> None:
    # When
    with use_torus_tolerance(0.6):
        torus = complex_lattice_torus((1.0, 1j), "C/Z[i]")

    # Then
    assert torus_tolerance() == DEFAULT_TORUS_TOLERANCE
    assert torus.tolerance == 0.6
    assert torus.element(np.array([0.5 + 0.5j])).is_zero()


def test_torus_tolerance_must_be_positive() -> None:
    # When / Then
    with pytest.raises(ValueError, match="positive"), use_torus_tolerance(0):
        pass
