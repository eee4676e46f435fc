import pytest

from mixedhodge.duality import (
    SequencePairing,
    basis_residuals,
    canonical_pairing,
    dual_rsplit_decomposition,
    induced_pairings,
    main_identity_sides,
    require_valid_pairing,
    transform_partner,
    validate_pairing,
    verify_main_identity,
)
from mixedhodge.errors import PairingError, WeightMismatchError
from mixedhodge.generators import GeneratorSpec, random_carlson_instance, random_extension_spec, random_paired_instance
from mixedhodge.linalg import integer_matrix
from tests.structure_helpers import (
    acceptance_seeds,
    non_r_split_sequence,
    unit_vector,
    vectors_span,
    worked_sequence,
)

CHANGE = integer_matrix([[1, 0, 0], [2, 1, 0], [-1, 3, 1]])


def test_dual_decomposition_of_worked_example() -> None:
    # When
    lower, upper = dual_rsplit_decomposition(worked_sequence())

    # Then
    assert lower == vectors_span([[0, 1, 0], [0, 0, 1]], 3)
    assert upper == vectors_span([[1, "-1/2", 0]], 3)


def test_dual_decomposition_requires_consecutive_weights() -> None:
    # When / Then
    with pytest.raises(WeightMismatchError):
        dual_rsplit_decomposition(non_r_split_sequence())


def test_canonical_pairing_is_valid() -> None:
    # Given
    pairing = canonical_pairing(worked_sequence())

    # When
    on_a, on_b = induced_pairings(pairing)

    # Then
    assert validate_pairing(pairing).is_valid
    assert on_a.shape == (1, 1)
    assert abs(on_a[0, 0]) == 1
    assert on_b.shape == (2, 2)


def test_pairing_with_non_unimodular_matrix_is_rejected() -> None:
    # Given
    pairing = canonical_pairing(worked_sequence())
    doubled = SequencePairing(pairing.sequence, pairing.partner, 2 * pairing.matrix)

    # When
    report = validate_pairing(doubled)

    # Then
    assert report.failures == ("P not unimodular",)
    with pytest.raises(PairingError, match="not unimodular"):
        require_valid_pairing(doubled)


def test_pairing_with_wrong_shape_is_rejected() -> None:
    # Given
    pairing = canonical_pairing(worked_sequence())
    truncated = SequencePairing(pairing.sequence, pairing.partner, pairing.matrix[:2])

    # When / Then
    assert validate_pairing(truncated).failures == ("P has shape (2, 3), expected (3, 3)",)


def test_identity_holds_on_worked_example() -> None:
    # Given
    pairing = canonical_pairing(worked_sequence())

    # When
    residuals = basis_residuals(pairing)

    # Then
    assert [indices for indices, _ in residuals] == [(0, 0), (1, 0)]
    assert all(residual.is_zero() for _, residual in residuals)


def test_identity_periods_come_from_the_induced_pairing() -> None:
    # Given
    pairing = canonical_pairing(worked_sequence())

    # When
    sides = main_identity_sides(pairing, unit_vector(0, 2), unit_vector(0, 1))

    # Then
    assert sides.period == 1


@pytest.mark.parametrize(
    "adjustments",
    [
        {"section_adjustment": integer_matrix([[2, -1]])},
        {"partner_adjustment": integer_matrix([[1], [4]])},
        {
            "section_adjustment": integer_matrix([[-3, 0]]),
            "partner_adjustment": integer_matrix([[0], [1]]),
            "second_adjustment": integer_matrix([[5], [-2]]),
        },
    ],
)
def test_identity_holds_for_any_integral_sections(adjustments: dict[str, object]) -> None:
    # Given
    pairing = canonical_pairing(worked_sequence())

    # When
    residuals = basis_residuals(pairing, **adjustments)  # type: ignore[arg-type]

    # Then
    assert all(residual.is_zero() for _, residual in residuals)


def test_identity_survives_change_of_partner_basis() -> None:
    # Given
    pairing = transform_partner(canonical_pairing(worked_sequence()), CHANGE)

    # When
    residual = verify_main_identity(pairing, unit_vector(0, 2), unit_vector(0, 1))

    # Then
    assert validate_pairing(pairing).is_valid
    assert residual.is_zero()


@pytest.mark.parametrize("seed", acceptance_seeds(fast=4))
def test_identity_holds_on_random_paired_instances(seed: int) -> None:
    # Given
    pairing = random_paired_instance(random_extension_spec(GeneratorSpec(seed=seed, height=5)))

    # When
    residuals = basis_residuals(pairing)

    # Then
    assert validate_pairing(pairing).is_valid
    assert all(residual.is_zero() for _, residual in residuals)


def test_identity_requires_consecutive_pure_weights() -> None:
    # Given
    pairing = canonical_pairing(non_r_split_sequence())

    # When / Then
    with pytest.raises(WeightMismatchError):
        verify_main_identity(pairing, unit_vector(0, 1), unit_vector(0, 1))


@pytest.mark.parametrize("seed", acceptance_seeds())
def test_dual_decomposition_on_random_extensions(seed: int) -> None:
    # Given
    sequence = random_carlson_instance(random_extension_spec(GeneratorSpec(seed=seed, height=5))).sequence

    # When
    lower, upper = dual_rsplit_decomposition(sequence)

    # Then
    assert lower.dim == sequence.B.rank
    assert upper.dim == sequence.A.rank
