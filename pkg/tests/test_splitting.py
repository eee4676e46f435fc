import numpy as np
import pytest

from mixedhodge.generators import (
    GeneratorSpec,
    random_carlson_instance,
    random_mixed_hs,
    random_unimodular,
    weights_zero_two,
)
from mixedhodge.hodge import transform
from mixedhodge.linalg import conjugate_subspace, image
from mixedhodge.scalars import I
from mixedhodge.smith import unimodular_inverse
from mixedhodge.splitting import (
    check_splitting,
    deligne_splitting,
    hodge_numbers,
    is_r_split,
    r_split_witness,
)
from tests.structure_helpers import acceptance_seeds, elliptic_structure, vectors_span, worked_sequence


def test_elliptic_splitting_is_the_hodge_decomposition() -> None:
    # When
    splitting = deligne_splitting(elliptic_structure())

    # Then
    assert splitting.bidegrees == ((0, 1), (1, 0))
    assert splitting[(1, 0)] == vectors_span([[1, I]], 2)
    assert splitting[(0, 1)] == vectors_span([[1, -I]], 2)
    assert splitting[(1, 1)].is_zero()


def test_worked_extension_pieces() -> None:
    # Given
    structure = worked_sequence().E

    # When
    splitting = deligne_splitting(structure)

    # Then
    assert splitting[(0, 0)] == vectors_span([[1, 0, 0]], 3)
    assert splitting[(1, 0)] == vectors_span([["1/2", 1, I]], 3)
    assert splitting[(0, 1)] == vectors_span([["1/2", 1, -I]], 3)
    assert check_splitting(structure, splitting).is_valid


def test_carlson_extension_of_pure_structures_is_r_split() -> None:
    # When / Then
    assert is_r_split(worked_sequence().E)


@pytest.mark.parametrize("c", [0, "3/4", "-2"])
def test_weights_zero_two_with_real_coefficient_is_r_split(c: str | int) -> None:
    # Given
    structure = weights_zero_two(c)  # type: ignore[arg-type]

    # When
    splitting = deligne_splitting(structure)

    # Then
    assert splitting[(0, 0)] == vectors_span([[1, 0]], 2)
    assert splitting[(1, 1)] == structure.hodge_space(1)
    assert r_split_witness(structure) is None


def test_weights_zero_two_with_imaginary_coefficient_is_not_r_split() -> None:
    # Given
    structure = weights_zero_two(I)

    # When
    splitting = deligne_splitting(structure)

    # Then
    assert splitting[(1, 1)] == vectors_span([[I, 1]], 2)
    assert conjugate_subspace(splitting[(1, 1)]) != splitting[(1, 1)]
    assert r_split_witness(structure) == (1, 1)
    assert not is_r_split(structure)
    assert check_splitting(structure, splitting).is_valid


@pytest.mark.parametrize("seed", acceptance_seeds(fast=6))
def test_splitting_of_random_structures_passes_checks(seed: int) -> None:
    # Given
    structure = random_mixed_hs(GeneratorSpec(seed=seed, height=4))

    # When
    splitting = deligne_splitting(structure)

    # Then
    assert check_splitting(structure, splitting).failures == ()
    assert sum(space.dim for _, space in splitting.components) == structure.rank
    assert structure.rank <= 8


def test_hodge_numbers_are_conjugate_symmetric_for_r_split_structures() -> None:
    # Given
    numbers = hodge_numbers(worked_sequence().E)

    # When / Then
    assert numbers.is_conjugate_symmetric()
    assert numbers.total == 3
    assert numbers.weights() == (0, 1)


def test_collect_sums_selected_pieces() -> None:
    # Given
    structure = worked_sequence().E
    splitting = deligne_splitting(structure)

    # When / Then
    assert splitting.collect(max_weight=0) == structure.weight_space(0)
    assert splitting.collect(min_p=1) == structure.hodge_space(1)
    assert splitting.collect(weight=1).dim == 2
    assert splitting.collect().is_full()


@pytest.mark.parametrize("seed", range(5))
def test_two_consecutive_weight_extensions_are_r_split(seed: int) -> None:
    # Given
    structure = random_carlson_instance(GeneratorSpec(seed=seed, height=5)).sequence.E

    # When / Then
    assert structure.weight_levels == (0, 1)
    assert is_r_split(structure)


@pytest.mark.parametrize("seed", acceptance_seeds())
def test_random_two_weight_structures_are_r_split(seed: int) -> None:
    # Given
    structure = random_mixed_hs(GeneratorSpec(seed=seed, height=5), weight_count=2)

    # When / Then
    assert len(structure.weight_levels) == 2
    assert structure.weight_levels[1] == structure.weight_levels[0] + 1
    assert is_r_split(structure)


@pytest.mark.parametrize("seed", acceptance_seeds())
def test_splitting_is_independent_of_the_integral_basis(seed: int) -> None:
    # Given
    structure = random_mixed_hs(GeneratorSpec(seed=seed, height=4))
    change = random_unimodular(structure.rank, np.random.default_rng([seed, 9]))
    back = unimodular_inverse(change)

    # When
    moved = deligne_splitting(transform(structure, change))

    # Then
    original = deligne_splitting(structure)
    assert moved.bidegrees == original.bidegrees
    for bidegree in original.bidegrees:
        assert image(back, moved[bidegree]) == original[bidegree]
