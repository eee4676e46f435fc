from fractions import Fraction
from typing import Any, Final

import pytest

from mixedhodge.extensions import ExtensionSequence
from mixedhodge.generators import build_extension_from_hom, weights_zero_two
from mixedhodge.hodge import MixedHodgeStructure, tate_twist
from mixedhodge.linalg import Matrix, Subspace, columns_matrix, exact_matrix, integer_matrix, span
from mixedhodge.scalars import I, Backend

ACCEPTANCE_TRIALS: Final = 200
SECTION_UNIQUENESS_TRIALS: Final = 100


def acceptance_seeds(count: int = ACCEPTANCE_TRIALS, fast: int = 5) -> list[Any]:
    """Seeds 0..count-1; those past the first `fast` carry the slow mark."""
    return [seed if seed < fast else pytest.param(seed, marks=pytest.mark.slow) for seed in range(count)]


def vectors_span(vectors: list[list[object]], ambient: int, backend: Backend = Backend.EXACT) -> Subspace:
    return span(columns_matrix(vectors, ambient, backend), backend)


def trivial_structure() -> MixedHodgeStructure:
    """Z(0): rank 1, weight 0, type (0,0)."""
    full = Subspace.full(1)
    return MixedHodgeStructure.create(1, [(0, full)], [(0, full)])


def elliptic_structure(backend: Backend = Backend.EXACT) -> MixedHodgeStructure:
    """Pure weight 1 on Z^2 with F^1 = span(e1 + i e2)."""
    unit = I if backend is Backend.EXACT else 1j
    full = Subspace.full(2, backend)
    return MixedHodgeStructure.create(
        2,
        [(1, full)],
        [(1, vectors_span([[1, unit]], 2, backend)), (0, full)],
        backend,
    )


def half_phi() -> Matrix:
    return exact_matrix([[Fraction(1, 2), 0]])


def worked_sequence() -> ExtensionSequence:
    """Z(0) -> E -> elliptic with phi = (1/2, 0)."""
    return build_extension_from_hom(trivial_structure(), elliptic_structure(), half_phi())


def split_sequence() -> ExtensionSequence:
    return build_extension_from_hom(trivial_structure(), elliptic_structure(), exact_matrix([[0, 0]]))


def non_r_split_sequence() -> ExtensionSequence:
    """Z(0) -> weights {0,2} member with c = i -> Z(-1)."""
    return ExtensionSequence(
        A=trivial_structure(),
        E=weights_zero_two(I),
        B=tate_twist(trivial_structure(), -1),
        f=integer_matrix([[1], [0]]),
        g=integer_matrix([[0, 1]]),
    )


def unit_vector(index: int, size: int) -> Matrix:
    return integer_matrix([[int(position == index) for position in range(size)]])
