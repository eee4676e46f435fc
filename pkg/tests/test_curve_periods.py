import numpy as np
import pytest

from mixedhodge.curves import (
    ComplexTorus,
    DivisorZero,
    aj_direct,
    closed_form_periods,
    eta_class,
    extension_splits,
    find_cycle_base_point,
    third_kind_periods,
    verify_curve_identity,
)
from mixedhodge.curves.cycles import CycleSearchPolicy, cycle_clearance
from mixedhodge.curves.periods import effective_pairs, require_disjoint_support
from mixedhodge.curves.sampling import random_divisor, random_torus
from mixedhodge.errors import CycleSearchError
from tests.curve_helpers import TWO_PI_I, distance_to_lattice, hexagonal_torus, single_pair_divisor, square_torus

BALANCED = DivisorZero.from_pairs([(0.3 + 0.2j, 0.1 + 0.1j), (0.4 + 0.6j, 0.6 + 0.7j)])
TWO_PAIRS = DivisorZero.from_pairs([(0.15 + 0.35j, 0.55 + 0.1j), (0.8 + 0.45j, 0.3 + 0.75j)])


def test_aj_direct_reduces_difference_sum() -> None:
    # When
    element = aj_direct(DivisorZero.from_pairs([(2.3 + 0.2j, 0j + 0.5)]), square_torus())

    # Then
    assert element.representative[0] == pytest.approx(0.8 + 0.2j, abs=1e-12)
    assert not element.is_zero()


def test_aj_direct_of_empty_divisor_is_zero() -> None:
    # When / Then
    assert aj_direct(DivisorZero(), square_torus()).is_zero()
    assert aj_direct(BALANCED, square_torus()).is_zero()


def test_swapping_points_negates_aj_direct() -> None:
    # Given
    torus = hexagonal_torus()

    # When
    forward = aj_direct(TWO_PAIRS, torus)
    backward = aj_direct(TWO_PAIRS.swapped(), torus)

    # Then
    assert (forward + backward).is_zero()


@pytest.mark.parametrize("torus", [square_torus(), hexagonal_torus()], ids=["square", "hexagonal"])
@pytest.mark.parametrize("divisor", [single_pair_divisor(), TWO_PAIRS], ids=["one-pair", "two-pairs"])
def test_quadrature_periods_match_closed_form(torus: ComplexTorus, divisor: DivisorZero) -> None:
    # When
    periods = third_kind_periods(divisor, torus, seed=4)
    expected = closed_form_periods(divisor, torus)

    # Then
    for period, closed in zip(periods, expected, strict=True):
        assert distance_to_lattice(period - closed, TWO_PI_I) < 1e-8


@pytest.mark.parametrize("torus", [square_torus(), hexagonal_torus()], ids=["square", "hexagonal"])
@pytest.mark.parametrize("divisor", [single_pair_divisor(), TWO_PAIRS, BALANCED], ids=["one", "two", "balanced"])
def test_curve_identity_holds(torus: ComplexTorus, divisor: DivisorZero) -> None:
    # When
    report = verify_curve_identity(divisor, torus, seed=1)

    # Then
    assert report.residual < 1e-7
    assert report.period_mismatch() < 1e-8


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_curve_identity_on_random_tori(seed: int) -> None:
    # Given
    rng = np.random.default_rng(seed)
    torus = random_torus(rng)
    divisor = random_divisor(rng, torus)

    # When
    report = verify_curve_identity(divisor, torus, seed=seed)

    # Then
    assert report.residual < 1e-7


def test_eta_class_ignores_lattice_shifts_of_points() -> None:
    # Given
    torus = square_torus()
    shifted = DivisorZero.from_pairs([(0.3 + 0.2j + 1 + 1j, 0j + 0.5)])
    original = DivisorZero.from_pairs([(0.3 + 0.2j, 0j + 0.5)])

    # When / Then
    assert eta_class(shifted, torus, seed=2) == eta_class(original, torus, seed=2)


@pytest.mark.parametrize(("divisor", "expected"), [(BALANCED, True), (single_pair_divisor(), False)])
def test_extension_splits_exactly_when_aj_vanishes(divisor: DivisorZero, expected: bool) -> None:
    # Given
    torus = square_torus()

    # When / Then
    assert extension_splits(divisor, torus) is expected
    assert aj_direct(divisor, torus).is_zero() is expected


def test_congruent_pairs_are_dropped() -> None:
    # Given
    divisor = DivisorZero.from_pairs([(0.2 + 0.1j, 1.2 + 0.1j)])

    # When / Then
    assert effective_pairs(divisor, square_torus()) == ()
    assert third_kind_periods(divisor, square_torus()) == (0j, 0j)


def test_divisor_points_must_be_distinct_modulo_lattice() -> None:
    # Given
    divisor = DivisorZero.from_pairs([(0.1 + 0j, 0.2 + 0j), (1.1 + 0j, 0.5 + 0j)])

    # When / Then
    with pytest.raises(ValueError, match="coincide modulo the lattice"):
        require_disjoint_support(divisor, square_torus())


def test_cycle_search_fails_when_no_base_point_clears_poles() -> None:
    # Given
    divisor = DivisorZero.from_pairs([(0j, 0.5 + 0.5j)])

    # When / Then
    with pytest.raises(CycleSearchError) as raised:
        find_cycle_base_point(divisor, square_torus(), clearance=0.3)
    assert raised.value.clearance == 0.3


def test_cycle_search_reports_each_rejected_base_point() -> None:
    # Given
    rejected: list[tuple[int, float]] = []
    policy = CycleSearchPolicy(clearance=0.3, max_attempts=5, on_retry=lambda attempt, clearance: rejected.append((attempt, clearance)))

    # When / Then
    with pytest.raises(CycleSearchError):
        policy.execute([0j, 0.5 + 0.5j], square_torus())
    assert [attempt for attempt, _ in rejected] == [1, 2, 3, 4, 5]
    assert all(clearance < 0.3 for _, clearance in rejected)


def test_cycle_base_point_clears_every_pole() -> None:
    # Given
    torus = hexagonal_torus()
    poles = [point for pair in TWO_PAIRS.pairs for point in pair]

    # When
    base = find_cycle_base_point(TWO_PAIRS, torus, seed=9, clearance=0.05)

    # Then
    assert cycle_clearance(base, poles, torus) >= 0.05
    assert cycle_clearance(base, [], torus) == 0.5


def test_random_divisor_respects_pair_count() -> None:
    # Given
    rng = np.random.default_rng(11)
    torus = random_torus(rng)

    # When
    divisor = random_divisor(rng, torus, pair_count=2)

    # Then
    assert len(divisor.pairs) == 2
    assert len(require_disjoint_support(divisor, torus)) == 2
