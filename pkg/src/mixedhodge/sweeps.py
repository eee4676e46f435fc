"""Seeded verification trials, optionally fanned out over a process pool.

Trial functions are module-level so that they pickle; each one re-enters
the tolerance scopes it was given because context variables do not cross
process boundaries.
"""

import functools
import logging
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from contextlib import ExitStack, contextmanager
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
from numpy.random import Generator

from .curves import (
    ComplexTorus,
    DivisorZero,
    aj_direct,
    eta_class,
    quasi_periods,
    verify_curve_identity,
)
from .curves.sampling import random_divisor, random_torus
from .documents import scalar_payload, torus_element_payload
from .duality import SequencePairing, basis_residuals
from .generators import GeneratorSpec, random_extension_spec, random_paired_instance
from .linalg import Matrix, integer_matrix, use_rank_tolerance
from .torus import use_torus_tolerance

logger = logging.getLogger(__name__)

PERIOD_TOLERANCE: Final = 1e-8
LEGENDRE_TOLERANCE: Final = 1e-10
ADJUSTMENT_BOUND: Final = 3


@dataclass(frozen=True, slots=True)
class TrialOutcome:
    index: int
    passed: bool
    report: dict[str, Any]


@contextmanager
def tolerance_scope(tol_rank: float | None, tol_torus: float | None) -> Iterator[None]:
    with ExitStack() as stack:
        if tol_rank is not None:
            stack.enter_context(use_rank_tolerance(tol_rank))
        if tol_torus is not None:
            stack.enter_context(use_torus_tolerance(tol_torus))
        yield


def run_trials(
    trial: Callable[[int], TrialOutcome],
    indices: Sequence[int],
    workers: int = 1,
) -> list[TrialOutcome]:
    """Evaluate trial on every index; results keep index order regardless of completion order."""
    if workers <= 1 or len(indices) <= 1:
        outcomes = [trial(index) for index in indices]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(trial, indices))
    for outcome in outcomes:
        logger.log(logging.DEBUG, "trial %d passed=%s", outcome.index, outcome.passed)
    return outcomes


def _adjustment(rng: Generator, rows: int, columns: int) -> Matrix:
    values = rng.integers(-ADJUSTMENT_BOUND, ADJUSTMENT_BOUND + 1, size=(rows, columns))
    return integer_matrix([[int(value) for value in row] for row in values], columns=columns)


def identity_outcome(index: int, pairing: SequencePairing, rng: Generator | None = None) -> TrialOutcome:
    """Check the pairing identity on all basis pairs; rng draws independent integral sections."""
    adjustments: dict[str, Matrix] = {}
    if rng is not None:
        sequence, partner = pairing.sequence, pairing.partner
        adjustments = {
            "section_adjustment": _adjustment(rng, sequence.A.rank, sequence.B.rank),
            "partner_adjustment": _adjustment(rng, partner.A.rank, partner.B.rank),
            "second_adjustment": _adjustment(rng, partner.A.rank, partner.B.rank),
        }
    residuals = basis_residuals(pairing, **adjustments)
    nonzero = [[i, j] for (i, j), residual in residuals if not residual.is_zero()]
    report = {
        "trial": index,
        "checks": len(residuals),
        "nonzero": nonzero,
        "residuals": [
            {"omega": i, "alpha": j, **torus_element_payload(residual)} for (i, j), residual in residuals
        ],
    }
    return TrialOutcome(index=index, passed=not nonzero, report=report)


def identity_trial(
    index: int,
    *,
    spec: GeneratorSpec,
    tol_rank: float | None = None,
    vary_hodge_numbers: bool = False,
) -> TrialOutcome:
    seed = spec.seed + index
    trial_spec = spec.with_seed(seed)
    if vary_hodge_numbers:
        trial_spec = random_extension_spec(trial_spec)
    with tolerance_scope(tol_rank, None):
        pairing = random_paired_instance(trial_spec)
        outcome = identity_outcome(index, pairing, np.random.default_rng([seed, 3]))
    ranks = {"rank_a": pairing.sequence.A.rank, "rank_b": pairing.sequence.B.rank}
    return TrialOutcome(outcome.index, outcome.passed, {**outcome.report, "seed": seed, **ranks})


def curve_outcome(
    index: int,
    divisor: DivisorZero,
    torus: ComplexTorus,
    *,
    seed: int = 0,
    clearance: float = 0.05,
) -> TrialOutcome:
    identity = verify_curve_identity(divisor, torus, seed=seed, clearance=clearance)
    legendre = quasi_periods(torus).legendre_residual(torus)
    mismatch = identity.period_mismatch()
    direct = aj_direct(divisor, torus)
    eta = eta_class(divisor, torus, periods=identity.periods)
    tolerance = direct.quotient.tolerance
    passed = (
        identity.residual < tolerance
        and mismatch < PERIOD_TOLERANCE
        and legendre < LEGENDRE_TOLERANCE
        and direct.is_zero() == eta.is_zero()
    )
    report = {
        "trial": index,
        "omega1": scalar_payload(torus.omega1),
        "omega2": scalar_payload(torus.omega2),
        "pairs": [[scalar_payload(p), scalar_payload(q)] for p, q in divisor.pairs],
        "lhs": scalar_payload(identity.lhs),
        "rhs": scalar_payload(identity.rhs),
        "lattice_point": scalar_payload(identity.lattice_point),
        "residual": identity.residual,
        "periods": [scalar_payload(value) for value in identity.periods],
        "closed_form_periods": [scalar_payload(value) for value in identity.closed_form],
        "period_mismatch": mismatch,
        "legendre_residual": legendre,
        "eta_coefficient": scalar_payload(identity.eta_coefficient),
        "aj_direct": torus_element_payload(direct),
        "splits": eta.is_zero(),
    }
    return TrialOutcome(index=index, passed=passed, report=report)


def curve_trial(
    index: int,
    *,
    seed: int,
    divisors_per_torus: int,
    clearance: float,
    tol_torus: float | None = None,
) -> TrialOutcome:
    """Trial index runs divisor index % divisors_per_torus on torus index // divisors_per_torus."""
    torus_index, divisor_index = divmod(index, divisors_per_torus)
    trial_seed = seed + index
    with tolerance_scope(None, tol_torus):
        torus = random_torus(np.random.default_rng([seed, torus_index]))
        divisor = random_divisor(np.random.default_rng([seed, torus_index, divisor_index]), torus)
        outcome = curve_outcome(index, divisor, torus, seed=trial_seed, clearance=clearance)
    placement = {"torus_index": torus_index, "divisor_index": divisor_index, "seed": trial_seed}
    return TrialOutcome(outcome.index, outcome.passed, {**outcome.report, **placement})


def identity_sweep(
    spec: GeneratorSpec,
    trials: int,
    *,
    workers: int = 1,
    tol_rank: float | None = None,
    vary_hodge_numbers: bool = False,
) -> list[TrialOutcome]:
    trial = functools.partial(
        identity_trial,
        spec=spec,
        tol_rank=tol_rank,
        vary_hodge_numbers=vary_hodge_numbers,
    )
    return run_trials(trial, range(trials), workers)


def curve_sweep(
    seed: int,
    tori: int,
    divisors_per_torus: int,
    *,
    workers: int = 1,
    clearance: float = 0.05,
    tol_torus: float | None = None,
) -> list[TrialOutcome]:
    """Draw tori random tori and check divisors_per_torus random divisors on each."""
    trial = functools.partial(
        curve_trial,
        seed=seed,
        divisors_per_torus=divisors_per_torus,
        clearance=clearance,
        tol_torus=tol_torus,
    )
    return run_trials(trial, range(tori * divisors_per_torus), workers)
