"""Pole-avoiding base points for the straight cycles z0 -> z0 + omega_k."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Final, Protocol

import numpy as np

from ..errors import CycleSearchError
from .weierstrass import ComplexTorus

logger = logging.getLogger(__name__)

DEFAULT_CLEARANCE: Final = 0.05
MAX_CYCLE_ATTEMPTS: Final = 256


class CycleRetryLogger(Protocol):
    """Report a rejected base point and the clearance it achieved."""

    def __call__(self, attempt: int, clearance: float) -> None: ...


def _distance_to_integer(value: float) -> float:
    return abs(value - round(value))


def cycle_clearance(base: complex, poles: Sequence[complex], torus: ComplexTorus) -> float:
    """Smallest distance, in lattice units, from either cycle through base to a pole class.

    The cycle along omega1 meets the class of p exactly when the omega2
    coordinates of p and base agree modulo 1, and symmetrically for omega2.
    """
    if not poles:
        return 0.5
    x0, y0 = torus.coordinates(base)
    distances = []
    for pole in poles:
        x, y = torus.coordinates(pole)
        distances.append(_distance_to_integer(y - y0))
        distances.append(_distance_to_integer(x - x0))
    return min(distances)


def _log_retry(attempt: int, clearance: float) -> None:
    logger.log(logging.DEBUG, "cycle base point %d rejected (clearance %.4f)", attempt, clearance)


@dataclass(frozen=True, slots=True)
class CycleSearchPolicy:
    """Draw base points from a seeded generator until both cycles clear every pole."""

    seed: int = 0
    clearance: float = DEFAULT_CLEARANCE
    max_attempts: int = MAX_CYCLE_ATTEMPTS
    on_retry: CycleRetryLogger = _log_retry

    def execute(self, poles: Sequence[complex], torus: ComplexTorus) -> complex:
        rng = np.random.default_rng(self.seed)
        for attempt in range(1, self.max_attempts + 1):
            x, y = rng.random(2)
            base = complex(x * torus.omega1 + y * torus.omega2)
            achieved = cycle_clearance(base, poles, torus)
            if achieved >= self.clearance:
                return base
            self.on_retry(attempt, achieved)
        raise CycleSearchError(self.max_attempts, self.clearance)
