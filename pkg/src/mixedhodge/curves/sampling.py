"""Seeded random tori and divisors for the curve sweeps."""

import math
from typing import Final

from numpy.random import Generator

from ..errors import InternalConsistencyError
from .periods import DivisorZero
from .weierstrass import ComplexTorus

MIN_POINT_SEPARATION: Final = 0.1
MAX_DIVISOR_DRAWS: Final = 100


def random_torus(rng: Generator) -> ComplexTorus:
    scale = float(rng.uniform(0.5, 2.0))
    angle = float(rng.uniform(0.0, 2 * math.pi))
    tau = complex(float(rng.uniform(-1.0, 1.0)), float(rng.uniform(0.6, 2.0)))
    omega1 = scale * complex(math.cos(angle), math.sin(angle))
    return ComplexTorus(omega1=omega1, omega2=omega1 * tau)


def _separated(points: list[tuple[float, float]]) -> bool:
    for index, (x1, y1) in enumerate(points):
        for x2, y2 in points[index + 1 :]:
            dx, dy = x1 - x2, y1 - y2
            if max(abs(dx - round(dx)), abs(dy - round(dy))) < MIN_POINT_SEPARATION:
                return False
    return True


def random_divisor(rng: Generator, torus: ComplexTorus, pair_count: int | None = None) -> DivisorZero:
    """Draw 1 to 3 pairs of points whose lattice coordinates are pairwise separated."""
    count = pair_count if pair_count is not None else int(rng.integers(1, 4))
    for _ in range(MAX_DIVISOR_DRAWS):
        coordinates = [(float(x), float(y)) for x, y in rng.random((2 * count, 2))]
        if _separated(coordinates):
            points = [x * torus.omega1 + y * torus.omega2 for x, y in coordinates]
            return DivisorZero.from_pairs(list(zip(points[::2], points[1::2], strict=True)))
    msg = f"no separated divisor with {count} pairs drawn in {MAX_DIVISOR_DRAWS} attempts"
    raise InternalConsistencyError(msg)
