"""Degree-zero divisors on a complex torus, their third-kind periods and the eta class.

For D = sum p_i - q_i the differential xi = sum zeta(z - p_i) - zeta(z - q_i) dz
has residues +1 at p_i and -1 at q_i. Writing its cohomology class as
a dz + b conj(dz), the identity checked here is

    sum (p_i - q_i) = b * integral of dz ^ conj(dz)   modulo the lattice.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Final

import numpy as np
from scipy import integrate

from ..torus import TorusElement, TorusQuotient, complex_lattice_torus
from .cycles import DEFAULT_CLEARANCE, CycleSearchPolicy
from .weierstrass import ComplexTorus, quasi_periods, weierstrass_zeta

logger = logging.getLogger(__name__)

QUADRATURE_EPSREL: Final = 1e-10
QUADRATURE_LIMIT: Final = 200
COINCIDENCE_TOLERANCE: Final = 1e-9

type PointPair = tuple[complex, complex]


@dataclass(frozen=True, slots=True)
class DivisorZero:
    """sum p_i - q_i, stored as (p_i, q_i) pairs."""

    pairs: tuple[PointPair, ...] = ()

    @classmethod
    def from_pairs(cls, pairs: Sequence[PointPair]) -> "DivisorZero":
        return cls(tuple((complex(p), complex(q)) for p, q in pairs))

    def swapped(self) -> "DivisorZero":
        return DivisorZero(tuple((q, p) for p, q in self.pairs))

    def difference_sum(self) -> complex:
        return sum((p - q for p, q in self.pairs), 0j)


def _congruent(first: complex, second: complex, torus: ComplexTorus) -> bool:
    x, y = torus.coordinates(first - second)
    return abs(x - round(x)) < COINCIDENCE_TOLERANCE and abs(y - round(y)) < COINCIDENCE_TOLERANCE


def effective_pairs(divisor: DivisorZero, torus: ComplexTorus) -> tuple[PointPair, ...]:
    """Drop pairs whose two points coincide modulo the lattice."""
    return tuple((p, q) for p, q in divisor.pairs if not _congruent(p, q, torus))


def require_disjoint_support(divisor: DivisorZero, torus: ComplexTorus) -> tuple[PointPair, ...]:
    pairs = effective_pairs(divisor, torus)
    points = [point for pair in pairs for point in pair]
    for index, first in enumerate(points):
        for second in points[index + 1 :]:
            if _congruent(first, second, torus):
                msg = f"divisor points {first!r} and {second!r} coincide modulo the lattice"
                raise ValueError(msg)
    return pairs


def lattice_torus(torus: ComplexTorus) -> TorusQuotient:
    return complex_lattice_torus((torus.omega1, torus.omega2), "C/Lambda")


def aj_direct(divisor: DivisorZero, torus: ComplexTorus) -> TorusElement:
    """Return sum (p_i - q_i) reduced into the fundamental cell of the lattice."""
    value = divisor.difference_sum()
    return lattice_torus(torus).element(np.array([value])).canonical_form()


def closed_form_periods(divisor: DivisorZero, torus: ComplexTorus) -> tuple[complex, complex]:
    """Return eta_k * sum (q_i - p_i), which the cycle periods match modulo 2 pi i."""
    eta = quasi_periods(torus)
    total = -divisor.difference_sum()
    return eta.eta1 * total, eta.eta2 * total


def find_cycle_base_point(
    divisor: DivisorZero,
    torus: ComplexTorus,
    *,
    seed: int = 0,
    clearance: float = DEFAULT_CLEARANCE,
) -> complex:
    poles = [point for pair in require_disjoint_support(divisor, torus) for point in pair]
    return CycleSearchPolicy(seed=seed, clearance=clearance).execute(poles, torus)


def _differential(pairs: tuple[PointPair, ...], torus: ComplexTorus, z: complex) -> complex:
    return sum(
        (weierstrass_zeta(z - p, torus) - weierstrass_zeta(z - q, torus) for p, q in pairs),
        0j,
    )


def _segment_integral(pairs: tuple[PointPair, ...], torus: ComplexTorus, start: complex, step: complex) -> complex:
    def real(t: float) -> float:
        return _differential(pairs, torus, start + t * step).real

    def imaginary(t: float) -> float:
        return _differential(pairs, torus, start + t * step).imag

    options = {"epsabs": 0.0, "epsrel": QUADRATURE_EPSREL, "limit": QUADRATURE_LIMIT}
    real_value, _ = integrate.quad(real, 0.0, 1.0, **options)
    imaginary_value, _ = integrate.quad(imaginary, 0.0, 1.0, **options)
    return step * complex(real_value, imaginary_value)


def third_kind_periods(
    divisor: DivisorZero,
    torus: ComplexTorus,
    *,
    seed: int = 0,
    clearance: float = DEFAULT_CLEARANCE,
) -> tuple[complex, complex]:
    """Integrate xi along z0 -> z0 + omega1 and z0 -> z0 + omega2 by adaptive quadrature."""
    pairs = require_disjoint_support(divisor, torus)
    if not pairs:
        return 0j, 0j
    base = find_cycle_base_point(divisor, torus, seed=seed, clearance=clearance)
    first = _segment_integral(pairs, torus, base, torus.omega1)
    second = _segment_integral(pairs, torus, base, torus.omega2)
    logger.log(logging.DEBUG, "third-kind periods from base %s: %s, %s", base, first, second)
    return first, second


def eta_class_torus(torus: ComplexTorus) -> TorusQuotient:
    """Torus of b coefficients, modulo the b parts of integral classes."""
    delta = torus.omega1.conjugate() * torus.omega2 - torus.omega2.conjugate() * torus.omega1
    return complex_lattice_torus((torus.omega2 / delta, -torus.omega1 / delta), "b-coefficients")


def solve_eta_coefficients(periods: tuple[complex, complex], torus: ComplexTorus) -> tuple[complex, complex]:
    """Solve a omega_k + b conj(omega_k) = period_k / (2 pi i) for (a, b)."""
    system = np.array(
        [
            [torus.omega1, torus.omega1.conjugate()],
            [torus.omega2, torus.omega2.conjugate()],
        ],
    )
    rhs = np.array(periods, dtype=complex) / (2j * math.pi)
    a, b = np.linalg.solve(system, rhs)
    return complex(a), complex(b)


def eta_class(
    divisor: DivisorZero,
    torus: ComplexTorus,
    *,
    periods: tuple[complex, complex] | None = None,
    seed: int = 0,
    clearance: float = DEFAULT_CLEARANCE,
) -> TorusElement:
    """Return the class of b in the torus of b coefficients."""
    values = periods if periods is not None else third_kind_periods(divisor, torus, seed=seed, clearance=clearance)
    _, b = solve_eta_coefficients(values, torus)
    return eta_class_torus(torus).element(np.array([b]))


@dataclass(frozen=True, slots=True)
class CurveIdentityReport:
    lhs: complex
    rhs: complex
    lattice_point: complex
    residual: float
    periods: tuple[complex, complex]
    closed_form: tuple[complex, complex]
    eta_coefficient: complex

    def period_mismatch(self) -> float:
        """Largest distance of (period - closed form) / (2 pi i) to an integer."""
        mismatches = []
        for period, expected in zip(self.periods, self.closed_form, strict=True):
            ratio = (period - expected) / (2j * math.pi)
            mismatches.append(abs(ratio - round(ratio.real)))
        return max(mismatches)


def verify_curve_identity(
    divisor: DivisorZero,
    torus: ComplexTorus,
    *,
    seed: int = 0,
    clearance: float = DEFAULT_CLEARANCE,
) -> CurveIdentityReport:
    """Compare sum (p_i - q_i) with b times the integral of dz ^ conj(dz) modulo the lattice."""
    periods = third_kind_periods(divisor, torus, seed=seed, clearance=clearance)
    _, b = solve_eta_coefficients(periods, torus)
    lhs = divisor.difference_sum()
    rhs = b * torus.covolume_form
    x, y = torus.coordinates(lhs - rhs)
    lattice_point = round(x) * torus.omega1 + round(y) * torus.omega2
    return CurveIdentityReport(
        lhs=lhs,
        rhs=rhs,
        lattice_point=lattice_point,
        residual=abs(lhs - rhs - lattice_point),
        periods=periods,
        closed_form=closed_form_periods(divisor, torus),
        eta_coefficient=b,
    )


def extension_splits(
    divisor: DivisorZero,
    torus: ComplexTorus,
    *,
    seed: int = 0,
    clearance: float = DEFAULT_CLEARANCE,
) -> bool:
    """True when the eta class vanishes, which happens exactly when aj_direct(D) is zero."""
    return eta_class(divisor, torus, seed=seed, clearance=clearance).is_zero()
