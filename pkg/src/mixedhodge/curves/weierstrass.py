"""Weierstrass zeta on C / (Z w1 + Z w2) via the q-expansion on a reduced basis."""

import cmath
import functools
import math
from dataclasses import dataclass
from typing import Final

import numpy as np

from ..errors import PoleProximityError

POLE_RADIUS: Final = 1e-12
SERIES_EXPONENT: Final = 40.0
MAX_REDUCTION_STEPS: Final = 256


@dataclass(frozen=True, slots=True)
class ComplexTorus:
    """C / (Z omega1 + Z omega2) with Im(omega2 / omega1) > 0."""

    omega1: complex
    omega2: complex

    def __post_init__(self) -> None:
        if self.omega1 == 0 or not (self.omega2 / self.omega1).imag > 0:
            msg = "lattice generators must satisfy Im(omega2 / omega1) > 0"
            raise ValueError(msg)

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    @property
    def covolume_form(self) -> complex:
        """Integral of dz ^ conj(dz) over the fundamental cell."""
        return self.omega1 * self.omega2.conjugate() - self.omega1.conjugate() * self.omega2

    def coordinates(self, z: complex) -> tuple[float, float]:
        """Return real (x, y) with z = x omega1 + y omega2."""
        return lattice_coordinates(z, self.omega1, self.omega2)


@dataclass(frozen=True, slots=True)
class QuasiPeriods:
    """eta1, eta2 with zeta(z + omega_k) = zeta(z) + eta_k."""

    eta1: complex
    eta2: complex

    def legendre_residual(self, torus: ComplexTorus) -> float:
        return abs(self.eta1 * torus.omega2 - self.eta2 * torus.omega1 - 2j * math.pi)


@dataclass(frozen=True, slots=True)
class ReducedPoint:
    """z = point + shift1 omega1 + shift2 omega2 with point in the centered cell."""

    point: complex
    shift1: int
    shift2: int


@dataclass(frozen=True, slots=True)
class _SeriesData:
    w1: complex
    w2: complex
    change: tuple[tuple[int, int], tuple[int, int]]
    nome: complex
    terms: int
    eta1: complex
    eta2: complex


def lattice_coordinates(z: complex, first: complex, second: complex) -> tuple[float, float]:
    matrix = np.array([[first.real, second.real], [first.imag, second.imag]])
    x, y = np.linalg.solve(matrix, np.array([z.real, z.imag]))
    return float(x), float(y)


def _reduce_basis(torus: ComplexTorus) -> tuple[complex, complex, tuple[tuple[int, int], tuple[int, int]]]:
    """Gauss-reduce keeping orientation; rows of the change express (w1, w2) in (omega1, omega2)."""
    w1, w2 = torus.omega1, torus.omega2
    (a, b), (c, d) = (1, 0), (0, 1)
    for _ in range(MAX_REDUCTION_STEPS):
        shift = round((w2 / w1).real)
        w2 -= shift * w1
        c, d = c - shift * a, d - shift * b
        if abs(w2) < abs(w1) * (1 - 1e-14):
            w1, w2 = w2, -w1
            (a, b), (c, d) = (c, d), (-a, -b)
            continue
        break
    return w1, w2, ((a, b), (c, d))


def _zeta_series(u: complex, w1: complex, nome: complex, terms: int, eta1: complex) -> complex:
    total = 0j
    power = 1 + 0j
    for n in range(1, terms + 1):
        power *= nome
        total += power / (1 - power) * cmath.sin(2 * math.pi * n * u)
    return eta1 * u + (math.pi / w1) * (cmath.cos(math.pi * u) / cmath.sin(math.pi * u) + 4 * total)


@functools.lru_cache(maxsize=64)
def _series_data(torus: ComplexTorus) -> _SeriesData:
    w1, w2, change = _reduce_basis(torus)
    tau = w2 / w1
    nome = cmath.exp(2j * math.pi * tau)
    terms = math.ceil(SERIES_EXPONENT / (math.pi * tau.imag)) + 1
    power = 1 + 0j
    eisenstein = 1 + 0j
    for n in range(1, terms + 1):
        power *= nome
        eisenstein -= 24 * n * power / (1 - power)
    eta1 = math.pi**2 / (3 * w1) * eisenstein
    eta2 = 2 * _zeta_series(tau / 2, w1, nome, terms, eta1)
    return _SeriesData(w1, w2, change, nome, terms, eta1, eta2)


def _centered(z: complex, first: complex, second: complex) -> tuple[complex, int, int]:
    x, y = lattice_coordinates(z, first, second)
    m, n = round(x), round(y)
    return z - m * first - n * second, m, n


def reduce_point(z: complex, torus: ComplexTorus) -> ReducedPoint:
    point, m, n = _centered(z, torus.omega1, torus.omega2)
    return ReducedPoint(point=point, shift1=m, shift2=n)


def weierstrass_zeta(z: complex, torus: ComplexTorus) -> complex:
    """Evaluate zeta(z); raises PoleProximityError within 1e-12 |w1| of a lattice point."""
    data = _series_data(torus)
    point, m, n = _centered(z, data.w1, data.w2)
    radius = POLE_RADIUS * abs(data.w1)
    if abs(point) < radius:
        raise PoleProximityError(z, radius)
    value = _zeta_series(point / data.w1, data.w1, data.nome, data.terms, data.eta1)
    return value + m * data.eta1 + n * data.eta2


def quasi_periods(torus: ComplexTorus) -> QuasiPeriods:
    """Return eta1, eta2 for the torus' own basis, transported from the reduced basis."""
    data = _series_data(torus)
    (a, b), (c, d) = data.change
    determinant = a * d - b * c
    eta1 = (d * data.eta1 - b * data.eta2) / determinant
    eta2 = (-c * data.eta1 + a * data.eta2) / determinant
    return QuasiPeriods(eta1=eta1, eta2=eta2)
