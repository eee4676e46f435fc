"""Quotients V / (L + K) of a complex vector space by a lattice and a subspace.

The same type models the real torus A_R/A_Z, the complex torus
J0Hom(B, A) = Hom / (F0Hom + Hom_Z), the curve torus C/Lambda and the
scalar period quotients R/dZ. Coordinates are taken in a real basis made of
the lattice generators, a real basis of the kernel and standard vectors
completing them.
"""

import math
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Final

import numpy as np

from .errors import DimensionMismatchError, NonIntegralMatrixError
from .linalg import (
    Matrix,
    Subspace,
    as_backend,
    freeze,
    hstack,
    identity,
    imag_part,
    inverse,
    real_part,
    rref,
    zeros,
)
from .scalars import I, Backend, GaussianRational, fractional_part

DEFAULT_TORUS_TOLERANCE: Final = 1e-7

_torus_tolerance: ContextVar[float] = ContextVar(
    "torus_tolerance",
    default=DEFAULT_TORUS_TOLERANCE,
)


def torus_tolerance() -> float:
    return _torus_tolerance.get()


@contextmanager
def use_torus_tolerance(tolerance: float) -> Iterator[None]:
    """Scope the distance to the lattice below which float torus elements count as zero."""
    if not tolerance > 0:
        msg = "torus tolerance must be positive"
        raise ValueError(msg)
    token = _torus_tolerance.set(tolerance)
    try:
        yield
    finally:
        _torus_tolerance.reset(token)


def _realify(columns: Matrix) -> Matrix:
    return np.vstack([real_part(columns), imag_part(columns)])


def _complexify(columns: Matrix, ambient: int) -> Matrix:
    top, bottom = columns[:ambient], columns[ambient:]
    if columns.dtype == object:
        return top + bottom * I
    return top + 1j * bottom


@dataclass(frozen=True, slots=True, eq=False)
class TorusQuotient:
    label: str
    shape: tuple[int, ...]
    lattice: Matrix
    backend: Backend
    kernel: Subspace | None = None
    tolerance: float = field(default_factory=torus_tolerance)
    _basis: Matrix = field(init=False, repr=False)
    _coordinates: Matrix = field(init=False, repr=False)

    def __post_init__(self) -> None:
        ambient = self.ambient
        if self.lattice.shape[0] != ambient:
            raise DimensionMismatchError(self.label, self.lattice.shape[0], ambient)
        lattice = as_backend(self.lattice, self.backend)
        kernel_columns = zeros(ambient, 0, self.backend)
        if self.kernel is not None and not self.kernel.is_zero():
            kernel_columns = np.hstack([self.kernel.basis, self.kernel.basis * self._unit()])
        spanning = hstack(
            [_realify(lattice), _realify(kernel_columns), identity(2 * ambient, self.backend)],
            2 * ambient,
            self.backend,
        )
        _, pivots = rref(spanning)
        fixed = self.lattice_rank + self.kernel_rank
        if tuple(pivots[:fixed]) != tuple(range(fixed)):
            msg = f"{self.label}: lattice generators and kernel are not independent over R"
            raise ValueError(msg)
        basis = spanning[:, list(pivots)]
        object.__setattr__(self, "_basis", freeze(basis))
        object.__setattr__(self, "_coordinates", freeze(inverse(basis)))

    def _unit(self) -> GaussianRational | complex:
        return I if self.backend is Backend.EXACT else 1j

    @property
    def ambient(self) -> int:
        return math.prod(self.shape)

    @property
    def lattice_rank(self) -> int:
        return int(self.lattice.shape[1])

    @property
    def kernel_rank(self) -> int:
        return 0 if self.kernel is None else 2 * self.kernel.dim

    def coordinates(self, representative: Matrix) -> tuple[Matrix, Matrix]:
        """Return (lattice coordinates, free coordinates); kernel coordinates are dropped."""
        if representative.shape != self.shape:
            raise DimensionMismatchError(self.label, representative.size, self.ambient)
        flat = as_backend(representative.reshape(-1, 1), self.backend)
        values = (self._coordinates @ _realify(flat)).reshape(-1)
        lattice_part = values[: self.lattice_rank]
        free_part = values[self.lattice_rank + self.kernel_rank :]
        if self.backend is Backend.FLOAT:
            return lattice_part.real, free_part.real
        return _exact_reals(lattice_part), _exact_reals(free_part)

    def element(self, representative: Matrix) -> "TorusElement":
        return TorusElement(self, as_backend(np.asarray(representative).reshape(self.shape), self.backend))

    def matches(self, other: "TorusQuotient") -> bool:
        if self is other:
            return True
        if (self.label, self.shape, self.backend) != (other.label, other.shape, other.backend):
            return False
        if self.lattice.shape != other.lattice.shape or self.kernel != other.kernel:
            return False
        if self.backend is Backend.EXACT:
            return bool(np.array_equal(as_backend(self.lattice, self.backend), as_backend(other.lattice, other.backend)))
        return bool(np.allclose(self.lattice, other.lattice, atol=self.tolerance))

    def rebuild(self, lattice_coordinates: Matrix, free_coordinates: Matrix) -> Matrix:
        kernel_zeros = zeros(self.kernel_rank, 1, self.backend).reshape(-1)
        if self.backend is Backend.EXACT:
            stacked = np.concatenate([lattice_coordinates, kernel_zeros, free_coordinates]).astype(object)
        else:
            stacked = np.concatenate([lattice_coordinates, kernel_zeros.real, free_coordinates]).astype(complex)
        real_vector = self._basis @ stacked.reshape(-1, 1)
        return _complexify(real_vector, self.ambient).reshape(self.shape)


def _exact_reals(values: Matrix) -> Matrix:
    result = np.empty(values.shape, dtype=object)
    for index, value in enumerate(values):
        result[index] = GaussianRational.coerce(value).real
    return result


@dataclass(frozen=True, slots=True, eq=False)
class TorusElement:
    quotient: TorusQuotient
    representative: Matrix
    canonical: bool = False

    def coordinates(self) -> tuple[Matrix, Matrix]:
        return self.quotient.coordinates(self.representative)

    def canonical_form(self) -> "TorusElement":
        """Return the representative with lattice coordinates in [0, 1) and no kernel part."""
        if self.canonical:
            return self
        lattice_coordinates, free_coordinates = self.coordinates()
        if self.quotient.backend is Backend.EXACT:
            reduced = np.array(
                [GaussianRational(fractional_part(value)) for value in lattice_coordinates],
                dtype=object,
            ).reshape(-1)
            free = np.array([GaussianRational(value) for value in free_coordinates], dtype=object).reshape(-1)
        else:
            reduced = lattice_coordinates - np.floor(lattice_coordinates)
            reduced[np.isclose(reduced, 1.0, rtol=0.0, atol=self.quotient.tolerance)] = 0.0
            free = free_coordinates
        representative = freeze(self.quotient.rebuild(reduced, free))
        return TorusElement(self.quotient, representative, canonical=True)

    def is_zero(self) -> bool:
        lattice_coordinates, free_coordinates = self.coordinates()
        if self.quotient.backend is Backend.EXACT:
            return all(value == 0 for value in free_coordinates) and all(
                value.denominator == 1 for value in lattice_coordinates
            )
        tolerance = self.quotient.tolerance
        return bool(
            np.all(np.abs(free_coordinates) <= tolerance)
            and np.all(np.abs(lattice_coordinates - np.round(lattice_coordinates)) <= tolerance),
        )

    def _require_same_quotient(self, other: "TorusElement") -> None:
        if not self.quotient.matches(other.quotient):
            msg = f"cannot combine elements of {self.quotient.label} and {other.quotient.label}"
            raise ValueError(msg)

    def __add__(self, other: "TorusElement") -> "TorusElement":
        self._require_same_quotient(other)
        return TorusElement(self.quotient, self.representative + other.representative)

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        self._require_same_quotient(other)
        return TorusElement(self.quotient, self.representative - other.representative)

    def __neg__(self) -> "TorusElement":
        return TorusElement(self.quotient, -self.representative)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        if not self.quotient.matches(other.quotient):
            return False
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"TorusElement({self.quotient.label}, canonical={self.canonical})"


def real_torus(rank: int, backend: Backend = Backend.EXACT, *, label: str = "A_R/A_Z") -> TorusQuotient:
    """Return R^rank / Z^rank inside C^rank; imaginary parts are free coordinates."""
    return TorusQuotient(label=label, shape=(rank,), lattice=identity(rank, backend), backend=backend)


def period_torus(period: int | float, backend: Backend = Backend.EXACT) -> TorusQuotient:
    """Return R / period Z, or R itself when the period is zero."""
    if period == 0:
        lattice = zeros(1, 0, backend)
    elif backend is Backend.EXACT:
        if period != int(period):
            msg = f"exact period must be an integer, got {period!r}"
            raise NonIntegralMatrixError(msg)
        lattice = np.array([[GaussianRational(int(period))]], dtype=object)
    else:
        lattice = np.array([[complex(period)]], dtype=complex)
    return TorusQuotient(label="R/periods", shape=(1,), lattice=lattice, backend=backend)


def complex_lattice_torus(generators: tuple[complex, ...], label: str, tolerance: float | None = None) -> TorusQuotient:
    lattice = np.array([list(generators)], dtype=complex)
    return TorusQuotient(
        label=label,
        shape=(1,),
        lattice=lattice,
        backend=Backend.FLOAT,
        tolerance=torus_tolerance() if tolerance is None else tolerance,
    )
