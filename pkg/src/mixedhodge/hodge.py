"""Mixed Hodge structures on Z^n and the operations that only need the filtrations."""

import functools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Self

import numpy as np

from .errors import DimensionMismatchError, InvalidStructureError
from .linalg import (
    Matrix,
    Subspace,
    annihilator,
    conjugate_subspace,
    hstack,
    image,
    intersect,
    span,
    subspace_sum,
    zeros,
)
from .scalars import Backend
from .smith import is_unimodular

type Bidegree = tuple[int, int]
type FiltrationStep = tuple[int, Subspace]


@dataclass(frozen=True, slots=True)
class ValidationReport:
    failures: tuple[str, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.failures

    def prefixed(self, prefix: str) -> "ValidationReport":
        return ValidationReport(tuple(f"{prefix}: {failure}" for failure in self.failures))

    def __add__(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.failures + other.failures)


@dataclass(frozen=True, slots=True)
class HodgeNumbers:
    """Nonzero h^{p,q} values, sorted by bidegree."""

    counts: tuple[tuple[Bidegree, int], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[Bidegree, int]) -> Self:
        for bidegree, count in mapping.items():
            if count < 0:
                msg = f"negative Hodge number at {bidegree}"
                raise ValueError(msg)
        return cls(tuple(sorted((key, value) for key, value in mapping.items() if value > 0)))

    def __getitem__(self, bidegree: Bidegree) -> int:
        return dict(self.counts).get(bidegree, 0)

    @property
    def total(self) -> int:
        return sum(count for _, count in self.counts)

    def as_dict(self) -> dict[Bidegree, int]:
        return dict(self.counts)

    def weights(self) -> tuple[int, ...]:
        return tuple(sorted({p + q for (p, q), _ in self.counts}))

    def is_conjugate_symmetric(self) -> bool:
        return all(self[(q, p)] == count for (p, q), count in self.counts)

    def negated(self) -> "HodgeNumbers":
        return HodgeNumbers.from_mapping({(-p, -q): count for (p, q), count in self.counts})


@dataclass(frozen=True, slots=True)
class MixedHodgeStructure:
    """An integral lattice Z^rank with sparse weight and Hodge filtrations.

    `weights` lists (k, W_k) ascending: W_j is the last listed space with
    index <= j, and 0 below the first entry. `hodge` lists (p, F^p)
    descending: F^j is the listed space with the smallest index >= j, and
    0 above the first entry.
    """

    rank: int
    weights: tuple[FiltrationStep, ...]
    hodge: tuple[FiltrationStep, ...]
    backend: Backend = Backend.EXACT

    @classmethod
    def create(
        cls,
        rank: int,
        weights: Iterable[FiltrationStep],
        hodge: Iterable[FiltrationStep],
        backend: Backend = Backend.EXACT,
    ) -> Self:
        """Build a structure with redundant and zero filtration entries dropped."""
        return cls(
            rank=rank,
            weights=_normalized(sorted(weights, key=lambda step: step[0])),
            hodge=_normalized(sorted(hodge, key=lambda step: -step[0])),
            backend=backend,
        )

    def zero_space(self) -> Subspace:
        return Subspace.zero(self.rank, self.backend)

    def full_space(self) -> Subspace:
        return Subspace.full(self.rank, self.backend)

    def weight_space(self, k: int) -> Subspace:
        result = self.zero_space()
        for index, space in self.weights:
            if index <= k:
                result = space
        return result

    def hodge_space(self, p: int) -> Subspace:
        result = self.zero_space()
        for index, space in self.hodge:
            if index >= p:
                result = space
        return result

    @property
    def weight_levels(self) -> tuple[int, ...]:
        """Indices k with Gr^W_k nonzero."""
        return tuple(
            index
            for index, space in self.weights
            if space.dim > self.weight_space(index - 1).dim
        )

    @property
    def hodge_bounds(self) -> tuple[int, int]:
        """(lowest, highest) listed Hodge index; F^lowest = C^n and F^(highest+1) = 0."""
        if not self.hodge:
            return (0, -1)
        return (self.hodge[-1][0], self.hodge[0][0])

    @property
    def is_pure(self) -> bool:
        return len(self.weight_levels) == 1

    @property
    def weight(self) -> int:
        levels = self.weight_levels
        if len(levels) != 1:
            msg = f"structure has weights {levels}, not a single weight"
            raise ValueError(msg)
        return levels[0]


def _normalized(steps: list[FiltrationStep]) -> tuple[FiltrationStep, ...]:
    kept: list[FiltrationStep] = []
    for index, space in steps:
        if space.is_zero():
            continue
        if kept and kept[-1][1] == space:
            continue
        kept.append((index, space))
    return tuple(kept)


@functools.lru_cache(maxsize=1024)
def validate(structure: MixedHodgeStructure) -> ValidationReport:
    """Check every filtration invariant and the purity of each graded piece."""
    failures: list[str] = []
    for label, steps in (("W", structure.weights), ("F", structure.hodge)):
        for index, space in steps:
            if space.ambient != structure.rank:
                failures.append(
                    f"{label}[{index}] has ambient dimension {space.ambient}, expected {structure.rank}",
                )
            if space.backend is not structure.backend:
                failures.append(f"{label}[{index}] uses the {space.backend.value} backend")
    if failures:
        return ValidationReport(tuple(failures))

    weight_indices = [index for index, _ in structure.weights]
    if weight_indices != sorted(set(weight_indices)):
        failures.append("weight indices not strictly ascending")
    hodge_indices = [index for index, _ in structure.hodge]
    if hodge_indices != sorted(set(hodge_indices), reverse=True):
        failures.append("Hodge indices not strictly descending")

    for (_, lower), (_, upper) in zip(structure.weights, structure.weights[1:], strict=False):
        if not lower.is_subspace_of(upper):
            failures.append("W not increasing")
            break
    if not structure.weights or not structure.weights[-1][1].is_full():
        failures.append("W not exhaustive")
    for index, space in structure.weights:
        if not space.is_real():
            failures.append(f"W_{index} not defined over Q")

    for (_, higher), (_, lower) in zip(structure.hodge, structure.hodge[1:], strict=False):
        if not higher.is_subspace_of(lower):
            failures.append("F not decreasing")
            break
    if not structure.hodge or not structure.hodge[-1][1].is_full():
        failures.append("F^min is not the whole space")
    if failures:
        return ValidationReport(tuple(failures))

    failures.extend(_purity_failures(structure))
    return ValidationReport(tuple(failures))


def _purity_failures(structure: MixedHodgeStructure) -> list[str]:
    failures = []
    lowest, highest = structure.hodge_bounds
    for k in structure.weight_levels:
        current = structure.weight_space(k)
        previous = structure.weight_space(k - 1)
        for p in range(min(lowest, k - highest), max(highest + 1, k - lowest + 1) + 1):
            hodge_part = subspace_sum(intersect(structure.hodge_space(p), current), previous)
            opposite = subspace_sum(
                intersect(conjugate_subspace(structure.hodge_space(k - p + 1)), current),
                previous,
            )
            if (
                subspace_sum(hodge_part, opposite).dim != current.dim
                or intersect(hodge_part, opposite).dim != previous.dim
            ):
                failures.append(f"Gr^W_{k} not pure of weight {k} (p={p})")
                break
    return failures


def require_valid(structure: MixedHodgeStructure, subject: str = "mixed Hodge structure") -> None:
    report = validate(structure)
    if not report.is_valid:
        raise InvalidStructureError(subject, report.failures)


def dual(structure: MixedHodgeStructure) -> MixedHodgeStructure:
    """Return the dual structure on the dual lattice, in dual coordinates.

    W_k of the dual is the annihilator of W_{-k-1}; F^p is the annihilator
    of F^{1-p}.
    """
    require_valid(structure)
    levels = [index for index, _ in structure.weights]
    lowest, highest = structure.hodge_bounds
    weights = [
        (k, annihilator(structure.weight_space(-k - 1)))
        for k in range(-levels[-1], -levels[0] + 1)
    ]
    hodge = [
        (p, annihilator(structure.hodge_space(1 - p)))
        for p in range(-highest, -lowest + 1)
    ]
    return MixedHodgeStructure.create(structure.rank, weights, hodge, structure.backend)


def tate_twist(structure: MixedHodgeStructure, m: int) -> MixedHodgeStructure:
    """Twist by Z(m): weight indices move by -2m and Hodge indices by -m."""
    return MixedHodgeStructure(
        rank=structure.rank,
        weights=tuple((index - 2 * m, space) for index, space in structure.weights),
        hodge=tuple((index - m, space) for index, space in structure.hodge),
        backend=structure.backend,
    )


def transform(structure: MixedHodgeStructure, change: Matrix) -> MixedHodgeStructure:
    """Transport the structure along the unimodular change of basis v -> change @ v."""
    if change.shape != (structure.rank, structure.rank):
        raise DimensionMismatchError("transform", structure.rank, change.shape[0])
    if not is_unimodular(change):
        msg = "change of integral basis must be unimodular"
        raise ValueError(msg)
    return MixedHodgeStructure(
        rank=structure.rank,
        weights=tuple((index, image(change, space)) for index, space in structure.weights),
        hodge=tuple((index, image(change, space)) for index, space in structure.hodge),
        backend=structure.backend,
    )


def direct_sum(summands: Sequence[MixedHodgeStructure]) -> MixedHodgeStructure:
    """Place the summands block-diagonally on Z^(sum of ranks)."""
    if not summands:
        msg = "direct sum needs at least one summand"
        raise ValueError(msg)
    backend = summands[0].backend
    if any(summand.backend is not backend for summand in summands):
        msg = "summands must share a backend"
        raise ValueError(msg)
    total = sum(summand.rank for summand in summands)

    def embedded(spaces: Sequence[Subspace]) -> Subspace:
        blocks = []
        offset = 0
        for summand, space in zip(summands, spaces, strict=True):
            dim = space.dim
            blocks.append(
                np.vstack(
                    [
                        zeros(offset, dim, backend),
                        space.basis,
                        zeros(total - offset - summand.rank, dim, backend),
                    ],
                ),
            )
            offset += summand.rank
        return span(hstack(blocks, total, backend), backend)

    weight_indices = sorted({index for summand in summands for index, _ in summand.weights})
    hodge_indices = sorted({index for summand in summands for index, _ in summand.hodge}, reverse=True)
    return MixedHodgeStructure.create(
        total,
        [(k, embedded([summand.weight_space(k) for summand in summands])) for k in weight_indices],
        [(p, embedded([summand.hodge_space(p) for summand in summands])) for p in hodge_indices],
        backend,
    )
