"""Deligne's bigraded splitting I^{p,q} of a mixed Hodge structure."""

import functools
import itertools
from dataclasses import dataclass

from .hodge import (
    Bidegree,
    HodgeNumbers,
    MixedHodgeStructure,
    ValidationReport,
    require_valid,
)
from .linalg import (
    Matrix,
    Subspace,
    conjugate_subspace,
    hstack,
    intersect,
    subspace_sum,
    sum_all,
)
from .scalars import Backend


@dataclass(frozen=True, slots=True)
class DeligneSplitting:
    rank: int
    backend: Backend
    components: tuple[tuple[Bidegree, Subspace], ...]

    def __getitem__(self, bidegree: Bidegree) -> Subspace:
        for key, space in self.components:
            if key == bidegree:
                return space
        return Subspace.zero(self.rank, self.backend)

    @property
    def bidegrees(self) -> tuple[Bidegree, ...]:
        return tuple(key for key, _ in self.components)

    def collect(self, *, weight: int | None = None, max_weight: int | None = None, min_p: int | None = None) -> Subspace:
        """Sum the pieces with p+q == weight, p+q <= max_weight and p >= min_p."""
        return sum_all(
            (
                space
                for (p, q), space in self.components
                if (weight is None or p + q == weight)
                and (max_weight is None or p + q <= max_weight)
                and (min_p is None or p >= min_p)
            ),
            self.rank,
            self.backend,
        )

    def basis(self) -> Matrix:
        """Concatenate the component bases in bidegree order."""
        return hstack([space.basis for _, space in self.components], self.rank, self.backend)


@functools.lru_cache(maxsize=1024)
def deligne_splitting(structure: MixedHodgeStructure) -> DeligneSplitting:
    """Compute I^{p,q} by the closed formula of Cattani, Kaplan and Schmid.

    I^{p,q} = F^p W_{p+q} cap (conj(F^q) W_{p+q} + sum_{j>=2} conj(F^{q-j+1}) W_{p+q-j})
    """
    require_valid(structure)
    levels = structure.weight_levels
    lowest_weight, highest_weight = levels[0], levels[-1]
    lowest, highest = structure.hodge_bounds

    @functools.cache
    def conjugate_hodge(index: int) -> Subspace:
        return conjugate_subspace(structure.hodge_space(index))

    components: list[tuple[Bidegree, Subspace]] = []
    for p, q in itertools.product(range(lowest, highest + 1), repeat=2):
        weight = p + q
        if not lowest_weight <= weight <= highest_weight:
            continue
        w = structure.weight_space(weight)
        hodge_part = intersect(structure.hodge_space(p), w)
        if hodge_part.is_zero():
            continue
        opposite = intersect(conjugate_hodge(q), w)
        for j in range(2, weight - lowest_weight + 1):
            lower = structure.weight_space(weight - j)
            if lower.is_zero():
                break
            opposite = subspace_sum(opposite, intersect(conjugate_hodge(q - j + 1), lower))
        piece = intersect(hodge_part, opposite)
        if not piece.is_zero():
            components.append(((p, q), piece))
    return DeligneSplitting(structure.rank, structure.backend, tuple(sorted(components, key=lambda item: item[0])))


def check_splitting(structure: MixedHodgeStructure, splitting: DeligneSplitting) -> ValidationReport:
    """Verify the direct-sum identities and the conjugation congruence."""
    failures: list[str] = []
    total = sum(space.dim for _, space in splitting.components)
    if total != structure.rank or not splitting.collect().is_full():
        failures.append("pieces do not form a direct sum decomposition")
    lowest, highest = structure.hodge_bounds
    for p in range(lowest, highest + 2):
        if splitting.collect(min_p=p) != structure.hodge_space(p):
            failures.append(f"F^{p} differs from the sum of I^{{p',q}} with p' >= {p}")
    levels = structure.weight_levels
    for k in range(levels[0] - 1, levels[-1] + 1):
        if splitting.collect(max_weight=k) != structure.weight_space(k):
            failures.append(f"W_{k} differs from the sum of I^{{p,q}} with p+q <= {k}")
    for (p, q), space in splitting.components:
        lower = sum_all(
            (other for (k, l), other in splitting.components if k < p and l < q),
            structure.rank,
            structure.backend,
        )
        if not conjugate_subspace(space).is_subspace_of(subspace_sum(splitting[(q, p)], lower)):
            failures.append(f"conj(I^{{{p},{q}}}) not congruent to I^{{{q},{p}}}")
    return ValidationReport(tuple(failures))


def r_split_witness(structure: MixedHodgeStructure) -> Bidegree | None:
    """Return a bidegree with conj(I^{p,q}) != I^{q,p}, or None when R-split."""
    splitting = deligne_splitting(structure)
    for (p, q), space in splitting.components:
        if conjugate_subspace(space) != splitting[(q, p)]:
            return (p, q)
    return None


def is_r_split(structure: MixedHodgeStructure) -> bool:
    return r_split_witness(structure) is None


def hodge_numbers(structure: MixedHodgeStructure) -> HodgeNumbers:
    splitting = deligne_splitting(structure)
    return HodgeNumbers.from_mapping({key: space.dim for key, space in splitting.components})
