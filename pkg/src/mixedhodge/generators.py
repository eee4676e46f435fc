"""Seeded random instances used as independent oracles for the class computations."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Annotated, ClassVar, Final, Self

import numpy as np
from numpy.random import Generator
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .duality import SequencePairing, canonical_pairing
from .errors import InfeasibleHodgeNumbersError, InternalConsistencyError, WeightMismatchError
from .extensions import ExtensionSequence, transform_sequence
from .hodge import HodgeNumbers, MixedHodgeStructure, direct_sum, transform
from .linalg import (
    Matrix,
    Subspace,
    as_backend,
    columns_matrix,
    hstack,
    identity,
    integer_matrix,
    rank,
    span,
    zeros,
)
from .scalars import Backend, GaussianRational, ScalarLike

logger = logging.getLogger(__name__)

MAX_BASIS_DRAWS: Final = 100
UNIMODULAR_STEPS_PER_ROW: Final = 3

type HodgeTriple = tuple[int, int, int]
type Entry = GaussianRational | complex

SeedValue = Annotated[int, Field(ge=0, lt=2**64)]
HodgeTriples = Annotated[tuple[tuple[int, int, Annotated[int, Field(ge=0)]], ...], Field(min_length=1)]


def _weight_of(triples: tuple[HodgeTriple, ...]) -> int | None:
    weights = {p + q for p, q, count in triples if count > 0}
    return weights.pop() if len(weights) == 1 else None


class GeneratorSpec(BaseModel):
    model_config: ClassVar[ConfigDict] = ConfigDict(
        extra="forbid",
        frozen=True,
        hide_input_in_errors=True,
    )

    seed: SeedValue = 0
    hodge_a: HodgeTriples = ((0, 0, 1),)
    hodge_b: HodgeTriples = ((1, 0, 1), (0, 1, 1))
    height: Annotated[int, Field(ge=1)] = 10
    max_rank: Annotated[int, Field(ge=1)] = 8
    backend: Backend = Backend.EXACT

    @model_validator(mode="after")
    def require_pure_conjugate_symmetric(self) -> Self:
        for name, triples in (("hodge_a", self.hodge_a), ("hodge_b", self.hodge_b)):
            if not HodgeNumbers.from_mapping(_as_mapping(triples)).is_conjugate_symmetric():
                msg = f"{name} must satisfy h^(p,q) = h^(q,p)"
                raise ValueError(msg)
            if _weight_of(triples) is None:
                msg = f"{name} must describe a single nonzero weight"
                raise ValueError(msg)
        if _weight_of(self.hodge_b) != _weight_of(self.hodge_a) + 1:  # type: ignore[operator]
            msg = "hodge_b must sit one weight above hodge_a"
            raise ValueError(msg)
        return self

    @property
    def numbers_a(self) -> HodgeNumbers:
        return HodgeNumbers.from_mapping(_as_mapping(self.hodge_a))

    @property
    def numbers_b(self) -> HodgeNumbers:
        return HodgeNumbers.from_mapping(_as_mapping(self.hodge_b))

    def with_seed(self, seed: int) -> "GeneratorSpec":
        return self.model_copy(update={"seed": seed % 2**64})


def _as_mapping(triples: tuple[HodgeTriple, ...]) -> dict[tuple[int, int], int]:
    mapping: dict[tuple[int, int], int] = {}
    for p, q, count in triples:
        mapping[(p, q)] = mapping.get((p, q), 0) + count
    return mapping


@dataclass(frozen=True, slots=True)
class CarlsonInstance:
    A: MixedHodgeStructure
    B: MixedHodgeStructure
    phi: Matrix
    sequence: ExtensionSequence


def _rational(rng: Generator, height: int) -> Fraction:
    return Fraction(int(rng.integers(-height, height + 1)), int(rng.integers(1, height + 1)))


def _entry(rng: Generator, height: int, backend: Backend, *, real: bool = False) -> Entry:
    value = GaussianRational(_rational(rng, height), 0 if real else _rational(rng, height))
    return value if backend is Backend.EXACT else complex(value)


def _random_vectors(rng: Generator, count: int, size: int, spec: GeneratorSpec, *, real: bool) -> Matrix:
    return columns_matrix(
        [[_entry(rng, spec.height, spec.backend, real=real) for _ in range(size)] for _ in range(count)],
        size,
        spec.backend,
    )


def random_pure_hs(
    weight: int,
    h: HodgeNumbers,
    spec: GeneratorSpec,
    *,
    rng: Generator | None = None,
) -> MixedHodgeStructure:
    """Draw a pure structure of the given weight by pairing random vectors with their conjugates."""
    if not h.is_conjugate_symmetric():
        msg = f"Hodge numbers {h.as_dict()} are not conjugate symmetric"
        raise InfeasibleHodgeNumbersError(msg)
    if h.total == 0 or h.weights() != (weight,):
        msg = f"Hodge numbers {h.as_dict()} do not describe weight {weight}"
        raise InfeasibleHodgeNumbersError(msg)
    generator = rng if rng is not None else np.random.default_rng(spec.seed)
    size = h.total
    for _ in range(MAX_BASIS_DRAWS):
        pieces: dict[int, Matrix] = {}
        for (p, q), count in h.counts:
            if p > q:
                vectors = _random_vectors(generator, count, size, spec, real=False)
                pieces[p] = vectors
                pieces[q] = np.conjugate(vectors)
            elif p == q:
                pieces[p] = _random_vectors(generator, count, size, spec, real=True)
        basis = hstack([pieces[p] for p in sorted(pieces)], size, spec.backend)
        if rank(basis) == size:
            break
    else:
        msg = f"no basis of rank {size} drawn in {MAX_BASIS_DRAWS} attempts"
        raise InternalConsistencyError(msg)
    indices = sorted(pieces, reverse=True)
    hodge = [
        (p, span(hstack([pieces[index] for index in indices if index >= p], size, spec.backend), spec.backend))
        for p in indices
    ]
    structure = MixedHodgeStructure.create(size, [(weight, Subspace.full(size, spec.backend))], hodge, spec.backend)
    logger.log(logging.DEBUG, "drew pure structure of weight %d and rank %d", weight, size)
    return structure


def random_hom(rows: int, columns: int, spec: GeneratorSpec, *, rng: Generator | None = None) -> Matrix:
    """Draw a matrix mixing real, imaginary, integral and complex entries."""
    generator = rng if rng is not None else np.random.default_rng(spec.seed)
    entries: list[list[Entry]] = []
    for _ in range(rows):
        row: list[Entry] = []
        for _ in range(columns):
            kind = int(generator.integers(4))
            if kind == 0:
                value = GaussianRational(_rational(generator, spec.height))
            elif kind == 1:
                value = GaussianRational(0, _rational(generator, spec.height))
            elif kind == 2:
                value = GaussianRational(int(generator.integers(-spec.height, spec.height + 1)))
            else:
                value = GaussianRational(_rational(generator, spec.height), _rational(generator, spec.height))
            row.append(value if spec.backend is Backend.EXACT else complex(value))
        entries.append(row)
    matrix = np.empty((rows, columns), dtype=object)
    for index, row in enumerate(entries):
        matrix[index, :] = row
    return as_backend(matrix, spec.backend)


def build_extension_from_hom(A: MixedHodgeStructure, B: MixedHodgeStructure, phi: Matrix) -> ExtensionSequence:
    """Return E = A + B with F^p E spanned by F^p A and the graph of phi over F^p B."""
    if not (A.is_pure and B.is_pure) or B.weight != A.weight + 1:
        msg = "A and B must be pure with weight(B) = weight(A) + 1"
        raise WeightMismatchError(msg)
    if A.backend is not B.backend:
        msg = "A and B must share a backend"
        raise WeightMismatchError(msg)
    backend = A.backend
    a, b = A.rank, B.rank
    size = a + b
    graph = as_backend(np.asarray(phi), backend)
    if graph.shape != (a, b):
        msg = f"phi has shape {graph.shape}, expected {(a, b)}"
        raise ValueError(msg)

    def lifted(p: int) -> Subspace:
        from_a = np.vstack([A.hodge_space(p).basis, zeros(b, A.hodge_space(p).dim, backend)])
        source = B.hodge_space(p).basis
        from_b = np.vstack([graph @ source, source])
        return span(hstack([from_a, from_b], size, backend), backend)

    indices = sorted({index for index, _ in A.hodge} | {index for index, _ in B.hodge}, reverse=True)
    bottom = span(np.vstack([identity(a, backend), zeros(b, a, backend)]), backend)
    E = MixedHodgeStructure.create(
        size,
        [(A.weight, bottom), (B.weight, Subspace.full(size, backend))],
        [(p, lifted(p)) for p in indices],
        backend,
    )
    f = integer_matrix([[int(row == column) for column in range(a)] for row in range(size)], columns=a)
    g = integer_matrix([[int(column == a + row) for column in range(size)] for row in range(b)], columns=size)
    return ExtensionSequence(A=A, E=E, B=B, f=f, g=g)


def random_unimodular(size: int, rng: Generator) -> Matrix:
    """Return a product of random elementary integer matrices."""
    matrix = integer_matrix([[int(row == column) for column in range(size)] for row in range(size)], columns=size)
    if size < 2:
        return matrix
    for _ in range(UNIMODULAR_STEPS_PER_ROW * size):
        target, source = (int(index) for index in rng.choice(size, size=2, replace=False))
        factor = int(rng.choice([-2, -1, 1, 2]))
        matrix[target] += factor * matrix[source]
    if rng.integers(2):
        matrix[[0, 1]] = matrix[[1, 0]]
    return matrix


def random_carlson_instance(spec: GeneratorSpec) -> CarlsonInstance:
    rng = np.random.default_rng(spec.seed)
    weight_a = spec.numbers_a.weights()[0]
    A = random_pure_hs(weight_a, spec.numbers_a, spec, rng=rng)
    B = random_pure_hs(weight_a + 1, spec.numbers_b, spec, rng=rng)
    phi = random_hom(A.rank, B.rank, spec, rng=rng)
    return CarlsonInstance(A=A, B=B, phi=phi, sequence=build_extension_from_hom(A, B, phi))


def random_paired_instance(spec: GeneratorSpec) -> SequencePairing:
    """Pair a basis-changed Carlson extension with its dual sequence by the evaluation pairing."""
    instance = random_carlson_instance(spec)
    rng = np.random.default_rng([spec.seed, 1])
    change = random_unimodular(instance.sequence.E.rank, rng)
    return canonical_pairing(transform_sequence(instance.sequence, change))


def weights_zero_two(c: ScalarLike | complex, backend: Backend = Backend.EXACT) -> MixedHodgeStructure:
    """Rank 2, weights 0 and 2, F^1 = span(e2 + c e1); R-split exactly when c is real."""
    if backend is Backend.EXACT:
        coefficient: Entry = GaussianRational.coerce(c)  # type: ignore[arg-type]
    else:
        coefficient = complex(c)  # type: ignore[arg-type]
    bottom = span(columns_matrix([[1, 0]], 2, backend), backend)
    hodge_one = span(columns_matrix([[coefficient, 1]], 2, backend), backend)
    return MixedHodgeStructure.create(
        2,
        [(0, bottom), (2, Subspace.full(2, backend))],
        [(1, hodge_one), (0, Subspace.full(2, backend))],
        backend,
    )


def random_hodge_numbers(weight: int, size: int, rng: Generator) -> HodgeNumbers:
    """Draw conjugate-symmetric h^{p,q} of a pure weight with two levels of p above the middle."""
    if size < _minimum_pure_rank(weight) or (weight % 2 and size % 2):
        msg = f"no pure structure of weight {weight} has rank {size}"
        raise InfeasibleHodgeNumbersError(msg)
    first = weight // 2 + 1
    pairs = size // 2 if weight % 2 else int(rng.integers(0, size // 2 + 1))
    counts: dict[tuple[int, int], int] = {}
    for _ in range(pairs):
        p = first + int(rng.integers(2))
        for bidegree in ((p, weight - p), (weight - p, p)):
            counts[bidegree] = counts.get(bidegree, 0) + 1
    if size > 2 * pairs:
        counts[(weight // 2, weight // 2)] = size - 2 * pairs
    return HodgeNumbers.from_mapping(counts)


def _minimum_pure_rank(weight: int) -> int:
    return 2 if weight % 2 else 1


def _triples(numbers: HodgeNumbers) -> tuple[HodgeTriple, ...]:
    return tuple((p, q, count) for (p, q), count in numbers.counts)


def random_extension_spec(spec: GeneratorSpec) -> GeneratorSpec:
    """Redraw hodge_a and hodge_b from the seed with rank(A) + rank(B) <= max_rank."""
    rng = np.random.default_rng([spec.seed, 4])
    weight = int(rng.integers(2))
    floor_a, floor_b = _minimum_pure_rank(weight), _minimum_pure_rank(weight + 1)
    if floor_a + floor_b > spec.max_rank:
        msg = f"max_rank {spec.max_rank} leaves no room for an extension"
        raise InfeasibleHodgeNumbersError(msg)
    size_a = int(rng.choice(_pure_ranks(weight, floor_a, spec.max_rank - floor_b)))
    size_b = int(rng.choice(_pure_ranks(weight + 1, floor_b, spec.max_rank - size_a)))
    return spec.model_copy(
        update={
            "hodge_a": _triples(random_hodge_numbers(weight, size_a, rng)),
            "hodge_b": _triples(random_hodge_numbers(weight + 1, size_b, rng)),
        },
    )


def _pure_ranks(weight: int, low: int, high: int) -> list[int]:
    return [size for size in range(low, high + 1) if not (weight % 2 and size % 2)]


@dataclass(frozen=True, slots=True)
class _Slot:
    """A pure block of a drawn layout; `part` groups slots that form one extension."""

    weight: int
    part: int
    size: int

    @property
    def step(self) -> int:
        return 2 if self.weight % 2 else 1


# Each layout lists its summands as weight tuples: one weight is a pure block,
# two consecutive weights a Carlson extension and (0, 2) a weights-{0,2} member.
LAYOUTS: Final[dict[int, tuple[tuple[tuple[int, ...], ...], ...]]] = {
    1: (((0,),), ((1,),), ((2,),)),
    2: (((0, 1),), ((1, 2),)),
    3: (((0, 1), (2,)), ((0,), (1, 2)), ((0, 2), (1,))),
}
ZERO_TWO_RANK: Final = 2


def _layout_minimum(layout: tuple[tuple[int, ...], ...]) -> int:
    total = 0
    for summand in layout:
        if summand == (0, 2):
            total += ZERO_TWO_RANK
        else:
            total += sum(_minimum_pure_rank(weight) for weight in summand)
    return total


def _fill(slots: list[_Slot], fixed: int, size: int, rng: Generator) -> list[_Slot] | None:
    """Grow slot ranks until they add up to size, or None when parity forbids it."""
    remaining = size - fixed - sum(slot.size for slot in slots)
    while remaining > 0:
        open_slots = [index for index, slot in enumerate(slots) if slot.step <= remaining]
        if not open_slots:
            return None
        index = int(rng.choice(open_slots))
        slot = slots[index]
        slots[index] = _Slot(slot.weight, slot.part, slot.size + slot.step)
        remaining -= slot.step
    return slots if remaining == 0 else None


def random_mixed_hs(
    spec: GeneratorSpec,
    *,
    weight_count: int | None = None,
    size: int | None = None,
) -> MixedHodgeStructure:
    """Draw a direct sum of pure blocks, Carlson extensions and weights-{0,2} members, then change basis.

    The weights span one to three consecutive levels in {0, 1, 2} and the
    rank is at most spec.max_rank; weight_count and size pin either draw.
    """
    rng = np.random.default_rng([spec.seed, 2])
    top = spec.max_rank if size is None else size
    counts = [count for count, layouts in LAYOUTS.items() if any(_layout_minimum(layout) <= top for layout in layouts)]
    count = weight_count if weight_count is not None else int(rng.choice(counts))
    candidates = [layout for layout in LAYOUTS.get(count, ()) if _layout_minimum(layout) <= top]
    if not candidates:
        msg = f"no structure with {count} weights fits rank {top}"
        raise InfeasibleHodgeNumbersError(msg)
    total = size if size is not None else int(rng.integers(min(map(_layout_minimum, candidates)), top + 1))

    order = rng.permutation(len(candidates))
    for position in order:
        layout = candidates[int(position)]
        slots = [
            _Slot(weight, part, _minimum_pure_rank(weight))
            for part, summand in enumerate(layout)
            if summand != (0, 2)
            for weight in summand
        ]
        fixed = ZERO_TWO_RANK * layout.count((0, 2))
        if total >= _layout_minimum(layout) and (filled := _fill(slots, fixed, total, rng)) is not None:
            break
    else:
        msg = f"no structure with {count} weights has rank {total}"
        raise InfeasibleHodgeNumbersError(msg)

    summands = []
    for part, summand in enumerate(layout):
        if summand == (0, 2):
            summands.append(weights_zero_two(_entry(rng, spec.height, spec.backend), spec.backend))
            continue
        blocks = [
            random_pure_hs(slot.weight, random_hodge_numbers(slot.weight, slot.size, rng), spec, rng=rng)
            for slot in filled
            if slot.part == part
        ]
        if len(blocks) == 1:
            summands.append(blocks[0])
        else:
            A, B = blocks
            summands.append(build_extension_from_hom(A, B, random_hom(A.rank, B.rank, spec, rng=rng)).E)
    structure = direct_sum(summands)
    logger.log(logging.DEBUG, "drew mixed structure of rank %d on weights %s", structure.rank, structure.weight_levels)
    return transform(structure, random_unimodular(structure.rank, rng))
