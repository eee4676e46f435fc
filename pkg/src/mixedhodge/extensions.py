"""Extensions 0 -> A -> E -> B -> 0 of mixed Hodge structures and their classes."""

import functools
import logging
from dataclasses import dataclass

import numpy as np

from .errors import InternalConsistencyError, InvalidStructureError, NotRSplitError
from .hodge import MixedHodgeStructure, ValidationReport, dual, transform, validate
from .linalg import (
    Matrix,
    Subspace,
    annihilator,
    as_backend,
    hstack,
    identity,
    inverse,
    is_integral,
    is_real,
    kernel_subspace,
    left_inverse,
    rank,
    real_part,
    solve,
    to_integer,
)
from .scalars import Backend
from .smith import (
    integral_right_inverse,
    is_saturated_injection,
    is_surjective,
    unimodular_inverse,
)
from .splitting import deligne_splitting, r_split_witness
from .torus import TorusElement, TorusQuotient, real_torus

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True, eq=False)
class ExtensionSequence:
    """0 -> A --f--> E --g--> B -> 0 with integer matrices f and g."""

    A: MixedHodgeStructure
    E: MixedHodgeStructure
    B: MixedHodgeStructure
    f: Matrix
    g: Matrix

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtensionSequence):
            return NotImplemented
        return (
            (self.A, self.E, self.B) == (other.A, other.E, other.B)
            and np.array_equal(self.f, other.f)
            and np.array_equal(self.g, other.g)
        )

    def __hash__(self) -> int:
        return hash((self.A, self.E, self.B, self.f.shape, self.g.shape))

    @property
    def backend(self) -> Backend:
        return self.E.backend


@dataclass(frozen=True, slots=True)
class SectionZ:
    """Integer matrix s: B_Z -> E_Z with g s = 1."""

    matrix: Matrix


@dataclass(frozen=True, slots=True)
class RealSection:
    """Real matrix s: B_R -> E_R with g s = 1 whose complexification preserves F."""

    matrix: Matrix


def _morphism_failures(
    name: str,
    matrix: Matrix,
    source: MixedHodgeStructure,
    target: MixedHodgeStructure,
) -> list[str]:
    failures = []
    for index, space in source.weights:
        if not target.weight_space(index).contains(as_backend(matrix, target.backend) @ space.basis):
            failures.append(f"{name} does not preserve W_{index}")
    for index, space in source.hodge:
        if not target.hodge_space(index).contains(as_backend(matrix, target.backend) @ space.basis):
            failures.append(f"{name} does not preserve F^{index}")
    return failures


def consecutive_pure_weights(sequence: ExtensionSequence) -> bool:
    return (
        sequence.A.is_pure
        and sequence.B.is_pure
        and sequence.B.weight == sequence.A.weight + 1
    )


@functools.lru_cache(maxsize=512)
def validate_sequence(sequence: ExtensionSequence) -> ValidationReport:
    """Check exactness over Z, the morphism conditions, B > A and the R-split pattern."""
    report = (
        validate(sequence.A).prefixed("A")
        + validate(sequence.E).prefixed("E")
        + validate(sequence.B).prefixed("B")
    )
    if not report.is_valid:
        return report
    failures: list[str] = []
    a, e, b = sequence.A.rank, sequence.E.rank, sequence.B.rank
    if len({sequence.A.backend, sequence.E.backend, sequence.B.backend}) != 1:
        failures.append("A, E and B use different backends")
    if sequence.f.shape != (e, a):
        failures.append(f"f has shape {sequence.f.shape}, expected {(e, a)}")
    if sequence.g.shape != (b, e):
        failures.append(f"g has shape {sequence.g.shape}, expected {(b, e)}")
    if not is_integral(sequence.f) or not is_integral(sequence.g):
        failures.append("f and g must be integer matrices")
    if failures:
        return ValidationReport(tuple(failures))

    f, g = to_integer(sequence.f), to_integer(sequence.g)
    if not is_saturated_injection(f):
        failures.append("f not injective with saturated image")
    if not is_surjective(g):
        failures.append("g not surjective")
    if np.any(g @ f != 0):
        failures.append("g f != 0")
    if a + b != e:
        failures.append("ker g != im f (ranks do not add up)")
    failures.extend(_morphism_failures("f", sequence.f, sequence.A, sequence.E))
    failures.extend(_morphism_failures("g", sequence.g, sequence.E, sequence.B))
    if max(sequence.A.weight_levels) >= min(sequence.B.weight_levels):
        failures.append("B > A fails: weights of A must lie below weights of B")
    if not failures and consecutive_pure_weights(sequence):
        witness = r_split_witness(sequence.E)
        if witness is not None:
            failures.append(f"E not R-split at {witness}")
    return ValidationReport(tuple(failures))


def require_valid_sequence(sequence: ExtensionSequence) -> None:
    report = validate_sequence(sequence)
    if not report.is_valid:
        raise InvalidStructureError("extension sequence", report.failures)


def integral_section(sequence: ExtensionSequence, adjustment: Matrix | None = None) -> SectionZ:
    """Return s_Z from the Smith form of g, shifted by f @ adjustment when given."""
    section = integral_right_inverse(to_integer(sequence.g))
    if adjustment is not None:
        section = section + to_integer(sequence.f) @ to_integer(adjustment)
    return SectionZ(section)


def hodge_section(sequence: ExtensionSequence) -> Matrix:
    """Return s_F with g s_F = 1 and s_F(F^p B) inside F^p E, built level by level."""
    require_valid_sequence(sequence)
    backend = sequence.backend
    g = as_backend(sequence.g, backend)
    lowest, highest = sequence.B.hodge_bounds
    chosen: list[Matrix] = []
    lifts: list[Matrix] = []
    for p in range(highest, lowest - 1, -1):
        source = sequence.B.hodge_space(p)
        target = sequence.E.hodge_space(p)
        mapped = g @ target.basis
        for column in range(source.dim):
            vector = source.basis[:, column : column + 1]
            if chosen and rank(hstack([*chosen, vector], sequence.B.rank, backend)) == len(chosen):
                continue
            coefficients = solve(mapped, vector)
            if coefficients is None:
                msg = f"no lift of F^{p}B into F^{p}E"
                raise InternalConsistencyError(msg)
            chosen.append(vector)
            lifts.append(target.basis @ coefficients)
    if len(chosen) != sequence.B.rank:
        msg = "Hodge filtration of B does not exhaust B"
        raise InternalConsistencyError(msg)
    adapted = hstack(chosen, sequence.B.rank, backend)
    return hstack(lifts, sequence.E.rank, backend) @ inverse(adapted)


def deligne_real_section(sequence: ExtensionSequence) -> RealSection:
    """Return the unique real section carrying J^{p,q}(B) onto I^{p,q}(E)."""
    require_valid_sequence(sequence)
    for label, structure in (("E", sequence.E), ("A", sequence.A), ("B", sequence.B)):
        witness = r_split_witness(structure)
        if witness is not None:
            raise NotRSplitError(label, witness)
    backend = sequence.backend
    g = as_backend(sequence.g, backend)
    middle = deligne_splitting(sequence.E)
    quotient = deligne_splitting(sequence.B)
    targets: list[Matrix] = []
    lifts: list[Matrix] = []
    for bidegree, piece in quotient.components:
        source = middle[bidegree]
        coefficients = solve(g @ source.basis, piece.basis)
        if coefficients is None or source.dim != piece.dim:
            msg = f"g does not map I^{bidegree} of E onto I^{bidegree} of B"
            raise InternalConsistencyError(msg)
        targets.append(piece.basis)
        lifts.append(source.basis @ coefficients)
    section = hstack(lifts, sequence.E.rank, backend) @ inverse(hstack(targets, sequence.B.rank, backend))
    if not is_real(section):
        msg = "Deligne section has non-real entries"
        raise InternalConsistencyError(msg)
    return RealSection(real_part(section))


def retraction(sequence: ExtensionSequence, section: SectionZ) -> Matrix:
    """Return r = f^+ (1 - s_Z g): E -> A, the retraction split by s_Z."""
    backend = sequence.backend
    f = as_backend(sequence.f, backend)
    projector = identity(sequence.E.rank, backend) - as_backend(section.matrix @ sequence.g, backend)
    return left_inverse(f) @ projector


def hodge_hom_kernel(source: MixedHodgeStructure, target: MixedHodgeStructure) -> Subspace:
    """Return F0Hom(source, target) in row-major coordinates of target x source matrices."""
    backend = target.backend
    constraints: list[Matrix] = []
    indices = {index for index, _ in source.hodge} | {index for index, _ in target.hodge}
    for p in sorted(indices):
        domain = source.hodge_space(p)
        codomain = annihilator(target.hodge_space(p))
        if domain.is_zero() or codomain.is_zero():
            continue
        constraints.extend(
            np.outer(codomain.basis[:, row], domain.basis[:, column]).reshape(1, -1)
            for row in range(codomain.dim)
            for column in range(domain.dim)
        )
    size = target.rank * source.rank
    if not constraints:
        return Subspace.full(size, backend)
    return kernel_subspace(np.vstack(constraints))


@functools.lru_cache(maxsize=256)
def hom_torus(A: MixedHodgeStructure, B: MixedHodgeStructure) -> TorusQuotient:
    """Return J0Hom(B, A) = Hom_C(B, A) / (F0Hom + Hom_Z)."""
    size = A.rank * B.rank
    return TorusQuotient(
        label="J0Hom(B,A)",
        shape=(A.rank, B.rank),
        lattice=identity(size, A.backend),
        backend=A.backend,
        kernel=hodge_hom_kernel(B, A),
    )


def carlson_class(sequence: ExtensionSequence, integral: SectionZ | None = None) -> TorusElement:
    """Return the class of r (s_F - s_Z) in J0Hom(B, A)."""
    require_valid_sequence(sequence)
    section = integral if integral is not None else integral_section(sequence)
    hodge = hodge_section(sequence)
    difference = hodge - as_backend(section.matrix, sequence.backend)
    value = retraction(sequence, section) @ difference
    logger.log(logging.DEBUG, "Carlson class computed for a %d x %d extension", sequence.A.rank, sequence.B.rank)
    return hom_torus(sequence.A, sequence.B).element(value)


def topological_aj_map(sequence: ExtensionSequence, integral: SectionZ | None = None) -> Matrix:
    """Return psi = r (s_R - s_Z): B_R -> A_R."""
    real = deligne_real_section(sequence)
    section = integral if integral is not None else integral_section(sequence)
    difference = real.matrix - as_backend(section.matrix, sequence.backend)
    return real_part(retraction(sequence, section) @ difference)


def topological_aj(
    sequence: ExtensionSequence,
    b: Matrix,
    integral: SectionZ | None = None,
) -> TorusElement:
    """Return s_R(b) - s_Z(b) in A_R / A_Z for an integral class b of B."""
    vector = as_backend(to_integer(np.asarray(b, dtype=object).reshape(-1, 1)), sequence.backend)
    value = topological_aj_map(sequence, integral) @ vector
    return real_torus(sequence.A.rank, sequence.backend).element(value.reshape(-1))


def dual_sequence(sequence: ExtensionSequence) -> ExtensionSequence:
    """Return 0 -> B^v --g^T--> E^v --(-f^T)--> A^v -> 0."""
    require_valid_sequence(sequence)
    return ExtensionSequence(
        A=dual(sequence.B),
        E=dual(sequence.E),
        B=dual(sequence.A),
        f=to_integer(sequence.g.T),
        g=to_integer(-sequence.f.T),
    )


def transform_sequence(sequence: ExtensionSequence, change: Matrix) -> ExtensionSequence:
    """Change the integral basis of E by v -> change @ v."""
    integer_change = to_integer(change)
    return ExtensionSequence(
        A=sequence.A,
        E=transform(sequence.E, integer_change),
        B=sequence.B,
        f=integer_change @ to_integer(sequence.f),
        g=to_integer(sequence.g) @ unimodular_inverse(integer_change),
    )


def is_split(sequence: ExtensionSequence) -> bool:
    """True when the Carlson class vanishes."""
    return carlson_class(sequence).is_zero()
