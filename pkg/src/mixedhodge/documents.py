"""JSON/YAML documents for structures, sequences, pairings and curves.

Exact scalars are text such as "1/2", "-3/4*i" or "1/2+1/3*i" (plain
integers are accepted too); float scalars are [re, im] pairs. Weight steps
are keyed by k and Hodge steps by p, each listing its basis as vectors;
f, g and P are lists of rows.
"""

from pathlib import Path
from typing import Annotated, Any, ClassVar, Self

import numpy as np
import yaml
from pydantic import AfterValidator, BaseModel, ConfigDict, Field, model_validator

from .curves import ComplexTorus, DivisorZero
from .duality import SequencePairing
from .errors import DocumentError
from .extensions import ExtensionSequence
from .hodge import MixedHodgeStructure
from .linalg import Matrix, Subspace, columns_matrix, integer_matrix, span
from .scalars import Backend, GaussianRational, format_scalar, parse_scalar
from .torus import TorusElement


def _check_scalar_text(text: str) -> str:
    parse_scalar(text)
    return text


ScalarText = Annotated[str, AfterValidator(_check_scalar_text)]
FloatPair = tuple[float, float]
ScalarValue = int | ScalarText | FloatPair
Vector = tuple[ScalarValue, ...]
IntegerRows = tuple[tuple[int, ...], ...]


def _scalar(value: ScalarValue, backend: Backend) -> GaussianRational | complex:
    if isinstance(value, tuple):
        if backend is Backend.EXACT:
            msg = "float pairs are only accepted on the float backend"
            raise ValueError(msg)
        return complex(value[0], value[1])
    exact = GaussianRational.coerce(value)
    return exact if backend is Backend.EXACT else complex(exact)


class WeightStepDocument(BaseModel):
    model_config: ClassVar[ConfigDict] = ConfigDict(
        extra="forbid",
        frozen=True,
        hide_input_in_errors=True,
    )

    k: int
    basis: tuple[Vector, ...] = ()


class HodgeStepDocument(BaseModel):
    model_config: ClassVar[ConfigDict] = ConfigDict(
        extra="forbid",
        frozen=True,
        hide_input_in_errors=True,
    )

    p: int
    basis: tuple[Vector, ...] = ()


type StepDocument = WeightStepDocument | HodgeStepDocument


class StructureDocument(BaseModel):
    model_config: ClassVar[ConfigDict] = ConfigDict(
        extra="forbid",
        frozen=True,
        hide_input_in_errors=True,
    )

    rank: Annotated[int, Field(ge=1)]
    backend: Backend = Backend.EXACT
    weights: Annotated[tuple[WeightStepDocument, ...], Field(min_length=1)]
    hodge: Annotated[tuple[HodgeStepDocument, ...], Field(min_length=1)]

    @model_validator(mode="after")
    def require_consistent_vectors(self) -> Self:
        for step in (*self.weights, *self.hodge):
            for vector in step.basis:
                if len(vector) != self.rank:
                    msg = f"vector of length {len(vector)} in a rank {self.rank} structure"
                    raise ValueError(msg)
                for value in vector:
                    _scalar(value, self.backend)
        return self

    def _subspace(self, step: StepDocument) -> Subspace:
        vectors = [[_scalar(value, self.backend) for value in vector] for vector in step.basis]
        return span(columns_matrix(vectors, self.rank, self.backend), self.backend)

    def to_structure(self) -> MixedHodgeStructure:
        return MixedHodgeStructure.create(
            self.rank,
            [(step.k, self._subspace(step)) for step in self.weights],
            [(step.p, self._subspace(step)) for step in self.hodge],
            self.backend,
        )


class SequenceDocument(BaseModel):
    model_config: ClassVar[ConfigDict] = ConfigDict(
        extra="forbid",
        frozen=True,
        hide_input_in_errors=True,
    )

    A: StructureDocument
    E: StructureDocument
    B: StructureDocument
    f: IntegerRows
    g: IntegerRows

    @model_validator(mode="after")
    def require_rectangular_maps(self) -> Self:
        for name, rows in (("f", self.f), ("g", self.g)):
            if len({len(row) for row in rows}) > 1:
                msg = f"{name} rows have different lengths"
                raise ValueError(msg)
        return self

    def to_sequence(self) -> ExtensionSequence:
        return ExtensionSequence(
            A=self.A.to_structure(),
            E=self.E.to_structure(),
            B=self.B.to_structure(),
            f=integer_matrix(self.f, columns=self.A.rank),
            g=integer_matrix(self.g, columns=self.E.rank),
        )


class PairingDocument(SequenceDocument):
    P: IntegerRows
    partner: SequenceDocument

    def to_pairing(self) -> SequencePairing:
        return SequencePairing(
            sequence=self.to_sequence(),
            partner=self.partner.to_sequence(),
            matrix=integer_matrix(self.P, columns=self.partner.E.rank),
        )


class CurveDocument(BaseModel):
    model_config: ClassVar[ConfigDict] = ConfigDict(
        extra="forbid",
        frozen=True,
        hide_input_in_errors=True,
    )

    omega1: FloatPair
    omega2: FloatPair
    pairs: tuple[tuple[FloatPair, FloatPair], ...] = ()

    @model_validator(mode="after")
    def require_oriented_lattice(self) -> Self:
        omega1, omega2 = complex(*self.omega1), complex(*self.omega2)
        if omega1 == 0 or not (omega2 / omega1).imag > 0:
            msg = "omega1 and omega2 must satisfy Im(omega2 / omega1) > 0"
            raise ValueError(msg)
        return self

    def to_torus(self) -> ComplexTorus:
        return ComplexTorus(omega1=complex(*self.omega1), omega2=complex(*self.omega2))

    def to_divisor(self) -> DivisorZero:
        return DivisorZero.from_pairs([(complex(*p), complex(*q)) for p, q in self.pairs])


type Document = StructureDocument | SequenceDocument | PairingDocument | CurveDocument


def parse_document(data: Any) -> Document:
    """Pick the document kind from its keys and validate it."""
    if not isinstance(data, dict):
        msg = "document must be a mapping"
        raise DocumentError(msg)
    if "omega1" in data:
        return CurveDocument.model_validate(data)
    if "partner" in data:
        return PairingDocument.model_validate(data)
    if "E" in data:
        return SequenceDocument.model_validate(data)
    if "rank" in data:
        return StructureDocument.model_validate(data)
    msg = "unrecognized document: expected one of the keys omega1, partner, E or rank"
    raise DocumentError(msg)


def load_document(path: Path) -> Document:
    with path.open(encoding="utf-8") as document_file:
        return parse_document(yaml.safe_load(document_file))


def scalar_payload(value: object) -> str | list[float]:
    if isinstance(value, GaussianRational | int):
        return format_scalar(GaussianRational.coerce(value))
    number = complex(value)  # type: ignore[arg-type]
    return [number.real, number.imag]


def columns_payload(matrix: Matrix) -> list[list[str | list[float]]]:
    return [[scalar_payload(value) for value in matrix[:, column]] for column in range(matrix.shape[1])]


def rows_payload(matrix: Matrix) -> list[list[Any]]:
    if matrix.dtype == object and all(isinstance(value, int) for value in matrix.flat):
        return [[int(value) for value in row] for row in matrix]
    return [[scalar_payload(value) for value in row] for row in matrix]


def structure_payload(structure: MixedHodgeStructure) -> dict[str, Any]:
    return {
        "rank": structure.rank,
        "backend": structure.backend.value,
        "weights": [{"k": k, "basis": columns_payload(space.basis)} for k, space in structure.weights],
        "hodge": [{"p": p, "basis": columns_payload(space.basis)} for p, space in structure.hodge],
    }


def sequence_payload(sequence: ExtensionSequence) -> dict[str, Any]:
    return {
        "A": structure_payload(sequence.A),
        "E": structure_payload(sequence.E),
        "B": structure_payload(sequence.B),
        "f": rows_payload(sequence.f),
        "g": rows_payload(sequence.g),
    }


def pairing_payload(pairing: SequencePairing) -> dict[str, Any]:
    return {
        **sequence_payload(pairing.sequence),
        "P": rows_payload(pairing.matrix),
        "partner": sequence_payload(pairing.partner),
    }


def torus_element_payload(element: TorusElement) -> dict[str, Any]:
    canonical = element.canonical_form()
    flat = np.asarray(canonical.representative).reshape(-1)
    return {
        "torus": canonical.quotient.label,
        "shape": list(canonical.quotient.shape),
        "representative": [scalar_payload(value) for value in flat],
        "is_zero": canonical.is_zero(),
    }
