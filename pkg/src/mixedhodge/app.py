import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np

from .configuration import RunConfig
from .curves import DivisorZero
from .curves.periods import require_disjoint_support
from .documents import (
    CurveDocument,
    Document,
    PairingDocument,
    SequenceDocument,
    StructureDocument,
    columns_payload,
    load_document,
    pairing_payload,
    sequence_payload,
    structure_payload,
    torus_element_payload,
)
from .duality import SequencePairing, canonical_pairing, validate_pairing
from .errors import DocumentError, InvalidStructureError
from .extensions import (
    ExtensionSequence,
    carlson_class,
    dual_sequence,
    topological_aj,
    validate_sequence,
)
from .generators import GeneratorSpec, random_extension_spec, random_paired_instance
from .hodge import MixedHodgeStructure, ValidationReport, dual, tate_twist, validate
from .linalg import integer_matrix
from .splitting import check_splitting, deligne_splitting, hodge_numbers, r_split_witness
from .sweeps import (
    TrialOutcome,
    curve_outcome,
    curve_sweep,
    identity_outcome,
    identity_sweep,
    tolerance_scope,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class RunOutcome:
    status: int
    report: dict[str, Any]


def _structure(document: Document, command: str) -> MixedHodgeStructure:
    if not isinstance(document, StructureDocument):
        msg = f"{command} expects a structure document"
        raise DocumentError(msg)
    return document.to_structure()


def _sequence(document: Document, command: str) -> ExtensionSequence:
    if not isinstance(document, SequenceDocument):
        msg = f"{command} expects a sequence or pairing document"
        raise DocumentError(msg)
    return document.to_sequence()


def _pairing(document: Document) -> SequencePairing:
    if isinstance(document, PairingDocument):
        return document.to_pairing()
    if isinstance(document, SequenceDocument):
        return canonical_pairing(document.to_sequence())
    msg = "verify-identity expects sequence or pairing documents"
    raise DocumentError(msg)


def _curve(document: Document) -> CurveDocument:
    if not isinstance(document, CurveDocument):
        msg = "curve-verify expects curve documents"
        raise DocumentError(msg)
    return document


def _generator_spec(config: RunConfig) -> GeneratorSpec:
    spec = GeneratorSpec(seed=config.seed or 0, backend=config.backend)
    return spec if config.max_rank is None else spec.model_copy(update={"max_rank": config.max_rank})


def _sweep_report(outcomes: list[TrialOutcome], label: str) -> tuple[int, dict[str, Any]]:
    passed = sum(outcome.passed for outcome in outcomes)
    summary = f"{passed}/{len(outcomes)} {label}"
    logger.log(logging.INFO, "%s", summary)
    report = {
        "summary": summary,
        "passed": passed,
        "trials": [outcome.report for outcome in outcomes],
    }
    return (0 if passed == len(outcomes) else 1), report


class MixedHodgeApp:
    def __init__(self, loader: Callable[..., Document] = load_document) -> None:
        self._loader = loader
        self._handlers: dict[str, Callable[[RunConfig], tuple[int, dict[str, Any]]]] = {
            "validate": self._validate,
            "split": self._split,
            "rsplit": self._rsplit,
            "dual": self._dual,
            "twist": self._twist,
            "ext-class": self._ext_class,
            "taj": self._taj,
            "verify-identity": self._verify_identity,
            "generate": self._generate,
            "curve-verify": self._curve_verify,
        }

    def run(self, config: RunConfig) -> RunOutcome:
        logger.log(logging.INFO, "Running %s", config.command)
        with tolerance_scope(config.tol_rank, config.tol_torus):
            try:
                status, body = self._handlers[config.command](config)
            except InvalidStructureError as error:
                logger.log(logging.ERROR, "Invalid %s: %s", error.subject, "; ".join(error.failures))
                status, body = 1, {"valid": False, "failures": list(error.failures)}
        report = {"command": config.command, "config": config.model_dump(mode="json"), **body}
        return RunOutcome(status=status, report=report)

    def _documents(self, config: RunConfig) -> list[Document]:
        return [self._loader(path) for path in config.inputs]

    def _single(self, config: RunConfig) -> Document:
        (document,) = self._documents(config)
        return document

    def _validate(self, config: RunConfig) -> tuple[int, dict[str, Any]]:
        document = self._single(config)
        if isinstance(document, PairingDocument):
            kind, report = "pairing", validate_pairing(document.to_pairing())
        elif isinstance(document, SequenceDocument):
            kind, report = "sequence", validate_sequence(document.to_sequence())
        elif isinstance(document, StructureDocument):
            kind, report = "structure", validate(document.to_structure())
        else:
            kind, report = "curve", _curve_report(document.to_divisor(), document)
        for failure in report.failures:
            logger.log(logging.WARNING, "%s", failure)
        body = {"kind": kind, "valid": report.is_valid, "failures": list(report.failures)}
        return (0 if report.is_valid else 1), body

    def _split(self, config: RunConfig) -> tuple[int, dict[str, Any]]:
        structure = _structure(self._single(config), config.command)
        splitting = deligne_splitting(structure)
        checks = check_splitting(structure, splitting)
        body = {
            "components": [
                {"p": p, "q": q, "basis": columns_payload(space.basis)} for (p, q), space in splitting.components
            ],
            "hodge_numbers": [{"p": p, "q": q, "count": count} for (p, q), count in hodge_numbers(structure).counts],
            "checks": {"valid": checks.is_valid, "failures": list(checks.failures)},
        }
        return (0 if checks.is_valid else 1), body

    def _rsplit(self, config: RunConfig) -> tuple[int, dict[str, Any]]:
        witness = r_split_witness(_structure(self._single(config), config.command))
        return 0, {"r_split": witness is None, "witness": None if witness is None else list(witness)}

    def _dual(self, config: RunConfig) -> tuple[int, dict[str, Any]]:
        document = self._single(config)
        if isinstance(document, StructureDocument):
            return 0, {"result": structure_payload(dual(document.to_structure()))}
        return 0, {"result": sequence_payload(dual_sequence(_sequence(document, config.command)))}

    def _twist(self, config: RunConfig) -> tuple[int, dict[str, Any]]:
        structure = _structure(self._single(config), config.command)
        return 0, {"twist": config.twist, "result": structure_payload(tate_twist(structure, config.twist))}

    def _ext_class(self, config: RunConfig) -> tuple[int, dict[str, Any]]:
        element = carlson_class(_sequence(self._single(config), config.command))
        payload = torus_element_payload(element)
        return 0, {"class": payload, "split": payload["is_zero"]}

    def _taj(self, config: RunConfig) -> tuple[int, dict[str, Any]]:
        sequence = _sequence(self._single(config), config.command)
        values = config.integral_class or ()
        if len(values) != sequence.B.rank:
            msg = f"integral class has {len(values)} entries, expected {sequence.B.rank}"
            raise ValueError(msg)
        element = topological_aj(sequence, integer_matrix([list(values)]))
        return 0, {"integral_class": list(values), "value": torus_element_payload(element)}

    def _verify_identity(self, config: RunConfig) -> tuple[int, dict[str, Any]]:
        if config.inputs:
            outcomes = []
            for index, document in enumerate(self._documents(config)):
                rng = None if config.seed is None else np.random.default_rng([config.seed, index])
                outcomes.append(identity_outcome(index, _pairing(document), rng))
        else:
            outcomes = identity_sweep(
                _generator_spec(config),
                config.trials,
                workers=config.workers,
                tol_rank=config.tol_rank,
                vary_hodge_numbers=config.max_rank is not None,
            )
        return _sweep_report(outcomes, "residual zero")

    def _generate(self, config: RunConfig) -> tuple[int, dict[str, Any]]:
        spec = _generator_spec(config)
        instances = []
        for index in range(config.trials):
            trial_spec = spec.with_seed(spec.seed + index)
            if config.max_rank is not None:
                trial_spec = random_extension_spec(trial_spec)
            instances.append(pairing_payload(random_paired_instance(trial_spec)))
        logger.log(logging.INFO, "Generated %d paired instances", len(instances))
        return 0, {"instances": instances}

    def _curve_verify(self, config: RunConfig) -> tuple[int, dict[str, Any]]:
        if config.inputs:
            outcomes = []
            for index, document in enumerate(self._documents(config)):
                curve = _curve(document)
                outcomes.append(
                    curve_outcome(
                        index,
                        curve.to_divisor(),
                        curve.to_torus(),
                        seed=config.seed or 0,
                        clearance=config.clearance,
                    ),
                )
        else:
            outcomes = curve_sweep(
                config.seed or 0,
                config.tori,
                config.curve_divisors,
                workers=config.workers,
                clearance=config.clearance,
                tol_torus=config.tol_torus,
            )
        return _sweep_report(outcomes, "identity holds")


def _curve_report(divisor: DivisorZero, document: CurveDocument) -> ValidationReport:
    try:
        require_disjoint_support(divisor, document.to_torus())
    except ValueError as error:
        return ValidationReport((str(error),))
    return ValidationReport()
