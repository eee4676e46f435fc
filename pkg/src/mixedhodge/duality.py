"""Pairings between an extension and its dual, and the identity relating their sections.

For a valid pairing P between S = (A, E, B, f, g) and a partner S' the
identity reads

    <s_R(w), s'_Z(a)>_E = <w, s''_Z(a) - s'_R(a)>  modulo periods,

where s'_Z and s''_Z are two integral sections of the partner, s'_R is its
real section and the periods are the values <w, l> over integral l.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import AssumptionError, PairingError, WeightMismatchError
from .extensions import (
    ExtensionSequence,
    consecutive_pure_weights,
    deligne_real_section,
    dual_sequence,
    integral_section,
    require_valid_sequence,
    transform_sequence,
    validate_sequence,
)
from .hodge import ValidationReport, dual, transform
from .linalg import (
    Matrix,
    Subspace,
    as_backend,
    image,
    integer_matrix,
    intersect,
    is_integral,
    kernel_subspace,
    span,
    subspace_sum,
    to_integer,
)
from .scalars import GaussianRational
from .smith import is_unimodular, lattice_gcd, unimodular_inverse
from .splitting import deligne_splitting
from .torus import TorusElement, period_torus

logger = logging.getLogger(__name__)

type Scalar = GaussianRational | complex


@dataclass(frozen=True, slots=True, eq=False)
class SequencePairing:
    """An integer matrix P with <x, y> = x^T P y for x in E and y in E'."""

    sequence: ExtensionSequence
    partner: ExtensionSequence
    matrix: Matrix


@dataclass(frozen=True, slots=True)
class IdentitySides:
    lhs: Scalar
    rhs: Scalar
    period: int


def induced_pairings(pairing: SequencePairing) -> tuple[Matrix, Matrix]:
    """Return (P_A, P_B): -f^T P s'_Z on A x B' and s_Z^T P f' on B x A'."""
    matrix = to_integer(pairing.matrix)
    section = integral_section(pairing.sequence).matrix
    partner_section = integral_section(pairing.partner).matrix
    on_a = -to_integer(pairing.sequence.f).T @ matrix @ partner_section
    on_b = section.T @ matrix @ to_integer(pairing.partner.f)
    return on_a, on_b


def validate_pairing(pairing: SequencePairing) -> ValidationReport:
    report = validate_sequence(pairing.sequence).prefixed("S") + validate_sequence(pairing.partner).prefixed("S'")
    if not report.is_valid:
        return report
    failures: list[str] = []
    rows, columns = pairing.sequence.E.rank, pairing.partner.E.rank
    if pairing.matrix.shape != (rows, columns):
        failures.append(f"P has shape {pairing.matrix.shape}, expected {(rows, columns)}")
    elif not is_integral(pairing.matrix):
        failures.append("P must be an integer matrix")
    elif not is_unimodular(pairing.matrix):
        failures.append("P not unimodular")
    if failures:
        return ValidationReport(tuple(failures))

    matrix = to_integer(pairing.matrix)
    if np.any(to_integer(pairing.sequence.f).T @ matrix @ to_integer(pairing.partner.f) != 0):
        failures.append("P does not vanish on im f x im f'")
        return ValidationReport(tuple(failures))
    on_a, on_b = induced_pairings(pairing)
    if not is_unimodular(on_a):
        failures.append("induced pairing on A x B' not unimodular")
    if not is_unimodular(on_b):
        failures.append("induced pairing on B x A' not unimodular")
    if not failures and dual(pairing.sequence.E) != transform(pairing.partner.E, matrix):
        failures.append("P does not identify E' with the dual of E")
    return ValidationReport(tuple(failures))


def require_valid_pairing(pairing: SequencePairing) -> None:
    report = validate_pairing(pairing)
    if not report.is_valid:
        raise PairingError("; ".join(report.failures))


def canonical_pairing(sequence: ExtensionSequence) -> SequencePairing:
    """Pair S with dual_sequence(S) by the evaluation pairing."""
    size = sequence.E.rank
    return SequencePairing(
        sequence=sequence,
        partner=dual_sequence(sequence),
        matrix=integer_matrix([[int(row == column) for column in range(size)] for row in range(size)]),
    )


def transform_partner(pairing: SequencePairing, change: Matrix) -> SequencePairing:
    """Change the integral basis of the partner's E and compensate in the pairing matrix."""
    return SequencePairing(
        sequence=pairing.sequence,
        partner=transform_sequence(pairing.partner, change),
        matrix=to_integer(pairing.matrix) @ unimodular_inverse(to_integer(change)),
    )


def _require_consecutive(sequence: ExtensionSequence) -> None:
    require_valid_sequence(sequence)
    if not consecutive_pure_weights(sequence):
        msg = "A and B must be pure of consecutive weights"
        raise WeightMismatchError(msg)


def dual_rsplit_decomposition(sequence: ExtensionSequence) -> tuple[Subspace, Subspace]:
    """Return (im g^T, ker s_R^T) inside the dual of E and check the splitting it induces."""
    _require_consecutive(sequence)
    backend = sequence.backend
    real_section = deligne_real_section(sequence).matrix
    lower = span(as_backend(to_integer(sequence.g).T.copy(), backend))
    upper = kernel_subspace(real_section.T.copy())
    if subspace_sum(lower, upper).dim != sequence.E.rank or not intersect(lower, upper).is_zero():
        msg = "im g^T and ker s_R^T are not complementary"
        raise AssumptionError(msg)

    dual_middle = dual(sequence.E)
    splitting = deligne_splitting(dual_middle)
    levels = dual_middle.weight_levels
    if lower != splitting.collect(weight=levels[0]):
        msg = "im g^T differs from the lowest-weight Deligne pieces of the dual"
        raise AssumptionError(msg)
    if upper != splitting.collect(weight=levels[-1]):
        msg = "ker s_R^T differs from the top-weight Deligne pieces of the dual"
        raise AssumptionError(msg)

    quotient = dual(sequence.A)
    projection = as_backend(-to_integer(sequence.f).T, backend)
    lowest, highest = dual_middle.hodge_bounds
    for p in range(lowest, highest + 2):
        carried = image(projection, intersect(dual_middle.hodge_space(p), upper))
        if carried != quotient.hodge_space(p):
            msg = f"-f^T does not carry F^{p} of ker s_R^T onto F^{p} of the dual of A"
            raise AssumptionError(msg)
    return lower, upper


def main_identity_sides(
    pairing: SequencePairing,
    omega: Matrix,
    alpha: Matrix,
    *,
    section_adjustment: Matrix | None = None,
    partner_adjustment: Matrix | None = None,
    second_adjustment: Matrix | None = None,
) -> IdentitySides:
    """Evaluate both sides of the identity for w in B_Z and a in B'_Z.

    The adjustments shift the integral sections by f @ adjustment so that
    each side can be evaluated with independently chosen sections.
    """
    require_valid_pairing(pairing)
    sequence, partner = pairing.sequence, pairing.partner
    _require_consecutive(sequence)
    _require_consecutive(partner)
    backend = sequence.backend
    matrix = as_backend(to_integer(pairing.matrix), backend)
    w = to_integer(np.asarray(omega, dtype=object).reshape(-1, 1))
    a = to_integer(np.asarray(alpha, dtype=object).reshape(-1, 1))

    section = integral_section(sequence, section_adjustment).matrix
    partner_section = integral_section(partner, partner_adjustment).matrix
    second_section = integral_section(partner, second_adjustment).matrix
    real_section = deligne_real_section(sequence).matrix
    partner_real = deligne_real_section(partner).matrix

    lhs = (real_section @ as_backend(w, backend)).T @ matrix @ as_backend(partner_section @ a, backend)
    difference = as_backend(second_section @ a, backend) - partner_real @ as_backend(a, backend)
    rhs = as_backend(section @ w, backend).T @ matrix @ difference
    on_b = to_integer(section.T @ to_integer(pairing.matrix) @ to_integer(partner.f))
    period = lattice_gcd(w.T @ on_b)
    return IdentitySides(lhs=lhs[0, 0], rhs=rhs[0, 0], period=period)


def verify_main_identity(
    pairing: SequencePairing,
    omega: Matrix,
    alpha: Matrix,
    *,
    section_adjustment: Matrix | None = None,
    partner_adjustment: Matrix | None = None,
    second_adjustment: Matrix | None = None,
) -> TorusElement:
    """Return LHS - RHS in R / periods; zero exactly when the identity holds."""
    sides = main_identity_sides(
        pairing,
        omega,
        alpha,
        section_adjustment=section_adjustment,
        partner_adjustment=partner_adjustment,
        second_adjustment=second_adjustment,
    )
    torus = period_torus(sides.period, pairing.sequence.backend)
    return torus.element(np.array([sides.lhs - sides.rhs], dtype=object))


def basis_residuals(
    pairing: SequencePairing,
    *,
    section_adjustment: Matrix | None = None,
    partner_adjustment: Matrix | None = None,
    second_adjustment: Matrix | None = None,
) -> list[tuple[tuple[int, int], TorusElement]]:
    """Run the identity on every pair of standard basis vectors of B and B'."""
    rank_b, rank_dual = pairing.sequence.B.rank, pairing.partner.B.rank
    results = []
    for i in range(rank_b):
        omega = integer_matrix([[int(index == i) for index in range(rank_b)]])
        for j in range(rank_dual):
            alpha = integer_matrix([[int(index == j) for index in range(rank_dual)]])
            residual = verify_main_identity(
                pairing,
                omega,
                alpha,
                section_adjustment=section_adjustment,
                partner_adjustment=partner_adjustment,
                second_adjustment=second_adjustment,
            )
            logger.log(logging.DEBUG, "identity residual at (%d, %d): zero=%s", i, j, residual.is_zero())
            results.append(((i, j), residual))
    return results
