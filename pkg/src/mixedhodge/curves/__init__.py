"""Genus-one curves as complex tori: Weierstrass zeta, third-kind periods and the eta class."""

from .periods import (
    CurveIdentityReport,
    DivisorZero,
    aj_direct,
    closed_form_periods,
    eta_class,
    extension_splits,
    find_cycle_base_point,
    third_kind_periods,
    verify_curve_identity,
)
from .weierstrass import ComplexTorus, QuasiPeriods, quasi_periods, reduce_point, weierstrass_zeta

__all__ = [
    "ComplexTorus",
    "CurveIdentityReport",
    "DivisorZero",
    "QuasiPeriods",
    "aj_direct",
    "closed_form_periods",
    "eta_class",
    "extension_splits",
    "find_cycle_base_point",
    "quasi_periods",
    "reduce_point",
    "third_kind_periods",
    "verify_curve_identity",
    "weierstrass_zeta",
]
