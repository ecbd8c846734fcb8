"""Executable generalized power series over exact coefficient fields."""

from .coeffs import QQ, FqElem, GF, Rationals, coeff_field, gf
from .newton import LiftResult, NewtonStep, hensel_lift
from .oracle import (
    CATALOGUE,
    PADIC_CATALOGUE,
    LaurentBase,
    OracleResult,
    PadicBase,
    PureStep,
    fundamental_equality_oracle,
    root_of_uniformizer,
    run_catalogue,
    unramified,
)
from .parse import Poly, parse_poly, parse_series
from .series import HahnSeries, ValRes, arith, default_gauge, invert_to, invert_trunc, val_res

__all__ = [
    "CATALOGUE",
    "PADIC_CATALOGUE",
    "QQ",
    "FqElem",
    "GF",
    "HahnSeries",
    "LaurentBase",
    "LiftResult",
    "NewtonStep",
    "OracleResult",
    "PadicBase",
    "Poly",
    "PureStep",
    "Rationals",
    "ValRes",
    "arith",
    "coeff_field",
    "default_gauge",
    "fundamental_equality_oracle",
    "gf",
    "hensel_lift",
    "invert_to",
    "invert_trunc",
    "parse_poly",
    "parse_series",
    "root_of_uniformizer",
    "run_catalogue",
    "unramified",
    "val_res",
]
