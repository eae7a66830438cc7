"""Exact valuations on R[[X]] for a rank-1 valuation ring R of Hahn-type series.

The modules build on each other: ``value_group`` (exact Q(sqrt2) scalars),
``base_field`` (the field F and its valuation ring R), ``power_series``
(v_lambda, v_0, Newton polygons), ``graded`` (leading forms),
``localization`` (T and K) and ``incoherence`` (the witness and refuter).
"""
from rxval.base_field import FieldElem, divide_in_R, in_R, monomial, parse_field
from rxval.graded import graded_mul, leading_form
from rxval.incoherence import (
    IncoherenceConfig,
    build_witness_series,
    intersection_membership,
    refute_generators,
    verify_report,
)
from rxval.localization import LocalFraction, factor_unit, invert, pure_divide, unitizer, val_fraction
from rxval.power_series import CertifiedSeries, SeriesPoly, mul, mul_certified, newton_polygon, v_lambda, v_zero
from rxval.value_group import INF, GroupScalar, ValueGroup, compare, decreasing_sequence, find_in_interval, parse_scalar

__version__ = "0.1.0"

__all__ = [
    "INF",
    "GroupScalar",
    "ValueGroup",
    "compare",
    "find_in_interval",
    "decreasing_sequence",
    "parse_scalar",
    "FieldElem",
    "monomial",
    "in_R",
    "divide_in_R",
    "parse_field",
    "SeriesPoly",
    "CertifiedSeries",
    "v_lambda",
    "v_zero",
    "mul",
    "mul_certified",
    "newton_polygon",
    "leading_form",
    "graded_mul",
    "LocalFraction",
    "val_fraction",
    "factor_unit",
    "unitizer",
    "invert",
    "pure_divide",
    "IncoherenceConfig",
    "build_witness_series",
    "intersection_membership",
    "refute_generators",
    "verify_report",
]
