"""Rational points, zeta functions, Weierstrass and Frobenius orders of curves
over finite fields, with numerical-semigroup and plane-arc toolkits."""

from .errors import BudgetExceeded, FFCurvesError, InconsistencyError, PrecisionExhausted, UsageError
from .gf import FieldCtx, FieldElement, embed, find_roots, frobenius, make_field
from .curve import AFFINE, PROJECTIVE, LocalFrame, PlaneCurveModel, count_points, expand_at, sample_points
from .series import TruncSeries, hasse_derive, wronskian
from .weierstrass import LinearSeriesSpec, OrderReport, analyze, order_sequence, frobenius_orders, sv_bound
from .zeta import QuadExt, ZetaData, classify, explicit_formula_bound, numerator_from_counts
from .numsg import NumericalSemigroup, from_gaps, from_generators
from .arcs import ArcInstance, arc_bounds, greedy_complete_arc, is_arc, is_complete
from .specdoc import parse_curve_spec, reference_curve

__all__ = [
    "AFFINE", "PROJECTIVE", "ArcInstance", "BudgetExceeded", "FFCurvesError", "FieldCtx", "FieldElement",
    "InconsistencyError", "LinearSeriesSpec", "LocalFrame", "NumericalSemigroup", "OrderReport",
    "PlaneCurveModel", "PrecisionExhausted", "QuadExt", "TruncSeries", "UsageError", "ZetaData",
    "analyze", "arc_bounds", "classify", "count_points", "embed", "expand_at", "explicit_formula_bound",
    "find_roots", "frobenius", "frobenius_orders", "from_gaps", "from_generators", "greedy_complete_arc",
    "hasse_derive", "is_arc", "is_complete", "make_field", "numerator_from_counts", "order_sequence",
    "parse_curve_spec", "reference_curve", "sample_points", "sv_bound", "wronskian",
]
