"""Polynomial interpolation from function averages over interval segments."""

from .basis import ChebExpansion, MonomialPoly, eval_T, eval_U, integrate_U_over
from .conditioning import (
    LebesgueReport,
    fill_distance,
    full_report,
    lebesgue_constant,
    nodal_lebesgue_constant,
    operator_norm,
)
from .errors import EvaluationError, ResonantRadius, SingularSystem
from .interpolation import Interpolant, interpolate, lagrange_basis
from .quadrature import MeasurementVector, gauss_legendre, measure, measure_vector
from .segments import (
    NodeSet,
    Segment,
    SegmentClass,
    SegmentSet,
    affine_map,
    is_nonoverlapping,
    make_arc_uniform,
    make_chebyshev_lobatto,
    make_cl_overlapping,
    make_equidistant,
)

__version__ = "0.1.0"
