"""Constrained multi-degree reduction of Bezier curves."""
from .bernstein import (
    MAX_DEGREE, NATURAL_WEIGHTS, WEIGHT_PRESETS, BezierCurve, JacobiWeight,
    beta_fn, bernstein_eval, bernstein_gram, bernstein_pair_inner, curve_eval,
    degree_elevate, elevation_matrix, endpoint_derivatives, evaluate,
    forward_diff, inner_I, pochhammer,
)
from .continuity import (
    ContinuitySpec, GParams, end_boundary, end_partials, f_form, f_forms,
    inner_partials, start_boundary, start_partials,
)
from .dual import GramMatrix, PhiTable, constrained_gram, dual_coeffs, phi_table
from .errors import (
    AssumptionError, BezredError, ConvergenceWarning, DegenerateProblemError,
    DegenerateTangentWarning, DomainError, IllConditionedError, NumericalError,
    UnsupportedOrderError, UnsupportedPlotError,
)
from .io import CurveFormatError, load_curve, save_curve
from .reduction import (
    ReductionProblem, ReductionResult, construct, gradient_residuals, inner_points,
    max_error, objective, objective_gradient, oracle_normal_equations, reduce,
    solve_linear_cg, solve_nlp, solve_qp, squared_error, upsilon,
)
from .svg import emit_svg

__version__ = "0.1.0"
