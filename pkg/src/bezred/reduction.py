"""Constrained multi-degree reduction of Bezier curves.

The reduction runs in two phases.  Phase A tabulates the dual projection
coefficients and, when there are continuity parameters to determine, finds
the endpoint jet (lambda, mu) minimizing the weighted L2 error.  Phase B
builds the boundary control points from the jet, folds them into the
modified input coefficients ``upsilon`` and projects those onto the
constrained dual basis to get the inner control points.  Phase B costs
O(mn) per coordinate.

Three modes are offered:

``"c"``
    parametric C^{k,l} continuity (identity jet),
``"cg"``
    hybrid C^{p,q}/G^{k,l}: lambda_1 = 1 when k >= 2 and mu_1 = 1 when
    l >= 2, remaining parameters from a linear system,
``"g"``
    full G^{k,l}: all parameters optimized subject to lambda_1 >= d0 and
    mu_1 >= d1.
"""
from __future__ import annotations

import dataclasses
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .bernstein import (
    MAX_DEGREE, BezierCurve, JacobiWeight, bernstein_gram, degree_elevate,
    elevation_row, evaluate, inner_I,
)
from .continuity import (
    ContinuitySpec, GParams, end_boundary, end_partials, f_forms, f_scale,
    inner_partials, start_boundary, start_partials, warn_if_degenerate,
)
from .dual import PhiTable, constrained_gram, phi_table
from .errors import (
    AssumptionError, ConvergenceWarning, DegenerateProblemError, DomainError,
    NumericalError,
)
from .optimize import box_quadratic_min, projected_newton

MODES = ("c", "cg", "g")

# cond() threshold above which the CG linear system counts as singular
_SINGULAR_COND = 1e12


@dataclass(frozen=True, eq=False)
class ReductionProblem:
    source: BezierCurve
    target_degree: int
    spec: ContinuitySpec = field(default_factory=ContinuitySpec)
    weight: JacobiWeight = field(default_factory=JacobiWeight)
    max_degree: int | None = MAX_DEGREE

    def __post_init__(self):
        n, m = self.source.degree, self.target_degree
        k, l = self.spec.k, self.spec.l
        if not n > m > 0:
            raise AssumptionError(f"assumption violated: n > m > 0 (n={n}, m={m})")
        if not k + l < m - 1:
            raise AssumptionError(f"assumption violated: k + l < m - 1 (k={k}, l={l}, m={m})")
        if self.max_degree is not None and n > self.max_degree:
            raise AssumptionError(
                f"degree n={n} exceeds the double-precision limit {self.max_degree}; "
                "pass max_degree=None to override"
            )

    @property
    def n(self) -> int:
        return self.source.degree

    @property
    def m(self) -> int:
        return self.target_degree

    @property
    def k(self) -> int:
        return self.spec.k

    @property
    def l(self) -> int:
        return self.spec.l

    @property
    def nparams(self) -> int:
        return max(self.k, 0) + max(self.l, 0)

    def phi(self) -> PhiTable:
        return phi_table(self.n, self.m, self.k, self.l, self.weight, max_degree=self.max_degree)

    def hybrid(self) -> "ReductionProblem":
        """Copy with lambda_1 pinned when k >= 2 and mu_1 pinned when l >= 2."""
        spec = dataclasses.replace(self.spec, p_fixed=self.k >= 2, q_fixed=self.l >= 2)
        return dataclasses.replace(self, spec=spec)


@dataclass(frozen=True, eq=False)
class ReductionResult:
    reduced: BezierCurve
    params: GParams
    e2: float
    einf: float
    diagnostics: dict = field(default_factory=dict)


# -- Phase B -----------------------------------------------------------------

def boundary_points(problem: ReductionProblem, params: GParams):
    """(r_0..r_k, r_{m-l}..r_m) for the given jet."""
    P, m = problem.source, problem.m
    return (start_boundary(P, m, problem.k, params.lambdas),
            end_boundary(P, m, problem.l, params.mus))


def upsilon(P: BezierCurve, m: int, k: int, l: int, start, end) -> np.ndarray:
    """Input coefficients minus the degree-n image of the fixed boundary part.

    ``start`` holds r_0..r_k and ``end`` holds r_{m-l}..r_m.  The result has
    shape ``(n + 1, d)``; its Bernstein expansion is P - T where T is the
    boundary part of the reduced curve.
    """
    n = P.degree
    start = np.asarray(start, dtype=float).reshape(-1, P.dim)
    end = np.asarray(end, dtype=float).reshape(-1, P.dim)
    if start.shape[0] != k + 1 or end.shape[0] != l + 1:
        raise DomainError(
            f"boundary sizes {start.shape[0]}, {end.shape[0]} do not match k={k}, l={l}"
        )
    fixed = [*range(k + 1), *range(m - l, m + 1)]
    if not fixed:
        return np.array(P.points, dtype=float)
    rows = np.array([elevation_row(m, h, n) for h in fixed])
    return P.points - rows.T @ np.vstack([start, end])


def inner_points(upsilons, phi: PhiTable) -> np.ndarray:
    """r_i = sum_j upsilon_j phi_ij for i = k+1..m-l-1."""
    ups = np.asarray(upsilons, dtype=float)
    if ups.shape[0] != phi.n + 1:
        raise DomainError(f"expected {phi.n + 1} upsilon rows, got {ups.shape[0]}")
    return phi.entries @ ups


def construct(problem: ReductionProblem, params: GParams, phi: PhiTable | None = None) -> BezierCurve:
    """Phase B: the reduced curve for a fixed jet."""
    if phi is None:
        phi = problem.phi()
    start, end = boundary_points(problem, params)
    ups = upsilon(problem.source, problem.m, problem.k, problem.l, start, end)
    inner = inner_points(ups, phi)
    return BezierCurve(np.vstack([start, inner, end]))


# -- errors ------------------------------------------------------------------

def squared_error(P: BezierCurve, R: BezierCurve, w: JacobiWeight) -> float:
    """Weighted squared L2 distance between two Bezier curves.

    Both curves are brought to the larger degree and the Gram quadratic form
    of the coefficient difference is summed over coordinates.  This equals
    I_nn(p, p) + I_mm(r, r) - 2 I_nm(p, r) but avoids the cancellation that
    form suffers when the curves nearly coincide.
    """
    if P.dim != R.dim:
        raise DomainError(f"dimension mismatch: {P.dim} vs {R.dim}")
    N = max(P.degree, R.degree)
    diff = degree_elevate(P, N).points - degree_elevate(R, N).points
    gram = bernstein_gram(N, N, w)
    return max(float(np.einsum("ih,ij,jh->", diff, gram, diff)), 0.0)


def squared_error_expanded(P: BezierCurve, R: BezierCurve, w: JacobiWeight) -> float:
    """The same error summed term by term from the three I_NM forms."""
    if P.dim != R.dim:
        raise DomainError(f"dimension mismatch: {P.dim} vs {R.dim}")
    total = 0.0
    for h in range(P.dim):
        p, r = P.points[:, h], R.points[:, h]
        total += inner_I(p, p, w) + inner_I(r, r, w) - 2 * inner_I(p, r, w)
    return total


def max_error(P: BezierCurve, R: BezierCurve, N: int = 500) -> float:
    """Largest Euclidean deviation over the grid {0, 1/N, ..., 1}."""
    if N < 1:
        raise DomainError(f"grid size must be >= 1, got {N}")
    t = np.arange(N + 1) / N
    return float(np.max(np.linalg.norm(evaluate(P, t) - evaluate(R, t), axis=1)))


# -- objective and gradient ---------------------------------------------------

def _as_params(problem, params):
    if isinstance(params, GParams):
        lam, mu = params.lambdas, params.mus
        if len(lam) != max(problem.k, 0) or len(mu) != max(problem.l, 0):
            raise DomainError(
                f"parameter lengths ({len(lam)}, {len(mu)}) do not match (k, l) = ({problem.k}, {problem.l})"
            )
        return params
    return GParams.from_vector(params, problem.k, problem.l)


def objective(problem: ReductionProblem, params) -> float:
    """Squared error of the reduced curve as a function of the jet."""
    params = _as_params(problem, params)
    return squared_error(problem.source, construct(problem, params), problem.weight)


def control_point_partials(problem: ReductionProblem, params, phi=None) -> list:
    """d r / d theta for every parameter, each of shape ``(m + 1, d)``.

    Parameters are ordered lambda_1..lambda_k, mu_1..mu_l.
    """
    params = _as_params(problem, params)
    phi = phi if phi is not None else problem.phi()
    P, m, k, l = problem.source, problem.m, problem.k, problem.l
    out = []
    for u in range(1, k + 1):
        full = np.zeros((m + 1, P.dim))
        bp = start_partials(P, m, k, params.lambdas, u)
        full[:k + 1] = bp
        full[k + 1:m - l] = inner_partials(phi, bp, "start", u)
        out.append(full)
    for v in range(1, l + 1):
        full = np.zeros((m + 1, P.dim))
        bp = end_partials(P, m, l, params.mus, v)
        full[m - l:] = bp
        full[k + 1:m - l] = inner_partials(phi, bp, "end", v)
        out.append(full)
    return out


def gradient_residuals(problem: ReductionProblem, params) -> np.ndarray:
    """Left-hand sides of the stationarity system in the F_tj normalization.

    Component u is sum_h sum_j [F_mj(r^h) - F_nj(p^h)] dr_jh/dtheta_u.  The
    true gradient of ``objective`` is ``2 / f_scale(m, w)`` times this.
    """
    params = _as_params(problem, params)
    phi = problem.phi()
    R = construct(problem, params, phi)
    m, w = problem.m, problem.weight
    diff = f_forms(R.points, m, m, w) - f_forms(problem.source.points, problem.n, m, w)
    return np.array([np.sum(diff * dr) for dr in control_point_partials(problem, params, phi)])


def objective_gradient(problem: ReductionProblem, params) -> np.ndarray:
    return 2.0 / f_scale(problem.m, problem.weight) * gradient_residuals(problem, params)


# -- parameter determination ---------------------------------------------------

class _FreeView:
    """Objective restricted to the parameters not pinned by p/q flags."""

    def __init__(self, problem: ReductionProblem, template: GParams):
        self.problem = problem
        kk = max(problem.k, 0)
        base = template.as_vector()
        fixed = np.zeros(problem.nparams, dtype=bool)
        if problem.spec.p_fixed:
            fixed[0] = True
            base[0] = 1.0
        if problem.spec.q_fixed:
            fixed[kk] = True
            base[kk] = 1.0
        self.base = base
        self.free = np.flatnonzero(~fixed)
        lower = np.full(problem.nparams, -np.inf)
        if problem.k >= 1:
            lower[0] = problem.spec.d0
        if problem.l >= 1:
            lower[kk] = problem.spec.d1
        self.lower = lower[self.free]
        self.bounded_names = {0: "lambda_1", kk: "mu_1"}

    def full(self, x) -> np.ndarray:
        v = self.base.copy()
        v[self.free] = x
        return v

    def params(self, x) -> GParams:
        return GParams.from_vector(self.full(x), self.problem.k, self.problem.l)

    def start(self) -> np.ndarray:
        return self.base[self.free].copy()

    def fun(self, x) -> float:
        return objective(self.problem, self.full(x))

    def grad(self, x) -> np.ndarray:
        return objective_gradient(self.problem, self.full(x))[self.free]

    def residuals(self, x) -> np.ndarray:
        return gradient_residuals(self.problem, self.full(x))[self.free]

    def active_names(self, active) -> list:
        return [self.bounded_names.get(int(self.free[i]), str(int(self.free[i]))) for i in active]

    def is_quadratic(self) -> bool:
        spec = self.problem.spec
        return (self.problem.k <= 1 or spec.p_fixed) and (self.problem.l <= 1 or spec.q_fixed)


def _affine_model(fn, x0):
    """Matrix and offset of an affine map, from unit-step differences."""
    f0 = np.asarray(fn(x0), dtype=float)
    A = np.empty((f0.size, x0.size))
    for i in range(x0.size):
        e = np.zeros_like(x0)
        e[i] = 1.0
        A[:, i] = np.asarray(fn(x0 + e)) - f0
    return A, f0


def _qp(view: _FreeView, x0):
    H, g0 = _affine_model(view.grad, x0)
    res = box_quadratic_min(H, g0, view.lower - x0)
    x = x0 + res.x
    # the shift by x0 can leave an active variable an ulp below its bound
    x[list(res.active)] = view.lower[list(res.active)]
    return x, {"solver": "active-set", "active_bounds": view.active_names(res.active)}


def solve_qp(problem: ReductionProblem, initial: GParams | None = None) -> GParams:
    """Minimize a quadratic objective subject to lambda_1 >= d0, mu_1 >= d1."""
    return _solve_qp(problem, initial)[0]


def _solve_qp(problem, initial=None):
    initial = initial or GParams.identity(problem.k, problem.l)
    view = _FreeView(problem, _as_params(problem, initial))
    if not view.is_quadratic():
        raise DomainError("solve_qp needs a quadratic objective (k, l <= 1 or pinned leading parameters)")
    if view.free.size == 0:
        return view.params(view.start()), {"solver": "none"}
    x, diag = _qp(view, view.start())
    return view.params(x), diag


def solve_linear_cg(problem: ReductionProblem) -> GParams:
    """Hybrid C^{p,q}/G^{k,l} parameters from the linear stationarity system."""
    return _solve_linear_cg(problem)[0]


def _solve_linear_cg(problem):
    hp = problem.hybrid()
    view = _FreeView(hp, GParams.identity(hp.k, hp.l))
    if view.free.size == 0:
        return view.params(view.start()), {"solver": "none"}
    x0 = view.start()
    A, r0 = _affine_model(view.residuals, x0)
    cond = float(np.linalg.cond(A))
    diag = {"solver": "linear", "condition": cond}
    if not np.isfinite(cond) or cond > _SINGULAR_COND:
        raise DegenerateProblemError(
            f"hybrid parameter system is singular (cond ~ {cond:.3g}); "
            "check for vanishing endpoint tangents", diag)
    x = x0 + np.linalg.solve(A, -r0)
    if np.any(x < view.lower):
        # nonpositive lambda_1 or mu_1: switch to the bounded quadratic program
        x, qdiag = _qp(view, x0)
        diag.update(qdiag, fallback="qp")
    return view.params(x), diag


def solve_nlp(problem: ReductionProblem, initial: GParams | None = None, *,
              gtol: float = 1e-10, maxiter: int = 100) -> GParams:
    """Bound-constrained local minimization of the objective."""
    return _solve_nlp(problem, initial, gtol=gtol, maxiter=maxiter)[0]


def _solve_nlp(problem, initial=None, *, gtol=1e-10, maxiter=100):
    initial = initial or GParams.identity(problem.k, problem.l)
    view = _FreeView(problem, _as_params(problem, initial))
    x0 = view.start()
    if x0.size == 0:
        return view.params(x0), {"solver": "none"}
    f0 = view.fun(np.maximum(x0, view.lower))
    res = projected_newton(view.fun, view.grad, x0, view.lower, gtol=gtol, maxiter=maxiter)
    starts = 1
    if not res.fun < f0:
        # stuck at the start: retry from +-50% on the bounded parameters
        bounded = np.flatnonzero(np.isfinite(view.lower))
        for signs in np.array(np.meshgrid(*[[0.5, 1.5]] * len(bounded))).reshape(len(bounded), -1).T:
            x1 = x0.copy()
            x1[bounded] *= signs
            trial = projected_newton(view.fun, view.grad, x1, view.lower, gtol=gtol, maxiter=maxiter)
            starts += 1
            if trial.fun < res.fun:
                res = trial
    diag = {
        "solver": "projected-newton",
        "iterations": res.nit,
        "converged": res.converged,
        "projected_gradient": res.extra.get("projected_gradient"),
        "active_bounds": view.active_names(res.active),
        "starts": starts,
    }
    if not res.converged:
        warnings.warn(
            f"parameter optimization stopped without converging ({res.message}, "
            f"projected gradient {diag['projected_gradient']:.3g})",
            ConvergenceWarning, stacklevel=3)
    return view.params(res.x), diag


# -- driver ------------------------------------------------------------------

def reduce(problem: ReductionProblem, mode: str = "g") -> ReductionResult:
    """Reduce ``problem.source`` to degree ``problem.m`` in the given mode."""
    mode = mode.lower()
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    k, l = problem.k, problem.l
    diag = {"mode": mode, "n": problem.n, "m": problem.m}
    t0 = time.perf_counter()
    try:
        phi = problem.phi()
    except NumericalError as exc:
        exc.args = (f"phase A, step I: {exc.args[0]}",) + exc.args[1:]
        raise
    diag["gram_condition"] = phi.condition

    identity = GParams.identity(k, l)
    try:
        if k < 1 and l < 1:
            params, pdiag = identity, {"solver": "none"}
        elif mode == "c":
            params, pdiag = identity, {"solver": "none"}
        else:
            warn_if_degenerate(problem.source, k, l)
            if mode == "cg":
                params, pdiag = _solve_linear_cg(problem)
            else:
                view = _FreeView(problem, identity)
                if view.is_quadratic():
                    params, pdiag = _solve_qp(problem, identity)
                else:
                    params, pdiag = _solve_nlp(problem, identity)
                    # the hybrid optimum is feasible here too; keep the better local minimum
                    try:
                        cg_params, _ = _solve_linear_cg(problem)
                    except DegenerateProblemError:
                        cg_params = None
                    if cg_params is not None and cg_params != params:
                        alt, alt_diag = _solve_nlp(problem, cg_params)
                        if objective(problem, alt) < objective(problem, params):
                            params, pdiag = alt, dict(alt_diag, start="hybrid")
    except NumericalError as exc:
        exc.args = (f"phase A, step V: {exc.args[0]}",) + exc.args[1:]
        raise
    t1 = time.perf_counter()
    R = construct(problem, params, phi)
    t2 = time.perf_counter()
    e2 = float(np.sqrt(squared_error(problem.source, R, problem.weight)))
    einf = max_error(problem.source, R)
    diag.update(parameters=pdiag, timings={"phase_a": t1 - t0, "phase_b": t2 - t1})
    return ReductionResult(R, params, e2, einf, diag)


# -- testing oracle -------------------------------------------------------------

def oracle_normal_equations(problem: ReductionProblem, start, end) -> np.ndarray:
    """Inner control points from the normal equations.

    Independent of the dual-basis route: the boundary part is degree
    elevated as a curve, right-hand sides come from ``inner_I`` and the Gram
    system is solved by LU.
    """
    P, m, k, l, w = problem.source, problem.m, problem.k, problem.l, problem.weight
    T = np.zeros((m + 1, P.dim))
    T[:k + 1] = np.asarray(start, dtype=float).reshape(-1, P.dim)
    T[m - l:] = np.asarray(end, dtype=float).reshape(-1, P.dim)
    W = P.points - degree_elevate(BezierCurve(T), P.degree).points
    G = constrained_gram(m, k, l, w, max_degree=problem.max_degree).entries
    rhs = np.empty((G.shape[0], P.dim))
    for row, i in enumerate(range(k + 1, m - l)):
        unit = np.zeros(m + 1)
        unit[i] = 1.0
        for h in range(P.dim):
            rhs[row, h] = inner_I(W[:, h], unit, w)
    return np.linalg.solve(G, rhs)
