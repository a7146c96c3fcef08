"""Endpoint continuity constraints in terms of control points.

With a reparametrization phi of [0, 1], G^{k,l} continuity between the
input P (degree n) and the output R (degree m) fixes r_0..r_k as
polynomials in lambda_j = phi^(j)(0) and r_{m-l}..r_m as polynomials in
mu_j = phi^(j)(1).  Orders above 3 are not supported.

The coefficient ratios (n-1)_2/(m-1)_2 and (n-2)_3/(m-2)_3 are written as
explicit products n(n-1)/(m(m-1)) and n(n-1)(n-2)/(m(m-1)(m-2)).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .bernstein import BezierCurve, JacobiWeight, bernstein_gram, elevation_row, pochhammer, beta_fn
from .errors import DegenerateTangentWarning, DomainError, UnsupportedOrderError

MAX_ORDER = 3


@dataclass(frozen=True)
class ContinuitySpec:
    """Orders (k, l), hybrid flags and lower bounds for lambda_1, mu_1.

    ``p_fixed`` pins lambda_1 = 1 (C^1 at t=0) and is only meaningful for
    k >= 2; ``q_fixed`` is the mirror image at t=1.
    """

    k: int = -1
    l: int = -1
    p_fixed: bool = False
    q_fixed: bool = False
    d0: float = 1e-4
    d1: float = 1e-4

    def __post_init__(self):
        for name, val in (("k", self.k), ("l", self.l)):
            if val > MAX_ORDER:
                raise UnsupportedOrderError(f"{name}={val}: continuity orders are limited to k <= 3 and l <= 3")
            if val < -1:
                raise DomainError(f"{name}={val}: continuity orders must be >= -1")
        if self.p_fixed and self.k < 2:
            raise DomainError("p fixed (lambda_1 = 1) requires k >= 2")
        if self.q_fixed and self.l < 2:
            raise DomainError("q fixed (mu_1 = 1) requires l >= 2")
        if not (self.d0 > 0 and self.d1 > 0):
            raise DomainError(f"lower bounds must be positive (d0={self.d0}, d1={self.d1})")


@dataclass(frozen=True)
class GParams:
    """Endpoint jet of the reparametrization: lambda_1..lambda_k, mu_1..mu_l."""

    lambdas: tuple = ()
    mus: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        object.__setattr__(self, "mus", tuple(float(x) for x in self.mus))

    @classmethod
    def identity(cls, k: int, l: int) -> "GParams":
        """The jet of phi(t) = t, i.e. plain C^{k,l} continuity."""
        return cls((1.0, 0.0, 0.0)[:max(k, 0)], (1.0, 0.0, 0.0)[:max(l, 0)])

    @classmethod
    def from_vector(cls, x, k: int, l: int) -> "GParams":
        k, l = max(k, 0), max(l, 0)
        x = np.asarray(x, dtype=float)
        if x.shape != (k + l,):
            raise DomainError(f"expected {k + l} parameters, got {x.shape}")
        return cls(tuple(x[:k]), tuple(x[k:]))

    def as_vector(self) -> np.ndarray:
        return np.array(self.lambdas + self.mus, dtype=float)


def _check_params(order, values, name):
    if order > MAX_ORDER:
        raise UnsupportedOrderError(f"order {order} > 3 is not supported")
    if len(values) < max(order, 0):
        raise DomainError(f"need {max(order, 0)} {name} values, got {len(values)}")


def _ratios(n, m):
    c1 = n / m
    c2 = n * (n - 1) / (m * (m - 1)) if m > 1 else 0.0
    c3 = n * (n - 1) * (n - 2) / (m * (m - 1) * (m - 2)) if m > 2 else 0.0
    return c1, c2, c3


def warn_if_degenerate(P: BezierCurve, k: int, l: int) -> None:
    pts = P.points
    if k >= 1 and not np.any(pts[1] - pts[0]):
        warnings.warn("input tangent at t=0 vanishes; lambda_1 is not identifiable",
                      DegenerateTangentWarning, stacklevel=3)
    if l >= 1 and not np.any(pts[-1] - pts[-2]):
        warnings.warn("input tangent at t=1 vanishes; mu_1 is not identifiable",
                      DegenerateTangentWarning, stacklevel=3)


# rows of _DIFF applied to (q_0, q_1, q_2, q_3) give q_0, dq_0, d^2q_0, d^3q_0
_DIFF = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [-1.0, 1.0, 0.0, 0.0],
    [1.0, -2.0, 1.0, 0.0],
    [-1.0, 3.0, -3.0, 1.0],
])


_ALTERNATING = np.array([[1.0], [-1.0], [1.0], [-1.0]])


def _start_diffs(P, k):
    return _DIFF[:k + 1, :k + 1] @ P.points[:k + 1]


def _end_diffs(P, k):
    # (p_n, p_n - p_{n-1}, d^2 p_{n-2}, p_n - 3p_{n-1} + 3p_{n-2} - p_{n-3})
    return _DIFF[:k + 1, :k + 1] @ P.points[::-1][:k + 1] * _ALTERNATING[:k + 1]


def _table(rows, order):
    coef = np.zeros((order + 1, 4))
    for i, row in enumerate(rows[:order + 1]):
        coef[i, :len(row)] = row
    return coef[:, :order + 1]


def start_coefficients(n: int, m: int, k: int, lambdas) -> np.ndarray:
    """Row i expresses r_i in terms of (p_0, dp_0, d^2p_0, d^3p_0)."""
    c1, c2, c3 = _ratios(n, m)
    l1, l2, l3 = (tuple(lambdas) + (0.0, 0.0, 0.0))[:3]
    rows = [(1.0,)]
    if k >= 1:
        rows.append((1.0, c1 * l1))
    if k >= 2:
        rows.append((1.0, c1 * (2 * l1 + l2 / (m - 1)), c2 * l1**2))
    if k >= 3:
        rows.append((1.0, c1 * (3 * l1 + 3 * l2 / (m - 1) + l3 / ((m - 2) * (m - 1))),
                     3 * c2 * (l1**2 + l1 * l2 / (m - 2)), c3 * l1**3))
    return _table(rows, k)


def end_coefficients(n: int, m: int, l: int, mus) -> np.ndarray:
    """Row s expresses r_{m-s} in terms of (p_n, dp_{n-1}, d^2p_{n-2}, d^3p_{n-3})."""
    c1, c2, c3 = _ratios(n, m)
    u1, u2, u3 = (tuple(mus) + (0.0, 0.0, 0.0))[:3]
    rows = [(1.0,)]
    if l >= 1:
        rows.append((1.0, -c1 * u1))
    if l >= 2:
        rows.append((1.0, -c1 * (2 * u1 - u2 / (m - 1)), c2 * u1**2))
    if l >= 3:
        rows.append((1.0, -c1 * (3 * u1 - 3 * u2 / (m - 1) + u3 / ((m - 2) * (m - 1))),
                     3 * c2 * (u1**2 - u1 * u2 / (m - 2)), -c3 * u1**3))
    return _table(rows, l)


def start_boundary(P: BezierCurve, m: int, k: int, lambdas=()) -> np.ndarray:
    """Control points r_0..r_k forced by G^k continuity at t=0.

    Returns an array of shape ``(k + 1, d)`` (empty for k = -1).
    """
    _check_params(k, lambdas, "lambda")
    if k < 0:
        return np.empty((0, P.dim))
    return start_coefficients(P.degree, m, k, lambdas) @ _start_diffs(P, k)


def end_boundary(P: BezierCurve, m: int, l: int, mus=()) -> np.ndarray:
    """Control points r_{m-l}..r_m forced by G^l continuity at t=1.

    Rows are in increasing index order, so the last row is r_m = p_n.
    """
    _check_params(l, mus, "mu")
    if l < 0:
        return np.empty((0, P.dim))
    return (end_coefficients(P.degree, m, l, mus) @ _end_diffs(P, l))[::-1]


def start_partials(P: BezierCurve, m: int, k: int, lambdas, u: int) -> np.ndarray:
    """d r_i / d lambda_u for i = 0..k, shape ``(k + 1, d)``."""
    _check_params(k, lambdas, "lambda")
    if not 1 <= u <= k:
        raise DomainError(f"parameter index u={u} outside 1..{k}")
    c1, c2, c3 = _ratios(P.degree, m)
    l1, l2 = (tuple(lambdas) + (0.0, 0.0))[:2]
    rows = [(0.0,), (0.0, c1 if u == 1 else 0.0)]
    if u == 1:
        if k >= 2:
            rows.append((0.0, 2 * c1, 2 * l1 * c2))
        if k >= 3:
            rows.append((0.0, 3 * c1, (2 * l1 + l2 / (m - 2)) * 3 * c2, 3 * l1**2 * c3))
    elif u == 2:
        rows.append((0.0, c1 / (m - 1)))
        if k >= 3:
            rows.append((0.0, 3 * c1 / (m - 1), 3 * l1 * c2 / (m - 2)))
    else:
        rows += [(0.0,), (0.0, c1 / ((m - 1) * (m - 2)))]
    return _table(rows, k) @ _start_diffs(P, k)


def end_partials(P: BezierCurve, m: int, l: int, mus, v: int) -> np.ndarray:
    """d r_i / d mu_v for i = m-l..m, shape ``(l + 1, d)``."""
    _check_params(l, mus, "mu")
    if not 1 <= v <= l:
        raise DomainError(f"parameter index v={v} outside 1..{l}")
    c1, c2, c3 = _ratios(P.degree, m)
    u1, u2 = (tuple(mus) + (0.0, 0.0))[:2]
    # row s is d r_{m-s} / d mu_v
    rows = [(0.0,), (0.0, -c1 if v == 1 else 0.0)]
    if v == 1:
        if l >= 2:
            rows.append((0.0, -2 * c1, 2 * u1 * c2))
        if l >= 3:
            rows.append((0.0, -3 * c1, (2 * u1 - u2 / (m - 2)) * 3 * c2, -3 * u1**2 * c3))
    elif v == 2:
        rows.append((0.0, c1 / (m - 1)))
        if l >= 3:
            rows.append((0.0, 3 * c1 / (m - 1), -3 * u1 * c2 / (m - 2)))
    else:
        rows += [(0.0,), (0.0, -c1 / ((m - 1) * (m - 2)))]
    return (_table(rows, l) @ _end_diffs(P, l))[::-1]


def inner_partials(phi, boundary_partials, side: str, paramindex: int | None = None) -> np.ndarray:
    """Derivatives of the inner control points r_{k+1}..r_{m-l-1}.

    ``boundary_partials`` are the derivatives of r_0..r_k (``side="start"``)
    or r_{m-l}..r_m (``side="end"``) with respect to one parameter.  The inner
    points depend on them linearly through the degree-elevated boundary part.
    Only boundary indices g = u..k (or m-l..m-v) enter the sum when
    ``paramindex`` is given; the other partials vanish anyway.
    """
    n, m, k, l = phi.n, phi.m, phi.k, phi.l
    dp = np.asarray(boundary_partials, dtype=float)
    if side == "start":
        gs = range(0, k + 1)
        if paramindex is not None:
            gs = range(paramindex, k + 1)
        offset = 0
    elif side == "end":
        gs = range(m - l, m + 1)
        if paramindex is not None:
            gs = range(m - l, m - paramindex + 1)
        offset = m - l
    else:
        raise DomainError(f"side must be 'start' or 'end', got {side!r}")
    expected = (k + 1) if side == "start" else (l + 1)
    if dp.shape[0] != expected:
        raise DomainError(f"expected {expected} boundary partials, got {dp.shape[0]}")
    elevated = np.zeros((n + 1, dp.shape[1]))
    for g in gs:
        elevated += np.outer(elevation_row(m, g, n), dp[g - offset])
    return -phi.entries @ elevated


def f_scale(m: int, w: JacobiWeight) -> float:
    """(alpha + beta + 2)_m / B(alpha + 1, beta + 1).

    F_tj(q) equals this constant times <sum_i q_i B_i^t, B_j^m>.
    """
    return pochhammer(w.alpha + w.beta + 2, m) / beta_fn(w.alpha + 1, w.beta + 1)


def f_forms(q, t: int, m: int, w: JacobiWeight) -> np.ndarray:
    """F_tj(q) for all j = 0..m.  ``q`` may be ``(t+1,)`` or ``(t+1, d)``."""
    q = np.asarray(q, dtype=float)
    if q.shape[0] != t + 1:
        raise DomainError(f"expected {t + 1} coefficients, got {q.shape[0]}")
    return f_scale(m, w) * (bernstein_gram(t, m, w).T @ q)


def f_form(q, t: int, j: int, m: int, w: JacobiWeight) -> float:
    if not 0 <= j <= m:
        raise DomainError(f"index j={j} outside 0..{m}")
    return float(f_forms(np.asarray(q, dtype=float).reshape(-1), t, m, w)[j])
