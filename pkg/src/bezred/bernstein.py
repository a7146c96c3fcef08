"""Bernstein basis primitives and Jacobi-weighted inner products.

Everything here works in double precision.  Binomial ratios and Pochhammer
symbols are built from incremental products, so nothing overflows for the
degrees the reduction engine supports (see ``MAX_DEGREE``).  Inner products
of high-degree Bernstein pairs switch to log-gamma evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import special

from .errors import DomainError

#: Default cap on curve degrees.  Double precision loses accuracy in the
#: constrained Gram systems above this; callers may override explicitly.
MAX_DEGREE = 20

# above this N+M the Pochhammer products overflow, use log-gamma instead
_PRODUCT_ROUTE_LIMIT = 120


@dataclass(frozen=True)
class JacobiWeight:
    """Weight ``(1 - t)**alpha * t**beta`` on [0, 1]."""

    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise DomainError(
                f"Jacobi weight needs alpha, beta > -1 (got alpha={self.alpha}, beta={self.beta})"
            )

    @classmethod
    def preset(cls, name: str) -> "JacobiWeight":
        try:
            alpha, beta = WEIGHT_PRESETS[name]
        except KeyError:
            raise DomainError(
                f"unknown weight preset {name!r}; choose from {sorted(WEIGHT_PRESETS)}"
            ) from None
        return cls(alpha, beta)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return (1.0 - t) ** self.alpha * t**self.beta


#: The five "natural" weights: Legendre, both Chebyshev kinds, and the two
#: mixed half-integer pairs.
WEIGHT_PRESETS = {
    "legendre": (0.0, 0.0),
    "cheb1": (-0.5, -0.5),
    "cheb2": (0.5, 0.5),
    "cheb-mixed-a": (-0.5, 0.5),
    "cheb-mixed-b": (0.5, -0.5),
}

NATURAL_WEIGHTS = tuple(JacobiWeight(a, b) for a, b in WEIGHT_PRESETS.values())


class BezierCurve:
    """A Bezier curve of degree ``n`` in ``d`` dimensions.

    ``points`` is stored as a read-only ``(n + 1, d)`` float array.  A 1-D
    sequence is taken as a scalar (d = 1) curve.
    """

    __slots__ = ("points",)

    def __init__(self, points):
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DomainError(f"control points must form an (n+1, d) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DomainError("control points must be finite")
        pts.flags.writeable = False
        self.points = pts

    @property
    def degree(self) -> int:
        return self.points.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __call__(self, t):
        return evaluate(self, t)

    def __repr__(self):
        return f"BezierCurve(degree={self.degree}, dim={self.dim})"

    def __eq__(self, other):
        if not isinstance(other, BezierCurve):
            return NotImplemented
        return self.points.shape == other.points.shape and np.array_equal(self.points, other.points)

    __hash__ = None

    def reversed(self) -> "BezierCurve":
        """Same point set traced from t=1 to t=0."""
        return BezierCurve(self.points[::-1])

    def elevate(self, target: int) -> "BezierCurve":
        return degree_elevate(self, target)


def binom(u: int, v: int) -> int:
    """Binomial coefficient with C(u, v) = 0 outside 0 <= v <= u."""
    if v < 0 or v > u or u < 0:
        return 0
    return math.comb(u, v)


def bernstein_eval(i: int, n: int, t: float) -> float:
    """B_i^n(t) = C(n, i) t^i (1 - t)^(n - i)."""
    if n < 0 or i < 0 or i > n:
        raise DomainError(f"Bernstein index out of range: i={i}, n={n}")
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t={t} outside [0, 1]")
    return math.comb(n, i) * t**i * (1.0 - t) ** (n - i)


def bernstein_basis(n: int, t) -> np.ndarray:
    """All degree-n Bernstein polynomials at ``t``; shape ``(len(t), n + 1)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    i = np.arange(n + 1)
    coeffs = np.array([math.comb(n, j) for j in i], dtype=float)
    return coeffs * t[:, None] ** i * (1.0 - t[:, None]) ** (n - i)


def evaluate(curve: BezierCurve, t) -> np.ndarray:
    """Vectorized de Casteljau evaluation.

    Scalar ``t`` gives a ``(d,)`` point, array ``t`` gives ``(len(t), d)``.
    """
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    ts = np.atleast_1d(t_arr)[:, None, None]
    pts = np.broadcast_to(curve.points, (ts.shape[0],) + curve.points.shape)
    for _ in range(curve.degree):
        pts = (1.0 - ts) * pts[:, :-1] + ts * pts[:, 1:]
    out = pts[:, 0, :]
    return out[0] if scalar else out


def curve_eval(curve: BezierCurve, t: float) -> np.ndarray:
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t={t} outside [0, 1]")
    return evaluate(curve, t)


def elevation_row(m: int, h: int, n: int) -> np.ndarray:
    """Coefficients of B_h^m in the degree-n Bernstein basis.

    Entry j is C(m, h) C(n - m, j - h) / C(n, j); nonzero only for
    h <= j <= h + n - m.  Built by an O(n) ratio recurrence in floats.
    """
    if n < m or not 0 <= h <= m:
        raise DomainError(f"cannot elevate B_{h}^{m} to degree {n}")
    row = np.zeros(n + 1)
    # C(m, h) / C(n, h)
    c = 1.0
    for i in range(h):
        c *= (m - i) / (n - i)
    row[h] = c
    for j in range(h, h + n - m):
        s = j - h
        c *= (n - m - s) / (s + 1) * (j + 1) / (n - j)
        row[j + 1] = c
    return row


@lru_cache(maxsize=256)
def _elevation_matrix(m: int, n: int) -> np.ndarray:
    mat = np.vstack([elevation_row(m, h, n) for h in range(m + 1)])
    mat.flags.writeable = False
    return mat


def elevation_matrix(m: int, n: int) -> np.ndarray:
    """``(m + 1, n + 1)`` matrix E with B_h^m = sum_j E[h, j] B_j^n."""
    return _elevation_matrix(int(m), int(n))


def degree_elevate(curve: BezierCurve, target: int) -> BezierCurve:
    if target < curve.degree:
        raise DomainError(f"cannot elevate degree {curve.degree} curve to degree {target}")
    if target == curve.degree:
        return BezierCurve(curve.points)
    return BezierCurve(elevation_matrix(curve.degree, target).T @ curve.points)


def pochhammer(x: float, j: int) -> float:
    """Rising factorial (x)_j = x (x + 1) ... (x + j - 1)."""
    if j < 0:
        raise DomainError(f"Pochhammer order must be nonnegative, got {j}")
    out = 1.0 if not isinstance(x, int) else 1
    for s in range(j):
        out *= x + s
    return out


def beta_fn(a: float, b: float) -> float:
    if a <= 0 or b <= 0:
        raise DomainError(f"beta function needs positive arguments, got ({a}, {b})")
    return float(special.beta(a, b))


def forward_diff(seq, order: int, start: int = 0) -> np.ndarray:
    """Forward difference of ``order`` starting at index ``start``."""
    q = np.asarray(seq, dtype=float)
    if order < 0 or start < 0 or start + order >= q.shape[0]:
        raise DomainError(
            f"forward difference of order {order} at {start} needs more than "
            f"{start + order} entries (have {q.shape[0]})"
        )
    return np.diff(q[start:start + order + 1], n=order, axis=0)[0]


def endpoint_derivatives(curve: BezierCurve, order: int, end: int = 0) -> np.ndarray:
    """Parametric derivatives of orders 0..order at t=0 (``end=0``) or t=1.

    Uses the hodograph identity R^(i)(0) = n!/(n-i)! * Delta^i r_0.
    Returns shape ``(order + 1, d)``; orders above the degree are zero.
    """
    n = curve.degree
    pts = curve.points if end == 0 else curve.points[::-1]
    out = np.zeros((order + 1, curve.dim))
    for i in range(min(order, n) + 1):
        scale = float(math.perm(n, i))
        out[i] = scale * np.diff(pts[: i + 1], n=i, axis=0)[0]
        if end == 1 and i % 2:
            out[i] = -out[i]
    return out


def _gram_products(N, M, alpha, beta):
    a = np.ones(N + M + 1)
    b = np.ones(N + M + 1)
    for s in range(1, N + M + 1):
        a[s] = a[s - 1] * (alpha + s)
        b[s] = b[s - 1] * (beta + s)
    scale = beta_fn(alpha + 1, beta + 1) / pochhammer(alpha + beta + 2, N + M)
    cn = np.array([math.comb(N, i) for i in range(N + 1)], dtype=float)
    cm = np.array([math.comb(M, j) for j in range(M + 1)], dtype=float)
    s = np.add.outer(np.arange(N + 1), np.arange(M + 1))
    return scale * np.outer(cn, cm) * a[N + M - s] * b[s]


def _gram_logs(N, M, alpha, beta):
    i = np.arange(N + 1)[:, None]
    j = np.arange(M + 1)[None, :]
    log_c = (
        special.gammaln(N + 1) - special.gammaln(i + 1) - special.gammaln(N - i + 1)
        + special.gammaln(M + 1) - special.gammaln(j + 1) - special.gammaln(M - j + 1)
    )
    return np.exp(log_c + special.betaln(alpha + 1 + N + M - i - j, beta + 1 + i + j))


@lru_cache(maxsize=512)
def _bernstein_gram(N, M, alpha, beta):
    if N + M <= _PRODUCT_ROUTE_LIMIT:
        g = _gram_products(N, M, alpha, beta)
    else:
        g = _gram_logs(N, M, alpha, beta)
    g.flags.writeable = False
    return g


def bernstein_gram(N: int, M: int, w: JacobiWeight) -> np.ndarray:
    """Matrix of <B_i^N, B_j^M> for all i, j; shape ``(N + 1, M + 1)``."""
    return _bernstein_gram(int(N), int(M), float(w.alpha), float(w.beta))


def bernstein_pair_inner(N: int, i: int, M: int, j: int, w: JacobiWeight) -> float:
    if not (0 <= i <= N and 0 <= j <= M):
        raise DomainError(f"Bernstein indices out of range: ({N}, {i}), ({M}, {j})")
    return float(bernstein_gram(N, M, w)[i, j])


def inner_I(a: Sequence[float], b: Sequence[float], w: JacobiWeight) -> float:
    """Weighted inner product of two scalar Bernstein expansions.

    ``a`` has degree ``len(a) - 1`` and ``b`` degree ``len(b) - 1``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or b.ndim != 1 or a.size == 0 or b.size == 0:
        raise DomainError("inner_I expects two nonempty coefficient vectors")
    return float(a @ bernstein_gram(a.size - 1, b.size - 1, w) @ b)
