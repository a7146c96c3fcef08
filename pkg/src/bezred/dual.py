"""Constrained dual Bernstein basis via the Gram matrix.

The dual polynomials D_i^{(m,k,l)}, i = k+1..m-l-1, live in the subspace of
degree-m polynomials whose derivatives up to order k vanish at 0 and up to
order l vanish at 1.  That subspace is spanned by B_{k+1}^m..B_{m-l-1}^m, so
the dual basis coefficients are the rows of the inverse Gram matrix of those
Bernstein polynomials.

The projection table phi_ij = <B_j^n, D_i^{(m,k,l)}> then follows by one
contraction with the mixed-degree Bernstein Gram matrix.

A related table psi_ij satisfies

    phi_ij = C(m-k-l-2, i-k-1) / C(m, i) * C(n, j)
             * (alpha+l+2)_{n-j} (beta+k+2)_j
             / ((alpha+l+2)_{l+1} (beta+k+2)_{k+1}) * psi_ij

and admits an O(mn) recurrence; we do not use it here (the Gram route costs
O(s^3 + s^2 n) with s = m-k-l-1, which is negligible for m <= 20).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import linalg

from .bernstein import MAX_DEGREE, JacobiWeight, bernstein_gram
from .errors import DomainError, IllConditionedError


@dataclass(frozen=True, eq=False)
class GramMatrix:
    m: int
    k: int
    l: int
    weight: JacobiWeight
    entries: np.ndarray

    @property
    def indices(self) -> range:
        return range(self.k + 1, self.m - self.l)

    def condition(self) -> float:
        return float(np.linalg.cond(self.entries))


@dataclass(frozen=True, eq=False)
class PhiTable:
    """phi_ij for i = k+1..m-l-1 (rows) and j = 0..n (columns)."""

    n: int
    m: int
    k: int
    l: int
    weight: JacobiWeight
    entries: np.ndarray
    condition: float = float("nan")

    @property
    def rows(self) -> range:
        return range(self.k + 1, self.m - self.l)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i - self.k - 1, j]


def check_orders(m: int, k: int, l: int) -> None:
    if k < -1 or l < -1:
        raise DomainError(f"continuity orders must be >= -1 (k={k}, l={l})")
    if not k + l < m - 1:
        raise DomainError(f"constrained space is empty: need k + l < m - 1 (k={k}, l={l}, m={m})")


def constrained_gram(m: int, k: int, l: int, w: JacobiWeight, *, max_degree=MAX_DEGREE) -> GramMatrix:
    check_orders(m, k, l)
    if max_degree is not None and m > max_degree:
        raise DomainError(f"degree m={m} exceeds the supported limit {max_degree}")
    g = np.array(bernstein_gram(m, m, w)[k + 1:m - l, k + 1:m - l])
    g.flags.writeable = False
    return GramMatrix(m, k, l, w, g)


def dual_coeffs(g) -> np.ndarray:
    """Inverse of an SPD Gram matrix via Cholesky.

    Row i holds the coefficients of the i-th dual polynomial in the
    constrained Bernstein basis.
    """
    entries = g.entries if isinstance(g, GramMatrix) else np.asarray(g, dtype=float)
    try:
        factor = linalg.cho_factor(entries, lower=True, check_finite=True)
    except linalg.LinAlgError:
        cond = float(np.linalg.cond(entries))
        raise IllConditionedError(
            f"Gram matrix is not numerically positive definite (cond ~ {cond:.3g})", cond
        ) from None
    inv = linalg.cho_solve(factor, np.eye(entries.shape[0]))
    return 0.5 * (inv + inv.T)


@lru_cache(maxsize=128)
def _phi_table(n, m, k, l, alpha, beta, max_degree):
    w = JacobiWeight(alpha, beta)
    if n < m:
        raise DomainError(f"phi table needs n >= m (n={n}, m={m})")
    g = constrained_gram(m, k, l, w, max_degree=max_degree)
    c = dual_coeffs(g)
    # <B_t^m, B_j^n> for the constrained rows t
    pair = bernstein_gram(m, n, w)[k + 1:m - l, :]
    entries = c @ pair
    entries.flags.writeable = False
    return PhiTable(n, m, k, l, w, entries, g.condition())


def phi_table(n: int, m: int, k: int, l: int, w: JacobiWeight, *, max_degree=MAX_DEGREE) -> PhiTable:
    """Tabulate phi_ij = <B_j^n, D_i^{(m,k,l)}>.

    Tables are cached and read-only.  ``max_degree`` bounds m only; n may be
    arbitrarily large.
    """
    return _phi_table(int(n), int(m), int(k), int(l), float(w.alpha), float(w.beta), max_degree)
