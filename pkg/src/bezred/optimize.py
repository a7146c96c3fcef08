"""Small dense bound-constrained minimizers.

The continuity-parameter problems have at most six variables and at most two
lower bounds, so both solvers here are deliberately simple:

* ``box_quadratic_min`` enumerates active sets of a convex quadratic.
* ``projected_newton`` is a trust-region Newton method with projection onto
  the bounds, used for the quartic and sextic objectives.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError

# relative size of objective changes treated as roundoff
_FUN_NOISE = 1e-12


@dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    nit: int = 0
    converged: bool = True
    active: tuple = ()
    message: str = ""
    extra: dict = field(default_factory=dict)


def box_quadratic_min(H, g, lower, const=0.0) -> MinimizeResult:
    """Minimize ``0.5 x'Hx + g'x + const`` subject to ``x >= lower``.

    ``lower`` entries of ``-inf`` mark unbounded variables.  Every subset of
    the bounded variables is tried as the active set; the best feasible
    stationary point wins.  Intended for at most a handful of bounds.
    """
    H = np.atleast_2d(np.asarray(H, dtype=float))
    g = np.atleast_1d(np.asarray(g, dtype=float))
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    nvar = g.size
    if nvar == 0:
        return MinimizeResult(np.zeros(0), float(const))
    H = 0.5 * (H + H.T)
    evals = np.linalg.eigvalsh(H)
    scale = max(1.0, float(np.max(np.abs(evals))))
    if evals[0] < -1e-9 * scale:
        raise NumericalError(f"quadratic is indefinite (min eigenvalue {evals[0]:.3g})")

    def value(x):
        return float(0.5 * x @ H @ x + g @ x + const)

    bounded = [i for i in range(nvar) if np.isfinite(lower[i])]
    best = None
    for r in range(len(bounded) + 1):
        for active in itertools.combinations(bounded, r):
            x = np.zeros(nvar)
            act = list(active)
            x[act] = lower[act]
            free = [i for i in range(nvar) if i not in active]
            if free:
                Hff = H[np.ix_(free, free)]
                rhs = -(g[free] + H[np.ix_(free, act)] @ x[act])
                if np.linalg.cond(Hff) > 1e12:
                    continue
                x[free] = np.linalg.solve(Hff, rhs)
            if np.any(x < lower - 1e-12 * (1 + np.abs(lower))):
                continue
            # KKT sign of multipliers is implied by taking the best feasible point
            val = value(x)
            if best is None or val < best.fun:
                best = MinimizeResult(x, val, active=tuple(active))
    if best is None:
        raise NumericalError("no feasible active set with a nonsingular reduced quadratic")
    return best


def projected_gradient(x, g, lower):
    return x - np.maximum(x - g, lower)


def _trust_step(g, H, radius):
    """Minimize g's + 0.5 s'Hs over ||s|| <= radius (small dense case)."""
    evals, evecs = np.linalg.eigh(0.5 * (H + H.T))
    gt = evecs.T @ g
    if evals[0] > 0:
        s = -gt / evals
        if np.linalg.norm(s) <= radius:
            return evecs @ s
    # boundary solution: find sigma > -lambda_min with ||s(sigma)|| = radius
    lo = max(0.0, -evals[0])
    def norm_at(sig):
        den = evals + sig
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.linalg.norm(np.where(den > 0, gt / den, np.inf))
    hi = lo + np.linalg.norm(g) / radius + abs(evals).max() + 1.0
    if not norm_at(lo + 1e-300) > radius:
        # hard case: step along the lowest eigenvector
        den = np.where(evals + lo > 0, evals + lo, np.inf)
        s = -gt / den
        tau = np.sqrt(max(radius**2 - s @ s, 0.0))
        s[0] += tau
        return evecs @ s
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if norm_at(mid) > radius:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return evecs @ (-gt / (evals + hi))


def projected_newton(fun, grad, x0, lower, hess=None, *, gtol=1e-10, maxiter=100,
                     radius=1.0, polish=3) -> MinimizeResult:
    """Bound-constrained trust-region Newton iteration.

    Variables at a bound whose gradient pushes outward are frozen for the
    step; the remaining ones take a trust-region Newton step which is then
    projected onto the feasible box.  Steps must decrease ``fun``; once the
    decrease drops below roundoff, a step is accepted only if it shrinks the
    projected gradient.  After convergence up to ``polish`` plain Newton
    steps are taken while they halve the projected gradient.  The result is
    never worse than ``x0`` beyond roundoff in ``fun``.

    ``hess`` defaults to a central finite difference of ``grad``.
    Convergence means a projected gradient norm <= ``gtol * max(1, |f|)``.
    """
    lower = np.asarray(lower, dtype=float)
    x = np.maximum(np.asarray(x0, dtype=float), lower)
    if hess is None:
        hess = lambda z: fd_hessian(grad, z)
    f = float(fun(x))
    g = np.asarray(grad(x), dtype=float)
    f_start, x_start = f, x.copy()
    nit = 0
    converged = False
    message = "iteration limit reached"

    def pgnorm(z, gz):
        return float(np.linalg.norm(projected_gradient(z, gz, lower)))

    for nit in range(1, maxiter + 1):
        pgn = pgnorm(x, g)
        if pgn <= gtol * max(1.0, abs(f)):
            converged = True
            message = "projected gradient below tolerance"
            nit -= 1
            break
        free = ~((x <= lower) & (g > 0))
        H = hess(x)
        sf = _trust_step(g[free], H[np.ix_(free, free)], radius)
        step = np.zeros_like(x)
        step[free] = sf
        x_new = np.maximum(x + step, lower)
        d = x_new - x
        dn = float(np.linalg.norm(d))
        pred = -(g @ d + 0.5 * d @ H @ d)
        f_new = float(fun(x_new))
        actual = f - f_new
        noise = _FUN_NOISE * max(abs(f), abs(f_new))
        rho = actual / pred if pred > noise else (1.0 if actual > -noise else -1.0)
        accept = actual > noise
        if not accept and actual > -noise and dn > 0:
            g_new = np.asarray(grad(x_new), dtype=float)
            accept = pgnorm(x_new, g_new) < pgn
        elif accept:
            g_new = np.asarray(grad(x_new), dtype=float)
        if rho < 0.25:
            radius = 0.25 * (dn if dn > 0 else radius)
        elif rho > 0.75 and np.linalg.norm(sf) >= 0.99 * radius:
            radius *= 2.0
        if accept:
            x, f, g = x_new, f_new, g_new
        if radius < 1e-15 * (1.0 + np.linalg.norm(x)):
            converged = pgnorm(x, g) <= gtol * max(1.0, abs(f))
            message = "trust region collapsed"
            break

    if converged:
        for _ in range(polish):
            free = ~((x <= lower) & (g > 0))
            Hf = hess(x)[np.ix_(free, free)]
            try:
                sf = np.linalg.solve(Hf, -g[free])
            except np.linalg.LinAlgError:
                break
            step = np.zeros_like(x)
            step[free] = sf
            x_new = np.maximum(x + step, lower)
            f_new = float(fun(x_new))
            g_new = np.asarray(grad(x_new), dtype=float)
            noise = _FUN_NOISE * max(abs(f), abs(f_new))
            if f_new - f > noise or not pgnorm(x_new, g_new) < 0.5 * pgnorm(x, g):
                break
            x, f, g = x_new, f_new, g_new

    if f > f_start:
        x, f = x_start, f_start
        g = np.asarray(grad(x), dtype=float)
    active = tuple(int(i) for i in np.flatnonzero(x <= lower))
    return MinimizeResult(x, f, nit, bool(converged), active, message,
                          {"projected_gradient": pgnorm(x, g)})


def fd_hessian(grad, x, rel_step=1e-5):
    """Symmetrized central-difference Hessian of ``grad`` at ``x``."""
    x = np.asarray(x, dtype=float)
    nvar = x.size
    H = np.empty((nvar, nvar))
    for i in range(nvar):
        h = rel_step * max(1.0, abs(x[i]))
        e = np.zeros(nvar)
        e[i] = h
        H[:, i] = (np.asarray(grad(x + e)) - np.asarray(grad(x - e))) / (2 * h)
    return 0.5 * (H + H.T)
