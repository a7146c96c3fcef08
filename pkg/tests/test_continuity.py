import warnings
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from bezred import (
    BezierCurve, ContinuitySpec, DomainError, GParams, JacobiWeight, UnsupportedOrderError,
    end_boundary, end_partials, f_form, f_forms, inner_partials, phi_table, start_boundary,
    start_partials, upsilon,
)
from bezred.continuity import f_scale, warn_if_degenerate
from bezred.errors import DegenerateTangentWarning

from _util import FIVE_WEIGHTS, derivs_at, power_form


def chain_rule(dP, jet):
    """Derivatives 0..3 of P(phi(t)) from those of P and phi' , phi'', phi'''."""
    l1, l2, l3 = (tuple(jet) + (0.0, 0.0, 0.0))[:3]
    out = np.zeros_like(dP)
    out[0] = dP[0]
    if len(dP) > 1:
        out[1] = dP[1] * l1
    if len(dP) > 2:
        out[2] = dP[2] * l1**2 + dP[1] * l2
    if len(dP) > 3:
        out[3] = dP[3] * l1**3 + 3 * dP[2] * l1 * l2 + dP[1] * l3
    return out


@st.composite
def boundary_case(draw):
    order = draw(st.integers(0, 3))
    m = draw(st.integers(order + 2, 10))
    n = draw(st.integers(m + 1, 14))
    seed = draw(st.integers(0, 2**32 - 1))
    jet = draw(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
    jet[0] = draw(st.floats(0.1, 3))
    return order, m, n, seed, jet


def padded_curve(m, order, head=None, tail=None, seed=0):
    """A degree-m curve with the given boundary rows and random interior."""
    rng = np.random.default_rng(seed)
    d = (head if head is not None else tail).shape[1]
    pts = rng.normal(size=(m + 1, d))
    if head is not None:
        pts[:order + 1] = head
    if tail is not None:
        pts[m - order:] = tail
    return pts


def test_hand_example_start_and_end():
    P = BezierCurve([[0, 0], [1, 0], [2, 1], [3, 0]])
    np.testing.assert_allclose(start_boundary(P, 2, 1, [1.0]), [[0, 0], [1.5, 0]])
    np.testing.assert_allclose(end_boundary(P, 2, 1, [1.0]), [[1.5, 1.5], [3, 0]])


@given(boundary_case())
@settings(max_examples=80)
def test_start_boundary_matches_chain_rule(case):
    k, m, n, seed, jet = case
    P = BezierCurve(np.random.default_rng(seed).normal(size=(n + 1, 2)))
    head = start_boundary(P, m, k, jet[:k])
    R = padded_curve(m, k, head=head, seed=seed)
    want = chain_rule(derivs_at(P.points, 0.0, k), jet)
    got = derivs_at(R, 0.0, k)
    np.testing.assert_allclose(got, want, atol=1e-8 * (1 + np.abs(want).max()))


@given(boundary_case())
@settings(max_examples=80)
def test_end_boundary_matches_chain_rule(case):
    l, m, n, seed, jet = case
    P = BezierCurve(np.random.default_rng(seed).normal(size=(n + 1, 3)))
    tail = end_boundary(P, m, l, jet[:l])
    R = padded_curve(m, l, tail=tail, seed=seed)
    want = chain_rule(derivs_at(P.points, 1.0, l), jet)
    got = derivs_at(R, 1.0, l)
    np.testing.assert_allclose(got, want, atol=1e-8 * (1 + np.abs(want).max()))


def test_boundary_sizes():
    P = BezierCurve(np.arange(16.0).reshape(8, 2))
    assert start_boundary(P, 5, -1).shape == (0, 2)
    assert end_boundary(P, 5, 0).shape == (1, 2)
    np.testing.assert_array_equal(end_boundary(P, 5, 0)[0], P.points[-1])
    with pytest.raises(DomainError):
        start_boundary(P, 5, 2, [1.0])
    with pytest.raises(UnsupportedOrderError):
        start_boundary(P, 9, 4, [1.0] * 4)


@given(boundary_case())
@settings(max_examples=60)
def test_partials_match_finite_differences(case):
    order, m, n, seed, jet = case
    if order == 0:
        return
    P = BezierCurve(np.random.default_rng(seed).normal(size=(n + 1, 2)))
    jet = np.array(jet)
    for u in range(1, order + 1):
        e = np.zeros(3)
        e[u - 1] = 1e-6
        for fn, dfn in ((start_boundary, start_partials), (end_boundary, end_partials)):
            fd = (fn(P, m, order, jet + e) - fn(P, m, order, jet - e)) / 2e-6
            np.testing.assert_allclose(dfn(P, m, order, jet, u), fd, atol=1e-6 * (1 + np.abs(fd).max()))
    with pytest.raises(DomainError):
        start_partials(P, m, order, jet, order + 1)


def test_inner_partials_are_linear_response():
    """Inner points respond to a boundary change through -phi @ elevation."""
    rng = np.random.default_rng(3)
    n, m, k, l = 12, 8, 2, 1
    w = JacobiWeight(0.5, -0.5)
    phi = phi_table(n, m, k, l, w)
    P = BezierCurve(rng.normal(size=(n + 1, 2)))
    jet, mus = np.array([0.9, 0.4]), np.array([1.1])

    def inner(lams):
        s, e = start_boundary(P, m, k, lams), end_boundary(P, m, l, mus)
        return phi.entries @ upsilon(P, m, k, l, s, e)

    for u in (1, 2):
        h = np.zeros(2)
        h[u - 1] = 1e-6
        fd = (inner(jet + h) - inner(jet - h)) / 2e-6
        got = inner_partials(phi, start_partials(P, m, k, jet, u), "start", u)
        np.testing.assert_allclose(got, fd, atol=1e-6)
        np.testing.assert_allclose(inner_partials(phi, start_partials(P, m, k, jet, u), "start"), got, atol=1e-12)
    with pytest.raises(DomainError):
        inner_partials(phi, np.zeros((3, 2)), "middle")


@pytest.mark.parametrize("w", FIVE_WEIGHTS, ids=str)
def test_f_forms_scaled_inner_products(w):
    q = np.array([0.5, -1.0, 2.0, 0.25])
    m = 5
    poly = power_form(q[:, None])[0]
    K = f_scale(m, w)
    for j in (0, 2, 5):
        basis = lambda t: comb(m, j) * t**j * (1 - t) ** (m - j)
        ref, _ = integrate.quad(lambda t: poly(t) * basis(t), 0, 1, weight="alg",
                                wvar=(w.beta, w.alpha), epsabs=0, epsrel=1e-13)
        assert f_form(q, 3, j, m, w) == pytest.approx(K * ref, rel=1e-10)
    assert f_forms(q, 3, m, w).shape == (6,)


def test_f_scale_legendre_value():
    # (2)_m / B(1, 1) = (m + 1)!
    assert f_scale(4, JacobiWeight()) == pytest.approx(120.0)


def test_spec_validation():
    ContinuitySpec(3, 3, True, True)
    with pytest.raises(UnsupportedOrderError, match="<= 3"):
        ContinuitySpec(4, 0)
    with pytest.raises(DomainError):
        ContinuitySpec(1, 1, p_fixed=True)
    with pytest.raises(DomainError):
        ContinuitySpec(1, 2, d0=0.0)
    with pytest.raises(DomainError):
        ContinuitySpec(-2, 0)


def test_gparams_roundtrip():
    g = GParams.identity(3, 2)
    assert g.lambdas == (1.0, 0.0, 0.0) and g.mus == (1.0, 0.0)
    assert GParams.from_vector(g.as_vector(), 3, 2) == g
    assert GParams.identity(-1, 0).as_vector().size == 0
    with pytest.raises(DomainError):
        GParams.from_vector([1.0], 1, 1)


def test_degenerate_tangent_warning():
    P = BezierCurve([[0, 0], [0, 0], [1, 1], [2, 0]])
    with pytest.warns(DegenerateTangentWarning):
        warn_if_degenerate(P, 1, 0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        warn_if_degenerate(P, 0, 1)


def test_identity_jet_gives_c2_condition():
    rng = np.random.default_rng(12)
    P = BezierCurve(rng.normal(size=(6, 2)))
    r = start_boundary(P, 4, 2, [1.0, 0.0])
    # n(n-1) d2 p_0 = m(m-1) d2 r_0
    d2p = P.points[2] - 2 * P.points[1] + P.points[0]
    np.testing.assert_allclose(r[2] - 2 * r[1] + r[0], 20 / 12 * d2p, atol=1e-14)
    np.testing.assert_array_equal(start_boundary(P, 4, 0), P.points[:1])
