import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bezred import (
    BezierCurve, DomainError, IllConditionedError, JacobiWeight, bernstein_gram, constrained_gram,
    degree_elevate, dual_coeffs, phi_table,
)
from bezred.dual import check_orders

from _util import FIVE_WEIGHTS, valid_orders


def problem_shapes():
    return st.integers(2, 10).flatmap(
        lambda m: st.tuples(st.just(m), st.integers(m, 16), st.sampled_from(valid_orders(m)),
                            st.sampled_from(FIVE_WEIGHTS)))


def test_check_orders():
    check_orders(5, 1, 2)
    check_orders(2, -1, -1)
    with pytest.raises(DomainError):
        check_orders(5, 2, 2)
    with pytest.raises(DomainError):
        check_orders(5, -2, 0)


def test_constrained_gram_is_a_subblock():
    w = JacobiWeight(0.5, 0.5)
    g = constrained_gram(7, 1, 2, w)
    assert list(g.indices) == [2, 3, 4]
    np.testing.assert_array_equal(g.entries, bernstein_gram(7, 7, w)[2:5, 2:5])
    with pytest.raises(DomainError):
        constrained_gram(25, 0, 0, w)
    assert constrained_gram(25, 0, 0, w, max_degree=None).entries.shape == (24, 24)


@given(problem_shapes())
@settings(max_examples=60)
def test_dual_basis_is_biorthogonal(shape):
    m, _, (k, l), w = shape
    g = constrained_gram(m, k, l, w)
    c = dual_coeffs(g)
    np.testing.assert_allclose(c @ g.entries, np.eye(g.entries.shape[0]), atol=1e-13 * g.condition())


@given(problem_shapes(), st.integers(0, 2**32 - 1))
@settings(max_examples=60)
def test_phi_reproduces_constrained_polynomials(shape, seed):
    """A polynomial of the constrained space projects onto itself."""
    m, n, (k, l), w = shape
    rng = np.random.default_rng(seed)
    coeffs = np.zeros(m + 1)
    coeffs[k + 1:m - l] = rng.normal(size=m - k - l - 1)
    up = degree_elevate(BezierCurve(coeffs), n).points[:, 0]
    phi = phi_table(n, m, k, l, w)
    np.testing.assert_allclose(phi.entries @ up, coeffs[k + 1:m - l], atol=1e-13 * max(1.0, phi.condition))


def test_phi_table_indexing_and_cache():
    w = JacobiWeight()
    phi = phi_table(9, 6, 1, 0, w)
    assert list(phi.rows) == [2, 3, 4, 5]
    assert phi[2, 0] == phi.entries[0, 0]
    assert phi[5, 9] == phi.entries[3, 9]
    assert phi_table(9, 6, 1, 0, w) is phi
    with pytest.raises(ValueError):
        phi.entries[0, 0] = 1.0
    with pytest.raises(DomainError):
        phi_table(4, 6, 0, 0, w)


def test_phi_orthogonality_residual():
    """P - sum phi-projection is orthogonal to the constrained space."""
    w = JacobiWeight(-0.5, 0.5)
    n, m, k, l = 11, 7, 1, 2
    rng = np.random.default_rng(7)
    p = rng.normal(size=n + 1)
    r = np.zeros(m + 1)
    r[k + 1:m - l] = phi_table(n, m, k, l, w).entries @ p
    resid = p - degree_elevate(BezierCurve(r), n).points[:, 0]
    inner = bernstein_gram(n, m, w).T @ resid
    np.testing.assert_allclose(inner[k + 1:m - l], 0, atol=1e-12)


def test_dual_coeffs_rejects_indefinite_matrix():
    with pytest.raises(IllConditionedError) as info:
        dual_coeffs(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert info.value.condition > 1


def test_small_gram_values():
    w = JacobiWeight()
    np.testing.assert_allclose(constrained_gram(1, -1, -1, w).entries, [[1 / 3, 1 / 6], [1 / 6, 1 / 3]], rtol=1e-15)
    np.testing.assert_allclose(constrained_gram(2, 0, 0, w).entries, [[2 / 15]], rtol=1e-15)
