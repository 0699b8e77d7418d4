import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arnoldi_sam.linalg import hadamard_apply, hadamard_matrix, mgs_orthogonalize, symmetric_eigendecomposition


def sylvester(n):
    """Dense unnormalized Sylvester matrix, built by explicit block recursion."""
    H = np.array([[1.0]])
    while H.shape[0] < n:
        H = np.block([[H, H], [H, -H]])
    return H


def random_basis(rng, n, k):
    Q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return Q


# --- modified Gram-Schmidt ---------------------------------------------------

def test_mgs_already_orthogonal():
    res = mgs_orthogonalize([0.0, 1.0, 0.0], np.array([[1.0], [0.0], [0.0]]))
    np.testing.assert_allclose(res.coeffs, [0.0])
    assert res.residual_norm == pytest.approx(1.0)
    np.testing.assert_allclose(res.unit_residual, [0.0, 1.0, 0.0])


def test_mgs_breakdown_in_span():
    res = mgs_orthogonalize([1.0, 0.0, 0.0], np.array([[1.0], [0.0], [0.0]]))
    assert res.breakdown
    assert res.residual_norm == 0.0


def test_mgs_two_dimensional_projection():
    res = mgs_orthogonalize([1.0, 1.0], np.array([[1.0], [0.0]]))
    np.testing.assert_allclose(res.coeffs, [1.0])
    assert res.residual_norm == pytest.approx(1.0)
    np.testing.assert_allclose(res.unit_residual, [0.0, 1.0], atol=1e-15)
    recon = res.residual_norm * res.unit_residual + res.coeffs[0] * np.array([1.0, 0.0])
    np.testing.assert_allclose(recon, [1.0, 1.0])


def test_mgs_is_sequential_not_classical():
    # non-orthogonal "basis": MGS coefficients differ from plain inner products
    basis = np.array([[1.0, 1.0], [0.0, 1.0]]) / np.array([1.0, np.sqrt(2)])
    v = np.array([1.0, 2.0])
    res = mgs_orthogonalize(v, basis)
    c0 = basis[:, 0] @ v
    c1 = basis[:, 1] @ (v - c0 * basis[:, 0])
    np.testing.assert_allclose(res.coeffs, [c0, c1])


def test_mgs_rejects_bad_input():
    with pytest.raises(ValueError):
        mgs_orthogonalize([1.0, 2.0], np.zeros((2, 0)))
    with pytest.raises(ValueError):
        mgs_orthogonalize([1.0, 2.0, 3.0], np.eye(2)[:, :1])


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 40), passes=st.sampled_from([1, 2]))
def test_mgs_reconstruction_property(seed, n, passes):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, n))
    Q = random_basis(rng, n, k)
    v = rng.standard_normal(n)
    res = mgs_orthogonalize(v, Q, passes=passes)
    assert not res.breakdown
    np.testing.assert_allclose(np.linalg.norm(res.unit_residual), 1.0, atol=1e-12)
    assert np.max(np.abs(Q.T @ res.unit_residual)) <= 1e-10
    recon = res.residual_norm * res.unit_residual + Q @ res.coeffs
    assert np.linalg.norm(recon - v) <= 1e-10 * np.linalg.norm(v)


# --- symmetric eigensolver -----------------------------------------------------

def test_eig_identity():
    lam, V = symmetric_eigendecomposition(np.eye(2))
    np.testing.assert_allclose(lam, [1.0, 1.0])
    np.testing.assert_allclose(V.T @ V, np.eye(2), atol=1e-12)


def test_eig_diagonal():
    lam, V = symmetric_eigendecomposition(np.diag([1.0, 3.0]))
    np.testing.assert_allclose(lam, [3.0, 1.0])
    np.testing.assert_allclose(np.abs(V), [[0.0, 1.0], [1.0, 0.0]], atol=1e-14)


def test_eig_swap_matrix():
    # characteristic polynomial lambda^2 - 1 = 0
    lam, V = symmetric_eigendecomposition(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(lam, [1.0, -1.0], atol=1e-14)
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(np.abs(V[:, 0]), [s, s], atol=1e-14)
    np.testing.assert_allclose(np.abs(V[:, 1]), [s, s], atol=1e-14)
    assert V[0, 1] * V[1, 1] < 0


def test_eig_ordering_by_magnitude_with_ties():
    lam, _ = symmetric_eigendecomposition(np.diag([1.0, -5.0, 3.0, -3.0]))
    np.testing.assert_allclose(lam, [-5.0, 3.0, -3.0, 1.0])


def test_eig_sign_convention():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((6, 6))
    _, V = symmetric_eigendecomposition(A + A.T)
    idx = np.argmax(np.abs(V), axis=0)
    assert np.all(V[idx, np.arange(6)] > 0)


def test_eig_rejects_non_finite():
    with pytest.raises(ValueError):
        symmetric_eigendecomposition(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        symmetric_eigendecomposition(np.ones((2, 3)))


def _charpoly_roots(S):
    # independent oracle: roots of det(S - t I) via Faddeev-LeVerrier coefficients
    m = S.shape[0]
    coeffs = [1.0]
    M = np.zeros_like(S)
    for k in range(1, m + 1):
        M = S @ M + coeffs[-1] * np.eye(m)
        coeffs.append(-np.trace(S @ M) / k)
    return np.sort(np.roots(coeffs).real)


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 32))
def test_eig_random_symmetric_property(seed, m):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, m))
    S = 0.5 * (A + A.T)
    lam, V = symmetric_eigendecomposition(S)
    nS = np.linalg.norm(S)
    assert np.linalg.norm(S @ V - V * lam) <= 1e-10 * nS
    assert np.max(np.abs(V.T @ V - np.eye(m))) <= 1e-10
    assert abs(lam.sum() - np.trace(S)) <= 1e-9 * max(1.0, nS)
    assert abs(np.sum(lam**2) - nS**2) <= 1e-9 * max(1.0, nS**2)
    assert np.all(np.diff(np.abs(lam)) <= 1e-12)
    if m <= 4:
        np.testing.assert_allclose(np.sort(lam), _charpoly_roots(S), atol=1e-7)


# --- Hadamard transform --------------------------------------------------------

def test_hadamard_trivial_sizes():
    np.testing.assert_allclose(hadamard_apply([5.0]), [5.0])
    np.testing.assert_allclose(hadamard_apply([1.0, 0.0]), [1 / np.sqrt(2), 1 / np.sqrt(2)])


def test_hadamard_four():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    expected = sylvester(4) @ x / 2.0
    np.testing.assert_allclose(expected, [5.0, -1.0, -2.0, 0.0])
    np.testing.assert_allclose(hadamard_apply(x), expected)


@pytest.mark.parametrize("n", [1, 2, 8, 64, 256])
def test_hadamard_matches_dense_sylvester(n):
    rng = np.random.default_rng(n)
    x = rng.standard_normal(n)
    np.testing.assert_allclose(hadamard_apply(x), sylvester(n) @ x / np.sqrt(n), atol=1e-12)
    np.testing.assert_allclose(hadamard_matrix(n), sylvester(n) / np.sqrt(n), atol=1e-15)


@pytest.mark.parametrize("n", [0, 3, 6, 12])
def test_hadamard_rejects_non_power_of_two(n):
    with pytest.raises(ValueError):
        hadamard_apply(np.ones(n))


@settings(max_examples=50, deadline=None)
@given(p=st.integers(0, 10), seed=st.integers(0, 2**32 - 1))
def test_hadamard_involution_and_isometry(p, seed):
    x = np.random.default_rng(seed).standard_normal(2**p)
    y = hadamard_apply(x)
    assert abs(np.linalg.norm(y) - np.linalg.norm(x)) <= 1e-12 * max(1.0, np.linalg.norm(x))
    np.testing.assert_allclose(hadamard_apply(y), x, atol=1e-12)


def test_hadamard_columnwise_on_matrix():
    X = np.arange(8.0).reshape(4, 2)
    out = hadamard_apply(X)
    for j in range(2):
        np.testing.assert_allclose(out[:, j], hadamard_apply(X[:, j]))
