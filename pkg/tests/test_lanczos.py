import numpy as np
import pytest

from resolvquad.core import SparseHermitianMatrix
from resolvquad.lanczos import lanczos_init, lanczos_step

from conftest import random_hermitian, random_hermitian_dense, random_vector


def diag12_state():
    a = SparseHermitianMatrix.diagonal([1.0, 2.0])
    v = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    return lanczos_init(a, v)


def test_init_diag12():
    state = diag12_state()
    assert state.coeffs.alpha[0] == pytest.approx(1.5, abs=1e-15)
    assert state.vnorm2 == pytest.approx(1.0, abs=1e-15)
    assert state.k == 1


def test_init_identity_unit_vector(rng):
    a = SparseHermitianMatrix.diagonal([1.0] * 5)
    v = random_vector(rng, 5)
    state = lanczos_init(a, v / np.linalg.norm(v))
    assert state.coeffs.alpha[0] == pytest.approx(1.0, abs=1e-14)


def test_init_zero_diagonal_complex():
    a = SparseHermitianMatrix.from_dense([[0.0, 1.0j], [-1.0j, 0.0]])
    state = lanczos_init(a, np.array([1.0, 0.0], dtype=complex))
    assert state.coeffs.alpha[0] == pytest.approx(0.0, abs=1e-15)


def test_two_step_sequence_diag12():
    state = diag12_state()
    out1 = lanczos_step(state)
    assert not out1.invariant_subspace
    assert out1.beta == pytest.approx(0.5, abs=1e-15)
    assert out1.alpha_next == pytest.approx(1.5, abs=1e-14)
    out2 = lanczos_step(state)
    assert out2.invariant_subspace
    assert out2.k == 2


def test_identity_breaks_down_immediately(rng):
    a = SparseHermitianMatrix.diagonal([1.0] * 6)
    state = lanczos_init(a, random_vector(rng, 6))
    assert lanczos_step(state).invariant_subspace


def test_eigenvector_start_breaks_down():
    a = SparseHermitianMatrix.diagonal([1.0, 2.0, 3.0])
    e1 = np.array([1.0, 0.0, 0.0], dtype=complex)
    state = lanczos_init(a, e1)
    out = lanczos_step(state)
    assert out.invariant_subspace and out.k == 1


def test_zero_vector_rejected():
    a = SparseHermitianMatrix.diagonal([1.0, 2.0])
    with pytest.raises(ValueError, match="nonzero"):
        lanczos_init(a, np.zeros(2, dtype=complex))


def test_non_hermitian_rejected():
    a = SparseHermitianMatrix.from_dense([[0.0, 1.0j], [1.0j, 0.0]])
    with pytest.raises(ValueError, match="Hermitian"):
        lanczos_init(a, np.array([1.0, 0.0], dtype=complex))


def test_local_orthogonality_and_unit_norm(rng):
    a = random_hermitian(rng, 40)
    state = lanczos_init(a, random_vector(rng, 40))
    for _ in range(20):
        if lanczos_step(state).invariant_subspace:
            break
        assert np.linalg.norm(state.v_curr) == pytest.approx(1.0, abs=1e-12)
        assert abs(np.vdot(state.v_prev, state.v_curr)) <= 1e-8


def test_decomposition_residual(rng):
    """||A V_k - V_{k+1} T_{k+1,k}|| stays at round-off level."""
    n, kmax = 80, 25
    dense = random_hermitian_dense(rng, n, scale=False)
    a = SparseHermitianMatrix.from_dense(dense)
    state = lanczos_init(a, random_vector(rng, n))
    basis = [state.v_curr.copy()]
    betas = []
    for _ in range(kmax):
        out = lanczos_step(state)
        if out.invariant_subspace:
            break
        basis.append(state.v_curr.copy())
        betas.append(out.beta)
    k = len(basis) - 1
    vmat = np.column_stack(basis)
    t_ext = np.zeros((k + 1, k))
    t_ext[:k, :k] = state.coeffs.tridiagonal(k)
    t_ext[k, k - 1] = betas[-1]
    resid = np.linalg.norm(dense @ vmat[:, :k] - vmat @ t_ext, 2)
    assert resid <= 1e-10 * np.linalg.norm(dense, 2)


def test_moment_matching(rng):
    """v^H A^i v = (v^H v) e_1^T T^i e_1 for i = 0..2k-1 on small problems."""
    n, kmax = 50, 6
    dense = random_hermitian_dense(rng, n, scale=False)
    dense = dense / np.linalg.norm(dense, 2)
    a = SparseHermitianMatrix.from_dense(dense)
    v = random_vector(rng, n)
    v /= np.linalg.norm(v)
    state = lanczos_init(a, v)
    for _ in range(kmax - 1):
        if lanczos_step(state).invariant_subspace:
            break
    k = state.k
    t = state.coeffs.tridiagonal(k)
    power = v.copy()
    for i in range(2 * k):
        lhs = complex(np.vdot(v, power))
        rhs = state.vnorm2 * np.linalg.matrix_power(t, i)[0, 0]
        assert abs(lhs - rhs) <= 1e-8
        power = dense @ power


def test_alpha_is_real_float():
    state = diag12_state()
    lanczos_step(state)
    assert all(isinstance(x, float) for x in state.coeffs.alpha)
    assert all(isinstance(x, float) for x in state.coeffs.beta)


def test_non_finite_recurrence_raises():
    from resolvquad.core import NonFiniteError
    a = SparseHermitianMatrix.diagonal([1e308, -1e308])
    v = np.array([1.0, 1.0], dtype=complex)
    with pytest.raises(NonFiniteError):
        state = lanczos_init(a, v)
        lanczos_step(state)
