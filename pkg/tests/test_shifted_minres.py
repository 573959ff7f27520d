import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resolvquad.core import SolveStatus, SparseHermitianMatrix
from resolvquad.lanczos import lanczos_init, lanczos_step
from resolvquad.oracle import dense_resolvent_quadform
from resolvquad.shifted_lanczos import run_quadratic_forms
from resolvquad.shifted_minres import apply_rotation, givens, minres_run

from conftest import random_hermitian, random_hermitian_dense, random_vector


def test_givens_real_pair():
    c, s, r = givens(3.0, 4.0)
    assert (c, s, r) == (pytest.approx(0.6), pytest.approx(0.8),
                         pytest.approx(5.0))


def test_givens_zero_offdiagonal():
    a = 2.0 - 1.0j
    c, s, r = givens(a, 0.0)
    assert c == 1.0 and s == 0.0 and r == a


def test_givens_zero_diagonal():
    c, s, r = givens(0.0, 7.0)
    assert c == 0.0 and s == 1.0 and r == 7.0


def test_givens_both_zero_rejected():
    with pytest.raises(ValueError):
        givens(0.0, 0.0)


@settings(max_examples=100, deadline=None)
@given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3,
                          allow_nan=False, allow_infinity=False),
       st.floats(0.0, 1e3))
def test_givens_unitary_and_annihilating(a, b):
    c, s, r = givens(a, b)
    assert c * c + abs(s) ** 2 == pytest.approx(1.0, abs=1e-14)
    lo_then_zero = apply_rotation(c, s, a, complex(b))
    assert lo_then_zero[0] == pytest.approx(r, rel=1e-12)
    assert abs(lo_then_zero[1]) <= 1e-12 * max(abs(a), b)
    assert abs(r) == pytest.approx(np.hypot(abs(a), b), rel=1e-12)


def test_two_by_two_exact_at_grade():
    a = SparseHermitianMatrix.diagonal([1.0, 2.0])
    v = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    res = minres_run(a, v, [3.0])
    out = res.shifts[0]
    assert out.status is SolveStatus.CONVERGED
    assert out.iterations == 2
    assert out.value == pytest.approx(0.75, abs=1e-13)


def test_identity_grade_one(rng):
    a = SparseHermitianMatrix.diagonal([1.0] * 5)
    v = random_vector(rng, 5)
    vnorm2 = float(np.vdot(v, v).real)
    z = 2.5 + 0.5j
    res = minres_run(a, v, [z])
    out = res.shifts[0]
    assert out.iterations == 1
    assert out.value == pytest.approx(vnorm2 / (z - 1.0), rel=1e-13)
    assert out.residual_norm == pytest.approx(0.0, abs=1e-12)


def test_matches_least_squares_oracle(rng):
    """M_k equals v^H V_k y_k with y_k the dense LS minimizer at every k."""
    n = 24
    dense = random_hermitian_dense(rng, n)
    a = SparseHermitianMatrix.from_dense(dense)
    v = random_vector(rng, n)
    z = 0.4 + 0.9j
    kmax = 12

    res = minres_run(a, v, [z], rtol=None, max_iter=kmax, keep_history=True)
    hist = res.shifts[0].history

    state = lanczos_init(a, v)
    basis = [state.v_curr.copy()]
    betas = []
    for _ in range(kmax):
        out = lanczos_step(state)
        if out.invariant_subspace:
            break
        basis.append(state.v_curr.copy())
        betas.append(out.beta)
    alphas = state.coeffs.alpha
    rnorm = np.linalg.norm(v)
    for k in range(1, kmax + 1):
        b_ext = np.zeros((k + 1, k), dtype=complex)
        for j in range(k):
            b_ext[j, j] = z - alphas[j]
            if j + 1 <= k:
                b_ext[j + 1, j] = -betas[j] if j < len(betas) else 0.0
            if j > 0:
                b_ext[j - 1, j] = -betas[j - 1]
        rhs = np.zeros(k + 1, dtype=complex)
        rhs[0] = rnorm
        y, *_ = np.linalg.lstsq(b_ext, rhs, rcond=None)
        vmat = np.column_stack(basis[:k])
        want = complex(np.vdot(v, vmat @ y))
        assert hist[k - 1].value == pytest.approx(want, rel=1e-10)


def test_residual_phase_monotone(rng):
    a = random_hermitian(rng, 40)
    v = random_vector(rng, 40)
    res = minres_run(a, v, [0.3 + 0.4j], rtol=None, max_iter=30,
                     keep_history=True)
    residuals = [row.residual for row in res.shifts[0].history]
    assert all(r2 <= r1 * (1 + 1e-12) for r1, r2 in zip(residuals, residuals[1:]))


def test_agreement_with_shifted_lanczos_complex_hermitian(rng):
    dense = random_hermitian_dense(rng, 50)  # complex Hermitian
    a = SparseHermitianMatrix.from_dense(dense)
    v = random_vector(rng, 50)
    shifts = [1.0 + 0.6j, -0.7 + 0.2j]
    lan = run_quadratic_forms(a, v, shifts, rtol=1e-11, max_iter=300)
    mnr = minres_run(a, v, shifts, rtol=1e-11, max_iter=300)
    for lo, mo, z in zip(lan.shifts, mnr.shifts, shifts):
        assert mo.status is SolveStatus.CONVERGED
        assert abs(mo.value - lo.value) <= 1e-8 * abs(lo.value)
        want = dense_resolvent_quadform(dense, v, z)
        assert abs(mo.value - want) <= 1e-8 * abs(want)


def test_reference_stopping(rng):
    dense = random_hermitian_dense(rng, 30)
    a = SparseHermitianMatrix.from_dense(dense)
    v = random_vector(rng, 30)
    z = 1.2 + 0.8j
    ref = dense_resolvent_quadform(dense, v, z)
    res = minres_run(a, v, [z], rtol=1e-10, reference=[ref])
    assert res.shifts[0].status is SolveStatus.CONVERGED
    assert abs(res.shifts[0].value - ref) <= 1e-10 * abs(ref)


def test_empty_shifts_rejected(rng):
    a = random_hermitian(rng, 5)
    with pytest.raises(ValueError):
        minres_run(a, random_vector(rng, 5), [])
