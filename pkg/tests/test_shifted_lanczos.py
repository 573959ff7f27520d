import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resolvquad.core import SolveStatus, SparseHermitianMatrix
from resolvquad.oracle import (
    dense_resolvent_quadform,
    shifted_determinant_sequence,
    tridiag_resolvent_entry,
)
from resolvquad.shifted_lanczos import (
    bilinear_form,
    run_quadratic_forms,
    shift_state_init,
    shift_state_update,
)

from conftest import (
    random_hermitian,
    random_hermitian_dense,
    random_jacobi,
    random_vector,
)


def diag12():
    a = SparseHermitianMatrix.diagonal([1.0, 2.0])
    v = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    return a, v


# ---------------------------------------------------------------------------
# state init / update
# ---------------------------------------------------------------------------

def test_init_one_by_one_resolvent():
    st_ = shift_state_init(3.0, 1.0, 1.5)
    assert st_.L == pytest.approx(1.0 / 1.5, abs=1e-15)
    assert st_.status is SolveStatus.ACTIVE


def test_init_breakdown_on_real_interior_shift():
    st_ = shift_state_init(1.5, 1.0, 1.5)
    assert st_.status is SolveStatus.BREAKDOWN
    assert st_.L is None


def test_init_pure_imaginary_shift():
    st_ = shift_state_init(1.0j, 2.0, 0.0)
    assert st_.L == pytest.approx(-2.0j, abs=1e-15)


def test_update_reproduces_2x2_resolvent():
    # diag(1,2), v=(1,1)/sqrt(2): alpha = (1.5, 1.5), beta_1 = 0.5
    st_ = shift_state_init(3.0, 1.0, 1.5)
    shift_state_update(st_, 1.5, 0.5)
    assert st_.L == pytest.approx(0.75, abs=1e-14)
    assert st_.k == 2


@settings(max_examples=80, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.05, 2.0),
       st.floats(-4, 4), st.floats(0.1, 4))
def test_update_matches_2x2_closed_form(a1, a2, b1, zr, zi):
    z = complex(zr, zi)
    denom = (z - a1) * (z - a2) - b1 * b1
    st_ = shift_state_init(z, 1.0, a1)
    shift_state_update(st_, a2, b1)
    assert st_.status is SolveStatus.ACTIVE
    want = (z - a2) / denom
    assert st_.L == pytest.approx(want, rel=1e-12)


def test_update_with_zero_beta_freezes_value():
    st_ = shift_state_init(2.0 + 1.0j, 1.0, 0.5)
    before = st_.L
    shift_state_update(st_, 0.9, 0.0)
    assert st_.L == before  # c_{k+1} = 0
    assert st_.status is SolveStatus.ACTIVE


def test_update_overflow_status():
    st_ = shift_state_init(1e300 + 1e300j, 1e308, 0.0)
    shift_state_update(st_, -1e308, 1e150)
    assert st_.status in (SolveStatus.OVERFLOW, SolveStatus.ACTIVE)
    huge = shift_state_init(2.0, 1e308, 1.0)
    # pivot ~1e-12 makes pi ~1e12 and c*pi overflow
    shift_state_update(huge, 1.0 - 1e-12, 1.0)
    assert huge.status is SolveStatus.OVERFLOW
    assert huge.L is not None  # previous L retained


def test_update_skips_frozen_state():
    st_ = shift_state_init(1.5, 1.0, 1.5)
    assert st_.status is SolveStatus.BREAKDOWN
    shift_state_update(st_, 1.0, 1.0)
    assert st_.k == 1


def test_pi_delta_inverse_invariant():
    st_ = shift_state_init(2.0 + 0.5j, 1.0, 0.3)
    for alpha, beta in ((0.1, 0.7), (-0.4, 1.2), (0.9, 0.2)):
        shift_state_update(st_, alpha, beta)
        assert st_.pi * st_.delta == pytest.approx(1.0, rel=1e-14)


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def test_identity_matrix_exact_at_k1(rng):
    a = SparseHermitianMatrix.diagonal([1.0] * 4)
    v = random_vector(rng, 4)
    vnorm2 = float(np.vdot(v, v).real)
    res = run_quadratic_forms(a, v, [2.0, 3.0 + 1.0j])
    for out, z in zip(res.shifts, [2.0, 3.0 + 1.0j]):
        assert out.status is SolveStatus.CONVERGED
        assert out.iterations == 1
        assert out.value == pytest.approx(vnorm2 / (z - 1.0), rel=1e-13)


def test_diag5_matches_partial_fractions():
    a = SparseHermitianMatrix.diagonal([1.0, 2.0, 3.0, 4.0, 5.0])
    v = np.full(5, 1.0 / np.sqrt(5.0), dtype=complex)
    z = 2.5 + 0.1j
    res = run_quadratic_forms(a, v, [z], rtol=1e-12)
    want = sum(0.2 / (z - j) for j in range(1, 6))
    assert res.shifts[0].status is SolveStatus.CONVERGED
    assert abs(res.values[0] - want) <= 1e-10 * abs(want)


def test_invariant_subspace_is_exact():
    a, v = diag12()
    res = run_quadratic_forms(a, v, [3.0])
    out = res.shifts[0]
    assert out.status is SolveStatus.CONVERGED
    assert out.iterations == 2
    assert res.invariant_subspace_at == 2
    assert out.value == pytest.approx(0.75, abs=1e-14)


def test_breakdown_reported_not_raised():
    # alpha_1 = 0 computes exactly here, so z = 0 gives delta_1 = 0 exactly;
    # the breakdown freezes that shift without touching the other one
    a = SparseHermitianMatrix.from_dense([[0.0, 1.0], [1.0, 0.0]])
    v = np.array([1.0, 0.0], dtype=complex)
    res = run_quadratic_forms(a, v, [0.0, 3.0])
    assert res.shifts[0].status is SolveStatus.BREAKDOWN
    assert res.shifts[0].iterations == 1
    assert res.shifts[0].value is None
    assert res.shifts[1].status is SolveStatus.CONVERGED
    assert res.shifts[1].value == pytest.approx(0.375, abs=1e-14)


def test_interior_rayleigh_shift_recovers_in_floating_point():
    # z = 1.5 equals alpha_1 only in exact arithmetic; the rounded pivot is
    # ~1e-16, the huge L_1 cancels at the next step, and the run lands on
    # the true value v^H (1.5 I - A)^{-1} v = 0
    a, v = diag12()
    res = run_quadratic_forms(a, v, [1.5])
    out = res.shifts[0]
    assert out.status is SolveStatus.CONVERGED
    assert abs(out.value) <= 1e-9


def test_max_iter_status(rng):
    a = random_hermitian(rng, 30)
    v = random_vector(rng, 30)
    res = run_quadratic_forms(a, v, [0.5 + 0.2j], rtol=None, max_iter=5)
    assert res.shifts[0].status is SolveStatus.MAX_ITER
    assert res.shifts[0].iterations == 5


def test_oracle_equivalence_moderate(rng):
    for real in (False, True):
        dense = random_hermitian_dense(rng, 90, real=real)
        a = SparseHermitianMatrix.from_dense(dense)
        v = random_vector(rng, 90)
        shifts = [1.2 + 0.4j, -0.3 - 0.8j, 0.05 + 0.1j]
        res = run_quadratic_forms(a, v, shifts, rtol=1e-11)
        for out, z in zip(res.shifts, shifts):
            assert out.status is SolveStatus.CONVERGED
            want = dense_resolvent_quadform(dense, v, z)
            assert abs(out.value - want) <= 1e-8 * abs(want)


def test_recursion_equals_tridiagonal_solve(rng):
    """L_k == vnorm2 * (zI - T_k)^{-1}_{11} at every k, both from the same
    pivots; deltas equal determinant ratios."""
    for trial in range(5):
        alpha, beta = random_jacobi(rng, 50)
        z = complex(rng.standard_normal(), 0.5 + rng.random())
        vnorm2 = 1.0 + rng.random()
        st_ = shift_state_init(z, vnorm2, alpha[0])
        deltas = [st_.delta]
        dets = shifted_determinant_sequence(alpha, beta, z)
        for k in range(1, 50):
            entry = tridiag_resolvent_entry(alpha[:k], beta[:k - 1], z, 1, 1)
            assert st_.L == pytest.approx(vnorm2 * entry, rel=1e-12)
            shift_state_update(st_, alpha[k], beta[k - 1])
            assert st_.status is SolveStatus.ACTIVE
            deltas.append(st_.delta)
        for k in range(1, 50):
            assert deltas[k] == pytest.approx(dets[k] / dets[k - 1], rel=1e-12)


def test_breakdown_free_for_offaxis_shifts(rng):
    """No breakdown can occur when Im z is bounded away from zero."""
    for trial in range(40):
        n = int(rng.integers(4, 24))
        a = random_hermitian(rng, n, real=bool(rng.integers(2)))
        v = random_vector(rng, n)
        norm_a = a.frobenius_norm
        z = complex(3 * rng.standard_normal(),
                    (1e-6 + rng.random()) * norm_a)
        res = run_quadratic_forms(a, v, [z], rtol=None, max_iter=n)
        assert res.shifts[0].status is not SolveStatus.BREAKDOWN


def test_history_lag_contract():
    a = SparseHermitianMatrix.diagonal(np.arange(1.0, 13.0))
    v = np.full(12, 1.0, dtype=complex) / np.sqrt(12.0)
    lag = 3
    res = run_quadratic_forms(a, v, [0.5 + 2.0j], rtol=None, max_iter=8,
                              lag=lag, keep_history=True)
    hist = res.shifts[0].history
    assert [row.k for row in hist] == list(range(1, 9))
    for row in hist:
        if row.k <= len(hist) - lag:
            assert row.nu is not None
            assert row.mu is not None
        else:
            assert row.nu is None and row.mu is None


def test_reference_stopping_records_true_error(rng):
    dense = random_hermitian_dense(rng, 40)
    a = SparseHermitianMatrix.from_dense(dense)
    v = random_vector(rng, 40)
    z = 0.7 + 0.6j
    ref = dense_resolvent_quadform(dense, v, z)
    res = run_quadratic_forms(a, v, [z], rtol=1e-10, reference=[ref],
                              keep_history=True)
    out = res.shifts[0]
    assert out.status is SolveStatus.CONVERGED
    final = out.history[-1]
    assert final.rel_err is not None and final.rel_err <= 1e-10
    assert abs(out.value - ref) <= 1e-10 * abs(ref)


def test_empty_shift_list_rejected():
    a, v = diag12()
    with pytest.raises(ValueError):
        run_quadratic_forms(a, v, [])


# ---------------------------------------------------------------------------
# bilinear forms
# ---------------------------------------------------------------------------

def test_bilinear_equal_vectors_reduces_to_quadratic(rng):
    a = random_hermitian(rng, 20, real=True)
    p = random_vector(rng, 20, real=True).real
    z = 1.0 + 1.0j
    res = bilinear_form(a, p, p, [z], rtol=1e-12)
    quad = run_quadratic_forms(a, p.astype(complex), [z], rtol=1e-12)
    assert res.values[0] == pytest.approx(quad.values[0], rel=1e-10)
    assert res.diff_run is None  # t = 0 contributes a defined zero


def test_bilinear_diagonal_off_entry_is_zero():
    a = SparseHermitianMatrix.diagonal([1.0, 2.0])
    res = bilinear_form(a, np.array([1.0, 0.0]), np.array([0.0, 1.0]), [3.0])
    assert res.values[0] == pytest.approx(0.0, abs=1e-14)


def test_bilinear_matches_dense_solve(rng):
    dense = random_hermitian_dense(rng, 30, real=True)
    a = SparseHermitianMatrix.from_dense(dense)
    p = random_vector(rng, 30, real=True).real
    q = random_vector(rng, 30, real=True).real
    z = 2.0j
    res = bilinear_form(a, p, q, [z], rtol=1e-12)
    x = np.linalg.solve(z * np.eye(30) - dense, q.astype(complex))
    want = complex(p @ x)
    assert abs(res.values[0] - want) <= 1e-9 * abs(want)


def test_bilinear_rejects_complex_inputs(rng):
    a = random_hermitian(rng, 8)  # complex Hermitian
    p = random_vector(rng, 8, real=True).real
    with pytest.raises(ValueError):
        bilinear_form(a, p, p, [2.0j])
    a_real = random_hermitian(rng, 8, real=True)
    with pytest.raises(ValueError):
        bilinear_form(a_real, random_vector(rng, 8), p, [2.0j])
