"""Shifted Lanczos recursion for resolvent quadratic forms.

One Lanczos coefficient stream drives, for every shift ``z_i``, an O(1)
per-iteration scalar recursion whose value ``L_k`` equals
``(v^H v) * e_1^T (z_i I - T_{k,k})^{-1} e_1`` -- the k-th quadratic-form
approximation of ``v^H (z_i I - A)^{-1} v``.  No shifted system is ever
solved and no solution vector is ever formed.

Per shift and iteration the update costs eight complex scalar operations
(three additions, four multiplications, one division); the square of the
off-diagonal coefficient is shift-independent and is computed once per
iteration by the driver, not per shift.

The recursion's pivot ``delta_{k+1}`` is the ratio of consecutive shifted
Jacobi determinants; it cannot vanish when the shift lies off the real
interval spanned by the extremal eigenvalues, so for such shifts the method
is breakdown-free.  ``tol_delta`` guards only genuine division hazards
(default 1e-290 absolute): tiny pivots legitimately occur near convergence
and must not be misreported as breakdowns.

No rigorous a-priori error bound is computed.  The sharp bound is a
min-max polynomial approximation problem over the spectral interval, which
is not observable from the recursion itself; that bound is deliberately
unimplemented and the lag-d estimates in :mod:`resolvquad.error_estimate`
are the practical substitute.

Per-iteration shift updates carry no cross-shift data flow: they may be
reordered or parallelized without changing any result.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (
    HistoryEntry,
    MethodResult,
    ShiftOutcome,
    SolveStatus,
    SparseHermitianMatrix,
    isfinite_scalar,
)
from .error_estimate import DEFAULT_LAG, EstimatorState
from .lanczos import lanczos_init, lanczos_step

__all__ = [
    "TOL_DELTA",
    "ShiftState",
    "QuadFormResult",
    "BilinearFormResult",
    "shift_state_init",
    "shift_state_update",
    "run_quadratic_forms",
    "bilinear_form",
]

TOL_DELTA = 1e-290


@dataclass
class ShiftState:
    """Scalar recursion cell for one shift: ``(c_k, delta_k, pi_k, L_k)``."""

    z: complex
    c: complex
    delta: complex
    pi: complex
    L: Optional[complex]
    status: SolveStatus
    k: int


def shift_state_init(z: complex, vnorm2: float, alpha1: float,
                     tol_delta: float = TOL_DELTA) -> ShiftState:
    """Start the recursion: ``c_1 = v^H v``, ``delta_1 = z - alpha_1``.

    A vanishing ``delta_1`` (the shift equals the first Rayleigh quotient)
    is a breakdown reported through the status, not an exception; ``L_1`` is
    undefined in that case.
    """
    c1 = vnorm2
    delta1 = z - alpha1
    if abs(delta1) <= tol_delta:
        return ShiftState(z=z, c=c1, delta=delta1, pi=0j, L=None,
                          status=SolveStatus.BREAKDOWN, k=1)
    pi1 = 1.0 / delta1
    L1 = c1 * pi1
    if not isfinite_scalar(L1):
        return ShiftState(z=z, c=c1, delta=delta1, pi=pi1, L=None,
                          status=SolveStatus.OVERFLOW, k=1)
    return ShiftState(z=z, c=c1, delta=delta1, pi=pi1, L=L1,
                      status=SolveStatus.ACTIVE, k=1)


def shift_state_update(state: ShiftState, alpha_next: float, beta: float,
                       beta_sq: Optional[float] = None,
                       tol_delta: float = TOL_DELTA) -> ShiftState:
    """Advance one shift by one iteration (eight scalar operations).

    ``beta_sq`` is ``beta**2``; the driver passes it in because it is shared
    by every shift of the iteration.  On a pivot smaller than ``tol_delta``
    the state freezes as a breakdown and keeps ``L_k``; non-finite results
    freeze it as an overflow.
    """
    if state.status is not SolveStatus.ACTIVE:
        return state
    if beta_sq is None:
        beta_sq = beta * beta
    t = beta_sq * state.pi
    delta_next = state.z - alpha_next - t
    if abs(delta_next) <= tol_delta:
        state.status = SolveStatus.BREAKDOWN
        return state
    pi_next = 1.0 / delta_next
    c_next = state.c * t * state.pi
    L_next = state.L + c_next * pi_next
    if not (isfinite_scalar(L_next) and isfinite_scalar(c_next)
            and isfinite_scalar(pi_next)):
        state.status = SolveStatus.OVERFLOW
        return state
    state.c = c_next
    state.delta = delta_next
    state.pi = pi_next
    state.L = L_next
    state.k += 1
    return state


@dataclass
class QuadFormResult(MethodResult):
    """Per-shift quadratic-form outcomes plus the coefficient stream."""

    alpha: list = field(default_factory=list)
    beta: list = field(default_factory=list)
    vnorm2: float = 0.0
    invariant_subspace_at: Optional[int] = None

    @property
    def values(self) -> list:
        return [s.value for s in self.shifts]


def run_quadratic_forms(a: SparseHermitianMatrix, v: np.ndarray,
                        shifts: Sequence[complex], *,
                        rtol: Optional[float] = 1e-10,
                        lag: int = DEFAULT_LAG,
                        max_iter: Optional[int] = None,
                        reference: Optional[Sequence[complex]] = None,
                        keep_history: bool = False,
                        tol_delta: float = TOL_DELTA) -> QuadFormResult:
    """Drive one Lanczos stream and every per-shift recursion to a stop.

    Stopping: with ``reference`` values supplied, a shift freezes when its
    true relative error drops to ``rtol`` (the benchmark protocol); without
    a reference the delayed-difference estimate ``nu_{k,lag}`` against
    ``rtol * |L_k|`` is used.  ``rtol=None`` disables stopping so the run
    only ends on breakdown, invariant subspace, or ``max_iter``.

    Per-shift failures (breakdown, overflow) never abort the other shifts.
    """
    shifts = [complex(z) for z in shifts]
    if not shifts:
        raise ValueError("at least one shift is required")
    if reference is not None:
        reference = [complex(r) for r in reference]
        if len(reference) != len(shifts):
            raise ValueError("reference values must match the shift list")
    stream = lanczos_init(a, v)
    if max_iter is None:
        max_iter = 2 * a.n
    vnorm2 = stream.vnorm2
    alpha1 = stream.coeffs.alpha[0]

    states = [shift_state_init(z, vnorm2, alpha1, tol_delta) for z in shifts]
    estimators = [EstimatorState(z, lag, vnorm2) for z in shifts]
    outcomes: list[Optional[ShiftOutcome]] = [None] * len(shifts)
    histories: list[Optional[list]] = [
        [] if keep_history else None for _ in shifts]

    def rel_err(i: int, value: complex) -> Optional[float]:
        if reference is None:
            return None
        ref = reference[i]
        denom = abs(ref)
        if denom == 0.0:
            return abs(value - ref)
        return abs(value - ref) / denom

    def freeze(i: int, status: SolveStatus, iterations: int) -> None:
        st = states[i]
        st.status = status
        if histories[i]:
            histories[i][-1].status = status
        outcomes[i] = ShiftOutcome(z=st.z, value=st.L, iterations=iterations,
                                   status=status, history=histories[i])

    def record(i: int, k: int, err: Optional[float]) -> None:
        if histories[i] is not None:
            histories[i].append(HistoryEntry(
                k=k, value=states[i].L, status=states[i].status, rel_err=err))

    def attach(i: int, report) -> None:
        hist = histories[i]
        if hist is not None and 1 <= report.k <= len(hist):
            row = hist[report.k - 1]
            row.mu, row.nu = report.mu, report.nu
            row.g_abs, row.h_abs = report.g_abs, report.h_abs

    k = 1
    for i, st in enumerate(states):
        if st.status is not SolveStatus.ACTIVE:
            record(i, k, None)
            freeze(i, st.status, k)
            continue
        err = rel_err(i, st.L)
        record(i, k, err)
        estimators[i].push(alpha1, None, st.delta, st.L)
        if reference is not None and rtol is not None and err <= rtol:
            freeze(i, SolveStatus.CONVERGED, k)

    while k < max_iter and any(s.status is SolveStatus.ACTIVE for s in states):
        outcome = lanczos_step(stream)
        if outcome.invariant_subspace:
            # exhausted Krylov space: every surviving value is exact
            for i, st in enumerate(states):
                if st.status is not SolveStatus.ACTIVE:
                    continue
                for report in estimators[i].flush_exact(st.L, True):
                    attach(i, report)
                freeze(i, SolveStatus.CONVERGED, k)
            break
        beta, alpha_next = outcome.beta, outcome.alpha_next
        beta_sq = beta * beta
        k += 1
        for i, st in enumerate(states):
            if st.status is not SolveStatus.ACTIVE:
                continue
            shift_state_update(st, alpha_next, beta, beta_sq, tol_delta)
            if st.status is not SolveStatus.ACTIVE:
                record(i, k, None)
                freeze(i, st.status, k)
                continue
            err = rel_err(i, st.L)
            record(i, k, err)
            report = estimators[i].push(alpha_next, beta, st.delta, st.L)
            if report is not None:
                attach(i, report)
            if reference is not None:
                if rtol is not None and err <= rtol:
                    freeze(i, SolveStatus.CONVERGED, k)
            elif rtol is not None and report is not None:
                if report.nu <= rtol * report.value_abs:
                    freeze(i, SolveStatus.CONVERGED, k)

    for i, st in enumerate(states):
        if st.status is SolveStatus.ACTIVE:
            freeze(i, SolveStatus.MAX_ITER, k)

    return QuadFormResult(
        method="lanczos", shifts=outcomes, iterations=k,
        alpha=list(stream.coeffs.alpha), beta=list(stream.coeffs.beta),
        vnorm2=vnorm2,
        invariant_subspace_at=stream.k if stream.exhausted else None)


@dataclass
class BilinearFormResult:
    """Polarization result ``p^T (zI - A)^{-1} q`` per shift (real data)."""

    values: list
    sum_run: Optional[QuadFormResult]
    diff_run: Optional[QuadFormResult]


def bilinear_form(a: SparseHermitianMatrix, p: np.ndarray, q: np.ndarray,
                  shifts: Sequence[complex], **kwargs) -> BilinearFormResult:
    """Reduce a real bilinear form to two quadratic forms.

    With ``s = p + q`` and ``t = p - q`` the value per shift is
    ``(L^{(s)} - L^{(t)}) / 4``.  The polarization identity in this form
    assumes the transpose bilinear form, so complex matrices or vectors are
    rejected.  A zero ``s`` or ``t`` contributes a zero quadratic form.
    """
    if not (a.is_real and a.hermitian_verified):
        raise ValueError("bilinear_form requires a real symmetric matrix")
    p = np.asarray(p)
    q = np.asarray(q)
    if np.iscomplexobj(p) and np.any(p.imag):
        raise ValueError("p must be real")
    if np.iscomplexobj(q) and np.any(q.imag):
        raise ValueError("q must be real")
    p = p.real.astype(float)
    q = q.real.astype(float)
    shifts = [complex(z) for z in shifts]
    s = p + q
    t = p - q

    def forms(w):
        if np.linalg.norm(w) == 0.0:
            return [0j] * len(shifts), None
        run = run_quadratic_forms(a, w.astype(np.complex128), shifts, **kwargs)
        return run.values, run

    s_vals, s_run = forms(s)
    t_vals, t_run = forms(t)
    values = []
    for sv, tv in zip(s_vals, t_vals):
        if sv is None or tv is None:
            values.append(None)
        else:
            values.append((sv - tv) / 4.0)
    return BilinearFormResult(values=values, sum_run=s_run, diff_run=t_run)
