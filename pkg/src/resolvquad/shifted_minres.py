"""Shifted MINRES for quadratic forms via per-shift complex Givens rotations.

One Lanczos stream (complex Hermitian matrices allowed) feeds, per shift, a
QR factorization of the growing shifted tridiagonal maintained by two
retained rotations.  The accumulator update is

    M_k = M_{k-1} + ||r_0|| c_k f_k p_k,     f_{k+1} = -conj(s_k) f_k,

where ``p_k`` is the forward-substitution recurrence of the projected
search directions.  ``|f_k|`` is nonincreasing and ``||r_0|| |f_{k+1}|`` is
the residual norm of the implicit least-squares problem, exposed per shift
as a diagnostic.  The iterate itself is never formed.

The rotations operate on the tridiagonal with *positive* off-diagonals
(rotation input pair ``(r_kk, beta_k)`` with real ``beta_k >= 0``), which is
the projection of ``z I - A`` onto the sign-flipped Lanczos basis
``(-1)^{k-1} v_k``.  The basis projections fed to the ``p_k`` recurrence
carry that alternating sign; with unsigned projections the accumulated
value drifts from the reference for every ``k >= 2`` (checked against the
dense least-squares oracle).

``x_0 = 0`` always, so the initial residual is ``v`` and no seed shift
exists.
"""

from __future__ import annotations

import math
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
from .error_estimate import DEFAULT_LAG, DelayedDifferenceWindow
from .lanczos import lanczos_init, lanczos_step

__all__ = [
    "GivensRotation",
    "MinresShiftState",
    "MinresResult",
    "givens",
    "apply_rotation",
    "minres_run",
]


@dataclass(frozen=True)
class GivensRotation:
    """Unitary 2x2 rotation ``[[c, s], [-conj(s), conj(c)]]``.

    ``c`` is real by the phase convention below, so ``conj(c) = c``.
    """

    c: float
    s: complex


def givens(a: complex, b: float) -> tuple[float, complex, complex]:
    """Rotation zeroing ``b`` against ``a``: ``c a + s b = r``, ``-conj(s) a + conj(c) b = 0``.

    Phase convention: ``r`` carries the phase of ``a`` when ``a != 0``
    (``c = |a| / hypot(|a|, b)`` is then real positive); for ``a = 0`` the
    rotation is the swap ``(c, s, r) = (0, 1, b)``.  ``b`` is real and
    nonnegative here (it is the Lanczos off-diagonal).
    """
    if b < 0:
        raise ValueError("rotation input b must be nonnegative")
    if a == 0:
        if b == 0:
            raise ValueError("both rotation inputs are zero")
        return 0.0, 1.0 + 0j, complex(b)
    aa = abs(a)
    rho = math.hypot(aa, b)
    phase = a / aa
    return aa / rho, phase * (b / rho), phase * rho


def apply_rotation(c: float, s: complex, x: complex, y: complex):
    """Apply ``[[c, s], [-conj(s), conj(c)]]`` to the pair ``(x, y)``."""
    return c * x + s * y, -s.conjugate() * x + c * y


@dataclass
class MinresShiftState:
    """Per-shift MINRES pipeline: two rotations, two directions, phase, sum."""

    z: complex
    f: complex = 1.0 + 0j
    p_prev: complex = 0j  # p_{k-1}
    p_prev2: complex = 0j  # p_{k-2}
    rot_prev: Optional[GivensRotation] = None  # G_{k-1}
    rot_prev2: Optional[GivensRotation] = None  # G_{k-2}
    value: complex = 0j
    status: SolveStatus = SolveStatus.ACTIVE
    k: int = 0
    residual_norm: Optional[float] = None


@dataclass
class MinresResult(MethodResult):
    alpha: list = field(default_factory=list)
    beta: list = field(default_factory=list)
    vnorm2: float = 0.0
    invariant_subspace_at: Optional[int] = None


def minres_run(a: SparseHermitianMatrix, v: np.ndarray,
               shifts: Sequence[complex], *,
               rtol: Optional[float] = 1e-10,
               lag: int = DEFAULT_LAG,
               max_iter: Optional[int] = None,
               reference: Optional[Sequence[complex]] = None,
               keep_history: bool = False) -> MinresResult:
    """Run shifted MINRES for ``v^H (z_i I - A)^{-1} v`` over all shifts.

    Stopping mirrors the quadratic-form driver: true relative error against
    ``reference`` when supplied, otherwise the delayed-difference rule on
    ``M_k`` at lag ``lag``.  At an invariant subspace the final values are
    exact (the residual phase ``f`` vanishes) and surviving shifts freeze
    as converged.
    """
    shifts = [complex(z) for z in shifts]
    if not shifts:
        raise ValueError("at least one shift is required")
    if reference is not None:
        reference = [complex(r) for r in reference]
        if len(reference) != len(shifts):
            raise ValueError("reference values must match the shift list")
    v = np.asarray(v, dtype=np.complex128)
    stream = lanczos_init(a, v)
    if max_iter is None:
        max_iter = 2 * a.n
    rnorm = math.sqrt(stream.vnorm2)  # ||r_0|| = ||v||

    states = [MinresShiftState(z=z) for z in shifts]
    outcomes: list[Optional[ShiftOutcome]] = [None] * len(shifts)
    histories = [[] if keep_history else None for _ in shifts]
    windows = [DelayedDifferenceWindow(lag) for _ in shifts]

    def freeze(i, status, iterations):
        st = states[i]
        st.status = status
        if histories[i]:
            histories[i][-1].status = status
        outcomes[i] = ShiftOutcome(
            z=st.z, value=st.value if st.k > 0 else None,
            iterations=iterations, status=status, history=histories[i],
            residual_norm=st.residual_norm)

    k = 0
    alpha_k = stream.coeffs.alpha[0]
    beta_prev = 0.0
    qsign = 1.0  # (-1)^{k-1}: sign-flipped basis projection
    q_scalar = qsign * complex(np.vdot(v, stream.v_curr))

    while k < max_iter and any(s.status is SolveStatus.ACTIVE for s in states):
        outcome = lanczos_step(stream)
        exhausting = outcome.invariant_subspace
        beta_k = 0.0 if exhausting else outcome.beta
        k += 1

        for i, st in enumerate(states):
            if st.status is not SolveStatus.ACTIVE:
                continue
            r2 = 0j  # row k-2 entry of column k
            r1 = complex(beta_prev)  # row k-1 entry
            r0 = st.z - alpha_k  # diagonal candidate
            if st.rot_prev2 is not None:
                r2, r1 = apply_rotation(st.rot_prev2.c, st.rot_prev2.s, r2, r1)
            if st.rot_prev is not None:
                r1, r0 = apply_rotation(st.rot_prev.c, st.rot_prev.s, r1, r0)
            if r0 == 0 and beta_k == 0.0:
                # zI - A singular on the Krylov space; cannot divide
                freeze(i, SolveStatus.BREAKDOWN, k)
                continue
            c, s, rkk = givens(r0, beta_k)
            p_new = (q_scalar - r2 * st.p_prev2 - r1 * st.p_prev) / rkk
            value_new = st.value + rnorm * c * st.f * p_new
            f_new = -s.conjugate() * st.f
            if not (isfinite_scalar(value_new) and isfinite_scalar(p_new)
                    and isfinite_scalar(f_new)):
                freeze(i, SolveStatus.OVERFLOW, k)
                continue
            st.rot_prev2 = st.rot_prev
            st.rot_prev = GivensRotation(c, s)
            st.p_prev2, st.p_prev = st.p_prev, p_new
            st.f = f_new
            st.value = value_new
            st.k = k
            st.residual_norm = rnorm * abs(f_new)

            err = None
            if reference is not None:
                ref = reference[i]
                denom = abs(ref) or 1.0
                err = abs(st.value - ref) / denom
            hist = histories[i]
            if hist is not None:
                hist.append(HistoryEntry(k=k, value=st.value,
                                         status=st.status, rel_err=err,
                                         residual=st.residual_norm))
            lagged = windows[i].push(st.value)
            if lagged is not None:
                k0, nu, scale_abs = lagged
                if hist is not None and 1 <= k0 <= len(hist):
                    hist[k0 - 1].nu = nu
                if (reference is None and rtol is not None
                        and nu <= rtol * scale_abs):
                    freeze(i, SolveStatus.CONVERGED, k)
            if (reference is not None and rtol is not None
                    and err is not None and err <= rtol):
                freeze(i, SolveStatus.CONVERGED, k)

        if exhausting:
            # Krylov space exhausted: surviving values are exact
            for i, st in enumerate(states):
                if st.status is SolveStatus.ACTIVE:
                    freeze(i, SolveStatus.CONVERGED, k)
            break
        alpha_k = outcome.alpha_next
        beta_prev = beta_k
        qsign = -qsign
        q_scalar = qsign * complex(np.vdot(v, stream.v_curr))

    for i, st in enumerate(states):
        if st.status is SolveStatus.ACTIVE:
            freeze(i, SolveStatus.MAX_ITER, k)

    return MinresResult(
        method="minres", shifts=outcomes, iterations=k,
        alpha=list(stream.coeffs.alpha), beta=list(stream.coeffs.beta),
        vnorm2=stream.vnorm2,
        invariant_subspace_at=stream.k if stream.exhausted else None)
