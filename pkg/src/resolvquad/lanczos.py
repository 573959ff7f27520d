"""Hermitian Lanczos iteration producing the Jacobi-matrix coefficients.

One :class:`LanczosState` owns the three-term recurrence for a fixed matrix
and starting vector and emits the real coefficient stream ``alpha_k``,
``beta_k`` that every solver in this package consumes.  Only the two active
basis vectors are retained, so memory stays O(n); no reorthogonalization is
performed (orthogonality loss shows up as delayed convergence, never as a
wrong limit for the quadratic-form recursions built on top).

``alpha`` is stored as ``real(u^H v)``: for complex Hermitian matrices the
numerically computed Rayleigh quotient picks up a spurious imaginary part
that would otherwise leak into every shifted recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import NonFiniteError, SparseHermitianMatrix, norm

__all__ = [
    "HAPPY_BREAKDOWN_RTOL",
    "LanczosCoefficients",
    "LanczosState",
    "StepOutcome",
    "lanczos_init",
    "lanczos_step",
]

# beta_k below this times ||A||_F terminates with an invariant subspace;
# an exact beta_k = 0 test never fires in floating point.
HAPPY_BREAKDOWN_RTOL = 1e-14


@dataclass
class LanczosCoefficients:
    """Growing diagonal/off-diagonal sequences of the Jacobi matrix.

    ``alpha[j]`` is alpha_{j+1}; ``beta[j]`` is beta_{j+1} (> 0 whenever
    stored -- a vanishing beta terminates the iteration instead).
    """

    alpha: list = field(default_factory=list)
    beta: list = field(default_factory=list)

    def tridiagonal(self, k: Optional[int] = None) -> np.ndarray:
        """Dense ``T_{k,k}`` built from the first ``k`` coefficients."""
        if k is None:
            k = len(self.alpha)
        t = np.diag(np.asarray(self.alpha[:k], dtype=float))
        if k > 1:
            off = np.asarray(self.beta[:k - 1], dtype=float)
            t += np.diag(off, 1) + np.diag(off, -1)
        return t


@dataclass
class StepOutcome:
    invariant_subspace: bool
    k: int
    beta: Optional[float] = None
    alpha_next: Optional[float] = None


@dataclass
class LanczosState:
    """Single-owner iteration state; share the matrix, not the state."""

    a: SparseHermitianMatrix
    k: int
    v_prev: np.ndarray
    v_curr: np.ndarray
    u: np.ndarray
    coeffs: LanczosCoefficients
    vnorm2: float
    tol_happy: float
    exhausted: bool = False


def lanczos_init(a: SparseHermitianMatrix, v: np.ndarray,
                 tol_happy: Optional[float] = None) -> LanczosState:
    """Normalize ``v``, apply the matrix once, and record ``alpha_1``."""
    if not a.hermitian_verified:
        raise ValueError("matrix failed the Hermitian check; "
                         "run hermitian_check / inspect max_asymmetry")
    v = np.asarray(v, dtype=np.complex128)
    vn = norm(v)
    if vn == 0.0:
        raise ValueError("starting vector must be nonzero")
    v1 = v / vn
    u = a.matvec(v1)
    alpha1 = float(np.vdot(u, v1).real)
    if not math.isfinite(alpha1):
        raise NonFiniteError("alpha_1 is not finite")
    if tol_happy is None:
        tol_happy = HAPPY_BREAKDOWN_RTOL * a.frobenius_norm
    coeffs = LanczosCoefficients(alpha=[alpha1], beta=[])
    return LanczosState(a=a, k=1, v_prev=np.zeros_like(v1), v_curr=v1, u=u,
                        coeffs=coeffs, vnorm2=vn * vn, tol_happy=tol_happy)


def lanczos_step(state: LanczosState) -> StepOutcome:
    """Advance by one iteration: emit ``beta_k`` and ``alpha_{k+1}``.

    Returns an invariant-subspace outcome when ``beta_k`` falls below the
    happy-breakdown threshold; every quadratic-form value computed from the
    coefficients is exact from that point on.
    """
    if state.exhausted:
        raise RuntimeError("iteration already hit an invariant subspace")
    k = state.k
    alpha_k = state.coeffs.alpha[-1]
    u = state.u - alpha_k * state.v_curr
    beta_k = norm(u)
    if not math.isfinite(beta_k):
        raise NonFiniteError(f"beta_{k} is not finite")
    if beta_k <= state.tol_happy:
        state.exhausted = True
        return StepOutcome(invariant_subspace=True, k=k)
    v_next = u / beta_k
    u_next = state.a.matvec(v_next) - beta_k * state.v_curr
    alpha_next = float(np.vdot(u_next, v_next).real)
    if not math.isfinite(alpha_next):
        raise NonFiniteError(f"alpha_{k + 1} is not finite")
    state.coeffs.beta.append(beta_k)
    state.coeffs.alpha.append(alpha_next)
    state.v_prev = state.v_curr
    state.v_curr = v_next
    state.u = u_next
    state.k = k + 1
    return StepOutcome(invariant_subspace=False, k=k, beta=beta_k,
                       alpha_next=alpha_next)
