"""Lag-d a-posteriori error estimates for the shifted quadratic-form run.

Two estimates are produced for iteration ``k`` once iteration ``k + d`` has
completed:

* ``mu_{k,d} = beta_k * ||v||^2 * |g_k| * |h_k|`` where ``g_k`` is the
  (1, k) corner entry of ``(zI - T_{k,k})^{-1}`` and ``h_k`` the (1, k+1)
  "bridge" entry of ``(zI - T_{k+d,k+d})^{-1}``,
* ``nu_{k,d} = |L_k - L_{k+d}|``, the delayed difference of the
  quadratic-form iterates.

Both entries have closed forms over the pivot sequence ``delta`` already
produced by the shift recursion:

    g_{k+1} = (beta_k / delta_{k+1}) g_k,            g_1 = 1 / delta_1
    h_k     = g_k * beta_k / (delta_{k+1} .. delta_{k+d})
                  * phi_2 * .. * phi_d

with the backward pivots ``phi_d = z - alpha_{k+d}`` and
``phi_j = z - alpha_{k+j} - beta_{k+j}^2 / phi_{j+1}`` (the coefficient
``beta_{k+j}`` couples rows ``k+j`` and ``k+j+1``; validated against the
Thomas-solve reference).  For ``zI - T`` these products are the exact
entries; printed closed forms that carry ``(-1)^k`` factors correspond to
the opposite off-diagonal sign convention and agree in modulus, which is
all the estimates use.

Estimator failures (vanished pivots, non-finite products) degrade to
"estimate not available" and never touch the solver itself.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import isfinite_scalar

__all__ = [
    "DEFAULT_LAG",
    "EstimatorUnavailable",
    "EstimateReport",
    "EstimatorState",
    "DelayedDifferenceWindow",
    "corner_update",
    "bridge_entry",
]

DEFAULT_LAG = 5


class EstimatorUnavailable(ArithmeticError):
    """The recursion for this (k, d) hit a zero pivot; no estimate emitted."""


def corner_update(g: complex, beta: float, delta_next: complex) -> complex:
    """Advance the corner entry: ``g_{k+1} = (beta_k / delta_{k+1}) g_k``."""
    if delta_next == 0:
        raise EstimatorUnavailable("delta vanished in corner recursion")
    return g * (beta / delta_next)


def bridge_entry(z: complex, g_k: complex, beta_k: float,
                 alpha_tail: Sequence[float], beta_tail: Sequence[float],
                 delta_tail: Sequence[complex]) -> complex:
    """Bridge entry ``h`` with ``|h| = |e_1^T (zI - T_{k+d})^{-1} e_{k+1}|``.

    ``alpha_tail[j-1] = alpha_{k+j}`` for ``j = 1..d``;
    ``beta_tail[j-1] = beta_{k+j}`` for ``j = 1..d-1``;
    ``delta_tail[j-1] = delta_{k+j}`` for ``j = 1..d``.
    ``d = 1`` has an empty backward-pivot product and degenerates to the
    corner entry ``g_{k+1}``.
    """
    d = len(delta_tail)
    if len(alpha_tail) != d or len(beta_tail) < d - 1:
        raise ValueError("tail lengths inconsistent with the lag")
    phi_prod = 1.0 + 0.0j
    if d >= 2:
        phi = z - alpha_tail[d - 1]
        phi_prod = phi
        for j in range(d - 1, 1, -1):
            if phi == 0:
                raise EstimatorUnavailable("backward pivot phi vanished")
            phi = z - alpha_tail[j - 1] - beta_tail[j - 1] ** 2 / phi
            phi_prod *= phi
    denom = 1.0 + 0.0j
    for delta in delta_tail:
        denom *= delta
    if denom == 0:
        raise EstimatorUnavailable("delta product vanished in bridge entry")
    h = g_k * beta_k * phi_prod / denom
    if not isfinite_scalar(h):
        raise EstimatorUnavailable("bridge entry overflowed")
    return h


@dataclass
class EstimateReport:
    """Estimates for iteration ``k``, emitted at iteration ``k + d``.

    ``mu`` is ``None`` when its recursion was unavailable; ``nu`` is always
    defined once the lag window is full.  ``g_abs``/``h_abs`` expose the
    corner and bridge magnitudes for oracle cross-checks.
    """

    k: int
    nu: float
    value_abs: float = 0.0  # |L_k|, the scale the nu stopping rule uses
    mu: Optional[float] = None
    g_abs: Optional[float] = None
    h_abs: Optional[float] = None


@dataclass
class _Entry:
    k: int
    alpha: float
    beta_prev: Optional[float]  # beta_{k-1}, None at k = 1
    delta: complex
    value: complex
    g: Optional[complex]


class DelayedDifferenceWindow:
    """The ``nu`` half alone, for methods without a corner-entry recursion.

    Feeds on any scalar iterate sequence and reports
    ``nu_{k,d} = |x_k - x_{k+d}|`` with the scale ``|x_k|`` once the lag
    window fills.
    """

    def __init__(self, lag: int):
        if lag < 1:
            raise ValueError("lag must be a positive integer")
        self.lag = lag
        self.window: deque = deque(maxlen=lag + 1)
        self._k = 0

    def push(self, value: complex) -> Optional[tuple[int, float, float]]:
        """Return ``(k, nu_{k,d}, |x_k|)`` once iteration ``k + d`` arrives."""
        self._k += 1
        self.window.append((self._k, value))
        if len(self.window) < self.lag + 1:
            return None
        k0, v0 = self.window[0]
        return k0, abs(v0 - value), abs(v0)


class EstimatorState:
    """Ring buffer of the last ``d + 1`` iterations of one shift.

    Feed it once per iteration via :meth:`push`; a report for the lagged
    iteration comes back as soon as the window is full.  The corner product
    ``g`` rides along inside the entries; once it turns non-finite the
    ``mu`` side is abandoned while ``nu`` keeps flowing.
    """

    def __init__(self, z: complex, lag: int, vnorm2: float):
        if lag < 1:
            raise ValueError("estimator lag must be a positive integer")
        self.z = z
        self.lag = lag
        self.vnorm2 = vnorm2
        self.window: deque[_Entry] = deque(maxlen=lag + 1)
        self._k = 0

    def push(self, alpha: float, beta_prev: Optional[float], delta: complex,
             value: complex) -> Optional[EstimateReport]:
        """Record iteration ``k`` data; return the report for ``k - d`` if due.

        ``alpha``/``delta``/``value`` belong to iteration ``k``;
        ``beta_prev`` is the off-diagonal ``beta_{k-1}`` that produced it.
        """
        self._k += 1
        if self._k == 1:
            g = 1.0 / delta if delta != 0 else None
        else:
            prev_g = self.window[-1].g
            g = None
            if prev_g is not None and beta_prev is not None and delta != 0:
                g = corner_update(prev_g, beta_prev, delta)
                if not isfinite_scalar(g):
                    g = None
        self.window.append(_Entry(self._k, alpha, beta_prev, delta, value, g))
        if len(self.window) < self.lag + 1:
            return None
        return self._report()

    def _report(self) -> EstimateReport:
        w = self.window
        base = w[0]
        latest = w[-1]
        nu = abs(base.value - latest.value)
        mu = g_abs = h_abs = None
        beta_k = w[1].beta_prev
        if base.g is not None and beta_k is not None:
            g_abs = abs(base.g)
            try:
                h = bridge_entry(
                    self.z, base.g, beta_k,
                    alpha_tail=[e.alpha for e in list(w)[1:]],
                    beta_tail=[e.beta_prev for e in list(w)[2:]],
                    delta_tail=[e.delta for e in list(w)[1:]],
                )
            except EstimatorUnavailable:
                h = None
            if h is not None:
                h_abs = abs(h)
                mu = beta_k * self.vnorm2 * g_abs * h_abs
                if not math.isfinite(mu):
                    mu, h_abs = None, None
        return EstimateReport(k=base.k, nu=nu, value_abs=abs(base.value),
                              mu=mu, g_abs=g_abs, h_abs=h_abs)

    def flush_exact(self, value_final: complex,
                    final_beta_zero: bool) -> list[EstimateReport]:
        """Close out pending iterations after an invariant subspace.

        The iteration stopped at ``k_last`` with an exact value, so
        ``L_j = value_final`` for every virtual ``j > k_last`` and
        ``nu_{k,d} = |L_k - value_final|`` for the pending ``k``.  ``mu`` is
        only defined for the terminal iteration itself, where the vanished
        off-diagonal makes it exactly zero.
        """
        reports = []
        pending = list(self.window)[1:] if len(self.window) == self.lag + 1 \
            else list(self.window)
        for entry in pending:
            mu = 0.0 if (final_beta_zero and entry.k == self._k) else None
            reports.append(EstimateReport(
                k=entry.k, nu=abs(entry.value - value_final),
                value_abs=abs(entry.value), mu=mu,
                g_abs=abs(entry.g) if entry.g is not None else None,
                h_abs=None))
        return reports
