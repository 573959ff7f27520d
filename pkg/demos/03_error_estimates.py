#!/usr/bin/env python3
"""How well do the lag-d error estimates track the true error?

Runs the shifted Lanczos method on the diag(1..100) family with history
recording, then compares mu_{k,5} and nu_{k,5} against the true error
|L_k - v^H (zI - A)^{-1} v| at every iteration.  The estimates are
heuristic: this script records the observed accuracy ratios, it does not
assert a bound.
"""

import numpy as np

from resolvquad import SparseHermitianMatrix, run_quadratic_forms
from resolvquad.oracle import dense_resolvent_quadform

n = 100
matrix = SparseHermitianMatrix.diagonal(np.arange(1.0, n + 1))
v = np.full(n, 1.0 / np.sqrt(n), dtype=np.complex128)
z = 50.5 + 2.0j

exact = dense_resolvent_quadform(matrix.to_dense(), v, z)
res = run_quadratic_forms(matrix, v, [z], rtol=1e-12, lag=5,
                          keep_history=True, max_iter=400)
hist = res.shifts[0].history

print(f"diag(1..{n}), z = {z}, exact value {exact:.12f}")
print(f"{'k':>4} {'true error':>12} {'mu_k5':>12} {'nu_k5':>12} "
      f"{'mu/err':>8} {'nu/err':>8}")
ratios_mu, ratios_nu = [], []
for row in hist:
    err = abs(row.value - exact)
    if row.mu is None or row.nu is None or err == 0:
        continue
    ratios_mu.append(row.mu / err)
    ratios_nu.append(row.nu / err)
    if row.k % 5 == 0:
        print(f"{row.k:>4} {err:>12.2e} {row.mu:>12.2e} {row.nu:>12.2e} "
              f"{row.mu / err:>8.2f} {row.nu / err:>8.2f}")

print(f"\nconverged in {res.shifts[0].iterations} iterations "
      f"({res.shifts[0].status.value})")
print(f"mu/error ratio range: [{min(ratios_mu):.3f}, {max(ratios_mu):.3f}]")
print(f"nu/error ratio range: [{min(ratios_nu):.3f}, {max(ratios_nu):.3f}]")
print("(recorded observation: both stay within about two orders of"
      " magnitude of the truth on this smooth family)")

within_mu = sum(1e-2 <= r <= 1e2 for r in ratios_mu) / len(ratios_mu)
within_nu = sum(1e-2 <= r <= 1e2 for r in ratios_nu) / len(ratios_nu)
print(f"fraction within two orders: mu {within_mu:.0%}, nu {within_nu:.0%}")
