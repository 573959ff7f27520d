#!/usr/bin/env python3
"""Breakdown semantics: interior real shifts can hit a zero pivot, shifts
off the real axis never do.

The pivot delta_k of the per-shift recursion is a ratio of shifted Jacobi
determinants; when the shift avoids the real interval between the extreme
eigenvalues, no leading block can become singular, so no division by zero
is possible.  A real shift inside the spectrum enjoys no such protection:
the recursion reports a breakdown status instead of raising.
"""

import numpy as np

from resolvquad import SparseHermitianMatrix, run_quadratic_forms
from resolvquad.core import SolveStatus

# exact interior hit: alpha_1 = 0 computes exactly for e_1 on this matrix,
# and z = 0 lies inside the spectrum [-1, 1]
matrix = SparseHermitianMatrix.from_dense([[0.0, 1.0], [1.0, 0.0]])
res = run_quadratic_forms(matrix, np.array([1.0, 0.0], dtype=complex),
                          [0.0, 0.0 + 1e-3j])
print("2x2 off-diagonal matrix, spectrum {-1, +1}:")
for out in res.shifts:
    print(f"  z = {out.z}: status {out.status.value}, value {out.value}")

# random sweep: any shift with Im z != 0 is safe
rng = np.random.default_rng(5)
trials, breakdowns = 200, 0
for _ in range(trials):
    n = int(rng.integers(4, 40))
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = SparseHermitianMatrix.from_dense((b + b.conj().T) / (2 * np.sqrt(n)))
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    z = complex(3 * rng.standard_normal(),
                (1e-6 + rng.random()) * a.frobenius_norm)
    run = run_quadratic_forms(a, v, [z], rtol=None, max_iter=n)
    breakdowns += run.shifts[0].status is SolveStatus.BREAKDOWN

print(f"\nrandom off-axis shifts: {breakdowns}/{trials} breakdowns "
      f"(guaranteed zero)")
