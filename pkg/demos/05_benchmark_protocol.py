#!/usr/bin/env python3
"""The full benchmark protocol through the experiment harness.

Uses the mhd1280b matrix when available (run scripts/fetch_mhd1280b.py or
set RESOLVQUAD_MHD1280B); otherwise falls back to a synthetic
positive-definite surrogate so the script always runs.  Writes history.csv
and summary.json into ./protocol_out.

The same run is available from the command line:

    resolvquad run --matrix data/mhd1280b.mtx.gz \
        --shifts unit-circle:m=16 --reference dense --rtol 1e-10 \
        --history --out protocol_out
"""

import os
from pathlib import Path

import numpy as np

from resolvquad import ExperimentConfig, SparseHermitianMatrix, \
    run_experiment, write_report
from resolvquad.harness import render_summary_table
from resolvquad.mmio import write_matrix_market


def locate_matrix() -> Path:
    env = os.environ.get("RESOLVQUAD_MHD1280B")
    if env and Path(env).is_file():
        return Path(env)
    data = Path(__file__).resolve().parent.parent / "data"
    for name in ("mhd1280b.mtx.gz", "mhd1280b.mtx"):
        if (data / name).is_file():
            return data / name
    # synthetic surrogate: log-spaced positive spectrum, similar flavor
    print("mhd1280b not found; using a synthetic 400x400 surrogate\n")
    rng = np.random.default_rng(11)
    lam = np.geomspace(1e-6, 70.0, 400)
    q, _ = np.linalg.qr(rng.standard_normal((400, 400)))
    dense = (q * lam) @ q.T
    dense = (dense + dense.T) / 2
    path = Path("surrogate400.mtx")
    write_matrix_market(SparseHermitianMatrix.from_dense(dense), path)
    return path


config = ExperimentConfig(
    matrix=locate_matrix(),
    vector="uniform",              # v = n^{-1/2} e
    shifts="unit-circle:m=16",
    methods=("lanczos", "cocg", "cocr", "minres"),
    rtol=1e-10,
    reference="dense",             # stop on true relative error
    history=True,
    out="protocol_out",
)

report = run_experiment(config)
print(render_summary_table(report))
paths = write_report(report, config.out)
for kind, path in sorted(paths.items()):
    print(f"wrote {kind}: {path}")
