"""Matrix Market coordinate-format reader/writer.

Reads the exchange files the benchmark matrices ship in and mirrors
``symmetric``/``hermitian`` storage to the full both-triangle CSR layout used
by the solvers.  Gzipped files are decompressed transparently when the
filename ends in ``.gz``.

Mirroring rules:

* ``symmetric``  -> the strict lower triangle is copied to the upper triangle
  without conjugation.  A complex symmetric matrix is therefore flagged
  not-Hermitian unless its entries happen to be real.
* ``hermitian``  -> mirrored with conjugation.
* ``general``    -> taken as stored.
* ``skew-symmetric`` is rejected (cannot be Hermitian).

Values are parsed as plain decimal doubles; duplicate ``(i, j)`` entries are
summed; ``%`` comment lines are skipped.
"""

from __future__ import annotations

import gzip
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO, Union

from .core import DEFAULT_HERMITIAN_TOL, SparseHermitianMatrix

__all__ = [
    "MatrixMarketError",
    "MatrixMarketHeader",
    "parse_matrix_market",
    "read_matrix_market",
    "write_matrix_market",
]

_FIELDS = {"real", "complex", "integer", "pattern"}
_SYMMETRIES = {"general", "symmetric", "hermitian", "skew-symmetric"}


class MatrixMarketError(ValueError):
    """Malformed or unsupported Matrix Market content."""


@dataclass(frozen=True)
class MatrixMarketHeader:
    object: str
    format: str
    field: str
    symmetry: str


def _parse_header(line: str) -> MatrixMarketHeader:
    parts = line.strip().split()
    if len(parts) != 5 or parts[0] != "%%MatrixMarket":
        raise MatrixMarketError(f"malformed header line: {line!r}")
    _, obj, fmt, fld, sym = (p.lower() for p in parts)
    if obj != "matrix":
        raise MatrixMarketError(f"unsupported object {obj!r}")
    if fmt != "coordinate":
        raise MatrixMarketError(f"unsupported format {fmt!r} (coordinate only)")
    if fld not in _FIELDS:
        raise MatrixMarketError(f"unknown field {fld!r}")
    if fld == "pattern":
        raise MatrixMarketError("pattern matrices carry no values")
    if sym not in _SYMMETRIES:
        raise MatrixMarketError(f"unknown symmetry {sym!r}")
    if sym == "skew-symmetric":
        raise MatrixMarketError("skew-symmetric matrices cannot be Hermitian")
    return MatrixMarketHeader("matrix", fmt, fld, sym)


def parse_matrix_market(stream: TextIO,
                        tol_herm: float = DEFAULT_HERMITIAN_TOL) -> SparseHermitianMatrix:
    """Parse an open text stream into a :class:`SparseHermitianMatrix`."""
    header = None
    size = None
    n_lines = 0
    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []
    for raw in stream:
        line = raw.strip()
        if not line:
            continue
        if header is None:
            header = _parse_header(line)
            continue
        if line.startswith("%"):
            continue
        parts = line.split()
        if size is None:
            if len(parts) != 3:
                raise MatrixMarketError(f"malformed size line: {line!r}")
            nrows, ncols, nnz = (int(p) for p in parts)
            if nrows != ncols:
                raise MatrixMarketError(
                    f"matrix must be square, got {nrows}x{ncols}")
            size = (nrows, nnz)
            continue
        i, j, v = _parse_entry(parts, header.field)
        n = size[0]
        if not (1 <= i <= n and 1 <= j <= n):
            raise MatrixMarketError(f"index ({i}, {j}) out of range for n={n}")
        n_lines += 1
        rows.append(i - 1)
        cols.append(j - 1)
        vals.append(v)
        if header.symmetry != "general" and i != j:
            rows.append(j - 1)
            cols.append(i - 1)
            vals.append(v.conjugate() if header.symmetry == "hermitian" else v)
    if header is None:
        raise MatrixMarketError("empty stream")
    if size is None:
        raise MatrixMarketError("missing size line")
    n, nnz = size
    if n_lines != nnz:
        raise MatrixMarketError(f"expected {nnz} entries, found {n_lines}")
    return SparseHermitianMatrix.from_coo(n, rows, cols, vals, tol_herm=tol_herm)


def _parse_entry(parts, field):
    if field == "complex":
        if len(parts) != 4:
            raise MatrixMarketError(f"complex entry needs 4 tokens: {parts!r}")
        return int(parts[0]), int(parts[1]), complex(float(parts[2]), float(parts[3]))
    if len(parts) != 3:
        raise MatrixMarketError(f"{field} entry needs 3 tokens: {parts!r}")
    return int(parts[0]), int(parts[1]), complex(float(parts[2]), 0.0)


def read_matrix_market(path: Union[str, Path],
                       tol_herm: float = DEFAULT_HERMITIAN_TOL) -> SparseHermitianMatrix:
    """Read a ``.mtx`` or ``.mtx.gz`` file."""
    path = Path(path)
    if path.name.endswith(".gz"):
        with gzip.open(path, "rt") as fh:
            return parse_matrix_market(fh, tol_herm=tol_herm)
    with open(path, "rt") as fh:
        return parse_matrix_market(fh, tol_herm=tol_herm)


def write_matrix_market(a: SparseHermitianMatrix, target) -> None:
    """Write full (``general``) coordinate storage, value-exact round trip.

    ``target`` may be a path or an open text stream.  Entries are written
    with ``repr``-grade precision so ``parse(write(a))`` reproduces the CSR
    arrays exactly.
    """
    if isinstance(target, (str, Path)):
        path = Path(target)
        if path.name.endswith(".gz"):
            with gzip.open(path, "wt", newline="\n") as fh:
                write_matrix_market(a, fh)
        else:
            with open(path, "wt", newline="\n") as fh:
                write_matrix_market(a, fh)
        return
    fh: TextIO = target
    field = "real" if a.is_real else "complex"
    fh.write(f"%%MatrixMarket matrix coordinate {field} general\n")
    fh.write(f"{a.n} {a.n} {a.nnz}\n")
    for i in range(a.n):
        for p in range(a.row_ptr[i], a.row_ptr[i + 1]):
            j = a.col_idx[p]
            v = complex(a.values[p])
            if field == "real":
                fh.write(f"{i + 1} {j + 1} {v.real!r}\n")
            else:
                fh.write(f"{i + 1} {j + 1} {v.real!r} {v.imag!r}\n")
