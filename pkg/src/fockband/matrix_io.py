"""Sparse-triplet CSV: header ``row,col,re,im``, zero-based, omitted entries are zero."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .bands import BandOperator, TruncatedOperator, as_operator, from_band
from .errors import DomainError

HEADER = ["row", "col", "re", "im"]


def write_triplets(M, path):
    """Write nonzero entries in row-major order; floats use repr so reads are exact."""
    if isinstance(M, BandOperator):
        coo = M.to_sparse().tocoo()
        rows, cols, vals = coo.row, coo.col, coo.data
    else:
        a = as_operator(M).entries
        rows, cols = np.nonzero(a)
        vals = a[rows, cols]
    keep = vals != 0
    rows, cols, vals = rows[keep], cols[keep], vals[keep]
    order = np.lexsort((cols, rows))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for i in order:
            v = vals[i]
            w.writerow([int(rows[i]), int(cols[i]), repr(float(v.real)), repr(float(v.imag))])
    return Path(path)


def read_band_triplets(path, n=None):
    """Read a triplet file into band storage; ``n`` defaults to 1 + the largest index."""
    entries = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != HEADER:
            raise DomainError(f"{path}: expected header {','.join(HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise DomainError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            try:
                r, c = int(row[0]), int(row[1])
                v = complex(float(row[2]), float(row[3]))
            except ValueError:
                raise DomainError(f"{path}:{lineno}: malformed entry {row}") from None
            if r < 0 or c < 0:
                raise DomainError(f"{path}:{lineno}: negative index")
            entries[(r, c)] = v
    size = 1 + max((max(r, c) for r, c in entries), default=-1)
    n = size if n is None else n
    if n < size or n < 1:
        raise DomainError(f"{path}: entries need n >= {max(size, 1)}, got {n}")
    diags = {}
    for (r, c), v in entries.items():
        k = r - c
        if k not in diags:
            diags[k] = np.zeros(n - abs(k), dtype=complex)
        diags[k][min(r, c)] = v
    return BandOperator(n, diags)


def read_triplets(path, n=None) -> TruncatedOperator:
    return from_band(read_band_triplets(path, n))
