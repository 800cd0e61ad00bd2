"""Truncated matrices, diagonal (band) storage, Fejér averaging and rotations.

Orientation is ``entries[row, col] = <A e_col, e_row>``: rows are output
indices, columns are input indices. The offset of an entry is
``row - col``, so a Toeplitz operator with symbol z^k/|z|^k lives on
offset ``+k`` and a diagonal at offset ``k`` is the sequence
``j -> <A e_j, e_{j+k}>`` (k >= 0) or ``j -> <A e_{j+|k|}, e_j>`` (k < 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import svds

from .errors import DomainError, NormConvergenceError
from .fock import FockParams, check_unit, rotation_phases

DENSE_NORM_LIMIT = 512
POWER_TOL = 1e-12
POWER_MAX_ITER = 10_000


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Compression P_N A P_N of an operator, as an immutable N x N complex matrix."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DomainError("matrix entries must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros((n, n), dtype=complex))

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n, dtype=complex))

    @property
    def n(self):
        return self.entries.shape[0]

    def adjoint(self):
        return TruncatedOperator(self.entries.conj().T)

    def allclose(self, other, atol=0.0, rtol=0.0):
        return np.allclose(self.entries, as_operator(other).entries, atol=atol, rtol=rtol)

    def __add__(self, other):
        return TruncatedOperator(self.entries + as_operator(other).entries)

    def __sub__(self, other):
        return TruncatedOperator(self.entries - as_operator(other).entries)

    def __neg__(self):
        return TruncatedOperator(-self.entries)

    def __matmul__(self, other):
        return TruncatedOperator(self.entries @ as_operator(other).entries)

    def __mul__(self, scalar):
        return TruncatedOperator(self.entries * complex(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        return f"TruncatedOperator(n={self.n})"


def as_operator(x):
    if isinstance(x, TruncatedOperator):
        return x
    if isinstance(x, BandOperator):
        return from_band(x)
    return TruncatedOperator(np.asarray(x))


@dataclass(frozen=True, eq=False)
class BandOperator:
    """Sparse map offset -> diagonal sequence; offsets absent from ``diags`` are zero."""

    n: int
    diags: dict

    def __post_init__(self):
        clean = {}
        for k, d in self.diags.items():
            k = int(k)
            if abs(k) >= self.n:
                raise DomainError(f"offset {k} outside (-{self.n}, {self.n})")
            d = np.array(d, dtype=complex)
            if d.shape != (self.n - abs(k),):
                raise DomainError(f"diagonal {k} must have {self.n - abs(k)} entries, got {d.shape}")
            d.setflags(write=False)
            clean[k] = d
        object.__setattr__(self, "diags", dict(sorted(clean.items())))

    @classmethod
    def single(cls, k, values, n=None):
        values = np.asarray(values)
        n = len(values) + abs(k) if n is None else n
        return cls(n, {k: values})

    @property
    def offsets(self):
        return tuple(k for k, d in self.diags.items() if np.any(d != 0))

    @property
    def bandwidth(self):
        offs = self.offsets
        return max((abs(k) for k in offs), default=0)

    def diag(self, k):
        if k in self.diags:
            return self.diags[k]
        if abs(k) >= self.n:
            return np.zeros(0, dtype=complex)
        return np.zeros(self.n - abs(k), dtype=complex)

    def restrict(self, keep):
        """Band operator holding only the offsets for which ``keep(k)`` is true."""
        return BandOperator(self.n, {k: d for k, d in self.diags.items() if keep(k)})

    def scaled(self, c):
        return BandOperator(self.n, {k: c * d for k, d in self.diags.items()})

    def to_sparse(self):
        offs = list(self.diags)
        if not offs:
            return sp.csr_matrix((self.n, self.n), dtype=complex)
        # scipy's diags uses offset = col - row
        return sp.diags([self.diags[k] for k in offs], [-k for k in offs],
                        shape=(self.n, self.n), format="csr", dtype=complex)

    def __repr__(self):
        return f"BandOperator(n={self.n}, offsets={list(self.diags)})"


def to_band(M):
    """Lossless diagonal decomposition; only diagonals with a nonzero entry are stored."""
    a = as_operator(M).entries
    n = a.shape[0]
    diags = {}
    for k in range(-(n - 1), n):
        d = np.diagonal(a, -k)
        if np.any(d != 0):
            diags[k] = d.copy()
    return BandOperator(n, diags)


def from_band(B):
    n = B.n
    a = np.zeros((n, n), dtype=complex)
    for k, d in B.diags.items():
        idx = np.arange(n - abs(k))
        if k >= 0:
            a[idx + k, idx] = d
        else:
            a[idx, idx - k] = d
    return TruncatedOperator(a)


def _offset_mask(n, k):
    r = np.arange(n)
    return (r[:, None] - r[None, :]) == k


def extract_diag(M, k):
    """Keep entries with row - col == k; zero matrix if |k| >= N."""
    a = as_operator(M).entries
    n = a.shape[0]
    if abs(k) >= n:
        return TruncatedOperator.zeros(n)
    return TruncatedOperator(np.where(_offset_mask(n, k), a, 0))


@dataclass(frozen=True)
class FejerWeights:
    """Triangular weights s -> max(0, 1 - |s|/n) of the order-n Fejér kernel."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"Fejér order must be a positive integer, got {self.n}")

    def __call__(self, s):
        s = np.abs(np.asarray(s, dtype=float))
        return np.maximum(0.0, 1.0 - s / self.n)

    def kernel(self, theta):
        """sum_s w(s) e^{i s theta}, which equals (1/n) (sin(n theta/2) / sin(theta/2))^2."""
        theta = np.asarray(theta, dtype=float)
        s = np.arange(-(self.n - 1), self.n)
        return np.real(np.exp(1j * np.multiply.outer(theta, s)) @ self(s))


def fejer_sum(M, n):
    """F_n * A at truncation: entry (r, c) times max(0, 1 - |r - c|/n)."""
    a = as_operator(M).entries
    w = FejerWeights(n)
    r = np.arange(a.shape[0])
    return TruncatedOperator(a * w(r[:, None] - r[None, :]))


def fejer_sum_bands(B, n):
    w = FejerWeights(n)
    return BandOperator(B.n, {k: float(w(k)) * d for k, d in B.diags.items() if w(k) > 0})


def rotate_conjugate(M, zeta):
    """Matrix of U_zeta A U_zeta^{-1}: entry (r, c) picks up zeta^(r - c)."""
    zeta = check_unit(zeta)
    a = as_operator(M).entries
    phases = rotation_phases(zeta, FockParams(1.0, a.shape[0]))
    return TruncatedOperator(phases[:, None] * a * phases.conj()[None, :])


def rotation_distance(M, zeta):
    """||U_zeta A U_zeta^* - A|| at truncation."""
    M = as_operator(M)
    return operator_norm(rotate_conjugate(M, zeta) - M)


def _col_indexed(n, k, d):
    # full-length vector v[c] = entry in column c of offset-k diagonal
    v = np.zeros(n, dtype=complex)
    if k >= 0:
        v[: n - k] = d
    else:
        v[-k:] = d
    return v


def _from_col_indexed(n, k, v):
    return v[: n - k].copy() if k >= 0 else v[-k:].copy()


def band_compose(A, B):
    """Product of two band operators; offsets add."""
    if A.n != B.n:
        raise DomainError(f"size mismatch {A.n} vs {B.n}")
    n = A.n
    out = {}
    for k2, d2 in B.diags.items():
        b = _col_indexed(n, k2, d2)
        for k1, d1 in A.diags.items():
            k = k1 + k2
            if abs(k) >= n:
                continue
            a = _col_indexed(n, k1, d1)
            # column c of B feeds row c + k2 of B, which is column c + k2 of A
            shifted = np.zeros(n, dtype=complex)
            lo, hi = max(0, -k2), min(n, n - k2)
            shifted[lo:hi] = a[lo + k2: hi + k2]
            prod = _from_col_indexed(n, k, shifted * b)
            out[k] = out[k] + prod if k in out else prod
    return BandOperator(n, out)


def band_adjoint(A):
    """Offset k becomes offset -k with conjugated entries (same positions along the band)."""
    return BandOperator(A.n, {-k: d.conj() for k, d in A.diags.items()})


def _power_norm(a, tol=POWER_TOL, max_iter=POWER_MAX_ITER):
    n = a.shape[1]
    x = np.ones(n, dtype=complex) / math.sqrt(n)
    est = 0.0
    for it in range(1, max_iter + 1):
        y = a @ x
        z = a.conj().T @ y
        nz = np.linalg.norm(z)
        if nz == 0:
            return 0.0
        new = math.sqrt(nz)  # ||A^H A x|| -> sigma_max^2 for unit x
        x = z / nz
        if it > 1 and abs(new - est) <= tol * new:
            return new
        est = new
    raise NormConvergenceError(
        f"power iteration did not converge to {tol} in {max_iter} iterations", iterations=max_iter)


def operator_norm(M, method="auto"):
    """Largest singular value.

    ``auto`` uses a dense SVD up to N = 512 and implicitly restarted Lanczos
    (ARPACK) above; ``power`` runs power iteration on A^H A from the all-ones
    vector with relative tolerance 1e-12 and at most 10 000 iterations.
    """
    if isinstance(M, BandOperator):
        return band_norm(M, method=method)
    a = as_operator(M).entries
    if not np.any(a):
        return 0.0
    n = a.shape[0]
    if method == "svd" or (method == "auto" and n <= DENSE_NORM_LIMIT):
        return float(np.linalg.norm(a, 2))
    if method == "power":
        return _power_norm(a)
    if method in ("auto", "lanczos"):
        return _lanczos_norm(a)
    raise DomainError(f"unknown norm method {method!r}")


def _lanczos_norm(a):
    n = a.shape[0]
    if n <= 2:
        return float(np.linalg.norm(a.toarray() if sp.issparse(a) else a, 2))
    v0 = np.ones(n) / math.sqrt(n)
    try:
        s = svds(a, k=1, v0=v0, tol=0, return_singular_vectors=False, solver="arpack")
    except Exception as exc:  # ArpackNoConvergence and friends
        raise NormConvergenceError(f"Lanczos norm failed: {exc}") from exc
    return float(s[0])


def band_norm(B, method="auto"):
    """Operator norm of a band operator.

    A single-diagonal matrix is a partial isometry times a diagonal, so its
    norm is the largest modulus on that diagonal.
    """
    offs = B.offsets
    if not offs:
        return 0.0
    if len(offs) == 1:
        return float(np.max(np.abs(B.diags[offs[0]])))
    if B.n <= DENSE_NORM_LIMIT or method in ("svd", "power"):
        return operator_norm(from_band(B), method=method)
    return _lanczos_norm(B.to_sparse())


def rotate_conjugate_bands(B, zeta):
    zeta = check_unit(zeta)
    theta = np.angle(zeta)
    return BandOperator(B.n, {k: np.exp(1j * theta * k) * d for k, d in B.diags.items()})


def rotation_distance_bands(B, zeta):
    """Band-storage version of rotation_distance; each diagonal scales by zeta^k - 1."""
    zeta = check_unit(zeta)
    theta = np.angle(zeta)
    return band_norm(BandOperator(B.n, {k: (np.exp(1j * theta * k) - 1) * d
                                        for k, d in B.diags.items()}))
