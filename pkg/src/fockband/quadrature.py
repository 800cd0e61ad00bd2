"""Gauss rules for u^alpha e^{-u} on (0, inf) and s^alpha (1-s)^beta on (0, 1).

Nodes and weights come from the eigen-decomposition of the symmetric
tridiagonal Jacobi matrix of the three-term recurrence (Golub-Welsch).
Weights are normalized to sum to one so that alpha in the hundreds or
thousands does not overflow Gamma(alpha + 1); callers add the log of the
total mass themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln, gammaln

from .errors import DomainError

DEFAULT_Q = 128


def golub_welsch(diag, offdiag):
    """Nodes and normalized weights of the Gauss rule with the given Jacobi matrix."""
    nodes, vecs = eigh_tridiagonal(np.asarray(diag, float), np.asarray(offdiag, float))
    weights = vecs[0, :] ** 2
    return nodes, weights / weights.sum()


@lru_cache(maxsize=4096)
def _laguerre(alpha, q):
    n = np.arange(q, dtype=float)
    diag = 2 * n + alpha + 1
    off = np.sqrt(n[1:] * (n[1:] + alpha))
    nodes, weights = golub_welsch(diag, off)
    nodes = np.maximum(nodes, 0.0)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_laguerre(alpha, q=DEFAULT_Q):
    """Rule for weight u^alpha e^{-u}; weights sum to 1 (total mass is Gamma(alpha+1))."""
    if not alpha > -1:
        raise DomainError(f"Laguerre weight needs alpha > -1, got {alpha}")
    if q < 1:
        raise DomainError("need at least one node")
    return _laguerre(float(alpha), int(q))


@lru_cache(maxsize=4096)
def _jacobi01(alpha, beta, q):
    # standard Jacobi on [-1, 1] with (1-x)^A (1+x)^B, s = (1+x)/2
    a, b = beta, alpha
    n = np.arange(q, dtype=float)
    s = 2 * n + a + b
    diag = np.empty(q)
    diag[0] = (b - a) / (a + b + 2)
    diag[1:] = (b * b - a * a) / (s[1:] * (s[1:] + 2))
    m = n[1:]
    sm = s[1:]
    off = 2.0 / sm * np.sqrt(m * (m + a) * (m + b) * (m + a + b) / ((sm + 1) * (sm - 1)))
    x, weights = golub_welsch(diag, off)
    nodes = np.clip((1 + x) / 2, 0.0, 1.0)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_jacobi01(alpha, beta, q=DEFAULT_Q):
    """Rule on [0, 1] for weight s^alpha (1-s)^beta; weights sum to 1 (mass B(alpha+1, beta+1))."""
    if not (alpha > -1 and beta > -1):
        raise DomainError(f"Jacobi weight needs alpha, beta > -1, got {alpha}, {beta}")
    return _jacobi01(float(alpha), float(beta), int(q))


def log_laguerre_mass(alpha):
    return gammaln(alpha + 1)


def log_jacobi01_mass(alpha, beta):
    return betaln(alpha + 1, beta + 1)


@dataclass(frozen=True)
class QuadratureScheme:
    """Node count ``q`` and optional refinement tolerance.

    When ``tol`` is set, refined evaluations compare the q- and 2q-node
    results and raise :class:`~fockband.errors.QuadratureToleranceError`
    if they differ by more than ``tol``.
    """

    q: int = DEFAULT_Q
    tol: float | None = None

    def __post_init__(self):
        if self.q < 1:
            raise DomainError("quadrature needs q >= 1")

    def laguerre(self, alpha):
        return gauss_laguerre(alpha, self.q)

    def jacobi01(self, alpha, beta):
        return gauss_jacobi01(alpha, beta, self.q)

    def refined(self):
        return QuadratureScheme(2 * self.q, self.tol)

