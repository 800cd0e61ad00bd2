"""Truncated Toeplitz matrices on F_t^2 from angular-sum symbols.

For a term coef * a(r) e^{ik theta} the entry at (output j + k, input j) is

    coef / sqrt(j! (j+k)!) * int_0^inf a(sqrt(t u)) u^{j + k/2} e^{-u} du,

which after pulling out Gamma(j + k/2 + 1) is an expectation under the
generalized Laguerre weight with alpha = j + k/2. Profiles that are odd in r
first move a factor u^s into the weight (see RadialProfile.laguerre_form);
annulus indicators are regularized incomplete gamma differences.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammainc, gammaincc

from .bands import BandOperator, TruncatedOperator, from_band
from .errors import DomainError, QuadratureToleranceError
from .fock import FockParams
from .quadrature import QuadratureScheme
from .special import log_gamma_ratio
from .symbols import SymbolSpec


def log_cmk(m, k):
    """log c_m^k, vectorized over m."""
    if k < 0:
        raise DomainError(f"c_m^k needs k >= 0, got {k}")
    m = np.asarray(m, dtype=float)
    if np.any(m < 0):
        raise DomainError("c_m^k needs m >= 0")
    h = k / 2
    # Gamma(m+h+1)^2 / (Gamma(m+1) Gamma(m+2h+1)) as two adjacent ratios
    return 0.5 * (log_gamma_ratio(m + 1, h) - log_gamma_ratio(m + 1 + h, h))


def cmk_closed_form(m, k):
    """c_m^k = Gamma(m + k/2 + 1) / sqrt(m! (m+k)!); works on scalars and arrays."""
    out = np.exp(log_cmk(m, k))
    return float(out) if np.ndim(out) == 0 else out


def compactness_gap(k, params):
    """Offset-k diagonal of S^k - T_{h_k}, i.e. 1 - c_m^k for m < N - k."""
    if k < 0:
        raise DomainError("compactness gap needs k >= 0")
    m = np.arange(max(params.n - k, 0))
    return -np.expm1(log_cmk(m, k))


def shift_matrix(k, params):
    """S^k: ones on offset k."""
    if k < 0:
        raise DomainError("shift power must be non-negative")
    n = params.n
    if k >= n:
        return TruncatedOperator.zeros(n)
    return from_band(BandOperator(n, {k: np.ones(n - k)}))


def _gamma_mass(a, u0, u1):
    """P(a, u1) - P(a, u0) for the regularized lower incomplete gamma P, without cancellation."""
    a = np.asarray(a, dtype=float)
    return np.where(u0 > a, gammaincc(a, u0) - gammaincc(a, u1), gammainc(a, u1) - gammainc(a, u0))


def _term_diagonal(term, params, q):
    n, t = params.n, params.t
    k = term.k
    length = n - abs(k)
    if length <= 0:
        return None
    j_in = np.arange(length) + max(0, -k)
    j_out = j_in + k
    if term.profile.is_indicator:
        alpha = (j_in + j_out) / 2
        r0, r1 = term.profile.params
        expect = _gamma_mass(alpha + 1, r0 * r0 / t, r1 * r1 / t)
    else:
        shift, g = term.profile.laguerre_form(t)
        alpha = (j_in + j_out) / 2 + shift
        scheme = QuadratureScheme(q)
        expect = np.empty(length)
        for i, al in enumerate(alpha):
            nodes, weights = scheme.laguerre(al)
            expect[i] = weights @ g(nodes)
    # Gamma(alpha + 1) / sqrt(j_in! j_out!) as two ratios
    log_pref = 0.5 * (log_gamma_ratio(j_in + 1, alpha - j_in) + log_gamma_ratio(j_out + 1, alpha - j_out))
    return term.coef * np.exp(log_pref) * expect


def _check_symbol(h, params):
    if not isinstance(h, SymbolSpec):
        raise DomainError("expected a SymbolSpec")
    if not math.isfinite(h.sup_bound()):
        raise DomainError("symbol is unbounded on the plane")


def toeplitz_bands(h, params: FockParams, scheme: QuadratureScheme | None = None):
    """Band form of the truncated Toeplitz matrix of ``h``."""
    scheme = scheme or QuadratureScheme()
    _check_symbol(h, params)
    diags = {}
    for term in h.terms:
        d = _term_diagonal(term, params, scheme.q)
        if d is not None:
            diags[term.k] = d
    return BandOperator(params.n, diags)


def toeplitz_matrix(h, params: FockParams, scheme: QuadratureScheme | None = None):
    return from_band(toeplitz_bands(h, params, scheme))


def toeplitz_bands_refined(h, params, scheme=None):
    """Band form plus the max entry change between q and 2q nodes.

    Raises QuadratureToleranceError if ``scheme.tol`` is set and exceeded.
    """
    scheme = scheme or QuadratureScheme()
    coarse = toeplitz_bands(h, params, scheme)
    fine = toeplitz_bands(h, params, scheme.refined())
    delta = 0.0
    for k, d in fine.diags.items():
        delta = max(delta, float(np.max(np.abs(d - coarse.diag(k)), initial=0.0)))
    if scheme.tol is not None and delta > scheme.tol:
        raise QuadratureToleranceError(
            f"entries moved by {delta:.3e} between q={scheme.q} and q={2 * scheme.q}", delta=delta)
    return fine, delta
