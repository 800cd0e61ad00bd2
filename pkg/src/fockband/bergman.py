"""Weighted Bergman space A^2_lambda on the unit disc.

dv_lambda = ((lambda + 1)/pi) (1 - |z|^2)^lambda dA is a probability
measure, the monomials are orthogonal with ||z^n||^2 = n! Gamma(lambda+2) /
Gamma(n+lambda+2), and every entry of a Toeplitz matrix is a radial
integral against the Jacobi weight r^beta (1-r)^lambda on [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc, betaincc, gammaln

from .bands import BandOperator, from_band
from .diagnostics import MetricKind, classify
from .errors import DomainError
from .quadrature import QuadratureScheme
from .special import log_gamma_ratio
from .symbols import RadialProfile, SymbolSpec


@dataclass(frozen=True)
class BergmanParams:
    """Weight exponent ``lam`` > -1 and truncation size ``n``."""

    lam: float = 0.0
    n: int = 64

    def __post_init__(self):
        if not (self.lam > -1 and math.isfinite(self.lam)):
            raise DomainError(f"lambda must exceed -1, got {self.lam}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")

    @property
    def c_lambda(self):
        return (self.lam + 1) / math.pi


def log_monomial_norm(n, lam):
    """log ||z^n||_lambda, vectorized over n."""
    n = np.asarray(n, dtype=float)
    return 0.5 * (gammaln(n + 1) + gammaln(lam + 2) - gammaln(n + lam + 2))


def bergman_basis_norm(n, params: BergmanParams):
    """||z^n||_lambda; the orthonormal basis is f_n = z^n / ||z^n||_lambda."""
    if n < 0:
        raise DomainError("basis index must be non-negative")
    return float(np.exp(log_monomial_norm(n, params.lam)))


def eval_bergman_basis(n, z, params):
    z = complex(z)
    if n == 0:
        return 1.0 + 0j
    return z ** n / bergman_basis_norm(n, params)


def bergman_toeplitz_monomial(k, params: BergmanParams):
    """Truncated matrix of T_{z^k}: offset k with entries ||z^{j+k}|| / ||z^j||."""
    if k < 1:
        raise DomainError("monomial symbol needs k >= 1")
    n = params.n
    if k >= n:
        return from_band(BandOperator(n, {}))
    j = np.arange(n - k)
    # ||z^{j+k}|| / ||z^j|| = sqrt(Gamma(j+k+1) Gamma(j+lam+2) / (Gamma(j+1) Gamma(j+k+lam+2)))
    d = np.exp(0.5 * (log_gamma_ratio(j + 1, k) - log_gamma_ratio(j + params.lam + 2, k)))
    return from_band(BandOperator(n, {k: d}))


def _beta_mass(a, b, s0, s1):
    """I_{s1}(a, b) - I_{s0}(a, b) for the regularized incomplete beta I."""
    if s0 >= s1:
        return np.zeros(np.shape(a))
    upper = s0 > a / (a + b)
    return np.where(upper, betaincc(a, b, s0) - betaincc(a, b, s1), betainc(a, b, s1) - betainc(a, b, s0))


def _radial_expectations(profile, alpha, lam, q):
    # int_0^1 a(sqrt s) s^alpha (1-s)^lam ds = 2 int_0^1 a(r) (1+r)^lam r^(2 alpha+1) (1-r)^lam dr;
    # the r form keeps half-integer powers of s (odd offsets) analytic. Dividing by the same
    # rule applied to a = 1 returns the integral relative to B(alpha + 1, lam + 1).
    if isinstance(profile, RadialProfile) and profile.is_indicator:
        r0, r1 = profile.params
        return _beta_mass(np.asarray(alpha, dtype=float) + 1, lam + 1, r0 * r0, min(r1, 1.0) ** 2)
    scheme = QuadratureScheme(q)
    out = np.empty(len(alpha))
    for i, al in enumerate(alpha):
        nodes, weights = scheme.jacobi01(2 * al + 1, lam)
        tilt = (1 + nodes) ** lam
        out[i] = (weights @ (np.asarray(profile(nodes), dtype=float) * tilt)) / (weights @ tilt)
    return out


def _log_prefactor(j_in, j_out, alpha, lam):
    # log[(lam+1) B(alpha+1, lam+1) / (||z^j_in|| ||z^j_out||)], as gamma ratios
    return 0.5 * (log_gamma_ratio(j_in + 1, alpha - j_in) + log_gamma_ratio(j_out + 1, alpha - j_out)
                  - log_gamma_ratio(j_in + lam + 2, alpha - j_in)
                  - log_gamma_ratio(j_out + lam + 2, alpha - j_out))


def _term_diagonal(term, params, q):
    n, lam = params.n, params.lam
    k = term.k
    length = n - abs(k)
    if length <= 0:
        return None
    j_in = np.arange(length) + max(0, -k)
    j_out = j_in + k
    alpha = (j_in + j_out) / 2
    expect = _radial_expectations(term.profile, alpha, lam, q)
    return term.coef * np.exp(_log_prefactor(j_in, j_out, alpha, lam)) * expect


def bergman_toeplitz_bands(h: SymbolSpec, params: BergmanParams, scheme: QuadratureScheme | None = None):
    """Toeplitz matrix of a symbol on the disc (profiles read on [0, 1)), by Jacobi quadrature."""
    scheme = scheme or QuadratureScheme()
    if not math.isfinite(h.sup_bound(1.0)):
        raise DomainError("symbol is unbounded on the disc")
    diags = {}
    for term in h.terms:
        d = _term_diagonal(term, params, scheme.q)
        if d is not None:
            diags[term.k] = d
    return BandOperator(params.n, diags)


def bergman_toeplitz(h, params, scheme=None):
    return from_band(bergman_toeplitz_bands(h, params, scheme))


def bergman_radial_toeplitz(profile, params: BergmanParams, scheme: QuadratureScheme | None = None):
    """Diagonal matrix of T_a for a radial profile a(|z|).

    ``profile`` is a RadialProfile or any vectorized callable of r.
    """
    scheme = scheme or QuadratureScheme()
    n, lam = params.n, params.lam
    if isinstance(profile, RadialProfile):
        if not math.isfinite(profile.sup(1.0)):
            raise DomainError("profile is unbounded on the disc")
    d = _radial_expectations(profile, np.arange(n), lam, scheme.q)
    if not np.all(np.isfinite(d)):
        raise DomainError("profile produced non-finite values on [0, 1)")
    return from_band(BandOperator(n, {0: d}))


def bergman_classify(M, thresholds):
    """Diagnostics with the logarithmic metric |ln(m+1) - ln(n+1)|."""
    return classify(M, thresholds, MetricKind.log())
