"""Berezin transform of truncated operators and heat transform of symbols."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import gammainc, gammaln, ive

from .bands import BandOperator, as_operator, extract_diag, to_band
from .errors import DomainError, TruncationError
from .fock import FockParams
from .quadrature import QuadratureScheme, gauss_laguerre
from .symbols import SymbolSpec

TAIL_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Finite set of sample points in the plane."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=complex)).ravel()
        if pts.size == 0:
            raise DomainError("grid must be non-empty")
        if not np.all(np.isfinite(pts)):
            raise DomainError("grid points must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def polar(cls, n_radii=12, n_angles=16, r_max=2.0, include_origin=True):
        """n_radii radii in [0, r_max] (or (0, r_max]) times n_angles equispaced angles."""
        if include_origin:
            radii = np.linspace(0.0, r_max, n_radii)
        else:
            radii = np.linspace(r_max / n_radii, r_max, n_radii)
        angles = 2 * np.pi * np.arange(n_angles) / n_angles
        return cls(np.multiply.outer(radii, np.exp(1j * angles)).ravel())

    @property
    def r_max(self):
        return float(np.max(np.abs(self.points)))

    def __len__(self):
        return self.points.size


class BerezinValue(NamedTuple):
    value: complex
    tail: float


def poisson_tail(n, x):
    """sum_{m >= n} e^{-x} x^m / m!: the share of |k_z|^2 lying outside the truncation."""
    return float(gammainc(n, x)) if x > 0 else 0.0


def _kernel_coefficients(zs, params, n):
    """Columns gamma(z) with gamma_m = e^{-|z|^2/2t} conj(e_m(z)), so k_z = sum gamma_m e_m."""
    zs = np.asarray(zs, dtype=complex)
    m = np.arange(n)[:, None]
    r = np.abs(zs)[None, :]
    logr = np.log(np.where(r > 0, r, 1.0))
    logmod = -r * r / (2 * params.t) - 0.5 * (gammaln(m + 1) + m * math.log(params.t)) + m * logr
    # z = 0: only e_0 survives
    logmod = np.where((r == 0) & (m > 0), -np.inf, logmod)
    phase = np.exp(-1j * m * np.angle(zs)[None, :])
    return np.exp(logmod) * phase


def berezin_values(M, zs, params, tail_tol=TAIL_TOL):
    """Vectorized Berezin transform <A k_z, k_z>; returns (values, tails)."""
    a = M.to_sparse() if isinstance(M, BandOperator) else as_operator(M).entries
    n = a.shape[0]
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    tails = np.array([poisson_tail(n, abs(z) ** 2 / params.t) for z in zs])
    worst = float(tails.max(initial=0.0))
    if tail_tol is not None and worst > tail_tol:
        raise TruncationError(
            f"neglected kernel mass {worst:.3e} exceeds {tail_tol:.1e}; increase n", tail=worst)
    g = _kernel_coefficients(zs, params, n)
    ag = a @ g
    vals = np.einsum("ij,ij->j", g.conj(), ag)
    return vals, tails


def berezin_operator(M, z, params, tail_tol=TAIL_TOL):
    """B(A)(z) = <A k_z, k_z> at truncation, with the neglected-mass estimate."""
    vals, tails = berezin_values(M, [z], params, tail_tol)
    return BerezinValue(complex(vals[0]), float(tails[0]))


def _harmonic_radial(term, x, params, q):
    # int_0^inf a(sqrt(t u)) e^{-x} I_|k|(2 sqrt(u x)) e^{-u} du
    k = abs(term.k)
    if x == 0 and k:
        return 0.0
    if term.profile.is_indicator:
        return _annulus_radial(term.profile, k, x, params, q)
    shift, g = term.profile.laguerre_form(params.t)
    alpha = k / 2 + shift
    nodes, weights = gauss_laguerre(alpha, q)
    if x == 0:
        kernel = 1.0
    else:
        y = 2 * np.sqrt(nodes * x)
        # e^{-x} I_k(y) / u^{k/2}, with ive(k, y) = I_k(y) e^{-y}
        kernel = ive(k, y) * np.exp(y - x) / nodes ** (k / 2)
    return float(math.exp(gammaln(alpha + 1)) * (weights @ (g(nodes) * kernel)))


def _annulus_radial(profile, k, x, params, q):
    # u = v^2 restricted to [v0, v1]: int 2v e^{-(v - sqrt x)^2} ive(k, 2 v sqrt x) dv, analytic in v
    v0, v1 = (r / math.sqrt(params.t) for r in profile.params)
    nodes, weights = leggauss(q)
    v = 0.5 * (v1 - v0) * nodes + 0.5 * (v1 + v0)
    sx = math.sqrt(x)
    vals = 2 * v * np.exp(-(v - sx) ** 2) * ive(k, 2 * v * sx)
    return float(0.5 * (v1 - v0) * (weights @ vals))


def _heat_harmonic(h, z, params, q):
    z = complex(z)
    x = abs(z) ** 2 / params.t
    phi = np.angle(z)
    total = 0j
    for term in h.terms:
        total += term.coef * np.exp(1j * term.k * phi) * _harmonic_radial(term, x, params, q)
    return complex(total)


def _heat_centered(h, z, params, q, n_angles):
    # (1/2pi) int int h(z + sqrt(t s) e^{i psi}) e^{-s} ds dpsi
    nodes, weights = gauss_laguerre(0.0, q)
    psi = 2 * np.pi * np.arange(n_angles) / n_angles
    w = complex(z) + np.multiply.outer(np.sqrt(params.t * nodes), np.exp(1j * psi))
    return complex(weights @ h(w).mean(axis=1))


def heat_transform(h: SymbolSpec, z, params: FockParams, scheme: QuadratureScheme | None = None,
                   method="harmonic", n_angles=256):
    """B_t(h)(z) = (1/(pi t)) int h(w) e^{-|w - z|^2/t} dw.

    ``harmonic`` integrates each angular term exactly in the angle, leaving a
    Bessel-weighted radial integral; it copes with the jump of h_k at the
    origin. ``centered`` is plain polar quadrature around z and is only
    accurate for symbols smooth on the whole plane.
    """
    scheme = scheme or QuadratureScheme()
    if not math.isfinite(h.sup_bound()):
        raise DomainError("symbol is unbounded on the plane")
    if method == "harmonic":
        return _heat_harmonic(h, z, params, scheme.q)
    if method == "centered":
        return _heat_centered(h, z, params, scheme.q, n_angles)
    raise DomainError(f"unknown heat transform method {method!r}")


def symbol_fourier_coefficient(h: SymbolSpec, k) -> SymbolSpec:
    """Angular component of h with index k (the term whose Toeplitz matrix sits on offset k)."""
    return h.select(k)


def _circle_points(k, bandwidth):
    return 4 * (abs(k) + bandwidth) + 4


def _circle_average(fn, zs, k, n_pts):
    # (1/P) sum_p zeta_p^{-k} f(zeta_p z): picks the e^{ik phi} component
    zeta = np.exp(2j * np.pi * np.arange(n_pts) / n_pts)
    acc = np.zeros(len(zs), dtype=complex)
    for zp in zeta:
        acc += zp ** (-k) * fn(zp * zs)
    return acc / n_pts


def check_berezin_commutation(obj, k, grid: GridSpec, params: FockParams,
                              scheme: QuadratureScheme | None = None):
    """max over grid of |B(component k)(z) - circle-average side at z|.

    ``obj`` is a truncated/band operator (extraction of offset k versus the
    k-th angular Fourier coefficient of its Berezin transform) or a
    SymbolSpec (term selection versus the angular coefficient of its heat
    transform).
    """
    zs = grid.points
    if isinstance(obj, SymbolSpec):
        bw = max((abs(j) for j in obj.offsets), default=0)
        lhs = np.array([heat_transform(symbol_fourier_coefficient(obj, k), z, params, scheme)
                        for z in zs])

        def fn(pts):
            return np.array([heat_transform(obj, z, params, scheme) for z in pts])
    else:
        M = as_operator(obj)
        bw = to_band(M).bandwidth
        lhs, _ = berezin_values(extract_diag(M, k), zs, params)

        def fn(pts):
            return berezin_values(M, pts, params)[0]
    rhs = _circle_average(fn, zs, k, _circle_points(k, bw))
    return float(np.max(np.abs(lhs - rhs)))
