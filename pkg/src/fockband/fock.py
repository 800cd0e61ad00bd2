"""Fock space F_t^2: parameters, standard basis, kernels, rotations, t-scaling."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, EvaluationOverflow
from .symbols import SymbolSpec, SymbolTerm

# exp() of anything above this overflows a double
_LOG_MAX = math.log(np.finfo(float).max)
UNIT_TOL = 1e-12


@dataclass(frozen=True)
class FockParams:
    """Gaussian variance ``t`` and truncation size ``n`` (basis indices 0..n-1)."""

    t: float = 1.0
    n: int = 64

    def __post_init__(self):
        if not (self.t > 0 and math.isfinite(self.t)):
            raise DomainError(f"t must be positive and finite, got {self.t}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")


def _log_basis_modulus(m, r, t):
    # log(r^m / sqrt(m! t^m))
    return m * math.log(r) - 0.5 * (gammaln(m + 1) + m * math.log(t))


def eval_basis(m, z, params):
    """e_m^t(z) = z^m / sqrt(m! t^m), assembled from logs so large m is safe."""
    if m < 0 or int(m) != m:
        raise DomainError(f"basis index must be a non-negative integer, got {m}")
    z = complex(z)
    if m == 0:
        return 1.0 + 0j
    if z == 0:
        return 0j
    logmod = _log_basis_modulus(m, abs(z), params.t)
    if logmod > _LOG_MAX:
        raise EvaluationOverflow(f"|e_{m}(z)| overflows for |z|={abs(z)}")
    return cmath.exp(logmod + 1j * m * cmath.phase(z))


def basis_vector(z, params, n=None):
    """(e_0(z), ..., e_{n-1}(z)) as an array, vectorized version of eval_basis."""
    n = params.n if n is None else n
    z = complex(z)
    out = np.zeros(n, dtype=complex)
    out[0] = 1.0
    if z == 0 or n == 1:
        return out
    m = np.arange(1, n)
    logmod = m * math.log(abs(z)) - 0.5 * (gammaln(m + 1) + m * math.log(params.t))
    if logmod.max() > _LOG_MAX:
        raise EvaluationOverflow(f"basis values overflow for |z|={abs(z)}")
    out[1:] = np.exp(logmod + 1j * m * cmath.phase(z))
    return out


def eval_normalized_kernel(z, w, params):
    """k_z^t(w) = exp(w conj(z) / t - |z|^2 / (2t)), a unit vector in F_t^2."""
    z, w = complex(z), complex(w)
    expo = (w * z.conjugate()) / params.t - abs(z) ** 2 / (2 * params.t)
    if expo.real > _LOG_MAX:
        raise EvaluationOverflow("normalized kernel overflows")
    return cmath.exp(expo)


def check_unit(zeta):
    zeta = complex(zeta)
    if abs(abs(zeta) - 1.0) > UNIT_TOL:
        raise DomainError(f"rotation parameter must lie on the unit circle, |zeta|={abs(zeta)!r}")
    return zeta


def rotation_phases(zeta, params):
    """Diagonal (zeta^0, ..., zeta^{n-1}) of the rotation U_zeta g(z) = g(zeta z)."""
    zeta = check_unit(zeta)
    theta = cmath.phase(zeta)
    # exact powers for the common lattice points, exp(i m theta) otherwise
    if zeta in (1, -1, 1j, -1j):
        return np.array([zeta ** m for m in range(params.n)], dtype=complex)
    return np.exp(1j * theta * np.arange(params.n))


def rescale_symbol(h: SymbolSpec, t) -> SymbolSpec:
    """Symbol z -> h(z / sqrt(t)).

    The Toeplitz matrix of the result on F_t^2 equals the Toeplitz matrix of
    ``h`` on F_1^2.
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    s = math.sqrt(t)
    terms = []
    for term in h.terms:
        if term.profile.kind == "power":
            terms.append(SymbolTerm(term.k, term.profile, term.coef * s ** -term.profile.params[0]))
        else:
            terms.append(SymbolTerm(term.k, term.profile.scaled(s), term.coef))
    return SymbolSpec(tuple(terms))
