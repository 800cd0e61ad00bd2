"""Symbols h(r e^{i theta}) = sum_k coef_k * a_k(r) * e^{i k theta} and their JSON form.

Symbol documents look like::

    {"terms": [
        {"k": 0, "profile": {"kind": "gaussian", "a": 1.0}},
        {"k": 2, "profile": {"kind": "constant", "c": 1.0}, "coef": [0.0, 1.0]}
    ]}

``coef`` is optional (default 1) and may be a number or a ``[re, im]`` pair.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import DomainError, SymbolParseError

PROFILE_KINDS = {
    "constant": ("c",),
    "gaussian": ("a",),
    "annulus": ("r0", "r1"),
    "radial-sine": ("b",),
    "power": ("p",),
}


@dataclass(frozen=True)
class RadialProfile:
    """Radial factor a(r) of one angular term.

    kinds: ``constant`` (c), ``gaussian`` (exp(-a r^2)), ``annulus``
    (indicator of r0 <= r <= r1), ``radial-sine`` (sin(b r)) and ``power``
    (r^p, bounded only on the disc).
    """

    kind: str
    params: tuple[float, ...] = ()

    def __post_init__(self):
        names = PROFILE_KINDS.get(self.kind)
        if names is None:
            raise DomainError(f"unknown profile kind {self.kind!r}")
        if len(self.params) != len(names):
            raise DomainError(f"profile {self.kind!r} expects parameters {names}")
        if not all(math.isfinite(p) for p in self.params):
            raise DomainError(f"non-finite parameter in profile {self.kind!r}")
        if self.kind == "gaussian" and self.params[0] < 0:
            raise DomainError("gaussian profile needs a >= 0 to stay bounded")
        if self.kind == "annulus":
            r0, r1 = self.params
            if not 0 <= r0 < r1:
                raise DomainError("annulus requires 0 <= r0 < r1")
        if self.kind == "power" and self.params[0] < 0:
            raise DomainError("power profile needs p >= 0")

    @classmethod
    def constant(cls, c=1.0):
        return cls("constant", (float(c),))

    @classmethod
    def gaussian(cls, a):
        return cls("gaussian", (float(a),))

    @classmethod
    def annulus(cls, r0, r1):
        return cls("annulus", (float(r0), float(r1)))

    @classmethod
    def radial_sine(cls, b):
        return cls("radial-sine", (float(b),))

    @classmethod
    def power(cls, p):
        return cls("power", (float(p),))

    @property
    def is_indicator(self):
        """Annulus profiles are integrated in closed form rather than by quadrature."""
        return self.kind == "annulus"

    def sup(self, r_max=math.inf):
        """sup of |a(r)| over 0 <= r <= r_max."""
        if self.kind == "constant":
            return abs(self.params[0])
        if self.kind == "power":
            if not math.isfinite(r_max):
                return 0.0 if self.params[0] == 0 else math.inf
            return r_max ** self.params[0]
        return 1.0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "constant":
            return np.full_like(r, self.params[0])
        if self.kind == "gaussian":
            return np.exp(-self.params[0] * r * r)
        if self.kind == "annulus":
            r0, r1 = self.params
            return ((r >= r0) & (r <= r1)).astype(float)
        if self.kind == "radial-sine":
            return np.sin(self.params[0] * r)
        return r ** self.params[0]

    def laguerre_form(self, t):
        """(s, g) with a(sqrt(t u)) = u^s g(u) and g smooth on [0, inf).

        Profiles odd in r are not smooth functions of u = r^2 / t, so a
        Laguerre rule in u converges only algebraically on them; pulling out
        u^s restores spectral convergence.
        """
        if self.kind == "radial-sine":
            b = self.params[0] * math.sqrt(t)
            return 0.5, lambda u: b * np.sinc(b * np.sqrt(u) / np.pi)
        if self.kind == "power":
            p = self.params[0]
            return p / 2, lambda u: np.full_like(np.asarray(u, dtype=float), t ** (p / 2))
        return 0.0, lambda u: self(np.sqrt(t * np.asarray(u, dtype=float)))

    def scaled(self, s):
        """Profile of r -> a(r / s) for s > 0."""
        if self.kind in ("constant",):
            return self
        if self.kind == "gaussian":
            return RadialProfile.gaussian(self.params[0] / (s * s))
        if self.kind == "annulus":
            return RadialProfile.annulus(self.params[0] * s, self.params[1] * s)
        if self.kind == "radial-sine":
            return RadialProfile.radial_sine(self.params[0] / s)
        raise DomainError("power profiles are not scale invariant up to a constant factor")

    def to_dict(self):
        return {"kind": self.kind, **dict(zip(PROFILE_KINDS[self.kind], self.params))}


@dataclass(frozen=True)
class SymbolTerm:
    k: int
    profile: RadialProfile
    coef: complex = 1.0


@dataclass(frozen=True)
class SymbolSpec:
    """Finite angular sum; an empty term list is the zero symbol."""

    terms: tuple[SymbolTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        ks = [term.k for term in self.terms]
        if len(set(ks)) != len(ks):
            raise DomainError(f"symbol offsets must be distinct, got {ks}")

    @classmethod
    def of(cls, *terms):
        """Build from ``(k, profile)`` or ``(k, profile, coef)`` tuples."""
        return cls(tuple(SymbolTerm(int(t[0]), t[1], complex(t[2]) if len(t) > 2 else 1.0)
                         for t in terms))

    @classmethod
    def angular_monomial(cls, k):
        """h_k(z) = z^k / |z|^k; for k < 0 this is conj(h_{-k})."""
        return cls.of((k, RadialProfile.constant(1.0)))

    @classmethod
    def zero(cls):
        return cls(())

    @property
    def offsets(self):
        return tuple(term.k for term in self.terms)

    def sup_bound(self, r_max=math.inf):
        """Upper bound for sup|h| (triangle inequality over terms)."""
        return sum(abs(term.coef) * term.profile.sup(r_max) for term in self.terms)

    def conjugate(self):
        """Symbol of conj(h); profiles are real so only offsets and coefficients flip."""
        return SymbolSpec(tuple(SymbolTerm(-t.k, t.profile, complex(t.coef).conjugate())
                                for t in self.terms))

    def select(self, k):
        return SymbolSpec(tuple(t for t in self.terms if t.k == k))

    def map_profiles(self, fn):
        return SymbolSpec(tuple(replace(t, profile=fn(t.profile)) for t in self.terms))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        theta = np.angle(z)
        out = np.zeros_like(z)
        for term in self.terms:
            out = out + term.coef * term.profile(r) * np.exp(1j * term.k * theta)
        return out

    def to_dict(self):
        terms = []
        for t in self.terms:
            entry = {"k": t.k, "profile": t.profile.to_dict()}
            c = complex(t.coef)
            if c != 1:
                entry["coef"] = [c.real, c.imag]
            terms.append(entry)
        return {"terms": terms}

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _parse_coef(raw, where):
    if isinstance(raw, bool):
        raise SymbolParseError(f"{where}: coef must be numeric")
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, list) and len(raw) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw):
        return complex(raw[0], raw[1])
    raise SymbolParseError(f"{where}: coef must be a number or [re, im]")


def symbol_from_dict(doc):
    if not isinstance(doc, dict) or not isinstance(doc.get("terms"), list):
        raise SymbolParseError("symbol document needs a 'terms' list")
    terms = []
    for i, raw in enumerate(doc["terms"]):
        where = f"terms[{i}]"
        if not isinstance(raw, dict):
            raise SymbolParseError(f"{where}: expected an object")
        k = raw.get("k")
        if not isinstance(k, int) or isinstance(k, bool):
            raise SymbolParseError(f"{where}: 'k' must be an integer")
        prof = raw.get("profile")
        if not isinstance(prof, dict) or "kind" not in prof:
            raise SymbolParseError(f"{where}: 'profile' needs a 'kind'")
        kind = prof["kind"]
        names = PROFILE_KINDS.get(kind)
        if names is None:
            raise SymbolParseError(f"{where}: unknown profile kind {kind!r}")
        extra = set(prof) - set(names) - {"kind"}
        if extra:
            raise SymbolParseError(f"{where}: unexpected profile keys {sorted(extra)}")
        try:
            params = tuple(float(prof[name]) for name in names)
            profile = RadialProfile(kind, params)
        except KeyError as exc:
            raise SymbolParseError(f"{where}: missing profile parameter {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise SymbolParseError(f"{where}: {exc}") from None
        coef = _parse_coef(raw["coef"], where) if "coef" in raw else 1.0
        terms.append(SymbolTerm(k, profile, coef))
    try:
        return SymbolSpec(tuple(terms))
    except DomainError as exc:
        raise SymbolParseError(str(exc)) from None


def loads_symbol(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SymbolParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return symbol_from_dict(doc)


def load_symbol(path):
    return loads_symbol(Path(path).read_text())
