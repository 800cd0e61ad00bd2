"""Index metrics, moduli of continuity of diagonals, and finite-N membership reports.

Membership in the rotation-continuous class, or in its intersection with
the Toeplitz algebra, is a statement about the infinite matrix. From a
truncation we can only report profiles and compare them with explicit
thresholds; the resulting flags are proxies and the report says which
thresholds produced them.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bands import BandOperator, band_norm, fejer_sum_bands, from_band, to_band
from .errors import DomainError

PAIR_CAP = 10**8


class ModulusTruncationWarning(UserWarning):
    """Pair enumeration hit the cap; the modulus is a lower bound."""


@dataclass(frozen=True)
class MetricKind:
    """``sqrt`` |sqrt m - sqrt n|, ``log`` |ln(m+1) - ln(n+1)|, ``sqrt_multi`` sum over coordinates."""

    name: str = "sqrt"
    d: int = 1

    def __post_init__(self):
        if self.name not in ("sqrt", "log", "sqrt_multi"):
            raise DomainError(f"unknown metric {self.name!r}")
        if self.d < 1:
            raise DomainError("metric dimension must be >= 1")

    @classmethod
    def sqrt(cls):
        return cls("sqrt")

    @classmethod
    def log(cls):
        return cls("log")

    @classmethod
    def sqrt_multi(cls, d):
        return cls("sqrt_multi", d)

    def phi(self, m):
        """Increasing map with metric(m, n) = |phi(m) - phi(n)| (scalar kinds only)."""
        m = np.asarray(m, dtype=float)
        if self.name == "sqrt":
            return np.sqrt(m)
        if self.name == "log":
            return np.log1p(m)
        raise DomainError("multi-index metric has no scalar embedding")

    def __call__(self, m, n):
        if self.name == "sqrt_multi":
            m, n = np.atleast_1d(m), np.atleast_1d(n)
            if m.shape != (self.d,) or n.shape != (self.d,):
                raise DomainError(f"expected {self.d}-dimensional multi-indices")
            if np.any(m < 0) or np.any(n < 0):
                raise DomainError("indices must be non-negative")
            return float(np.sum(np.abs(np.sqrt(m) - np.sqrt(n))))
        if np.ndim(m) or np.ndim(n):
            raise DomainError("scalar metric takes integer indices")
        if m < 0 or n < 0:
            raise DomainError("indices must be non-negative")
        return float(abs(self.phi(m) - self.phi(n)))


def metric_eval(kind: MetricKind, m, n):
    return kind(m, n)


def _window_ends(phi, delta):
    # hi[i] = largest j >= i with phi[j] - phi[i] <= delta
    L = len(phi)
    hi = np.searchsorted(phi, phi + delta, side="right") - 1
    hi = np.clip(hi, np.arange(L), L - 1)
    # searchsorted works on phi + delta, admissibility on phi[j] - phi[i]; reconcile rounding
    while True:
        down = (phi[hi] - phi > delta) & (hi > np.arange(L))
        if not down.any():
            break
        hi[down] -= 1
    while True:
        nxt = np.minimum(hi + 1, L - 1)
        up = (nxt > hi) & (phi[nxt] - phi <= delta)
        if not up.any():
            break
        hi[up] += 1
    return hi


def _sparse_table(vals, op):
    table = [vals]
    span = 1
    while 2 * span <= len(vals):
        prev = table[-1]
        table.append(op(prev[:-span], prev[span:]))
        span *= 2
    return table


def _range_query(table, op, lo, hi):
    length = hi - lo + 1
    level = np.floor(np.log2(length)).astype(int)
    out = np.empty(len(lo))
    for lev in np.unique(level):
        sel = level == lev
        t = table[lev]
        out[sel] = op(t[lo[sel]], t[hi[sel] - (1 << lev) + 1])
    return out


def _modulus_window(vals, hi):
    lo = np.arange(len(vals))
    vmax = _range_query(_sparse_table(vals, np.maximum), np.maximum, lo, hi)
    vmin = _range_query(_sparse_table(vals, np.minimum), np.minimum, lo, hi)
    return float(max(np.max(vmax - vals), np.max(vals - vmin)))


def _modulus_pairs(vals, hi, cap):
    L = len(vals)
    width = hi - np.arange(L)
    total = int(width.sum())
    dmax = int(width.max(initial=0))
    if total > cap:
        warnings.warn(f"{total} admissible pairs exceed cap {cap}; separations limited",
                      ModulusTruncationWarning, stacklevel=3)
        # keep the smallest separations until the budget is spent; separation 1 always runs
        counts = np.array([(width >= d).sum() for d in range(1, dmax + 1)])
        dmax = max(1, int(np.searchsorted(np.cumsum(counts), cap, side="right")))
    best = 0.0
    for d in range(1, dmax + 1):
        ok = width[: L - d] >= d
        if not ok.any():
            break
        diff = np.abs(vals[d:] - vals[: L - d])[ok]
        best = max(best, float(diff.max()))
    return best


def modulus_of_continuity(seq, kind: MetricKind, delta, start=0, method="auto", pair_cap=PAIR_CAP):
    """sup |seq[m] - seq[n]| over m, n >= start with metric(m, n) <= delta.

    ``window`` uses sliding range max/min (real sequences, O(L log L));
    ``pairs`` scans every admissible pair by index separation.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    seq = np.asarray(seq)
    if seq.ndim != 1:
        raise DomainError("modulus needs a one-dimensional sequence")
    if kind.name == "sqrt_multi":
        raise DomainError("multi-index sequences are not supported")
    vals = seq[start:]
    L = len(vals)
    if L < 2:
        return 0.0
    phi = kind.phi(np.arange(start, start + L))
    hi = _window_ends(phi, delta)
    real = not np.iscomplexobj(vals) or not np.any(np.imag(vals))
    if method == "auto":
        method = "window" if real else "pairs"
    if method == "window":
        if not real:
            raise DomainError("window method needs a real sequence")
        return _modulus_window(np.real(vals).astype(float), hi)
    if method == "pairs":
        return _modulus_pairs(vals, hi, pair_cap)
    raise DomainError(f"unknown modulus method {method!r}")


def modulus_table(seq, kind, deltas, **kw):
    return [modulus_of_continuity(seq, kind, d, **kw) for d in deltas]


def _as_bands(M):
    return M if isinstance(M, BandOperator) else to_band(M)


def band_truncation_profile(M, w_max):
    """w -> ||M - sum_{|k| <= w} diag_k(M)|| for w = 0..w_max."""
    B = _as_bands(M)
    if not 0 <= w_max < B.n:
        raise DomainError(f"w_max must lie in [0, {B.n})")
    out = []
    last_key, last_val = None, None
    offs = B.offsets
    for w in range(w_max + 1):
        key = tuple(k for k in offs if abs(k) > w)
        if key != last_key:
            last_val = band_norm(B.restrict(lambda k, w=w: abs(k) > w)) if key else 0.0
            last_key = key
        out.append(last_val)
    return out


def fejer_profile(M, n_max):
    """n -> ||F_n * M - M|| for n = 1..n_max."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    B = _as_bands(M)
    out = []
    for n in range(1, n_max + 1):
        F = fejer_sum_bands(B, n)
        diff = BandOperator(B.n, {k: F.diag(k) - d for k, d in B.diags.items()})
        out.append(band_norm(diff))
    return out


@dataclass(frozen=True)
class Thresholds:
    """Configuration of the proxy flags.

    cr_proxy: band-truncation profile <= band_rel * ||M|| for some w <= band_w_max.
    toeplitz_cr_proxy: additionally omega_k(delta0) <= eps0_rel * max|d_k| for
    every retained offset (|k| up to the first w meeting the band test).
    """

    band_rel: float
    band_w_max: int
    delta0: float
    eps0_rel: float
    deltas: tuple
    fejer_n_max: int

    def __post_init__(self):
        if not (self.band_rel >= 0 and self.eps0_rel >= 0 and self.delta0 > 0):
            raise DomainError("thresholds must be non-negative and delta0 positive")
        if self.band_w_max < 0 or self.fejer_n_max < 1:
            raise DomainError("band_w_max must be >= 0 and fejer_n_max >= 1")
        if not self.deltas or any(d <= 0 for d in self.deltas):
            raise DomainError("delta grid must be non-empty and positive")


@dataclass
class DiagnosticsReport:
    metric: str
    n: int
    norm: float
    deltas: list
    offsets: list
    moduli: dict
    modulus_at_delta0: dict
    diag_max: dict
    band_profile: list
    fejer_profile: list
    cr_proxy: bool
    toeplitz_cr_proxy: bool
    band_w_star: int | None
    thresholds: dict
    notices: list = field(default_factory=list)

    def to_dict(self):
        d = asdict(self)
        d["moduli"] = {str(k): v for k, v in self.moduli.items()}
        d["modulus_at_delta0"] = {str(k): v for k, v in self.modulus_at_delta0.items()}
        d["diag_max"] = {str(k): v for k, v in self.diag_max.items()}
        return d

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write(self, directory, stem="report"):
        """Write <stem>.json plus moduli, band and Fejér profile CSVs; returns the paths."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = [directory / f"{stem}.json"]
        paths[0].write_text(self.dumps() + "\n")
        rows = [[k, d, w] for k in self.offsets for d, w in zip(self.deltas, self.moduli[k])]
        paths.append(_write_csv(directory / f"{stem}_moduli.csv", ["offset", "delta", "modulus"], rows))
        paths.append(_write_csv(directory / f"{stem}_band_profile.csv", ["w", "gap"],
                                list(enumerate(self.band_profile))))
        paths.append(_write_csv(directory / f"{stem}_fejer_profile.csv", ["n", "gap"],
                                [(i + 1, g) for i, g in enumerate(self.fejer_profile)]))
        return paths


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return path


def classify(M, thresholds: Thresholds, metric: MetricKind | None = None):
    """Assemble profiles, per-offset moduli and the two proxy flags."""
    metric = metric or MetricKind.sqrt()
    B = _as_bands(M)
    n = B.n
    norm = band_norm(B)
    w_max = min(thresholds.band_w_max, n - 1)
    profile = band_truncation_profile(B, w_max)
    limit = thresholds.band_rel * norm
    w_star = next((w for w, g in enumerate(profile) if g <= limit), None)
    cr = w_star is not None
    keep = w_star if cr else w_max
    offsets = [k for k in B.offsets if abs(k) <= keep]
    notices = []
    moduli, at0, dmax = {}, {}, {}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ModulusTruncationWarning)
        for k in offsets:
            d = B.diags[k]
            moduli[k] = modulus_table(d, metric, thresholds.deltas)
            at0[k] = modulus_of_continuity(d, metric, thresholds.delta0)
            dmax[k] = float(np.max(np.abs(d)))
    notices.extend(str(w.message) for w in caught)
    if not cr:
        notices.append(f"band-truncation profile stays above {limit:.3e} for w <= {w_max}")
    uc = all(at0[k] <= thresholds.eps0_rel * dmax[k] for k in offsets)
    return DiagnosticsReport(
        metric=metric.name,
        n=n,
        norm=norm,
        deltas=list(thresholds.deltas),
        offsets=offsets,
        moduli=moduli,
        modulus_at_delta0=at0,
        diag_max=dmax,
        band_profile=profile,
        fejer_profile=fejer_profile(B, thresholds.fejer_n_max),
        cr_proxy=cr,
        toeplitz_cr_proxy=cr and uc,
        band_w_star=w_star,
        thresholds=asdict(thresholds),
        notices=notices,
    )


SYNTH_SEQUENCES = {
    "const": lambda j: np.ones_like(j),
    "inv_linear": lambda j: 1.0 / (j + 1),
    "sin_sqrt": lambda j: np.sin(np.sqrt(j)),
    "sin_linear": lambda j: np.sin(j),
    "alternating": lambda j: np.where(j % 2 == 0, 1.0, -1.0),
    "sin_log": lambda j: np.sin(np.log1p(j)),
}


def synth_sequence(name, length):
    fn = SYNTH_SEQUENCES.get(name)
    if fn is None:
        raise DomainError(f"unknown sequence {name!r}; choose from {sorted(SYNTH_SEQUENCES)}")
    return fn(np.arange(length, dtype=float)).astype(float)


def synth_band(offset, name, n, dense=True):
    """Single-band test matrix with diagonal ``name`` on ``offset``."""
    if abs(offset) >= n:
        raise DomainError(f"offset {offset} outside (-{n}, {n})")
    B = BandOperator(n, {offset: synth_sequence(name, n - abs(offset))})
    if dense:
        return from_band(B)
    return B
