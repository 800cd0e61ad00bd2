"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import sys
import warnings

import numpy as np
import pytest
from click.testing import CliRunner

from conftest import random_complex
from fockband.bands import (
    BandOperator,
    FejerWeights,
    TruncatedOperator,
    band_compose,
    band_norm,
    extract_diag,
    fejer_sum,
    from_band,
    operator_norm,
    rotation_distance,
)
from fockband.berezin import GridSpec, berezin_values, check_berezin_commutation, heat_transform
from fockband.bergman import BergmanParams, bergman_classify, bergman_toeplitz_bands, bergman_toeplitz_monomial
from fockband.cli import default_thresholds, main
from fockband.diagnostics import (
    MetricKind,
    ModulusTruncationWarning,
    classify,
    fejer_profile,
    modulus_of_continuity,
    synth_band,
    synth_sequence,
)
from fockband.fock import FockParams, rescale_symbol
from fockband.quadrature import QuadratureScheme
from fockband.symbols import RadialProfile, SymbolSpec
from fockband.toeplitz import cmk_closed_form, compactness_gap, toeplitz_bands, toeplitz_matrix

SEED = 12345


def test_criterion_01_closed_form_vs_quadrature(criterion, tmp_path):
    worst = 0.0
    for k in range(9):
        params = FockParams(1.0, 201 + k)
        quad = toeplitz_bands(SymbolSpec.angular_monomial(k), params, QuadratureScheme(128)).diag(k)
        worst = max(worst, float(np.max(np.abs(quad - cmk_closed_form(np.arange(201), k)))))
    codes = [CliRunner().invoke(main, ["--quad-q", "128", "--out", str(tmp_path), "cmk", "--k", str(k),
                                       "--m-max", "200"]).exit_code for k in range(9)]
    ok = worst < 1e-9 and all(c == 0 for c in codes)
    criterion(1, ok, f"max |closed - quadrature| = {worst:.2e} (< 1e-9); cmk exit codes {codes}")
    assert ok


def test_criterion_02_stirling_limit(criterion):
    m = np.arange(50, 10**4 + 1)
    worst_ratio, monotone = 0.0, True
    for k in range(1, 9):
        c = cmk_closed_form(m, k)
        worst_ratio = max(worst_ratio, float(np.max(np.abs(c - 1) / (k * k / (4.0 * m)))))
        monotone &= bool(np.all(np.diff(c) > 0))
    # k = 0: the bound degenerates to |c - 1| <= 0, i.e. c == 1 identically
    k0_exact = bool(np.all(cmk_closed_form(m, 0) == 1.0))
    ok = worst_ratio < 1 and monotone and k0_exact
    criterion(2, ok, f"max |c-1| / (k^2/4m) = {worst_ratio:.4f} (< 1), strictly increasing: {monotone}, "
                     f"c^0 == 1: {k0_exact}")
    assert ok


def test_criterion_03_rotation_law(criterion):
    rng = np.random.default_rng(SEED)
    n = 256
    angles = np.exp(2j * np.pi * np.arange(16) / 16)
    worst = 0.0
    for _ in range(20):
        k = int(rng.integers(-10, 11))
        M = from_band(BandOperator(n, {k: random_complex(rng, n - abs(k))}))
        norm = operator_norm(M)
        for zeta in angles:
            worst = max(worst, abs(rotation_distance(M, zeta) - abs(1 - zeta ** k) * norm))
    ok = worst < 1e-8
    criterion(3, ok, f"max |dist - |1 - zeta^k| ||M||| = {worst:.2e} (< 1e-8) over 20 x 16")
    assert ok


def test_criterion_04_fourier_extraction_algebra(criterion):
    rng = np.random.default_rng(SEED + 4)
    n = 64
    recon = idem = True
    worst = 0.0
    offs = range(-(n - 1), n)
    for _ in range(100):
        a = random_complex(rng, (n, n))
        M = TruncatedOperator(a)
        parts = {k: extract_diag(M, k) for k in offs}
        recon &= bool(np.array_equal(sum(p.entries for p in parts.values()), a))
        for k in rng.integers(-(n - 1), n, size=4):
            for l in (k, int(rng.integers(-(n - 1), n))):
                twice = extract_diag(parts[int(k)], int(l)).entries
                expect = parts[int(k)].entries if k == l else np.zeros((n, n))
                idem &= bool(np.array_equal(twice, expect))
        k1, k2 = (int(x) for x in rng.integers(-8, 9, size=2))
        A = BandOperator(n, {k1: random_complex(rng, n - abs(k1))})
        B = BandOperator(n, {k2: random_complex(rng, n - abs(k2))})
        C = band_compose(A, B)
        dense = from_band(A).entries @ from_band(B).entries
        worst = max(worst, float(np.max(np.abs(from_band(C).entries - dense))))
        assert set(C.offsets) <= {k1 + k2}
    ok = recon and idem and worst < 1e-12
    criterion(4, ok, f"reconstruction exact: {recon}, idempotent/orthogonal exact: {idem}, "
                     f"compose vs dense {worst:.2e} (< 1e-12)")
    assert ok


def test_criterion_05_fejer(criterion):
    rng = np.random.default_rng(SEED + 5)
    s = np.arange(-40, 41)
    triangular = all(np.array_equal(FejerWeights(n)(s), np.maximum(0, 1 - np.abs(s) / n)) for n in range(1, 20))
    contract = True
    for _ in range(100):
        n_size = int(rng.integers(2, 40))
        M = TruncatedOperator(random_complex(rng, (n_size, n_size)))
        order = int(rng.integers(1, 2 * n_size))
        contract &= operator_norm(fejer_sum(M, order)) <= operator_norm(M) * (1 + 1e-12)
    worst = 0.0
    for k in range(-6, 7):
        B = BandOperator(64, {k: random_complex(rng, 64 - abs(k))})
        norm = band_norm(B)
        for n in range(abs(k) + 1, 20):
            gap = fejer_profile(B, n)[-1]
            worst = max(worst, abs(gap - abs(k) / n * norm) / norm)
    # "exactly" in floating point: within a few ulps of (|k|/n) ||M||
    ok = triangular and contract and worst <= 4 * np.finfo(float).eps
    criterion(5, ok, f"triangular: {triangular}, ||F_n*M|| <= ||M||: {contract}, "
                     f"single-band gap rel. error {worst:.1e} (<= 4 ulp)")
    assert ok


GRID = GridSpec.polar(12, 16, 2.0)
BEREZIN_SYMBOLS = {
    "constant": SymbolSpec.of((0, RadialProfile.constant(1.0))),
    "gaussian": SymbolSpec.of((0, RadialProfile.gaussian(1.0))),
    "h1": SymbolSpec.angular_monomial(1),
    "h2": SymbolSpec.angular_monomial(2),
}


def test_criterion_06_berezin_consistency(criterion):
    params = FockParams(1.0, 128)
    devs = {}
    for name, h in BEREZIN_SYMBOLS.items():
        vals, _ = berezin_values(toeplitz_matrix(h, params), GRID.points, params)
        heat = np.array([heat_transform(h, z, params) for z in GRID.points])
        devs[name] = float(np.max(np.abs(vals - heat)))
    closed = np.exp(-np.abs(GRID.points) ** 2 / 2) / 2
    heat_g = np.array([heat_transform(BEREZIN_SYMBOLS["gaussian"], z, params) for z in GRID.points])
    closed_dev = float(np.max(np.abs(heat_g - closed)))
    ok = max(devs.values()) < 1e-6 and closed_dev < 1e-6
    detail = ", ".join(f"{k} {v:.1e}" for k, v in devs.items())
    criterion(6, ok, f"|B(T_h) - heat(h)|: {detail}; gaussian closed form {closed_dev:.1e} (< 1e-6)")
    assert ok


def test_criterion_07_berezin_fourier_commutation(criterion):
    params = FockParams(1.0, 128)
    rng = np.random.default_rng(SEED + 7)
    cases = [(toeplitz_matrix(BEREZIN_SYMBOLS["h1"], params), 1),
             (toeplitz_matrix(BEREZIN_SYMBOLS["h2"], params), 2),
             (toeplitz_matrix(BEREZIN_SYMBOLS["gaussian"], params), 0)]
    for k in (-3, -1, 2, 4):
        cases.append((from_band(BandOperator(128, {k: random_complex(rng, 128 - abs(k))})), k))
    worst = 0.0
    for M, k in cases:
        for l in {k, k + 1, -k - 2}:
            worst = max(worst, check_berezin_commutation(M, l, GRID, params))
    ok = worst < 1e-8
    criterion(7, ok, f"max commutation defect {worst:.2e} (< 1e-8) over {len(cases)} single-band inputs")
    assert ok


def test_criterion_08_membership_separation(criterion):
    n = 4096
    th = default_thresholds(n)
    gaussian = toeplitz_bands(SymbolSpec.of((0, RadialProfile.gaussian(1.0))), FockParams(1.0, n))
    positive = {
        "toeplitz(gaussian)": gaussian,
        "sin_sqrt": synth_band(0, "sin_sqrt", n, dense=False),
        "identity": BandOperator(n, {0: np.ones(n)}),
    }
    negative = {
        "sin_linear": synth_band(0, "sin_linear", n, dense=False),
        "alternating": synth_band(0, "alternating", n, dense=False),
    }
    flags = {name: classify(M, th).toeplitz_cr_proxy for name, M in {**positive, **negative}.items()}
    separated = all(flags[k] for k in positive) and not any(flags[k] for k in negative)
    s = synth_sequence("sin_sqrt", n)
    lipschitz = max(modulus_of_continuity(s, MetricKind.sqrt(), d) - d for d in th.deltas)
    with warnings.catch_warnings():
        warnings.simplefilter("error", ModulusTruncationWarning)
        w_sin = modulus_of_continuity(synth_sequence("sin_linear", 10**5), MetricKind.sqrt(), 0.1,
                                      method="pairs")
    ok = separated and lipschitz <= 1e-12 and w_sin >= 1.5
    criterion(8, ok, f"flags {flags}; max(omega_sin_sqrt(d) - d) = {lipschitz:.1e}; "
                     f"sin(j) omega(0.1) at N=1e5 = {w_sin:.5f} (>= 1.5)")
    assert ok


def test_criterion_09_scaling_isometry(criterion):
    families = {
        "gaussian+h1": SymbolSpec.of((0, RadialProfile.gaussian(1.0)), (1, RadialProfile.constant(1.0))),
        "radial-sine": SymbolSpec.of((0, RadialProfile.radial_sine(2.0)), (-2, RadialProfile.radial_sine(0.7), 1j)),
        "annulus": SymbolSpec.of((0, RadialProfile.annulus(0.5, 1.5)), (3, RadialProfile.annulus(0.0, 2.0), 0.5)),
    }
    worst = 0.0
    for h in families.values():
        base = toeplitz_matrix(h, FockParams(1.0, 96)).entries
        for t in (0.5, 2.0, 4.0):
            scaled = toeplitz_matrix(rescale_symbol(h, t), FockParams(t, 96)).entries
            worst = max(worst, float(np.max(np.abs(scaled - base))))
    ok = worst < 1e-10
    criterion(9, ok, f"max entrywise difference {worst:.2e} (< 1e-10) over {list(families)} x t in (0.5, 2, 4)")
    assert ok


def test_criterion_10_bergman(criterion):
    worst_closed, worst_quad = 0.0, 0.0
    j = np.arange(201)
    for lam in (0.0, 0.5, 2.0):
        params = BergmanParams(lam, 202)
        closed = np.diagonal(bergman_toeplitz_monomial(1, params).entries, -1).real
        worst_closed = max(worst_closed, float(np.max(np.abs(closed - np.sqrt((j + 1) / (j + lam + 2))))))
        quad = bergman_toeplitz_bands(SymbolSpec.of((1, RadialProfile.power(1))), params).diag(1).real
        worst_quad = max(worst_quad, float(np.max(np.abs(quad - np.sqrt((j + 1) / (j + lam + 2))))))
    n = 10**5
    th = default_thresholds(n)
    good = bergman_classify(synth_band(0, "sin_log", n, dense=False), th).toeplitz_cr_proxy
    bad = bergman_classify(synth_band(0, "sin_sqrt", n, dense=False), th).toeplitz_cr_proxy
    w_bad = modulus_of_continuity(synth_sequence("sin_sqrt", n), MetricKind.log(), 0.1)
    ok = worst_closed < 1e-9 and worst_quad < 1e-9 and good and not bad and w_bad > 1
    criterion(10, ok, f"monomial closed {worst_closed:.1e}, quadrature {worst_quad:.1e} (< 1e-9); "
                      f"log metric N=1e5: sin(ln(j+1)) accepted {good}, sin(sqrt j) rejected {not bad} "
                      f"(omega(0.1) = {w_bad:.3f})")
    assert ok


def test_criterion_11_compactness_proxy(criterion):
    m_max = 10**4
    decreasing, ratios = True, {}
    for k in range(1, 9):
        gap = compactness_gap(k, FockParams(1.0, m_max + k + 1))
        decreasing &= bool(np.all(np.diff(gap) < 0))
        ratios[k] = m_max * gap[m_max] / (k * k / 8)
    worst = max(abs(r - 1) for r in ratios.values())
    ok = decreasing and worst < 0.10
    criterion(11, ok, f"1 - c_m^k decreasing: {decreasing}; m(1-c)/(k^2/8) at m=1e4 within "
                      f"{worst:.2%} of 1 (< 10%)")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
