"""Command-line front end.

Every command writes header-first CSV files into ``--out`` plus a
``<file>.meta.json`` sidecar echoing the configuration. Output is
deterministic: no timestamps, floats written with ``repr``.

Exit codes: ``cmk`` and ``bergman monomial`` return 1 when the closed form
and the quadrature disagree by 1e-9 or more; ``diagnose`` returns 0 when
both proxy flags hold, 2 when only the band flag holds, 3 when neither.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .bands import BandOperator, band_norm, fejer_sum_bands, rotation_distance_bands
from .berezin import GridSpec, berezin_values, heat_transform
from .bergman import BergmanParams, bergman_toeplitz_bands, bergman_toeplitz_monomial
from .diagnostics import MetricKind, Thresholds, band_truncation_profile, classify, synth_band
from .errors import FockbandError
from .fock import FockParams
from .matrix_io import read_band_triplets, write_triplets
from .quadrature import QuadratureScheme
from .symbols import SymbolSpec, load_symbol
from .toeplitz import cmk_closed_form, toeplitz_bands, toeplitz_bands_refined

CMK_TOL = 1e-9
DEFAULT_DELTAS = (0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0)
DEFAULT_DELTA0 = 0.01
DEFAULT_EPS0 = 0.05
DEFAULT_BAND_REL = 1e-3
DEFAULT_FEJER_N = 16


def default_thresholds(n, deltas=DEFAULT_DELTAS):
    """CLI defaults, calibrated on sin(sqrt j) versus sin(j) at N = 4096."""
    return Thresholds(band_rel=DEFAULT_BAND_REL, band_w_max=max(n // 8, 0),
                      delta0=DEFAULT_DELTA0, eps0_rel=DEFAULT_EPS0,
                      deltas=tuple(deltas), fejer_n_max=DEFAULT_FEJER_N)


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def write_csv(path, header, rows):
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


def write_meta(path, ctx, command, tolerances=None, extra=None):
    meta = {
        "command": command,
        "config": ctx.obj["config"],
        "tolerances": tolerances or {},
        "version": __version__,
    }
    if extra:
        meta.update(extra)
    side = Path(str(path) + ".meta.json")
    side.write_text(json.dumps(meta, indent=2, sort_keys=True, default=_fmt) + "\n")
    return side


def _out(ctx, name):
    d = Path(ctx.obj["out"])
    d.mkdir(parents=True, exist_ok=True)
    return d / name


def _fock(ctx):
    return FockParams(ctx.obj["t"], ctx.obj["n"])


def _bergman(ctx):
    return BergmanParams(ctx.obj["lam"], ctx.obj["n"])


def _scheme(ctx, tol=None):
    return QuadratureScheme(ctx.obj["q"], tol)


def _symbol(path):
    try:
        return load_symbol(path)
    except FockbandError as exc:
        raise click.ClickException(f"{path}: {exc}") from None


def _parse_synth(text):
    try:
        offset, name = text.split(":", 1)
        return int(offset), name
    except ValueError:
        raise click.BadParameter("expected OFFSET:NAME, e.g. 0:sin_sqrt") from None


def _load_operator(ctx, matrix, symbol, synth, space):
    given = [x is not None for x in (matrix, symbol, synth)]
    if sum(given) != 1:
        raise click.UsageError("give exactly one of --matrix, --symbol, --synth")
    n = ctx.obj["n"]
    if matrix is not None:
        return read_band_triplets(matrix, n)
    if symbol is not None:
        h = _symbol(symbol)
        if space == "bergman":
            return bergman_toeplitz_bands(h, _bergman(ctx), _scheme(ctx))
        return toeplitz_bands(h, _fock(ctx), _scheme(ctx))
    offset, name = _parse_synth(synth)
    return synth_band(offset, name, n, dense=False)


def _floats(text):
    try:
        vals = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise click.BadParameter(f"not a comma-separated list of numbers: {text!r}") from None
    if not vals:
        raise click.BadParameter("empty list")
    return vals


@click.group()
@click.option("--t", "t", type=float, default=1.0, show_default=True, help="Fock parameter t > 0.")
@click.option("--lambda", "lam", type=float, default=0.0, show_default=True,
              help="Bergman weight exponent lambda > -1.")
@click.option("--n", "n", type=int, default=128, show_default=True, help="Truncation size N.")
@click.option("--quad-q", "q", type=int, default=128, show_default=True, help="Quadrature nodes.")
@click.option("--out", "out", type=click.Path(file_okay=False), default=".", show_default=True,
              help="Output directory.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for randomized checks (recorded in metadata).")
@click.pass_context
def main(ctx, t, lam, n, q, out, seed):
    """Toeplitz, band and Berezin computations on truncated Fock/Bergman matrices."""
    ctx.ensure_object(dict)
    ctx.obj.update(t=t, lam=lam, n=n, q=q, out=out, seed=seed,
                   config={"t": t, "lambda": lam, "n": n, "quad_q": q, "seed": seed})
    if t <= 0 or n < 1 or q < 1 or lam <= -1:
        raise click.UsageError("need t > 0, n >= 1, quad-q >= 1, lambda > -1")


@main.command()
@click.option("--k", type=int, required=True, help="Band offset k >= 0.")
@click.option("--m-max", type=int, default=200, show_default=True)
@click.pass_context
def cmk(ctx, k, m_max):
    """Compare closed-form c_m^k with quadrature for m = 0..m_max."""
    if k < 0 or m_max < 0:
        raise click.BadParameter("need k >= 0 and m_max >= 0")
    params = FockParams(ctx.obj["t"], m_max + k + 1)
    quad = toeplitz_bands(SymbolSpec.angular_monomial(k), params, _scheme(ctx)).diag(k)[: m_max + 1].real
    m = np.arange(m_max + 1)
    closed = cmk_closed_form(m, k)
    diff = np.abs(closed - quad)
    path = write_csv(_out(ctx, f"cmk_k{k}.csv"), ["m", "closed_form", "quadrature", "abs_diff"],
                     zip(m, closed, quad, diff))
    worst = int(np.argmax(diff))
    write_meta(path, ctx, "cmk", {"abs_diff_limit": CMK_TOL, "max_abs_diff": float(diff[worst])},
               {"k": k, "m_max": m_max})
    click.echo(f"max |closed - quadrature| = {diff[worst]:.3e} at m={worst}")
    if not diff[worst] < CMK_TOL:
        bad = m[diff >= CMK_TOL]
        click.echo(f"tolerance {CMK_TOL} breached at m = {', '.join(map(str, bad[:20]))}", err=True)
        ctx.exit(1)


@main.command()
@click.argument("symbol_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--tol", type=float, default=None, help="Fail if q vs 2q entries differ by more.")
@click.option("--name", default="matrix.csv", show_default=True)
@click.pass_context
def build(ctx, symbol_file, tol, name):
    """Truncated Toeplitz matrix of a symbol document, as sparse triplets."""
    h = _symbol(symbol_file)
    try:
        B, delta = toeplitz_bands_refined(h, _fock(ctx), _scheme(ctx, tol))
    except FockbandError as exc:
        raise click.ClickException(str(exc)) from None
    path = write_triplets(B, _out(ctx, name))
    exact = [t.k for t in h.terms if t.profile.is_indicator]
    write_meta(path, ctx, "build", {"refinement_delta": delta, "tol": tol},
               {"symbol": h.to_dict(), "closed_form_offsets": exact})
    click.echo(f"wrote {path} (q vs 2q delta {delta:.3e})")


def _scan(ctx, B, which, rng):
    if which == "fejer":
        rows = []
        for n in range(1, rng + 1):
            F = fejer_sum_bands(B, n)
            diff = BandOperator(B.n, {k: F.diag(k) - d for k, d in B.diags.items()})
            rows.append((n, band_norm(diff)))
        return ["n", "gap"], rows
    if which == "band":
        prof = band_truncation_profile(B, min(rng, B.n - 1))
        return ["w", "gap"], list(enumerate(prof))
    theta = 2 * np.pi * np.arange(rng) / rng
    return ["theta", "distance"], [(th, rotation_distance_bands(B, complex(math.cos(th), math.sin(th))))
                                   for th in theta]


def _scan_command(ctx, space, matrix, symbol, synth, which, rng):
    if rng < 1:
        raise click.BadParameter("--range must be positive")
    B = _load_operator(ctx, matrix, symbol, synth, space)
    header, rows = _scan(ctx, B, which, rng)
    path = write_csv(_out(ctx, f"scan_{which}.csv"), header, rows)
    write_meta(path, ctx, f"scan {which}", extra={"space": space, "range": rng})
    click.echo(f"wrote {path}")


_source_options = [
    click.option("--matrix", type=click.Path(exists=True, dir_okay=False), help="Triplet CSV."),
    click.option("--symbol", type=click.Path(exists=True, dir_okay=False), help="Symbol document."),
    click.option("--synth", help="Synthetic band OFFSET:NAME."),
]


def _with_sources(fn):
    for opt in reversed(_source_options):
        fn = opt(fn)
    return fn


@main.command()
@_with_sources
@click.option("--which", type=click.Choice(["fejer", "band", "rotation"]), required=True)
@click.option("--range", "rng", type=int, default=16, show_default=True,
              help="n_max (fejer), w_max (band) or number of angles (rotation).")
@click.pass_context
def scan(ctx, matrix, symbol, synth, which, rng):
    """Fejér gap, band-truncation gap, or rotation distance over a range."""
    _scan_command(ctx, "fock", matrix, symbol, synth, which, rng)


def _diagnose_command(ctx, space, matrix, symbol, synth, metric, deltas, delta0, eps0, band_rel,
                      band_w_max, fejer_n):
    B = _load_operator(ctx, matrix, symbol, synth, space)
    th = Thresholds(band_rel=band_rel,
                    band_w_max=B.n // 8 if band_w_max is None else band_w_max,
                    delta0=delta0, eps0_rel=eps0, deltas=_floats(deltas), fejer_n_max=fejer_n)
    report = classify(B, th, MetricKind(metric))
    out = Path(ctx.obj["out"])
    for path in report.write(out):
        write_meta(path, ctx, "diagnose", extra={"space": space, "metric": metric})
    click.echo(f"cr_proxy={report.cr_proxy} toeplitz_cr_proxy={report.toeplitz_cr_proxy}")
    for note in report.notices:
        click.echo(f"note: {note}", err=True)
    if report.cr_proxy and report.toeplitz_cr_proxy:
        ctx.exit(0)
    ctx.exit(2 if report.cr_proxy else 3)


_diag_options = [
    click.option("--deltas", default=",".join(map(str, DEFAULT_DELTAS)), show_default=True),
    click.option("--delta0", type=float, default=DEFAULT_DELTA0, show_default=True),
    click.option("--eps0", type=float, default=DEFAULT_EPS0, show_default=True,
                 help="Relative modulus threshold at delta0."),
    click.option("--band-rel", type=float, default=DEFAULT_BAND_REL, show_default=True),
    click.option("--band-w-max", type=int, default=None, help="Default N // 8."),
    click.option("--fejer-n", type=int, default=DEFAULT_FEJER_N, show_default=True),
]


def _with_diag(fn):
    for opt in reversed(_diag_options):
        fn = opt(fn)
    return fn


@main.command()
@_with_sources
@click.option("--metric", type=click.Choice(["sqrt", "log"]), default="sqrt", show_default=True)
@_with_diag
@click.pass_context
def diagnose(ctx, matrix, symbol, synth, metric, deltas, delta0, eps0, band_rel, band_w_max, fejer_n):
    """Membership proxies from diagonal moduli and band/Fejér profiles."""
    _diagnose_command(ctx, "fock", matrix, symbol, synth, metric, deltas, delta0, eps0, band_rel,
                      band_w_max, fejer_n)


@main.command()
@click.option("--symbol", "symbol_file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--radii", type=int, default=12, show_default=True)
@click.option("--angles", type=int, default=16, show_default=True)
@click.option("--r-max", type=float, default=2.0, show_default=True)
@click.option("--max-dev", type=float, default=None, help="Exit 1 if any deviation exceeds this.")
@click.pass_context
def berezin(ctx, symbol_file, radii, angles, r_max, max_dev):
    """Berezin transform of the Toeplitz matrix versus the heat transform on a polar grid."""
    h = _symbol(symbol_file)
    params = _fock(ctx)
    grid = GridSpec.polar(radii, angles, r_max)
    try:
        B = toeplitz_bands(h, params, _scheme(ctx))
        vals, tails = berezin_values(B, grid.points, params)
    except FockbandError as exc:
        raise click.ClickException(str(exc)) from None
    heat = np.array([heat_transform(h, z, params, _scheme(ctx)) for z in grid.points])
    dev = np.abs(vals - heat)
    rows = [(z.real, z.imag, b.real, b.imag, g.real, g.imag, d, tl)
            for z, b, g, d, tl in zip(grid.points, vals, heat, dev, tails)]
    path = write_csv(_out(ctx, "berezin.csv"),
                     ["x", "y", "berezin_re", "berezin_im", "heat_re", "heat_im", "deviation", "tail"],
                     rows)
    write_meta(path, ctx, "berezin", {"max_deviation": float(dev.max()), "max_tail": float(tails.max())},
               {"symbol": h.to_dict(), "radii": radii, "angles": angles, "r_max": r_max})
    click.echo(f"max deviation {dev.max():.3e}, max tail {tails.max():.3e}")
    if max_dev is not None and dev.max() > max_dev:
        ctx.exit(1)


@main.group()
def bergman():
    """Same verbs on the weighted Bergman space of the disc (uses --lambda)."""


@bergman.command("monomial")
@click.option("--k", type=int, required=True)
@click.option("--j-max", type=int, default=200, show_default=True)
@click.pass_context
def bergman_monomial(ctx, k, j_max):
    """Closed-form T_{z^k} entries versus Jacobi quadrature."""
    from .symbols import RadialProfile

    if k < 1 or j_max < 0:
        raise click.BadParameter("need k >= 1 and j_max >= 0")
    params = BergmanParams(ctx.obj["lam"], j_max + k + 1)
    closed = np.diagonal(bergman_toeplitz_monomial(k, params).entries, -k).real[: j_max + 1]
    quad = bergman_toeplitz_bands(SymbolSpec.of((k, RadialProfile.power(k))), params,
                                  _scheme(ctx)).diag(k).real[: j_max + 1]
    diff = np.abs(closed - quad)
    j = np.arange(j_max + 1)
    path = write_csv(_out(ctx, f"bergman_monomial_k{k}.csv"),
                     ["j", "closed_form", "quadrature", "abs_diff"], zip(j, closed, quad, diff))
    write_meta(path, ctx, "bergman monomial", {"abs_diff_limit": CMK_TOL,
                                               "max_abs_diff": float(diff.max())}, {"k": k})
    click.echo(f"max |closed - quadrature| = {diff.max():.3e}")
    if not diff.max() < CMK_TOL:
        ctx.exit(1)


@bergman.command("build")
@click.argument("symbol_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--name", default="bergman_matrix.csv", show_default=True)
@click.pass_context
def bergman_build(ctx, symbol_file, name):
    """Truncated Bergman Toeplitz matrix of a symbol document (profiles on [0, 1))."""
    h = _symbol(symbol_file)
    try:
        coarse = bergman_toeplitz_bands(h, _bergman(ctx), _scheme(ctx))
        fine = bergman_toeplitz_bands(h, _bergman(ctx), _scheme(ctx).refined())
    except FockbandError as exc:
        raise click.ClickException(str(exc)) from None
    delta = max((float(np.max(np.abs(d - coarse.diag(k)), initial=0.0)) for k, d in fine.diags.items()),
                default=0.0)
    path = write_triplets(fine, _out(ctx, name))
    write_meta(path, ctx, "bergman build", {"refinement_delta": delta}, {"symbol": h.to_dict()})
    click.echo(f"wrote {path} (q vs 2q delta {delta:.3e})")


@bergman.command("scan")
@_with_sources
@click.option("--which", type=click.Choice(["fejer", "band", "rotation"]), required=True)
@click.option("--range", "rng", type=int, default=16, show_default=True)
@click.pass_context
def bergman_scan(ctx, matrix, symbol, synth, which, rng):
    """Scans for Bergman-space operators."""
    _scan_command(ctx, "bergman", matrix, symbol, synth, which, rng)


@bergman.command("diagnose")
@_with_sources
@_with_diag
@click.pass_context
def bergman_diagnose(ctx, matrix, symbol, synth, deltas, delta0, eps0, band_rel, band_w_max, fejer_n):
    """Diagnostics with the logarithmic metric."""
    _diagnose_command(ctx, "bergman", matrix, symbol, synth, "log", deltas, delta0, eps0, band_rel,
                      band_w_max, fejer_n)


def run():
    try:
        main(standalone_mode=True)
    except FockbandError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    run()
