"""Membership diagnostics on the positive and negative example suites.

For each operator, reports the band-truncation width, the modulus of the
main diagonal at the threshold delta and the two proxy flags, first under
the square-root metric (Fock) and then under the logarithmic metric
(Bergman disc).
"""

import argparse
import json
from pathlib import Path

import numpy as np

from fockband import FockParams, RadialProfile, SymbolSpec, classify, synth_band
from fockband.bands import BandOperator
from fockband.bergman import bergman_classify
from fockband.cli import default_thresholds
from fockband.toeplitz import toeplitz_bands


def suite(n, with_toeplitz):
    ops = {}
    if with_toeplitz:
        ops["toeplitz(gaussian)"] = toeplitz_bands(SymbolSpec.of((0, RadialProfile.gaussian(1.0))),
                                                   FockParams(1.0, n))
        ops["toeplitz(h_1 + h_3)"] = toeplitz_bands(
            SymbolSpec.of((1, RadialProfile.constant(1.0)), (3, RadialProfile.gaussian(0.2))), FockParams(1.0, n))
    ops["identity"] = BandOperator(n, {0: np.ones(n)})
    for name in ("sin_sqrt", "sin_log", "sin_linear", "alternating", "inv_linear"):
        ops[name] = synth_band(0, name, n, dense=False)
    return ops


def run(label, classifier, n, ops, th):
    print(f"\n{label}  (N = {n}, delta0 = {th.delta0}, eps0_rel = {th.eps0_rel})")
    print(f"{'operator':<22} {'w*':>4} {'omega_0(delta0)':>16} {'cr':>6} {'toeplitz_cr':>12}")
    out = {}
    for name, op in ops.items():
        r = classifier(op, th)
        w0 = r.modulus_at_delta0.get(0, float("nan"))
        print(f"{name:<22} {str(r.band_w_star):>4} {w0:>16.4g} {str(r.cr_proxy):>6} {str(r.toeplitz_cr_proxy):>12}")
        out[name] = {"band_w_star": r.band_w_star, "omega0": w0, "cr_proxy": r.cr_proxy,
                     "toeplitz_cr_proxy": r.toeplitz_cr_proxy}
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--n-bergman", type=int, default=100_000)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    results = {
        "fock_sqrt": run("Fock, sqrt metric", classify, args.n, suite(args.n, True), default_thresholds(args.n)),
        "bergman_log": run("Bergman, log metric", bergman_classify, args.n_bergman, suite(args.n_bergman, False),
                           default_thresholds(args.n_bergman)),
    }
    path = args.out / "membership_separation.json"
    path.write_text(json.dumps(results, indent=2, sort_keys=True) + "\n")
    print(f"\nwrote {path}")


if __name__ == "__main__":
    main()
