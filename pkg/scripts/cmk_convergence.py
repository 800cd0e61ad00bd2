"""Convergence of the angular-monomial band coefficients c_m^k.

Prints, per k, the closed-form vs quadrature error for m <= 200 and the
scaled compactness gap m (1 - c_m^k) / (k^2 / 8) at a few m, and writes the
full table to CSV.
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from fockband import FockParams, QuadratureScheme, SymbolSpec, cmk_closed_form, compactness_gap
from fockband.toeplitz import toeplitz_bands


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=8)
    ap.add_argument("--quad-q", type=int, default=128)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    checkpoints = [10, 100, 1000, 10_000, 100_000]
    rows = []
    print(f"{'k':>2} {'max|closed-quad|':>17} " + " ".join(f"m={m:<7d}" for m in checkpoints))
    for k in range(1, args.k_max + 1):
        quad = toeplitz_bands(SymbolSpec.angular_monomial(k), FockParams(1.0, 201 + k),
                              QuadratureScheme(args.quad_q)).diag(k).real
        err = np.max(np.abs(quad - cmk_closed_form(np.arange(201), k)))
        gap = compactness_gap(k, FockParams(1.0, checkpoints[-1] + k + 1))
        scaled = [m * gap[m] / (k * k / 8) for m in checkpoints]
        print(f"{k:>2} {err:>17.2e} " + " ".join(f"{s:<9.5f}" for s in scaled))
        rows += [(k, m, float(cmk_closed_form(m, k)), float(gap[m]), s) for m, s in zip(checkpoints, scaled)]

    path = args.out / "cmk_convergence.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "m", "c_mk", "gap", "scaled_gap"])
        w.writerows(rows)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
