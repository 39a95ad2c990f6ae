#!/usr/bin/env python3
"""Render the secrecy tradeoff curves from a sweep CSV.

Reads the output of `statecloak sweep` and plots expected estimation error
for the intended receiver and the eavesdropper against the noise-injection
probability mu, with the open-loop variance and design threshold marked.
Monte Carlo columns, when present, are overlaid as error-barred points.

Usage: python scripts/plot_sweep.py sweep.csv [-o out.png]

Needs matplotlib (`pip install statecloak[plot]`); kept out of the package
proper so the simulation core stays headless.
"""

import argparse
import csv
import math
import sys


def read_sweep(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise SystemExit(f"{path}: no data rows")
    return rows


def column(rows, name):
    return [float(r[name]) for r in rows]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv_path")
    ap.add_argument("-o", "--out", default=None, help="output image (default: show window)")
    args = ap.parse_args()

    try:
        import matplotlib
        if args.out:
            matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required: pip install statecloak[plot]")

    rows = read_sweep(args.csv_path)
    mu = column(rows, "mu")
    legit = column(rows, "expected_legit")
    eaves = column(rows, "expected_eaves")
    p_op = float(rows[0]["p_op"])
    mu_op = float(rows[0]["mu_op"])

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(mu, legit, label="receiver  E[P]", color="tab:blue")
    ax.plot(mu, eaves, label="eavesdropper  E[P^e]", color="tab:red")
    ax.axhline(p_op, color="gray", ls="--", lw=1, label="open loop  P^OP")
    if math.isfinite(mu_op):
        ax.axvline(mu_op, color="gray", ls=":", lw=1)
        ax.annotate(f"mu_op = {mu_op:.3f}", (mu_op, p_op),
                    textcoords="offset points", xytext=(6, -14), fontsize=9)

    if rows[0].get("mc_legit") not in (None, ""):
        ax.errorbar(mu, column(rows, "mc_legit"), yerr=column(rows, "mc_legit_ci"),
                    fmt=".", ms=4, color="tab:blue", alpha=0.6, label="MC receiver")
        ax.errorbar(mu, column(rows, "mc_eaves"), yerr=column(rows, "mc_eaves_ci"),
                    fmt=".", ms=4, color="tab:red", alpha=0.6, label="MC eavesdropper")

    ax.set_xlabel("noise-injection probability  mu")
    ax.set_ylabel("expected error variance")
    ax.legend(loc="upper left", fontsize=9)
    ax.grid(alpha=0.3)
    fig.tight_layout()

    if args.out:
        fig.savefig(args.out, dpi=150)
        print(f"wrote {args.out}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
