#!/usr/bin/env python3
"""Render basel CSV outputs as PNG figures.

Picks a plot recipe from the table header, so it works on any output of
`basel simulate`, `basel policy-sweep`, `basel bifurcation`, `basel
theta-sweep`, or `basel poincare` without extra flags.
"""

import argparse
import csv
import math
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_table(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        sys.exit(f"{path}: empty table")
    return rows


def col(rows, key):
    return [float(r[key]) for r in rows]


def plot_trajectory(rows):
    t = col(rows, "t_years")
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(9, 7))
    axes[0].plot(t, col(rows, "price"), lw=0.8)
    axes[0].set_ylabel("price")
    axes[1].plot(t, col(rows, "leverage"), lw=0.8, label="leverage")
    axes[1].plot(t, col(rows, "target_leverage"), lw=0.8, label="target")
    axes[1].set_ylabel("leverage")
    axes[1].legend(loc="upper right", fontsize=8)
    axes[2].plot(t, col(rows, "n"), lw=0.8, label="ownership n")
    axes[2].plot(t, col(rows, "relative_size"), lw=0.8, label="relative size")
    axes[2].set_ylabel("bank share")
    axes[2].set_xlabel("t (years)")
    axes[2].legend(loc="upper right", fontsize=8)
    flagged = [ti for ti, r in zip(t, rows) if r["status"] != "live"]
    if flagged:
        for ax in axes:
            ax.axvspan(min(flagged), max(flagged), color="red", alpha=0.08)
    return fig


def plot_policy_sweep(rows):
    ok = [r for r in rows if r["status"] == "ok"]
    bad = [r for r in rows if r["status"] != "ok"]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(col(ok, "b"), col(ok, "rs_normalized"), "o-", ms=4)
    for r in bad:
        ax.axvline(float(r["b"]), color="gray", alpha=0.3, lw=0.8)
    ax.axhline(1.0, color="black", lw=0.6, alpha=0.5)
    ax.set_xlabel("cyclicality exponent b")
    ax.set_ylabel("realized shortfall (b = -0.5 baseline = 1)")
    if bad:
        ax.set_title(f"{len(bad)} of {len(rows)} cells failed to calibrate",
                     fontsize=9)
    return fig


def plot_bifurcation(rows):
    regimes = {"stable": 0, "cycles": 1, "globally_unstable": 2}
    colors = {0: "#2a7", 1: "#e90", 2: "#c33"}
    fig, ax = plt.subplots(figsize=(7, 5))
    for name, code in regimes.items():
        sub = [r for r in rows if r["regime"] == name]
        if sub:
            ax.scatter(col(sub, "b"), col(sub, "alpha"), s=14,
                       c=colors[code], label=name)
    ax.set_yscale("log")
    ax.set_xlabel("cyclicality exponent b")
    ax.set_ylabel("risk-limit scale alpha")
    ax.legend(fontsize=8)
    return fig


def plot_theta_sweep(rows):
    found = [r for r in rows if r["found"] == "1"]
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    axes[0].plot(col(found, "theta_tau"), col(found, "lambda_c"), "o-", ms=4)
    axes[0].set_xlabel("theta * tau")
    axes[0].set_ylabel("critical leverage")
    axes[1].plot(col(found, "theta_tau"), col(found, "r_c"), "o-", ms=4)
    axes[1].set_xlabel("theta * tau")
    axes[1].set_ylabel("critical relative size")
    return fig


def plot_poincare(rows):
    fig, ax = plt.subplots(figsize=(6, 5))
    sig = col(rows, "sigma_sq")
    ax.scatter([math.log10(s) for s in sig], col(rows, "n"), s=6, alpha=0.6)
    ax.set_xlabel("log10 perceived variance")
    ax.set_ylabel("bank ownership n")
    return fig


RECIPES = {
    "t_years": plot_trajectory,
    "rs_normalized": plot_policy_sweep,
    "regime": plot_bifurcation,
    "theta_tau": plot_theta_sweep,
    "sigma_sq": plot_poincare,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv_path")
    ap.add_argument("-o", "--out", help="output PNG (default: <csv>.png)")
    args = ap.parse_args()

    rows = read_table(args.csv_path)
    header = rows[0].keys()
    recipe = next((fn for key, fn in RECIPES.items() if key in header), None)
    if recipe is None:
        sys.exit(f"{args.csv_path}: no plot recipe for columns "
                 f"{','.join(header)}")
    fig = recipe(rows)
    out = args.out or args.csv_path + ".png"
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
