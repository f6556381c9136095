#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Plot mean sum rate per scheme from a simulate CSV, or a convergence trace directory."""

import argparse
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def plot_sweep(csv_path: pathlib.Path, out: pathlib.Path) -> None:
    df = pd.read_csv(csv_path)
    variable = df["variable"].iloc[0]
    stats = df.dropna(subset=["sum_rate"]).groupby(["scheme", "value"])["sum_rate"].agg(["mean", "sem"])
    fig, ax = plt.subplots(figsize=(6, 4))
    for scheme, grp in stats.groupby(level="scheme"):
        x = grp.index.get_level_values("value")
        ax.errorbar(x, grp["mean"], yerr=grp["sem"], marker="o", capsize=3, label=scheme)
    ax.set_xlabel(variable)
    ax.set_ylabel("sum rate [bit/s/Hz]")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_traces(trace_dir: pathlib.Path, out: pathlib.Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for path in sorted(trace_dir.glob("*.csv")):
        df = pd.read_csv(path)
        ax.plot(df["iteration"], df["sum_rate"], marker=".", alpha=0.6, label=path.stem)
    ax.set_xlabel("iteration")
    ax.set_ylabel("sum rate [bit/s/Hz]")
    ax.grid(True, alpha=0.3)
    if len(ax.lines) <= 10:
        ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("input", type=pathlib.Path, help="sweep CSV or trace directory")
    parser.add_argument("-o", "--out", type=pathlib.Path, default=pathlib.Path("sum_rate.png"))
    args = parser.parse_args()
    if args.input.is_dir():
        plot_traces(args.input, args.out)
    else:
        plot_sweep(args.input, args.out)


if __name__ == "__main__":
    main()
