"""Batch figure rendering; inputs are never modified, re-running overwrites
the output image in place."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .tables import read_table

PATTERN_COLUMNS = ("angle_deg", "objective_dBi", "dtb_dBi", "dtb_hbf_dBi")
MSE_COLUMNS = ("gamma_db", "n_bs", "median_mse_no_hbf", "median_mse_hbf")


def plot_pattern(table_path, out_path, ylim=None, floor_db=-120.0) -> Path:
    """Beam-pattern overlay: objective bound vs. the designed transmit beam
    with and without the hybrid stage, in dBi over angle."""
    table = read_table(table_path, required=PATTERN_COLUMNS)
    angle = np.asarray(table["angle_deg"], float)

    fig, ax = plt.subplots(figsize=(7.2, 4.8))
    ax.plot(angle, np.maximum(table["objective_dBi"], floor_db),
            "k--", linewidth=1.2, label="objective bound")
    ax.plot(angle, np.maximum(table["dtb_dBi"], floor_db),
            linewidth=1.2, label="designed beam")
    ax.plot(angle, np.maximum(table["dtb_hbf_dBi"], floor_db),
            linewidth=1.2, label="designed beam, hybrid")
    ax.set_xlabel("angle (deg)")
    ax.set_ylabel("beam pattern (dBi)")
    ax.set_xlim(angle.min(), angle.max())
    if ylim is not None:
        ax.set_ylim(*ylim)
    ax.grid(True, alpha=0.4)
    ax.legend(loc="upper left", fontsize=9)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_mse_sweep(table_path, out_path, logy=False) -> Path:
    """MSE-versus-threshold curves, one pair (with/without hybrid) per array
    size, medians over seeds."""
    table = read_table(table_path, required=MSE_COLUMNS)
    sizes = sorted({int(n) for n in table["n_bs"] if n is not None})

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for n_bs in sizes:
        rows = [(g, m0, m1) for g, n, m0, m1 in zip(
            table["gamma_db"], table["n_bs"],
            table["median_mse_no_hbf"], table["median_mse_hbf"])
            if n is not None and int(n) == n_bs and m0 is not None]
        if not rows:
            continue
        rows.sort()
        gamma = [r[0] for r in rows]
        style = "-o" if len(rows) > 1 else "o"
        line, = ax.plot(gamma, [r[1] for r in rows], style,
                        label=f"N_BS={n_bs}, no HBF")
        ax.plot(gamma, [r[2] for r in rows], style.replace("-", "--") if len(rows) > 1 else "s",
                color=line.get_color(), fillstyle="none", label=f"N_BS={n_bs}, HBF")
    ax.set_xlabel("SINR threshold (dB)")
    ax.set_ylabel("beam-pattern MSE")
    if logy:
        ax.set_yscale("log")
    ax.grid(True, alpha=0.4)
    ax.legend(fontsize=9)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
