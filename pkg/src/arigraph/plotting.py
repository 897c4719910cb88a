"""Figures for aggregated experiment results, written straight to image files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 11,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (6.0, 3.7),
    "savefig.dpi": 150,
}


def score_curves(table: dict[str, dict], path: str | Path, title: str = "") -> Path:
    """Mean normalized score per step with a one-std band for each mode."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for mode, row in table.items():
            mean, std = np.asarray(row["mean"]), np.asarray(row["std"])
            steps = np.arange(1, len(mean) + 1)
            ax.plot(steps, mean, label=mode)
            ax.fill_between(steps, np.clip(mean - std, 0, 1), np.clip(mean + std, 0, 1), alpha=0.2)
        ax.set_xlabel("step")
        ax.set_ylabel("normalized score")
        ax.set_ylim(-0.02, 1.02)
        if title:
            ax.set_title(title)
        ax.legend(loc="lower right")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return Path(path)


def final_scores(table: dict[str, dict], path: str | Path, title: str = "") -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        modes = list(table)
        ax.bar(modes, [table[m]["final_mean"] for m in modes],
               yerr=[table[m]["final_std"] for m in modes], capsize=3)
        ax.set_ylabel("final normalized score")
        ax.set_ylim(0, 1.05)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return Path(path)
