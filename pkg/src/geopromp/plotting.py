"""Figure rendering for the CLI report paths.

Every figure-producing command writes a PNG next to its delimited output:
component time series against phase, with a shaded tangent-space std band
when the model provides one.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_series(
    path,
    phases,
    mean,
    std=None,
    labels=None,
    demos=None,
    extra=None,
    title=None,
):
    """Per-component subplots of a mean path with optional std band.

    demos: list of (T x c) arrays drawn in light gray behind the mean.
    extra: dict name -> (T x c) array of additional mean paths to overlay.
    """
    phases = np.asarray(phases, dtype=float)
    mean = np.asarray(mean, dtype=float)
    n = mean.shape[1]
    if labels is None:
        labels = [f"c{i}" for i in range(n)]
    fig, axes = plt.subplots(n, 1, sharex=True, figsize=(7.0, 1.6 * n + 0.8))
    axes = np.atleast_1d(axes)
    for j, ax in enumerate(axes):
        if demos is not None:
            for demo in demos:
                ax.plot(np.linspace(0, 1, len(demo)), np.asarray(demo)[:, j], color="0.75", lw=0.8)
        if std is not None and j < np.asarray(std).shape[1]:
            s = np.asarray(std)[:, j]
            ax.fill_between(phases, mean[:, j] - 2 * s, mean[:, j] + 2 * s, alpha=0.25, color="C3")
        ax.plot(phases, mean[:, j], color="k", lw=1.5, label="mean")
        if extra:
            for k, (name, arr) in enumerate(extra.items()):
                ax.plot(phases, np.asarray(arr)[:, j], lw=1.2, color=f"C{k}", label=name)
        ax.set_ylabel(labels[j])
    axes[-1].set_xlabel("phase")
    axes[0].legend(loc="best", fontsize=8)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_metric_bars(path, metrics: dict, title=None):
    """Grouped bar chart: metrics is {metric_name: {approach: value}}."""
    names = list(metrics)
    fig, axes = plt.subplots(1, len(names), figsize=(3.2 * len(names), 3.0))
    axes = np.atleast_1d(axes)
    for ax, name in zip(axes, names):
        approaches = list(metrics[name])
        values = [metrics[name][a] for a in approaches]
        ax.bar(range(len(values)), values, color=[f"C{i}" for i in range(len(values))])
        ax.set_xticks(range(len(values)))
        ax.set_xticklabels(approaches, rotation=20, fontsize=8)
        ax.set_title(name, fontsize=10)
        ax.set_yscale("log")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
