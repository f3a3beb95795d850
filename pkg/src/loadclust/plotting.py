"""Static matplotlib figures written next to the JSON outputs."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

RC = {
    "font.size": 8,
    "axes.titlesize": 9,
    "axes.labelsize": 8,
    "xtick.labelsize": 7,
    "ytick.labelsize": 7,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 100,
    "savefig.dpi": 120,
    "path.simplify": False,
}

# keeps PNG bytes stable between runs
_PNG_METADATA = {"Software": None}


def _hours(grid, d):
    if grid is not None and len(grid) == d and hasattr(grid[0], "hour"):
        return np.array([t.hour + t.minute / 60 for t in grid]), "hour of day"
    return np.arange(d), "step"


def plot_clusters(path, curves, labels, assignment, grid=None, centers=None):
    """Grid of per-cluster panels: members in thin blue, center in black."""
    curves = np.asarray(curves, dtype=float)
    index = {lab: i for i, lab in enumerate(labels)}
    rows = np.array([index[lab] for lab in assignment.labels])
    clusters = np.asarray(assignment.clusters)
    k = assignment.k
    if centers is None and assignment.centers.shape[1] == curves.shape[1]:
        centers = assignment.centers
    x, xlabel = _hours(grid, curves.shape[1])
    ncols = min(4, k)
    nrows = math.ceil(k / ncols)
    with plt.rc_context(RC):
        fig, axes = plt.subplots(nrows, ncols, figsize=(2.6 * ncols, 2.0 * nrows),
                                 squeeze=False, sharex=True)
        for c in range(k):
            ax = axes[c // ncols][c % ncols]
            member = curves[rows[clusters == c]]
            ax.plot(x, member.T, color="#4f81bd", lw=0.5, alpha=0.3)
            center = centers[c] if centers is not None else member.mean(axis=0)
            ax.plot(x, center, color="black", lw=1.8)
            ax.set_title(f"cluster {c} (n={len(member)})")
            ax.set_xlabel(xlabel)
        for c in range(k, nrows * ncols):
            axes[c // ncols][c % ncols].set_visible(False)
        fig.tight_layout()
        fig.savefig(path, format="png", metadata=_PNG_METADATA)
        plt.close(fig)
    return path


def plot_sweep(path, sweep):
    """Inertia and the three validity indexes against k; the suggested k is marked."""
    ks = np.array(sweep.ks)
    panels = [("inertia", "inertia"), ("silhouette", "silhouette"),
              ("davies_bouldin", "Davies-Bouldin"), ("calinski_harabasz", "Calinski-Harabasz")]
    with plt.rc_context(RC):
        fig, axes = plt.subplots(1, 4, figsize=(10, 2.3))
        for ax, (field, title) in zip(axes, panels):
            vals = np.array([np.nan if getattr(e, field) is None else getattr(e, field)
                             for e in sweep.per_k], dtype=float)
            vals[~np.isfinite(vals)] = np.nan
            ax.plot(ks, vals, "o-", color="#333", ms=3, lw=1)
            ax.axvline(sweep.suggested_k, color="#c0504d", lw=1, ls="--")
            ax.set_title(title)
            ax.set_xlabel("k")
            ax.set_xticks(ks)
        fig.tight_layout()
        fig.savefig(path, format="png", metadata=_PNG_METADATA)
        plt.close(fig)
    return path
