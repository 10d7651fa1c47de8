"""SVG figures: dendrogram with cluster rectangles, barplot of inertia gains."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402
from scipy.cluster.hierarchy import dendrogram as _draw_dendrogram  # noqa: E402

from .ward import Dendrogram, cut, inertia_gains  # noqa: E402

# fixed ids and no timestamp so reruns give identical bytes
plt.rcParams["svg.hashsalt"] = "mixhclust"
_SVG_META = {"Date": None, "Creator": "mixhclust"}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)


def plot_dendrogram(d: Dendrogram, path, K: int | None = None) -> None:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    link = d.to_linkage()
    show_labels = d.n_leaves <= 60
    info = _draw_dendrogram(link, ax=ax, no_labels=not show_labels, color_threshold=0,
                            above_threshold_color="0.25", labels=d.labels)
    ax.set_ylabel("height (inertia)")
    if K is not None and 2 <= K <= d.n_leaves:
        costs = d.costs
        top = costs[d.n_leaves - K]
        below = costs[d.n_leaves - K - 1] if d.n_leaves - K - 1 >= 0 else 0.0
        level = (top + below) / 2
        labels = cut(d, K).labels
        order = np.asarray(info["leaves"])
        ordered = labels[order]
        start = 0
        for pos in range(1, len(order) + 1):
            if pos == len(order) or ordered[pos] != ordered[start]:
                x0, x1 = 10 * start + 1, 10 * pos - 1
                ax.add_patch(Rectangle((x0, 0), x1 - x0, level, fill=False,
                                       edgecolor="firebrick", linewidth=1.2))
                ax.text((x0 + x1) / 2, level, f"C{ordered[start]}", ha="center",
                        va="bottom", color="firebrick", fontsize=8)
                start = pos
    _save(fig, path)


def plot_gains(d: Dendrogram, path, max_k: int = 15) -> None:
    gains = [(k, g) for k, g in inertia_gains(d) if k <= max_k]
    fig, ax = plt.subplots(figsize=(5, 4))
    ks = [k for k, _ in gains]
    ax.bar(ks, [g for _, g in gains], color="0.45")
    ax.set_xlabel("K (gain moving from K-1 to K clusters)")
    ax.set_ylabel("inertia gain")
    ax.set_xticks(ks)
    _save(fig, path)
