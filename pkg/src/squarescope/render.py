"""Static SVG figures for CLI reports.

Figures are derived views of the JSON results, never the source of truth.
Rendering is deterministic: the Agg backend, a fixed hash salt for SVG ids,
and no date metadata.  Every figure frames its geometry with a 5% margin
around the bounding box.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "squarescope"

import matplotlib.pyplot as plt
import numpy as np


def _frame(ax, pts: np.ndarray) -> None:
    """Set axis limits to the bounding box of pts plus a 5% margin."""
    xmin, ymin = pts.min(axis=0)
    xmax, ymax = pts.max(axis=0)
    dx = (xmax - xmin) or 1.0
    dy = (ymax - ymin) or 1.0
    ax.set_xlim(xmin - 0.05 * dx, xmax + 0.05 * dx)
    ax.set_ylim(ymin - 0.05 * dy, ymax + 0.05 * dy)
    ax.set_aspect("equal")


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _closed(points: np.ndarray) -> np.ndarray:
    return np.vstack([points, points[:1]])


def fig_curve(curve, path, title: str = "curve") -> None:
    fig, ax = plt.subplots(figsize=(6, 6))
    loop = _closed(curve.samples)
    ax.plot(loop[:, 0], loop[:, 1], "-", color="tab:blue", lw=1.0)
    _frame(ax, curve.samples)
    ax.set_title(title)
    _save(fig, path)


def fig_squares(curve, squares, path) -> None:
    """Curve with each found square drawn as a closed corner loop."""
    fig, ax = plt.subplots(figsize=(6, 6))
    loop = _closed(curve.samples)
    ax.plot(loop[:, 0], loop[:, 1], "-", color="tab:blue", lw=1.0)
    colors = {"I": "tab:red", "II": "tab:green", "III": "tab:purple"}
    for sq, label in squares:
        verts = _closed(np.asarray(sq.vertices))
        ax.plot(verts[:, 0], verts[:, 1], "-o",
                color=colors.get(label, "tab:gray"), lw=1.2, ms=3,
                label=f"type {label}")
    _frame(ax, curve.samples)
    if squares:
        handles, labels = ax.get_legend_handles_labels()
        seen = dict(zip(labels, handles))
        ax.legend(seen.values(), seen.keys(), loc="upper right", fontsize=8)
    ax.set_title(f"{len(squares)} inscribed square(s)")
    _save(fig, path)


def fig_envelope(curve, paths, path) -> None:
    """Curve with candidate outer paths mapped into the plane.

    `paths` is a list of (points, label) pairs; points are (n, 2) arrays.
    """
    fig, ax = plt.subplots(figsize=(6, 6))
    loop = _closed(curve.samples)
    ax.plot(loop[:, 0], loop[:, 1], "-", color="tab:blue", lw=1.0, label="curve")
    for pts, label in paths:
        pts = np.asarray(pts, dtype=float)
        ax.plot(pts[:, 0], pts[:, 1], "-", lw=1.0, label=label)
    every = np.vstack([curve.samples] + [np.asarray(p, dtype=float) for p, _ in paths]) \
        if paths else curve.samples
    _frame(ax, every)
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title("envelope candidate trace")
    _save(fig, path)


def fig_plane_paths(traces, path, title: str) -> None:
    """Generic plane figure: traces is a list of ((n, 2) array, label)."""
    fig, ax = plt.subplots(figsize=(6, 6))
    allpts = []
    for pts, label in traces:
        pts = np.asarray(pts, dtype=float)
        ax.plot(pts[:, 0], pts[:, 1], "-", lw=1.0, label=label)
        allpts.append(pts)
    if allpts:
        _frame(ax, np.vstack(allpts))
    if any(label for _, label in traces):
        ax.legend(loc="upper right", fontsize=8)
    ax.set_title(title)
    _save(fig, path)
