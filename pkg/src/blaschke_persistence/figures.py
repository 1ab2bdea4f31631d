"""Matplotlib SVG rendering for barcodes and level-set scans.

Figures are written as SVG only (deterministic apart from library version:
the hash salt is pinned and no timestamps are embedded).
"""

from __future__ import annotations

import math

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .barcode import Barcode  # noqa: E402
from .distance import expand_bars  # noqa: E402
from .levelset import GridFiltration  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "blaschke-persistence"


def _save(fig, path) -> None:
    # SVG is the deliverable format (timestamp suppressed for reproducible
    # bytes); other suffixes are honored for ad-hoc use
    if str(path).lower().endswith(".svg"):
        fig.savefig(path, format="svg", metadata={"Date": None})
    else:
        fig.savefig(path)
    plt.close(fig)


def save_barcode_figure(bc: Barcode, path, title: str = "barcode") -> None:
    """Bars as horizontal segments over the time axis; the infinite bar gets
    an arrow tip."""
    bars = expand_bars(bc)
    finite_deaths = [b.death for b in bars if b.finite]
    tmax = 1.25 * max(finite_deaths + [1.0])
    fig, ax = plt.subplots(figsize=(6.0, 1.2 + 0.35 * max(len(bars), 1)))
    for row, bar in enumerate(bars):
        if bar.finite:
            ax.hlines(row, bar.birth, bar.death, color="tab:blue", lw=3)
            ax.plot([bar.death], [row], "|", color="tab:blue", ms=9)
        else:
            ax.annotate(
                "", xy=(tmax, row), xytext=(bar.birth, row),
                arrowprops=dict(arrowstyle="-|>", color="tab:red", lw=3),
            )
    ax.set_xlim(-0.02 * tmax, 1.05 * tmax)
    ax.set_ylim(-0.8, len(bars) - 0.2 if bars else 0.8)
    ax.set_xlabel("filtration time t")
    ax.set_yticks([])
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)


def save_scan_figure(grid: GridFiltration, thresholds, path, title: str = "level sets") -> None:
    """Heatmap of |B| with component outlines at each threshold and the zeros
    marked."""
    N = grid.resolution
    img = np.full((N, N), np.nan)
    img[grid.cells[:, 0], grid.cells[:, 1]] = grid.values
    fig, ax = plt.subplots(figsize=(6.4, 5.6))
    mesh = ax.imshow(img, origin="lower", extent=[-1, 1, -1, 1], cmap="viridis",
                     vmin=0.0, vmax=1.0, interpolation="nearest")
    levels = sorted(set(float(t) for t in thresholds))
    axis = (2.0 * np.arange(N) + 1.0) / N - 1.0
    ax.contour(axis, axis, np.where(np.isnan(img), 1.0, img), levels=levels,
               colors="white", linewidths=0.8)
    if grid.zeros:
        ax.plot([z.real for z in grid.zeros], [z.imag for z in grid.zeros],
                "r+", ms=10, mew=2)
    circle = plt.Circle((0, 0), 1.0, fill=False, color="black", lw=1.0)
    ax.add_patch(circle)
    fig.colorbar(mesh, ax=ax, label="|B|")
    ax.set_title(title)
    ax.set_aspect("equal")
    fig.tight_layout()
    _save(fig, path)


def save_scan_series_figure(rows, path, title: str = "components and diameters") -> None:
    """Per-threshold counts and diameter estimates over the time axis,
    alongside the heatmap output of a scan."""
    times = [r["t"] for r in rows]
    counts = [r["component_count"] for r in rows]
    diams = [r["delta_estimate"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 4.6))
    ax1.step(times, counts, where="mid", color="tab:blue")
    ax1.set_ylabel("components")
    ax2.plot(times, diams, "o-", color="tab:orange")
    ax2.set_ylabel("diameter estimate")
    ax2.set_xlabel("filtration time t")
    secax = ax2.secondary_xaxis(
        "top", functions=(lambda t: np.tanh(0.5 * np.asarray(t)),
                          lambda th: 2.0 * np.arctanh(np.clip(np.asarray(th), 0.0, 1.0 - 1e-12)))
    )
    secax.set_xlabel("threshold theta")
    ax1.set_title(title)
    fig.tight_layout()
    _save(fig, path)


def time_axis_of(bc: Barcode) -> float:
    """Largest finite death (plot helper)."""
    deaths = [b.death for b in bc.bars if math.isfinite(b.death)]
    return max(deaths) if deaths else 1.0
