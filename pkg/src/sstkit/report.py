"""Matplotlib report figures rendered next to the delimited outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .transforms import TimeScalePlane

_PANEL_TITLES = {
    "cwt": ("wavelet transform", "squeezed (wavelet)"),
    "stft": ("windowed transform", "squeezed (window)"),
}


def _plane_axes(plane):
    if isinstance(plane, TimeScalePlane):
        return 1.0 / plane.scales[::-1], np.abs(plane.values[::-1])
    return plane.freqs, np.abs(plane.values)


def _draw_panel(ax, plane, title):
    freqs, mag = _plane_axes(plane)
    floor = mag.max() * 1e-6 if mag.max() > 0 else 1.0
    ax.pcolormesh(
        plane.times,
        freqs,
        np.log10(np.maximum(mag, floor)),
        shading="auto",
        cmap="magma",
        rasterized=True,
    )
    ax.set_yscale("log")
    ax.set_title(title)
    ax.set_xlabel("time")
    ax.set_ylabel("frequency")


def render_figures(result, outdir) -> list[str]:
    """Panel comparison, ridge overlay and density figures; returns file names."""
    outdir = Path(outdir)
    written: list[str] = []
    backends = result.backends

    n_rows = len(backends)
    fig, axes = plt.subplots(n_rows, 2, figsize=(11, 4 * n_rows), squeeze=False)
    for row, (name, res) in enumerate(backends.items()):
        raw_title, sq_title = _PANEL_TITLES[name]
        _draw_panel(axes[row][0], res.plane, raw_title)
        _draw_panel(axes[row][1], res.squeezed, sq_title)
    fig.tight_layout()
    fig.savefig(outdir / "panels.png", dpi=120)
    plt.close(fig)
    written.append("panels.png")

    fig, axes = plt.subplots(1, len(backends), figsize=(6 * len(backends), 4), squeeze=False)
    for col, (name, res) in enumerate(backends.items()):
        ax = axes[0][col]
        _draw_panel(ax, res.squeezed, f"{name} ridges")
        for ridge in res.ridge_set.ridges:
            ax.plot(res.squeezed.times[ridge.start:ridge.stop], ridge.freqs, lw=1.2, color="cyan")
    fig.tight_layout()
    fig.savefig(outdir / "ridges.png", dpi=120)
    plt.close(fig)
    written.append("ridges.png")

    fig, ax = plt.subplots(figsize=(8, 3))
    for name, res in backends.items():
        ax.plot(res.squeezed.times, res.density, label=name)
    ax.set_xlabel("time")
    ax.set_ylabel("density index")
    ax.legend()
    fig.tight_layout()
    fig.savefig(outdir / "density.png", dpi=120)
    plt.close(fig)
    written.append("density.png")
    return written
