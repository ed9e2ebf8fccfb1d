"""Figures for the benchmark report. Rendered off-screen with the Agg canvas."""

from __future__ import annotations

from pathlib import Path

import matplotlib as mpl
import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .transforms import visibility_i_discrete

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
}
CLASS_COLORS = ("#1b9e77", "#d95f02", "#7570b3")
# fixed metadata keeps repeated renders byte-identical
_PNG_META = {"Software": None}


def _save(fig: Figure, path: Path) -> Path:
    FigureCanvasAgg(fig)
    fig.savefig(path, metadata=_PNG_META)
    return path


def plot_dataset(streams, labels, path, per_class: int = 5) -> Path:
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(4.0, 4.0))
        ax = fig.add_subplot()
        for c in np.unique(labels):
            for k, i in enumerate(np.flatnonzero(labels == c)[:per_class]):
                s = streams[i]
                ax.plot(s[:, 0], s[:, 1], color=CLASS_COLORS[c % 3], lw=1.0, alpha=0.8,
                        label=f"class {c}" if k == 0 else None)
                ax.plot(*s[0], "o", color=CLASS_COLORS[c % 3], ms=3)
        ax.set_aspect("equal")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_title("Synthetic strokes (dots mark the start)")
        ax.legend(frameon=False)
        fig.tight_layout()
        return _save(fig, Path(path))


def plot_lift(stream, path) -> Path:
    """3-D view of a 2-D stream after the discrete I-visibility transform."""
    lifted = visibility_i_discrete(stream)
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(4.5, 4.0))
        ax = fig.add_subplot(projection="3d")
        ax.plot(lifted[:2, 0], lifted[:2, 1], lifted[:2, 2], "--", color="0.5", lw=1.0)
        ax.plot(lifted[1:3, 0], lifted[1:3, 1], lifted[1:3, 2], ":", color="0.3", lw=1.0)
        ax.plot(lifted[2:, 0], lifted[2:, 1], lifted[2:, 2], color=CLASS_COLORS[0], lw=1.5)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_zlabel("visible")
        ax.set_title("I-visibility lift")
        fig.tight_layout()
        return _save(fig, Path(path))


def plot_accuracy(report: dict, path) -> Path:
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(3.5, 3.0))
        ax = fig.add_subplot()
        names = ["lead-lag", "lead-lag + I-vis"]
        acc = [report["accuracy_plain"], report["accuracy_vis"]]
        ax.bar(names, acc, color=["0.6", CLASS_COLORS[0]], width=0.5)
        ax.axhline(1.0 / 3.0, color="k", lw=0.8, ls="--", label="chance")
        ax.set_ylim(0.0, 1.05)
        ax.set_ylabel("test accuracy")
        ax.legend(frameon=False, loc="upper left")
        fig.tight_layout()
        return _save(fig, Path(path))


def render_benchmark_figures(data, report: dict, outdir) -> list[Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    return [
        plot_dataset(data.streams, data.labels, out / "bench_strokes.png"),
        # a class away from the origin, so the approach segment is visible
        plot_lift(data.streams[int(np.argmax(data.labels == 1))], out / "bench_lift.png"),
        plot_accuracy(report, out / "bench_accuracy.png"),
    ]
