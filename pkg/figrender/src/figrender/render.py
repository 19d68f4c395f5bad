"""Figure rendering from phasekit CSV files.

Curves are drawn straight from the parsed file columns, or from a row subset
of them for the split-panel view; no value is ever recomputed or rescaled.
The image format follows the output file extension.
"""

from __future__ import annotations

import math

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .csvread import Dataset, FormatError, read_csv

_PI = math.pi


def _new_axes():
    fig = Figure(figsize=(7.0, 4.5))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    ax.set_xlabel("theta (rad)")
    ax.set_ylabel("P(theta)")
    ax.set_xlim(-_PI, _PI)
    return fig, ax


def _curve_columns(ds: Dataset):
    """Wigner column names (drawn solid) and the finite-basis one (dashed)."""
    solid = [c for c in ds.columns[1:] if c.startswith("wigner")]
    dashed = [c for c in ds.columns[1:] if c == "pegg_barnett"]
    if not solid or not dashed:
        raise FormatError(
            f"{ds.path}: needs wigner* and pegg_barnett columns, has {', '.join(ds.columns)}"
        )
    return solid, dashed


def render_figure1a(neg_path, pos_path, out_path) -> Figure:
    """One split panel from two comparison CSVs.

    The first file's curves are drawn only where theta < 0, the second file's
    only where theta > 0.  Wigner columns are solid, the finite-basis column
    is dashed, and a horizontal zero line marks where the solid curves can go
    negative.
    """
    if not neg_path or not pos_path:
        raise FormatError("render_figure1a needs two input files, one per half panel")
    fig, ax = _new_axes()
    for path, keep_negative in ((neg_path, True), (pos_path, False)):
        ds = read_csv(path)
        theta = ds.table[:, 0]
        mask = theta < 0.0 if keep_negative else theta > 0.0
        side = "theta<0" if keep_negative else "theta>0"
        state = ds.meta.get("state", ds.path)
        solid, dashed = _curve_columns(ds)
        for name in solid:
            ax.plot(theta[mask], ds.column(name)[mask], "-", label=f"{state} {name} ({side})")
        for name in dashed:
            ax.plot(theta[mask], ds.column(name)[mask], "--", label=f"{state} {name} ({side})")
    ax.axhline(0.0, color="black", linewidth=0.8, label="_zero")
    ax.legend(fontsize="small")
    fig.savefig(out_path)
    return fig


def render_overlay(csv_paths, out_path, labels=None) -> Figure:
    """Every value column of every file on one axis over [-pi, pi].

    Legend entries come from each file's "state=" metadata verbatim (or from
    the optional labels list, one label per file); files with several value
    columns get the column name appended.
    """
    paths = list(csv_paths)
    if not paths:
        raise FormatError("render_overlay needs at least one input file")
    if labels is not None and len(labels) != len(paths):
        raise FormatError(f"got {len(labels)} labels for {len(paths)} files")
    fig, ax = _new_axes()
    for pos, path in enumerate(paths):
        ds = read_csv(path)
        theta = ds.table[:, 0]
        base = labels[pos] if labels is not None else ds.meta.get("state", ds.path)
        value_names = ds.columns[1:]
        for name in value_names:
            label = base if len(value_names) == 1 else f"{base} {name}"
            ax.plot(theta, ds.column(name), label=label)
    ax.legend(fontsize="small")
    fig.savefig(out_path)
    return fig
