"""Deterministic renderings of point sets and patterns: ASCII grids, SVG,
delimited rows and matplotlib figures."""

import numpy as np

from . import lattice as lat

PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
           "#98df8a", "#ff9896", "#c5b0d5", "#c49c94"]


def _cells(obj, names=None):
    """point -> label from a Pattern, a dict or a plain point set."""
    cells = getattr(obj, "cells", obj)
    if isinstance(cells, dict):
        if names is None:
            return {p: str(a) for p, a in cells.items()}
        return {p: names[a] for p, a in cells.items()}
    return {tuple(p): "#" for p in cells}


def ascii_grid(obj, names=None, empty="."):
    """Rows from top (largest y) to bottom, cells padded to a common width.

    One-dimensional input gives a single row. The origin is not marked;
    the first line of output states the coordinates of the lower-left cell.
    """
    cells = _cells(obj, names)
    if not cells:
        return ""
    d = len(next(iter(cells)))
    if d == 1:
        lo = min(p[0] for p in cells)
        hi = max(p[0] for p in cells)
        w = max(len(v) for v in cells.values())
        row = " ".join(cells.get((x,), empty).rjust(w) for x in range(lo, hi + 1))
        return f"origin ({lo})\n{row}\n"
    if d != 2:
        raise ValueError("ASCII rendering is for dimension 1 or 2")
    xs = [p[0] for p in cells]
    ys = [p[1] for p in cells]
    w = max(len(v) for v in cells.values())
    lines = [f"origin ({min(xs)},{min(ys)})"]
    for y in range(max(ys), min(ys) - 1, -1):
        lines.append(" ".join(cells.get((x, y), empty).rjust(w)
                              for x in range(min(xs), max(xs) + 1)))
    return "\n".join(lines) + "\n"


def rows(obj, names=None):
    """Delimited rows 'coordinates..., symbol' sorted by point."""
    cells = _cells(obj, names)
    d = len(next(iter(cells))) if cells else 0
    head = ",".join([f"x{i}" for i in range(d)] + ["symbol"])
    out = [head]
    for p in sorted(cells):
        out.append(",".join([str(c) for c in p] + [cells[p]]))
    return "\n".join(out) + "\n"


def svg(obj, names=None, cell=16):
    """An SVG picture with one square per cell (y axis pointing up)."""
    cells = _cells(obj, names)
    pts = [p if len(p) == 2 else (p[0], 0) for p in cells]
    labels = sorted(set(cells.values()))
    color = {v: PALETTE[i % len(PALETTE)] for i, v in enumerate(labels)}
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    W, H = (x1 - x0 + 1) * cell, (y1 - y0 + 1) * cell
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">']
    for p, q in sorted(zip(cells, pts)):
        x = (q[0] - x0) * cell
        y = (y1 - q[1]) * cell
        out.append(f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
                   f'fill="{color[cells[p]]}"><title>{cells[p]}</title></rect>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def digit_tile(sys, n):
    """The points L⁻ⁿ(Fₙ) as a float array, an approximation of the self-affine tile."""
    pts = np.array(lat.support_iterate(sys, n), dtype=float)
    Li = np.linalg.inv(np.array(sys.L, dtype=float))
    return pts @ np.linalg.matrix_power(Li, n).T


# ---------------------------------------------------------------- figures

def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def figure_pattern(obj, path, names=None, title=None):
    """Save a colored cell picture of a pattern or point set."""
    plt = _plt()
    cells = _cells(obj, names)
    labels = sorted(set(cells.values()))
    fig, ax = plt.subplots(figsize=(5, 5))
    for i, v in enumerate(labels):
        pts = np.array([p if len(p) == 2 else (p[0], 0) for p in cells if cells[p] == v])
        ax.scatter(pts[:, 0], pts[:, 1], marker="s", s=40, color=PALETTE[i % len(PALETTE)],
                   label=v if len(labels) <= 16 else None)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    if 1 < len(labels) <= 16:
        ax.legend(fontsize="small", loc="upper left", bbox_to_anchor=(1, 1))
    fig.savefig(path, bbox_inches="tight", dpi=100)
    plt.close(fig)
    return path


def figure_tile(sys, n, path):
    plt = _plt()
    pts = digit_tile(sys, n)
    fig, ax = plt.subplots(figsize=(5, 5))
    if pts.shape[1] == 1:
        ax.plot(pts[:, 0], np.zeros(len(pts)), "|")
    else:
        ax.scatter(pts[:, 0], pts[:, 1], s=2, color="k")
        ax.set_aspect("equal")
    ax.set_title(f"L^-{n} F_{n}")
    fig.savefig(path, bbox_inches="tight", dpi=100)
    plt.close(fig)
    return path


def figure_series(xs, ys, path, xlabel="", ylabel="", logy=False, title=None):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(xs, ys, "o-")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if logy:
        ax.set_yscale("log")
    if title:
        ax.set_title(title)
    fig.savefig(path, bbox_inches="tight", dpi=100)
    plt.close(fig)
    return path
