"""Static SVG panels. The CSV files are the data contract; plots are a convenience."""

from __future__ import annotations

import numpy as np


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    return plt, fig, ax


def _grouped(rows, key_idx):
    groups = {}
    for row in rows:
        groups.setdefault(row[key_idx], []).append(row)
    return groups


def line_panel(header, rows, x, y, group=None, ylabel=None, title=None):
    """One curve per distinct value of column ``group`` (or a single curve)."""
    plt, fig, ax = _figure()
    ix, iy = header.index(x), header.index(y)
    if group is None:
        data = np.array([[r[ix], r[iy]] for r in rows], dtype=float)
        ax.plot(data[:, 0], data[:, 1])
    else:
        ig = header.index(group)
        for key, grp in _grouped(rows, ig).items():
            data = np.array([[r[ix], r[iy]] for r in grp], dtype=float)
            ax.plot(data[:, 0], data[:, 1], label=f"{group} = {key:g}")
        ax.legend(fontsize=8)
    ax.set_xlabel(r"$\lambda t$" if x == "lambda_t" else x)
    ax.set_ylabel(ylabel or y)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return plt, fig


def map_panel(header, rows, x, y, z, title=None):
    plt, fig, ax = _figure()
    ix, iy, iz = header.index(x), header.index(y), header.index(z)
    xs = np.unique([r[ix] for r in rows])
    ys = np.unique([r[iy] for r in rows])
    Z = np.full((ys.size, xs.size), np.nan)
    xi = {v: k for k, v in enumerate(xs)}
    yi = {v: k for k, v in enumerate(ys)}
    for r in rows:
        Z[yi[r[iy]], xi[r[ix]]] = r[iz]
    mesh = ax.pcolormesh(xs, ys, Z, shading="auto", rasterized=False)
    fig.colorbar(mesh, ax=ax, label=z)
    ax.set_xlabel(r"$\lambda t$" if x == "lambda_t" else x)
    ax.set_ylabel(r"$\lambda t$" if y == "lambda_t" else y)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return plt, fig


def scatter_panel(header, rows, x, y, title=None):
    plt, fig, ax = _figure()
    ix, iy = header.index(x), header.index(y)
    data = np.array([[r[ix], r[iy]] for r in rows], dtype=float).reshape(-1, 2)
    ax.plot(data[:, 0], data[:, 1], "o-")
    ax.set_xlabel(r"$\nu$" if x == "nu" else x)
    ax.set_ylabel(y)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return plt, fig
