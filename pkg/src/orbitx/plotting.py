"""Matplotlib figures for the CLI report paths (rendered off-screen)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .algebra import algebra_data  # noqa: E402
from .grids import enumerate_points, epsilon, point_array  # noqa: E402
from .transforms import gram_matrix  # noqa: E402

_SAVE_KW = {"dpi": 120, "metadata": {"Software": None}}


def cartesian_frame(algebra) -> tuple[np.ndarray, np.ndarray]:
    """Cartesian simple roots (rows) and fundamental coweights (rows)."""
    data = algebra_data(algebra)
    c = np.array(data.cartan, dtype=float)
    d = np.array([float(v) / 2 for v in data.root_norms])
    gram = c * d[None, :]
    roots = np.linalg.cholesky(gram)
    coweights = np.linalg.inv(roots).T
    return roots, coweights


def plot_grid(algebra, M: int, path) -> None:
    """Scatter F_M in the plane, coloured by the orbit weight eps."""
    data = algebra_data(algebra)
    _, cow = cartesian_frame(data)
    pts = enumerate_points(data, M)
    xy = (point_array(pts) / M) @ cow
    eps = [epsilon(p) for p in pts]
    corners = np.array([[0, 0], [1 / data.marks[0], 0], [0, 1 / data.marks[1]], [0, 0]]) @ cow
    fig, ax = plt.subplots(figsize=(4.5, 4))
    ax.plot(corners[:, 0], corners[:, 1], color="0.6", lw=1)
    sc = ax.scatter(xy[:, 0], xy[:, 1], c=eps, cmap="viridis", s=18, zorder=3)
    fig.colorbar(sc, ax=ax, label="eps(x)")
    ax.set_aspect("equal")
    ax.set_title(f"F_{M} for {data.id.value} ({len(pts)} points)")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def plot_gram(algebra, M: int, kind: str, path) -> None:
    g = np.abs(gram_matrix(algebra, M, kind))
    fig, ax = plt.subplots(figsize=(4.5, 4))
    im = ax.imshow(g, cmap="magma", interpolation="nearest")
    fig.colorbar(im, ax=ax, label="|<Phi_a, Phi_b>|")
    ax.set_title(f"Gram matrix, {algebra_data(algebra).id.value} M={M} kind={kind}")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def plot_demo(original, panels: dict, path) -> None:
    """Original image on top, then one row per filter: R^2 left, orbit right.

    ``panels`` maps a row title to ``(r2_image, orbit_image)``.
    """
    rows = len(panels) + 1
    fig, axes = plt.subplots(rows, 2, figsize=(5, 2.5 * rows))
    for ax in axes.ravel():
        ax.set_axis_off()
    axes[0, 0].imshow(original.pixels, cmap="gray", vmin=0, vmax=1)
    axes[0, 0].set_title("original", fontsize=9)
    for r, (title, (r2, orbit)) in enumerate(panels.items(), start=1):
        for c, (img, label) in enumerate(((r2, "R^2"), (orbit, "orbit"))):
            axes[r, c].imshow(img.pixels, cmap="gray", vmin=0, vmax=1, interpolation="nearest")
            axes[r, c].set_title(f"{title}, {label}", fontsize=9)
    fig.tight_layout()
    fig.savefig(Path(path), **_SAVE_KW)
    plt.close(fig)
