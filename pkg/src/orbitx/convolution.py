"""Orbit convolutions, the product identity and the small filter kernels.

The C-orbit convolution of two functions on F_M is

    (f * g)(u) = sum_{x in F_M} eps(x) sum_{w in W} f(x) g(u - w x),

where ``g`` is extended off F_M by affine Weyl invariance. The convolution
theorem turns it into a pointwise product of orbit-transform coefficients,
which is what :func:`convolve` uses by default. The E variant replaces W by
W^e, eps by eps^e and F_M by F_M^e.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, replace
from typing import Literal, Sequence

import numpy as np

from .algebra import AlgebraId, algebra_data, even_subgroup, fold_lattice, generate_weyl_group
from .grids import (
    GridPoint,
    LabelPoint,
    EvenGridPoint,
    grid_weights,
    label_coords,
    point_array,
    point_coords,
)
from .transforms import (
    DimensionError,
    DiscreteFunction,
    Kind,
    Spectrum,
    _check_pair,
    eval_C,
    forward,
    grid_points,
    inverse_grid,
    norm_constants,
)

Normalization = Literal["sum-preserving", "none"]
KERNEL_NAMES = ("mean", "sharpen", "edge")

# (center, omega1-check neighbour, omega2-check neighbour)
RAW_KERNEL_WEIGHTS = {
    "mean": (1 / 3, 1 / 3, 1 / 3),
    "sharpen": (5.0, 0.0, -1.0),
    "edge": (3.0, 0.0, -1.0),
}
KERNEL_MODES: dict[str, Normalization] = {
    "mean": "sum-preserving",
    "sharpen": "sum-preserving",
    "edge": "none",
}


class KernelError(ValueError):
    pass


class FoldConsistencyError(RuntimeError):
    """A difference of grid points folded onto something that is not a grid point."""


def _group(algebra, kind: Kind):
    W = generate_weyl_group(algebra)
    return W if kind == "C" else even_subgroup(W)


@functools.lru_cache(maxsize=16)
def _index_table(algebra: AlgebraId, M: int, kind: Kind) -> np.ndarray:
    """Lookup ``[sector, s1, s2] -> position`` in the grid enumeration."""
    table = np.full((2, M + 1, M + 1), -1, dtype=np.int64)
    for n, p in enumerate(grid_points(algebra, M, kind)):
        if isinstance(p, EvenGridPoint):
            table[int(p.reflected), p.base.s[1], p.base.s[2]] = n
        else:
            table[0, p.s[1], p.s[2]] = n
    return table


def fold_to_grid_index(y: np.ndarray, algebra, M: int, kind: Kind) -> np.ndarray:
    """Grid positions of the (even) affine-Weyl representatives of ``y / M``.

    ``y`` is an integer array of shape ``(..., 2)``.
    """
    data = algebra_data(algebra)
    folded, parity = fold_lattice(y, M, data)
    s1, s2 = folded[..., 0], folded[..., 1]
    s0 = M - data.marks[0] * s1 - data.marks[1] * s2
    if (s0 < 0).any() or (s1 < 0).any() or (s2 < 0).any():
        raise FoldConsistencyError("folded point outside the fundamental domain")
    if kind == "C":
        sector = np.zeros_like(s1)
    else:
        # an odd class lands on the r_1 copy unless the base point lies on a wall
        interior = (s0 > 0) & (s1 > 0) & (s2 > 0)
        sector = (parity == 1) & interior
    idx = _index_table(data.id, M, kind)[sector.astype(np.int64), s1, s2]
    if (idx < 0).any():
        raise FoldConsistencyError("folded point is not on the grid")
    return idx


def convolve_spatial(f: DiscreteFunction, g: DiscreteFunction) -> DiscreteFunction:
    """Direct evaluation of the orbit convolution (quadratic in the grid size)."""
    _check_pair(f, g)
    data = algebra_data(f.algebra)
    y = point_array(f.points)
    eps = grid_weights(f.algebra, f.M, f.kind)
    weighted = eps * f.values
    out = np.zeros(len(y), dtype=complex)
    for w in _group(data, f.kind):
        b = np.array(w.point_matrix(data), dtype=np.int64)
        wy = y @ b.T
        diff = y[:, None, :] - wy[None, :, :]
        idx = fold_to_grid_index(diff, data, f.M, f.kind)
        out += g.values[idx] @ weighted
    return f.like(out)


def convolve_spectral(f: DiscreteFunction, g: DiscreteFunction) -> DiscreteFunction:
    """Orbit convolution through the convolution theorem."""
    _check_pair(f, g)
    F = forward(f)
    G = forward(g)
    norms = norm_constants(f.algebra, f.M, f.kind)
    return inverse_grid(Spectrum(f.algebra, f.M, f.kind, norms * F.coeffs * G.coeffs))


def _require(f: DiscreteFunction, g: DiscreteFunction, kind: Kind) -> None:
    _check_pair(f, g)
    if f.kind != kind:
        raise DimensionError(f"expected {kind}-grid functions, got {f.kind}")


def convolve_C_spatial(f: DiscreteFunction, g: DiscreteFunction) -> DiscreteFunction:
    _require(f, g, "C")
    return convolve_spatial(f, g)


def convolve_C_spectral(f: DiscreteFunction, g: DiscreteFunction) -> DiscreteFunction:
    _require(f, g, "C")
    return convolve_spectral(f, g)


def convolve_E_spatial(f: DiscreteFunction, g: DiscreteFunction) -> DiscreteFunction:
    _require(f, g, "E")
    return convolve_spatial(f, g)


def convolve_E_spectral(f: DiscreteFunction, g: DiscreteFunction) -> DiscreteFunction:
    _require(f, g, "E")
    return convolve_spectral(f, g)


def convolve(f: DiscreteFunction, g: DiscreteFunction, method: str = "spectral") -> DiscreteFunction:
    if method == "spectral":
        return convolve_spectral(f, g)
    if method == "spatial":
        return convolve_spatial(f, g)
    raise ValueError(f"unknown convolution method {method!r}")


def product_identity_check(lam, x, y, data=None) -> float:
    """Residual of ``Phi(x) conj(Phi(y)) = sum_w Phi(x - w y)`` for one label.

    ``lam`` may be a LabelPoint or weight coordinates, ``x`` and ``y`` grid
    points or omega-check coordinates.
    """
    if isinstance(lam, LabelPoint):
        data = data or algebra_data(lam.algebra)
        lam = label_coords(lam)
    data = algebra_data(data)
    if isinstance(x, (GridPoint, EvenGridPoint)):
        x = point_coords(x)
    if isinstance(y, (GridPoint, EvenGridPoint)):
        y = point_coords(y)
    x = np.asarray([float(v) for v in x])
    y = np.asarray([float(v) for v in y])
    lhs = eval_C(lam, x, data) * np.conj(eval_C(lam, y, data))
    rhs = sum(
        eval_C(lam, x - np.asarray(w.act_point(y, data), dtype=float), data)
        for w in generate_weyl_group(data)
    )
    return float(abs(lhs - rhs))


@dataclass(frozen=True)
class Kernel:
    function: DiscreteFunction
    name: str = "custom"
    normalization: Normalization = "sum-preserving"


def dc_gain(k: Kernel) -> complex:
    """Factor by which convolving with ``k`` scales a constant function.

    Equals ``|group| * sum_x eps(x) g(x)``.
    """
    g = k.function
    eps = grid_weights(g.algebra, g.M, g.kind)
    return len(_group(g.algebra, g.kind)) * complex(np.sum(eps * g.values))


def normalize_kernel(k: Kernel, tol: float = 1e-12) -> Kernel:
    if k.normalization == "none":
        return k
    if k.normalization != "sum-preserving":
        raise KernelError(f"unknown normalization mode {k.normalization!r}")
    gain = dc_gain(k)
    scale = float(np.max(np.abs(k.function.values))) or 1.0
    if abs(gain) <= tol * scale:
        raise KernelError(f"kernel {k.name!r} has zero weighted sum and cannot preserve constants")
    return replace(k, function=k.function.like(k.function.values / gain))


def _support(algebra, M: int) -> tuple[tuple[int, int, int], ...]:
    m1, m2 = algebra_data(algebra).marks
    return ((M, 0, 0), (M - m1, 1, 0), (M - m2, 0, 1))


def builtin_kernel(name: str, algebra, M: int, kind: Kind = "C", normalize: bool = True) -> Kernel:
    """One of the three small orbit kernels, centred at the origin.

    The kernel lives on the origin and its two grid neighbours along
    omega1-check / M and omega2-check / M. For ``edge`` the centre weight is
    chosen so the eps-weighted sum vanishes (3 on A2).
    """
    if name not in RAW_KERNEL_WEIGHTS:
        raise KernelError(f"unknown kernel {name!r}; expected one of {', '.join(KERNEL_NAMES)}")
    data = algebra_data(algebra)
    support = _support(data, M)
    if min(s[0] for s in support) < 0:
        raise KernelError(
            f"{data.id.value} needs M >= {max(data.marks)} to place the kernel neighbours"
        )
    weights = list(RAW_KERNEL_WEIGHTS[name])
    table = _index_table(data.id, M, kind)
    pos = [int(table[0, s[1], s[2]]) for s in support]
    if name == "edge":
        eps = grid_weights(data, M, kind)
        weights[0] = -sum(eps[p] * wt for p, wt in zip(pos[1:], weights[1:])) / eps[pos[0]]
    values = np.zeros(len(grid_points(data, M, kind)), dtype=complex)
    for p, wt in zip(pos, weights):
        values[p] += wt
    k = Kernel(DiscreteFunction(data.id, M, kind, values), name, KERNEL_MODES[name])
    return normalize_kernel(k) if normalize else k
