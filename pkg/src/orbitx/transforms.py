"""C- and E-orbit functions and the discrete orbit transforms on F_M / F_M^e.

Grid evaluation avoids floating-point phases: for a label ``lam`` and a grid
point ``x = y / M`` the pairing is ``lam^T adj(C) y / (c M)`` with an integer
numerator, so every exponential is an exact lookup into the ``c M``-th roots
of unity.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .algebra import AlgebraData, AlgebraId, algebra_data, even_subgroup, generate_weyl_group
from .grids import (
    enumerate_labels,
    enumerate_labels_even,
    enumerate_points,
    enumerate_points_even,
    grid_weights,
    label_array,
    label_weights,
    point_array,
)

Kind = Literal["C", "E"]


class DimensionError(ValueError):
    """Operands do not live on the same grid."""


def _kind(kind: str) -> Kind:
    k = str(kind).upper()
    if k not in ("C", "E"):
        raise ValueError(f"kind must be 'C' or 'E', got {kind!r}")
    return k


def _group(data: AlgebraData, kind: Kind):
    W = generate_weyl_group(data)
    return W if kind == "C" else even_subgroup(W)


def grid_size(algebra, M: int, kind: Kind) -> int:
    if _kind(kind) == "C":
        return len(enumerate_points(algebra, M))
    return len(enumerate_points_even(algebra, M))


def grid_points(algebra, M: int, kind: Kind):
    return enumerate_points(algebra, M) if _kind(kind) == "C" else enumerate_points_even(algebra, M)


def grid_labels(algebra, M: int, kind: Kind):
    return enumerate_labels(algebra, M) if _kind(kind) == "C" else enumerate_labels_even(algebra, M)


@dataclass
class DiscreteFunction:
    """Complex samples on the C grid F_M or the E grid F_M^e."""

    algebra: AlgebraId
    M: int
    kind: Kind
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.algebra = algebra_data(self.algebra).id
        self.kind = _kind(self.kind)
        self.values = np.asarray(self.values, dtype=complex).reshape(-1)
        n = grid_size(self.algebra, self.M, self.kind)
        if self.values.shape != (n,):
            raise DimensionError(f"expected {n} values, got {self.values.size}")

    @property
    def points(self):
        return grid_points(self.algebra, self.M, self.kind)

    def like(self, values) -> "DiscreteFunction":
        return DiscreteFunction(self.algebra, self.M, self.kind, values)


@dataclass
class Spectrum:
    """Orbit-transform coefficients aligned with the label enumeration."""

    algebra: AlgebraId
    M: int
    kind: Kind
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.algebra = algebra_data(self.algebra).id
        self.kind = _kind(self.kind)
        self.coeffs = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        n = len(grid_labels(self.algebra, self.M, self.kind))
        if self.coeffs.shape != (n,):
            raise DimensionError(f"expected {n} coefficients, got {self.coeffs.size}")

    @property
    def labels(self):
        return grid_labels(self.algebra, self.M, self.kind)


def _orbit_sum(lam, x, data: AlgebraData, group) -> complex:
    inv = data.cartan_inv_array
    x = np.asarray(x, dtype=float)
    lam = np.asarray(lam, dtype=float)
    mats = np.array([w.matrix for w in group], dtype=float)
    phases = (mats @ lam) @ inv @ x
    return complex(np.exp(2j * np.pi * phases).sum())


def eval_C(lam: Sequence, x: Sequence, data) -> complex:
    """``Phi_lam(x) = sum over W of exp(2 pi i <w lam, x>)``."""
    data = algebra_data(data)
    return _orbit_sum(lam, x, data, generate_weyl_group(data))


def eval_E(lam: Sequence, x: Sequence, data) -> complex:
    """``Xi_lam(x)``: the same sum restricted to the even Weyl group."""
    data = algebra_data(data)
    return _orbit_sum(lam, x, data, even_subgroup(generate_weyl_group(data)))


def eval_orbit_function(kind: Kind, lam, x, data) -> complex:
    return eval_C(lam, x, data) if _kind(kind) == "C" else eval_E(lam, x, data)


def orbit_matrix_at(algebra, kind: Kind, lam: np.ndarray, y: np.ndarray, M: int) -> np.ndarray:
    """Orbit functions of integral weights ``lam`` (n, 2) at points ``y / M`` (k, 2).

    Returns an ``(n, k)`` complex array using exact integer phases.
    """
    data = algebra_data(algebra)
    group = _group(data, _kind(kind))
    period = data.cartan_det * M
    roots = np.exp(2j * np.pi * np.arange(period) / period)
    adj_y = np.asarray(y, dtype=np.int64) @ np.array(data.cartan_adj, dtype=np.int64).T
    lam = np.asarray(lam, dtype=np.int64)
    out = np.zeros((len(lam), len(adj_y)), dtype=complex)
    for w in group:
        wl = lam @ np.array(w.matrix, dtype=np.int64).T
        out += roots[np.mod(wl @ adj_y.T, period)]
    return out


@functools.lru_cache(maxsize=8)
def _basis(algebra: AlgebraId, M: int, kind: Kind) -> np.ndarray:
    labels = grid_labels(algebra, M, kind)
    points = grid_points(algebra, M, kind)
    mat = orbit_matrix_at(algebra, kind, label_array(labels), point_array(points), M)
    mat.setflags(write=False)
    return mat


def orbit_basis(algebra, M: int, kind: Kind) -> np.ndarray:
    """Cached ``(labels, points)`` matrix of Phi (kind C) or Xi (kind E) values."""
    return _basis(algebra_data(algebra).id, int(M), _kind(kind))


def norm_constants(algebra, M: int, kind: Kind) -> np.ndarray:
    """``c |W| M^2 h`` (C) or ``c |W^e| M^2 h^e`` (E) for every label."""
    data = algebra_data(algebra)
    kind = _kind(kind)
    order = data.weyl_order if kind == "C" else data.even_order
    return data.cartan_det * order * M**2 * label_weights(data, M, kind)


def _check_pair(f: DiscreteFunction, g: DiscreteFunction, kind: Kind | None = None) -> None:
    if (f.algebra, f.M, f.kind) != (g.algebra, g.M, g.kind):
        raise DimensionError(
            f"grid mismatch: ({f.algebra.value}, {f.M}, {f.kind}) vs ({g.algebra.value}, {g.M}, {g.kind})"
        )
    if kind is not None and f.kind != kind:
        raise DimensionError(f"expected a {kind}-grid function, got {f.kind}")


def scalar_product(f: DiscreteFunction, g: DiscreteFunction) -> complex:
    _check_pair(f, g)
    eps = grid_weights(f.algebra, f.M, f.kind)
    return complex(np.sum(eps * f.values * np.conj(g.values)))


def scalar_product_C(f: DiscreteFunction, g: DiscreteFunction) -> complex:
    _check_pair(f, g, "C")
    return scalar_product(f, g)


def scalar_product_E(f: DiscreteFunction, g: DiscreteFunction) -> complex:
    _check_pair(f, g, "E")
    return scalar_product(f, g)


def forward(f: DiscreteFunction) -> Spectrum:
    """Expansion coefficients of ``f`` in the orbit basis of its grid kind."""
    basis = orbit_basis(f.algebra, f.M, f.kind)
    eps = grid_weights(f.algebra, f.M, f.kind)
    coeffs = np.conj(basis) @ (eps * f.values) / norm_constants(f.algebra, f.M, f.kind)
    return Spectrum(f.algebra, f.M, f.kind, coeffs)


def forward_C(f: DiscreteFunction) -> Spectrum:
    if f.kind != "C":
        raise DimensionError("forward_C needs a C-grid function")
    return forward(f)


def forward_E(f: DiscreteFunction) -> Spectrum:
    if f.kind != "E":
        raise DimensionError("forward_E needs an E-grid function")
    return forward(f)


def inverse_grid(s: Spectrum) -> DiscreteFunction:
    basis = orbit_basis(s.algebra, s.M, s.kind)
    return DiscreteFunction(s.algebra, s.M, s.kind, s.coeffs @ basis)


def inverse_C_grid(s: Spectrum) -> DiscreteFunction:
    if s.kind != "C":
        raise DimensionError("inverse_C_grid needs a C spectrum")
    return inverse_grid(s)


def inverse_E_grid(s: Spectrum) -> DiscreteFunction:
    if s.kind != "E":
        raise DimensionError("inverse_E_grid needs an E spectrum")
    return inverse_grid(s)


def interpolate(s: Spectrum, x: np.ndarray) -> np.ndarray:
    """Evaluate the interpolant ``sum_lam F_lam Phi_lam(x)`` at arbitrary points.

    ``x`` has shape ``(k, 2)`` in omega-check coordinates.
    """
    data = algebra_data(s.algebra)
    x = np.atleast_2d(np.asarray(x, dtype=float))
    group = _group(data, s.kind)
    lam = label_array(s.labels).astype(float)
    pair = data.cartan_inv_array @ x.T
    out = np.zeros(len(x), dtype=complex)
    for w in group:
        wl = lam @ np.array(w.matrix, dtype=float).T
        out += s.coeffs @ np.exp(2j * np.pi * (wl @ pair))
    return out


def inverse_C(s: Spectrum, x: Sequence) -> complex:
    if s.kind != "C":
        raise DimensionError("inverse_C needs a C spectrum")
    return complex(interpolate(s, np.asarray(x, dtype=float).reshape(1, 2))[0])


def inverse_E(s: Spectrum, x: Sequence) -> complex:
    if s.kind != "E":
        raise DimensionError("inverse_E needs an E spectrum")
    return complex(interpolate(s, np.asarray(x, dtype=float).reshape(1, 2))[0])


def basis_function(algebra, M: int, kind: Kind, index: int) -> DiscreteFunction:
    """The orbit function of the ``index``-th label sampled on its grid."""
    return DiscreteFunction(algebra, M, kind, orbit_basis(algebra, M, kind)[index])


@dataclass(frozen=True)
class OrthogonalityReport:
    algebra: AlgebraId
    M: int
    kind: Kind
    size: int
    max_offdiag: float
    max_diag_rel_err: float
    scale: float

    def passed(self, offdiag_tol: float = 1e-8, diag_tol: float = 1e-10) -> bool:
        return self.max_offdiag < offdiag_tol * self.scale and self.max_diag_rel_err < diag_tol


def gram_matrix(algebra, M: int, kind: Kind) -> np.ndarray:
    basis = orbit_basis(algebra, M, kind)
    eps = grid_weights(algebra, M, kind)
    return (basis * eps) @ np.conj(basis).T


def verify_orthogonality(algebra, M: int, kind: Kind) -> OrthogonalityReport:
    """Compare the Gram matrix of the orbit basis with the closed-form norms."""
    data = algebra_data(algebra)
    kind = _kind(kind)
    gram = gram_matrix(data, M, kind)
    expected = norm_constants(data, M, kind)
    diag = np.diag(gram)
    off = gram - np.diag(diag)
    order = data.weyl_order if kind == "C" else data.even_order
    return OrthogonalityReport(
        algebra=data.id,
        M=M,
        kind=kind,
        size=len(diag),
        max_offdiag=float(np.max(np.abs(off))) if off.size else 0.0,
        max_diag_rel_err=float(np.max(np.abs(diag - expected) / expected)),
        scale=float(data.cartan_det * order * M**2),
    )
