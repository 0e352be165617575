"""Numerical checks of the orbit-transform identities for one (algebra, M, kind)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import algebra_data
from .convolution import convolve_spatial, convolve_spectral, product_identity_check
from .grids import enumerate_labels, enumerate_points, grid_weights, label_coords, point_coords
from .transforms import (
    DiscreteFunction,
    forward,
    grid_size,
    inverse_grid,
    norm_constants,
    verify_orthogonality,
)

GRAM_OFFDIAG_TOL = 1e-8
GRAM_DIAG_TOL = 1e-10
ROUND_TRIP_TOL = 1e-10
PARSEVAL_TOL = 1e-9
PRODUCT_TOL = 1e-10
CONVOLUTION_TOL = 1e-8


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value < self.tolerance)


def random_function(algebra, M: int, kind: str, rng: np.random.Generator) -> DiscreteFunction:
    n = grid_size(algebra, M, kind)
    return DiscreteFunction(algebra, M, kind, rng.normal(size=n) + 1j * rng.normal(size=n))


def round_trip_error(f: DiscreteFunction) -> float:
    back = inverse_grid(forward(f)).values
    return float(np.max(np.abs(back - f.values)) / np.max(np.abs(f.values)))


def parseval_error(f: DiscreteFunction) -> float:
    eps = grid_weights(f.algebra, f.M, f.kind)
    lhs = np.sum(eps * np.abs(f.values) ** 2)
    rhs = np.sum(norm_constants(f.algebra, f.M, f.kind) * np.abs(forward(f).coeffs) ** 2)
    return float(abs(lhs - rhs) / lhs)


def convolution_error(f: DiscreteFunction, g: DiscreteFunction) -> float:
    spatial = convolve_spatial(f, g).values
    spectral = convolve_spectral(f, g).values
    return float(np.max(np.abs(spatial - spectral)) / np.max(np.abs(spectral)))


def product_residual(algebra, M: int, rng: np.random.Generator, trials: int) -> float:
    """Worst residual of the product identity over random grid triples, over |W|^2."""
    data = algebra_data(algebra)
    labels = enumerate_labels(data, M)
    points = enumerate_points(data, M)
    worst = 0.0
    for _ in range(trials):
        lam = label_coords(labels[rng.integers(len(labels))])
        x = point_coords(points[rng.integers(len(points))])
        y = point_coords(points[rng.integers(len(points))])
        worst = max(worst, product_identity_check(lam, x, y, data))
    return worst / data.weyl_order**2


def run_checks(algebra, M: int, kind: str, seed: int = 0, trials: int = 5) -> list[Check]:
    rng = np.random.default_rng(seed)
    data = algebra_data(algebra)
    rep = verify_orthogonality(data, M, kind)
    checks = [
        Check("gram_offdiag_rel", rep.max_offdiag / rep.scale, GRAM_OFFDIAG_TOL),
        Check("gram_diag_rel", rep.max_diag_rel_err, GRAM_DIAG_TOL),
    ]
    fs = [random_function(data, M, kind, rng) for _ in range(trials)]
    gs = [random_function(data, M, kind, rng) for _ in range(trials)]
    checks.append(Check("round_trip_rel", max(round_trip_error(f) for f in fs), ROUND_TRIP_TOL))
    checks.append(Check("parseval_rel", max(parseval_error(f) for f in fs), PARSEVAL_TOL))
    checks.append(
        Check("convolution_theorem_rel", max(convolution_error(f, g) for f, g in zip(fs, gs)), CONVOLUTION_TOL)
    )
    checks.append(Check("product_identity", product_residual(data, M, rng, trials * 4), PRODUCT_TOL))
    return checks
