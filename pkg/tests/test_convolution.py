import numpy as np
import pytest

from orbitx.algebra import algebra_data, generate_weyl_group
from orbitx.convolution import (
    RAW_KERNEL_WEIGHTS,
    Kernel,
    KernelError,
    builtin_kernel,
    convolve,
    convolve_C_spatial,
    convolve_E_spectral,
    convolve_spatial,
    convolve_spectral,
    dc_gain,
    fold_to_grid_index,
    normalize_kernel,
    product_identity_check,
)
from orbitx.grids import enumerate_labels, enumerate_points, grid_weights, point_lattice_coords
from orbitx.transforms import DimensionError, DiscreteFunction, grid_points, grid_size
from orbitx.verify import convolution_error, random_function

from conftest import ALGEBRAS

KINDS = ("C", "E")


def origin_indicator(name, M, kind):
    v = np.zeros(grid_size(name, M, kind), dtype=complex)
    v[0] = 1  # (M, 0, 0) comes first in the enumeration
    return DiscreteFunction(name, M, kind, v)


def group_order(name, kind):
    d = algebra_data(name)
    return d.weyl_order if kind == "C" else d.even_order


@pytest.mark.parametrize("name", ALGEBRAS)
@pytest.mark.parametrize("kind", KINDS)
def test_origin_indicator(name, kind, rng):
    g = random_function(name, 4, kind, rng)
    delta = origin_indicator(name, 4, kind)
    n = group_order(name, kind)
    for method in ("spatial", "spectral"):
        assert np.allclose(convolve(delta, g, method).values, n * g.values, atol=1e-12)
        assert np.allclose(convolve(g, delta, method).values, n * g.values, atol=1e-12)


@pytest.mark.parametrize("kind", KINDS)
def test_zero_kernel(kind, rng):
    f = random_function("C2", 5, kind, rng)
    zero = f.like(np.zeros_like(f.values))
    assert np.all(convolve_spatial(f, zero).values == 0)
    assert np.allclose(convolve_spectral(f, zero).values, 0)


@pytest.mark.parametrize("name", ALGEBRAS)
@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("M", [2, 4, 6])
def test_spatial_matches_spectral(name, kind, M, rng):
    for _ in range(3):
        f = random_function(name, M, kind, rng)
        g = random_function(name, M, kind, rng)
        assert convolution_error(f, g) < 1e-8


@pytest.mark.parametrize("name", ALGEBRAS)
def test_commutative_and_bilinear(name, rng):
    f1, f2, g = (random_function(name, 5, "C", rng) for _ in range(3))
    fg = convolve_spectral(f1, g).values
    assert np.allclose(fg, convolve_spectral(g, f1).values, rtol=1e-9, atol=1e-9 * np.abs(fg).max())
    assert np.allclose(convolve_spatial(f1, g).values, convolve_spatial(g, f1).values, atol=1e-9)
    a, b = 2 - 1j, 0.5
    lhs = convolve_spatial(f1.like(a * f1.values + b * f2.values), g).values
    rhs = a * convolve_spatial(f1, g).values + b * convolve_spatial(f2, g).values
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_mismatched_inputs(rng):
    with pytest.raises(DimensionError):
        convolve(random_function("A2", 3, "C", rng), random_function("A2", 4, "C", rng))
    with pytest.raises(DimensionError):
        convolve_C_spatial(random_function("A2", 3, "E", rng), random_function("A2", 3, "E", rng))
    with pytest.raises(DimensionError):
        convolve_E_spectral(random_function("A2", 3, "C", rng), random_function("A2", 3, "C", rng))
    with pytest.raises(ValueError):
        convolve(random_function("A2", 3, "C", rng), random_function("A2", 3, "C", rng), "fast")


@pytest.mark.parametrize("name", ALGEBRAS)
@pytest.mark.parametrize("kind", KINDS)
def test_fold_consistency(name, kind):
    # every u - w x must land exactly on a grid point
    d = algebra_data(name)
    for M in range(1, 7):
        pts = np.array([point_lattice_coords(p) for p in grid_points(d, M, kind)])
        group = generate_weyl_group(d)
        diffs = [u - np.asarray(w.act_point(x, d)) for u in pts for x in pts for w in group]
        idx = fold_to_grid_index(np.array(diffs), d, M, kind)
        assert idx.min() >= 0 and idx.max() < len(pts)


@pytest.mark.parametrize("name", ALGEBRAS)
def test_product_identity(name, rng):
    d = algebra_data(name)
    labels = enumerate_labels(d, 5)
    points = enumerate_points(d, 5)
    # trivial cases
    assert product_identity_check((0, 0), (0.3, 0.1), (0.2, 0.05), d) < 1e-12
    assert product_identity_check(labels[3], points[2], points[0]) < 1e-12
    for _ in range(20):
        lam = labels[rng.integers(len(labels))]
        x = points[rng.integers(len(points))]
        y = points[rng.integers(len(points))]
        assert product_identity_check(lam, x, y) < 1e-10 * d.weyl_order**2


def test_raw_kernel_weights():
    assert sum(RAW_KERNEL_WEIGHTS["mean"]) == pytest.approx(1)
    assert RAW_KERNEL_WEIGHTS["sharpen"][0] == 5
    assert RAW_KERNEL_WEIGHTS["edge"][0] == 3 and -1 in RAW_KERNEL_WEIGHTS["edge"]
    raw = builtin_kernel("edge", "A2", 4, normalize=False).function.values
    assert sorted(raw[raw != 0].real) == [-1, 3]


@pytest.mark.parametrize("name", ALGEBRAS)
@pytest.mark.parametrize("kind", KINDS)
def test_builtin_kernels_on_constants(name, kind):
    M = 6
    one = DiscreteFunction(name, M, kind, np.ones(grid_size(name, M, kind)))
    for kname in ("mean", "sharpen"):
        k = builtin_kernel(kname, name, M, kind)
        assert k.normalization == "sum-preserving"
        assert dc_gain(k) == pytest.approx(1)
        for method in ("spatial", "spectral"):
            assert np.allclose(convolve(one, k.function, method).values, 1, rtol=1e-9, atol=0)
    edge = builtin_kernel("edge", name, M, kind)
    assert edge.normalization == "none"
    assert np.max(np.abs(convolve(one, edge.function).values)) < 1e-9


@pytest.mark.parametrize("name", ALGEBRAS)
def test_identity_kernel(name, rng):
    k = normalize_kernel(Kernel(origin_indicator(name, 5, "C"), "identity"))
    f = random_function(name, 5, "C", rng)
    assert np.allclose(convolve(f, k.function).values, f.values, rtol=1e-9)


def test_kernel_errors():
    with pytest.raises(KernelError):
        builtin_kernel("blur", "A2", 4)
    with pytest.raises(KernelError):
        builtin_kernel("mean", "G2", 2)
    assert builtin_kernel("mean", "G2", 3).function.M == 3
    edge = builtin_kernel("edge", "C2", 4, normalize=False)
    with pytest.raises(KernelError):
        normalize_kernel(Kernel(edge.function, "edge", "sum-preserving"))
    with pytest.raises(KernelError):
        normalize_kernel(Kernel(edge.function, "edge", "bogus"))
    assert normalize_kernel(edge) is edge


@pytest.mark.parametrize("name", ALGEBRAS)
def test_kernel_symmetrization(name, rng):
    # the sum over W makes the effective kernel W-invariant: replacing g by
    # g(w' .) gives the same convolution for every w' in W
    d = algebra_data(name)
    M = 5
    pts = np.array([point_lattice_coords(p) for p in grid_points(d, M, "C")])
    eps = grid_weights(d, M, "C")
    f = random_function(d, M, "C", rng)
    g = builtin_kernel("edge", d, M).function
    group = generate_weyl_group(d)
    base = convolve_spatial(f, g).values
    for wp in group:
        out = np.zeros(len(pts), dtype=complex)
        for ui, u in enumerate(pts):
            for xi, x in enumerate(pts):
                for w in group:
                    y = np.asarray(wp.act_point(u - np.asarray(w.act_point(x, d)), d))
                    out[ui] += eps[xi] * f.values[xi] * g.values[fold_to_grid_index(y[None], d, M, "C")[0]]
        assert np.allclose(out, base, atol=1e-10)
