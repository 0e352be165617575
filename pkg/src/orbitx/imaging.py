"""Grayscale images on triangular orbit grids.

A square image is cut along its main diagonal. Each half is mapped affinely
onto the fundamental domain F of the chosen algebra: the top-left pixel goes
to the origin, the bottom-right pixel to omega2-check / m2, and the remaining
corner (bottom-left for the lower half, top-right for the upper half) to
omega1-check / m1. The diagonal is therefore the ``s1 = 0`` edge of both
triangles.
"""

from __future__ import annotations

import functools
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import LinearNDInterpolator, NearestNDInterpolator
from scipy.ndimage import map_coordinates
from scipy.spatial import Delaunay

from .algebra import AlgebraId, algebra_data
from .convolution import builtin_kernel, convolve_spectral
from .grids import enumerate_points, point_array
from .transforms import DiscreteFunction, forward, interpolate

DEFAULT_ALGEBRA = AlgebraId.C2


class PgmError(ValueError):
    """Malformed or unsupported PGM data."""


@dataclass
class Image:
    width: int
    height: int
    pixels: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=float).reshape(self.height, self.width)

    @classmethod
    def from_array(cls, arr) -> "Image":
        arr = np.asarray(arr, dtype=float)
        return cls(arr.shape[1], arr.shape[0], arr)

    def clamped(self) -> "Image":
        return Image(self.width, self.height, np.clip(self.pixels, 0.0, 1.0))


# --- PGM I/O -----------------------------------------------------------------


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    tokens: list[bytes] = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        if i >= n:
            raise PgmError("truncated PGM header")
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i : i + 1] != b"#":
            i += 1
        tokens.append(data[start:i])
    return tokens, i


def parse_pgm(data: bytes) -> Image:
    if data[:2] not in (b"P2", b"P5"):
        raise PgmError(f"unsupported format {data[:2]!r}; only grayscale P2/P5 is read")
    tokens, pos = _header_tokens(data, 4)
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise PgmError("malformed PGM header") from None
    if width <= 0 or height <= 0:
        raise PgmError("image dimensions must be positive")
    if maxval != 255:
        raise PgmError(f"unsupported maxval {maxval}; only 8-bit (255) images are read")
    count = width * height
    if tokens[0] == b"P5":
        # exactly one whitespace byte separates the header from the raster
        raster = data[pos + 1 : pos + 1 + count]
        if len(raster) != count:
            raise PgmError(f"truncated raster: expected {count} bytes, got {len(raster)}")
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        body = b" ".join(
            line.split(b"#", 1)[0] for line in data[pos:].splitlines()
        ).split()
        if len(body) < count:
            raise PgmError(f"truncated raster: expected {count} values, got {len(body)}")
        try:
            values = np.array([int(v) for v in body[:count]])
        except ValueError:
            raise PgmError("non-integer sample in P2 raster") from None
        if values.min() < 0 or values.max() > maxval:
            raise PgmError("sample out of range")
    return Image(width, height, values.reshape(height, width) / 255.0)


def load_image(path) -> Image:
    return parse_pgm(Path(path).read_bytes())


def quantize(pixels: np.ndarray) -> np.ndarray:
    """Clamp to [0, 1] and round half up to 8 bits."""
    return np.floor(np.clip(pixels, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def encode_pgm(img: Image) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + quantize(img.pixels).tobytes()


def save_image(img: Image, path) -> None:
    Path(path).write_bytes(encode_pgm(img))


# --- test image ----------------------------------------------------------------


def make_hexagon_test_image(size: int = 64) -> Image:
    """White flat-topped regular hexagon on black, circumradius 0.4 * size."""
    if size < 32:
        raise ValueError("hexagon test image needs size >= 32")
    r = 0.4 * size
    c = size / 2.0
    coords = np.arange(size) + 0.5
    y, x = np.meshgrid(coords - c, coords - c, indexing="ij")
    h = math.sqrt(3.0) / 2.0 * r
    inside = (np.abs(y) <= h) & (math.sqrt(3.0) * np.abs(x) + np.abs(y) <= 2.0 * h)
    return Image(size, size, inside.astype(float))


# --- R^2 baseline --------------------------------------------------------------

R2_KERNELS = {
    "mean": np.full((3, 3), 1.0 / 9.0),
    "sharpen": np.array([[0, -1, 0], [-1, 5, -1], [0, -1, 0]], dtype=float),
    "edge": np.array([[0, 0, -1], [-1, 3, 0], [0, 0, -1]], dtype=float),
    "identity": np.array([[0, 0, 0], [0, 1, 0], [0, 0, 0]], dtype=float),
}


def baseline_r2_filter(img: Image, kernel_name: str) -> Image:
    """``F(m, n) = sum_ij f(m + i, n + j) a_ij`` with replicated borders."""
    try:
        a = R2_KERNELS[kernel_name]
    except KeyError:
        raise ValueError(f"unknown R^2 kernel {kernel_name!r}") from None
    padded = np.pad(img.pixels, 1, mode="edge")
    h, w = img.height, img.width
    center = img.pixels
    # written around the centre pixel so constants map exactly to (sum a) * value
    out = np.zeros((h, w))
    for i in range(3):
        for j in range(3):
            if a[i, j] != 0.0 and (i, j) != (1, 1):
                out += a[i, j] * (padded[i : i + h, j : j + w] - center)
    out += a.sum() * center
    return Image(w, h, out).clamped()


# --- triangle sampling ---------------------------------------------------------


@dataclass
class TriangleSampling:
    """One half of a square image sampled on F_M.

    ``matrix`` and ``offset`` map pixel coordinates ``(row, col)`` to
    omega-check coordinates: ``x = matrix @ (row, col) + offset``.
    """

    function: DiscreteFunction
    matrix: np.ndarray
    offset: np.ndarray
    half: str
    size: int

    def to_pixels(self, x: np.ndarray) -> np.ndarray:
        return np.linalg.solve(self.matrix, (np.asarray(x) - self.offset).T).T

    def to_domain(self, rc: np.ndarray) -> np.ndarray:
        return np.asarray(rc) @ self.matrix.T + self.offset


def _domain_to_pixel_matrix(algebra, half: str, size: int) -> np.ndarray:
    """Linear map from omega-check coordinates to pixel ``(row, col)``."""
    m1, m2 = algebra_data(algebra).marks
    n = size - 1
    if half == "lower":
        # row = n (m1 x1 + m2 x2), col = n m2 x2
        return n * np.array([[m1, m2], [0, m2]], dtype=float)
    if half == "upper":
        return n * np.array([[0, m2], [m1, m2]], dtype=float)
    raise ValueError("half must be 'lower' or 'upper'")


def _pixel_affine(algebra, half: str, size: int) -> tuple[np.ndarray, np.ndarray]:
    fwd = _domain_to_pixel_matrix(algebra, half, size)
    return np.linalg.inv(fwd), np.zeros(2)


def grid_pixel_positions(algebra, M: int, half: str, size: int) -> np.ndarray:
    """``(row, col)`` of every F_M grid point inside the square."""
    x = point_array(enumerate_points(algebra, M)) / M
    return x @ _domain_to_pixel_matrix(algebra, half, size).T


def _check_density(algebra, M: int, size: int) -> None:
    spacing = (size - 1) * max(algebra_data(algebra).marks) / M
    if spacing > 1.0 + 1e-9:
        warnings.warn(
            f"grid spacing {spacing:.2f} px along the triangle legs exceeds the pixel spacing; "
            f"increase M to at least {math.ceil((size - 1) * max(algebra_data(algebra).marks))}",
            stacklevel=3,
        )


def split_square(img: Image, algebra=DEFAULT_ALGEBRA, M: int | None = None):
    """Sample both halves of a square image on F_M by bilinear interpolation."""
    if img.width != img.height:
        raise ValueError(f"image must be square, got {img.width}x{img.height}")
    data = algebra_data(algebra)
    n = img.width
    M = n if M is None else M
    _check_density(data, M, n)
    halves = []
    for half in ("lower", "upper"):
        rc = grid_pixel_positions(data, M, half, n)
        vals = map_coordinates(img.pixels, rc.T, order=1, mode="nearest")
        mat, off = _pixel_affine(data, half, n)
        halves.append(TriangleSampling(DiscreteFunction(data.id, M, "C", vals), mat, off, half, n))
    return tuple(halves)


@functools.lru_cache(maxsize=16)
def _triangulation(algebra: AlgebraId, M: int, half: str, size: int) -> Delaunay:
    return Delaunay(grid_pixel_positions(algebra, M, half, size))


def _half_mask(size: int, half: str) -> np.ndarray:
    r, c = np.indices((size, size))
    return r >= c if half == "lower" else r < c


def _evaluate_half(t: TriangleSampling, rc: np.ndarray, method: str) -> np.ndarray:
    f = t.function
    if method == "barycentric":
        tri = _triangulation(f.algebra, f.M, t.half, t.size)
        vals = np.real(f.values)
        out = LinearNDInterpolator(tri, vals)(rc)
        missing = np.isnan(out)
        if missing.any():
            out[missing] = NearestNDInterpolator(tri.points, vals)(rc[missing])
        return out
    if method == "orbit":
        return np.real(interpolate(forward(f), t.to_domain(rc)))
    raise ValueError(f"unknown reassembly method {method!r}")


def reassemble(
    a: TriangleSampling, b: TriangleSampling, width: int, height: int, method: str = "barycentric"
) -> Image:
    """Rebuild the square image from its two triangle samplings.

    Diagonal pixels are taken from the lower half.
    """
    if width != height or a.size != width or b.size != width:
        raise ValueError("samplings do not match the requested image size")
    out = np.zeros((height, width))
    for t in (a, b):
        mask = _half_mask(width, t.half)
        rc = np.argwhere(mask).astype(float)
        out[mask] = _evaluate_half(t, rc, method)
    return Image(width, height, out).clamped()


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("ORBITX_THREADS", "2") or 2)
    return max(1, min(2, threads))


def filter_image(
    img: Image,
    kernel_name: str,
    algebra=DEFAULT_ALGEBRA,
    M: int | None = None,
    method: str = "barycentric",
    threads: int | None = None,
) -> Image:
    """Split, convolve each half with an orbit kernel, reassemble and clamp."""
    halves = split_square(img, algebra, M)
    f0 = halves[0].function
    kernel = builtin_kernel(kernel_name, f0.algebra, f0.M)

    def run(t: TriangleSampling) -> TriangleSampling:
        out = convolve_spectral(t.function, kernel.function)
        return TriangleSampling(out.like(out.values.real), t.matrix, t.offset, t.half, t.size)

    with ThreadPoolExecutor(max_workers=_threads(threads)) as pool:
        filtered = list(pool.map(run, halves))
    return reassemble(*filtered, img.width, img.height, method=method)
