import warnings
from pathlib import Path

import numpy as np
import pytest
from scipy.ndimage import rotate

from orbitx.imaging import (
    Image,
    PgmError,
    baseline_r2_filter,
    encode_pgm,
    filter_image,
    grid_pixel_positions,
    load_image,
    make_hexagon_test_image,
    parse_pgm,
    quantize,
    reassemble,
    save_image,
    split_square,
)

DATA = Path(__file__).parent / "data"

# C2 at M == width has 2-pixel leg spacing; the density warning is expected there
pytestmark = pytest.mark.filterwarnings("ignore:grid spacing:UserWarning")


def gradient(n):
    r, c = np.indices((n, n))
    return Image.from_array((0.3 * r + 0.7 * c) / (n - 1))


# --- PGM ---------------------------------------------------------------------


def test_p2_example():
    img = parse_pgm(b"P2 2 2 255 0 255 128 64")
    assert np.allclose(img.pixels.ravel(), [0, 1, 128 / 255, 64 / 255])


def test_p2_with_comment():
    img = parse_pgm(b"P2\n# made by hand\n2 1\n255\n10 20\n")
    assert np.allclose(img.pixels.ravel(), [10 / 255, 20 / 255])


def test_p5_round_trip(tmp_path, rng):
    raw = rng.integers(0, 256, size=(7, 5), dtype=np.uint8)
    data = b"P5\n5 7\n255\n" + raw.tobytes()
    path = tmp_path / "in.pgm"
    path.write_bytes(data)
    img = load_image(path)
    assert (img.width, img.height) == (5, 7)
    out = tmp_path / "out.pgm"
    save_image(img, out)
    assert out.read_bytes() == data


@pytest.mark.parametrize(
    "data",
    [
        b"P6\n2 2\n255\n" + bytes(12),
        b"P5\n2 2\n65535\n" + bytes(8),
        b"P5\n2 2\n15\n" + bytes(4),
        b"P5\n2 2\n255\n" + bytes(3),
        b"P2 2 2 255 0 255 128",
        b"P5\n2\n",
        b"P2 2 2 255 0 255 300 1",
        b"",
    ],
)
def test_pgm_errors(data):
    with pytest.raises(PgmError):
        parse_pgm(data)


def test_quantize_round_half_up():
    assert list(quantize(np.array([0.0, 1.0, 0.5 / 255, 1.49 / 255, -0.2, 1.3]))) == [0, 255, 1, 1, 0, 255]


# --- test image ----------------------------------------------------------------


def test_hexagon_basics():
    img = make_hexagon_test_image(64)
    assert img.pixels[32, 32] == 1
    for r, c in [(0, 0), (0, 63), (63, 0), (63, 63)]:
        assert img.pixels[r, c] == 0
    # flat top: the top edge is a horizontal run
    rows = np.where(img.pixels.any(axis=1))[0]
    top = img.pixels[rows[0]]
    assert top.sum() > 10
    with pytest.raises(ValueError):
        make_hexagon_test_image(16)


@pytest.mark.parametrize("size", [64, 96])
def test_hexagon_six_fold_symmetry(size):
    img = make_hexagon_test_image(size).pixels
    for k in range(1, 6):
        rot = rotate(img, 60 * k, reshape=False, order=1)
        diff = np.abs(rot - img) > 0.5
        # disagreements only in a one-pixel band along the boundary
        edge = np.zeros_like(img, dtype=bool)
        inside = img > 0.5
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                edge |= np.roll(np.roll(inside, dr, 0), dc, 1) != inside
        assert not (diff & ~edge).any()
    assert np.array_equal(img, img[::-1, :]) and np.array_equal(img, img[:, ::-1])


def test_hexagon_golden():
    golden = (DATA / "hexagon64.pgm").read_bytes()
    assert encode_pgm(make_hexagon_test_image(64)) == golden


# --- R^2 baseline ----------------------------------------------------------------


def test_r2_single_pixel_mean():
    px = np.zeros((9, 9))
    px[4, 4] = 1
    out = baseline_r2_filter(Image.from_array(px), "mean").pixels
    expected = np.zeros((9, 9))
    expected[3:6, 3:6] = 1 / 9
    assert np.allclose(out, expected, atol=1e-15)


def test_r2_constant_and_identity(rng):
    for v in np.append(np.arange(256) / 255, rng.uniform(size=50)):
        const = Image.from_array(np.full((6, 6), v))
        assert np.array_equal(baseline_r2_filter(const, "mean").pixels, const.pixels)
        assert np.array_equal(baseline_r2_filter(const, "edge").pixels, np.zeros((6, 6)))
    img = Image.from_array(rng.uniform(size=(10, 10)))
    assert np.array_equal(baseline_r2_filter(img, "identity").pixels, img.pixels)
    with pytest.raises(ValueError):
        baseline_r2_filter(img, "emboss")


def test_r2_sharpen_increases_contrast():
    blur = baseline_r2_filter(make_hexagon_test_image(64), "mean")
    sharp = baseline_r2_filter(blur, "sharpen")
    assert sharp.pixels.std() > blur.pixels.std()
    assert sharp.pixels.min() >= 0 and sharp.pixels.max() <= 1


# --- split / reassemble -----------------------------------------------------------


@pytest.mark.parametrize("algebra", ["A2", "C2", "G2"])
def test_split_constant_image(algebra):
    n = 32
    img = Image.from_array(np.full((n, n), 0.6))
    M = n * 3 if algebra == "G2" else n * 2
    a, b = split_square(img, algebra, M)
    assert np.allclose(a.function.values, 0.6, atol=1e-15)
    assert np.allclose(b.function.values, 0.6, atol=1e-15)
    back = reassemble(a, b, n, n)
    assert np.allclose(back.pixels, 0.6, atol=1e-14)


@pytest.mark.parametrize("algebra, M", [("A2", 64), ("C2", 64), ("G2", 96)])
def test_diagonal_consistency(algebra, M, rng):
    img = Image.from_array(rng.uniform(size=(32, 32)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a, b = split_square(img, algebra, M)
    on_diag = [i for i, p in enumerate(a.function.points) if p.s[1] == 0]
    assert on_diag
    pa = grid_pixel_positions(algebra, M, "lower", 32)[on_diag]
    pb = grid_pixel_positions(algebra, M, "upper", 32)[on_diag]
    assert np.allclose(pa, pb)
    assert np.allclose(pa[:, 0], pa[:, 1])
    assert np.max(np.abs(a.function.values[on_diag] - b.function.values[on_diag])) < 1e-12


def test_split_rejects_non_square():
    with pytest.raises(ValueError):
        split_square(Image.from_array(np.zeros((4, 5))))


def test_density_warning():
    img = Image.from_array(np.zeros((32, 32)))
    with pytest.warns(UserWarning, match="grid spacing"):
        split_square(img, "C2", 16)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        split_square(img, "A2", 32)


def test_gradient_round_trip():
    n = 64
    img = gradient(n)
    a, b = split_square(img, "C2", 64)
    back = reassemble(a, b, n, n)
    r, c = np.indices((n, n))
    away = np.abs(r - c) > 2
    assert np.mean(np.abs(back.pixels - img.pixels)[away]) <= 1 / 255


def test_orbit_reassembly_constant():
    img = Image.from_array(np.full((32, 32), 0.25))
    a, b = split_square(img, "C2", 32)
    back = reassemble(a, b, 32, 32, method="orbit")
    assert np.allclose(back.pixels, 0.25, atol=1e-10)
    with pytest.raises(ValueError):
        reassemble(a, b, 32, 32, method="cubic")


def test_reassemble_clamps():
    img = Image.from_array(np.full((32, 32), 0.5))
    a, b = split_square(img, "C2", 32)
    a.function = a.function.like(a.function.values * 3)
    b.function = b.function.like(b.function.values - 2)
    back = reassemble(a, b, 32, 32)
    assert back.pixels.min() >= 0 and back.pixels.max() <= 1


# --- orbit filtering ----------------------------------------------------------


@pytest.mark.parametrize("algebra", ["A2", "C2"])
def test_filter_constant_image(algebra):
    n = 32
    img = Image.from_array(np.full((n, n), 0.7))
    mean = filter_image(img, "mean", algebra, n)
    assert np.max(np.abs(mean.pixels - 0.7)) <= 1e-6 * 0.7
    edge = filter_image(img, "edge", algebra, n)
    assert np.max(edge.pixels) <= 1 / 255


def test_filter_methods_and_threads():
    img = make_hexagon_test_image(32)
    one = filter_image(img, "mean", "C2", 32, threads=1)
    two = filter_image(img, "mean", "C2", 32, threads=2)
    assert np.array_equal(one.pixels, two.pixels)
    orbit = filter_image(img, "mean", "C2", 32, method="orbit")
    assert np.mean(np.abs(orbit.pixels - one.pixels)) < 0.05


def test_filter_blurs_and_sharpens():
    img = make_hexagon_test_image(32)
    blur = filter_image(img, "mean", "C2", 32)
    assert blur.pixels.std() < img.pixels.std()
    sharp = filter_image(blur, "sharpen", "C2", 32)
    assert sharp.pixels.std() > blur.pixels.std()
