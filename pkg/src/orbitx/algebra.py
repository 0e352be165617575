"""Root-system data and Weyl group machinery for the rank-2 algebras A2, C2, G2.

Coordinate conventions used throughout the package:

* weights ``lam`` are given in the basis of fundamental weights (omega),
* points ``x`` are given in the basis of fundamental coweights (omega-check).

With the Cartan matrix ``C[i, j] = <alpha_i, alpha_j-check>`` the simple root
``alpha_i`` is row ``i`` of ``C`` in omega coordinates, the simple coroot
``alpha_i-check`` is column ``i`` of ``C`` in omega-check coordinates and the
pairing is ``<lam, x> = lam^T C^{-1} x``.

The Cartan matrices (long roots normalised to ``<alpha, alpha> = 2``)::

    A2  [[ 2, -1], [-1,  2]]   marks (1, 1)   det 3
    C2  [[ 2, -1], [-2,  2]]   marks (2, 1)   det 2   alpha_1 short
    G2  [[ 2, -3], [-1,  2]]   marks (2, 3)   det 1   alpha_2 short
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

FOLD_MAX_ITER = 10_000


class AlgebraId(str, enum.Enum):
    A2 = "A2"
    C2 = "C2"
    G2 = "G2"

    @classmethod
    def parse(cls, value: "AlgebraId | str") -> "AlgebraId":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown algebra {value!r}; expected one of A2, C2, G2") from None


class FoldError(RuntimeError):
    """Folding into the fundamental domain did not converge."""


Matrix2 = tuple[tuple[int, int], tuple[int, int]]


def _det(m) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _adj(m) -> Matrix2:
    return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))


def _matmul(a, b) -> Matrix2:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


@dataclass(frozen=True)
class AlgebraData:
    """Static descriptor of one rank-2 simple Lie algebra."""

    id: AlgebraId
    cartan: Matrix2
    marks: tuple[int, int]
    dual_marks: tuple[int, int]
    weyl_order: int
    even_order: int
    # squared lengths of the simple roots, long roots have length^2 = 2
    root_norms: tuple[Fraction, Fraction]

    @property
    def cartan_det(self) -> int:
        return _det(self.cartan)

    @property
    def cartan_adj(self) -> Matrix2:
        """Integer adjugate, ``C^{-1} = adj(C) / det(C)``."""
        return _adj(self.cartan)

    @property
    def cartan_inv(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        d = self.cartan_det
        a = self.cartan_adj
        return tuple(tuple(Fraction(a[i][j], d) for j in range(2)) for i in range(2))

    @property
    def cartan_array(self) -> np.ndarray:
        return np.array(self.cartan, dtype=np.int64)

    @property
    def cartan_inv_array(self) -> np.ndarray:
        return np.array(self.cartan_adj, dtype=float) / self.cartan_det

    @property
    def highest_coroot_coords(self) -> tuple[int, int]:
        """The coroot of the highest root in omega-check coordinates.

        ``<alpha_i, alpha_j> = C[i, j] * |alpha_j|^2 / 2``, and since the highest
        root is long its coroot equals the root itself.
        """
        m = self.marks
        out = []
        for j in range(2):
            v = sum(m[i] * self.cartan[i][j] * self.root_norms[j] / 2 for i in range(2))
            assert v.denominator == 1
            out.append(int(v))
        return tuple(out)


_DATA = {
    AlgebraId.A2: AlgebraData(
        AlgebraId.A2, ((2, -1), (-1, 2)), (1, 1), (1, 1), 6, 3, (Fraction(2), Fraction(2))
    ),
    AlgebraId.C2: AlgebraData(
        AlgebraId.C2, ((2, -1), (-2, 2)), (2, 1), (1, 2), 8, 4, (Fraction(1), Fraction(2))
    ),
    AlgebraId.G2: AlgebraData(
        AlgebraId.G2, ((2, -3), (-1, 2)), (2, 3), (3, 2), 12, 6, (Fraction(2), Fraction(2, 3))
    ),
}


def algebra_data(algebra: AlgebraId | str | AlgebraData) -> AlgebraData:
    if isinstance(algebra, AlgebraData):
        return algebra
    return _DATA[AlgebraId.parse(algebra)]


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element as an integer matrix acting on omega coordinates."""

    matrix: Matrix2
    det: int

    def act(self, lam: Sequence) -> tuple:
        m = self.matrix
        return (m[0][0] * lam[0] + m[0][1] * lam[1], m[1][0] * lam[0] + m[1][1] * lam[1])

    def compose(self, other: "WeylElement") -> "WeylElement":
        """``self o other``."""
        return WeylElement(_matmul(self.matrix, other.matrix), self.det * other.det)

    def point_matrix(self, data: AlgebraData) -> Matrix2:
        """Matrix of the same group element acting on omega-check coordinates.

        It is the contragredient with respect to the pairing, ``C A^{-T} C^{-1}``,
        so that ``pairing(w lam, w x) == pairing(lam, x)``.
        """
        return _point_matrix(self.matrix, data.id)

    def act_point(self, x: Sequence, data: AlgebraData) -> tuple:
        b = self.point_matrix(data)
        return (b[0][0] * x[0] + b[0][1] * x[1], b[1][0] * x[0] + b[1][1] * x[1])


@functools.lru_cache(maxsize=None)
def _point_matrix(matrix: Matrix2, algebra: AlgebraId) -> Matrix2:
    data = _DATA[algebra]
    c = data.cartan
    d = data.cartan_det
    a_det = _det(matrix)
    # A^{-T} = adj(A)^T / det(A); with det(A) = +-1 everything stays integral
    a_inv_t = tuple(tuple(_adj(matrix)[j][i] * a_det for j in range(2)) for i in range(2))
    num = _matmul(_matmul(c, a_inv_t), _adj(c))
    assert all(v % d == 0 for row in num for v in row), "point action not integral"
    return tuple(tuple(v // d for v in row) for row in num)


def simple_reflection(i: int, lam: Sequence, data: AlgebraData) -> tuple:
    """``r_i lam = lam - lam_i * alpha_i`` in omega coordinates."""
    if i not in (1, 2):
        raise ValueError("reflection index must be 1 or 2")
    row = data.cartan[i - 1]
    li = lam[i - 1]
    return (lam[0] - li * row[0], lam[1] - li * row[1])


def reflection_element(i: int, data: AlgebraData) -> WeylElement:
    row = data.cartan[i - 1]
    e = [[1, 0], [0, 1]]
    for r in range(2):
        e[r][i - 1] -= row[r]
    m = (tuple(e[0]), tuple(e[1]))
    assert _det(m) == -1
    return WeylElement(m, -1)


@functools.lru_cache(maxsize=None)
def _weyl_group(algebra: AlgebraId) -> tuple[WeylElement, ...]:
    data = _DATA[algebra]
    gens = [reflection_element(1, data), reflection_element(2, data)]
    identity = WeylElement(((1, 0), (0, 1)), 1)
    elements = [identity]
    seen = {identity.matrix}
    frontier = [identity]
    steps = 0
    limit = data.weyl_order**2
    # breadth-first over reduced words gives a deterministic order
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                steps += 1
                if steps > limit:
                    raise AssertionError(f"Weyl group of {algebra.value} did not close")
                v = g.compose(w)
                if v.matrix not in seen:
                    seen.add(v.matrix)
                    elements.append(v)
                    nxt.append(v)
        frontier = nxt
    if len(elements) != data.weyl_order:
        raise AssertionError(f"Weyl group of {algebra.value} has {len(elements)} elements")
    return tuple(elements)


def generate_weyl_group(data: AlgebraData | AlgebraId | str) -> tuple[WeylElement, ...]:
    """All elements of W, identity first, in breadth-first word-length order."""
    return _weyl_group(algebra_data(data).id)


def even_subgroup(group: Sequence[WeylElement]) -> tuple[WeylElement, ...]:
    return tuple(w for w in group if w.det == 1)


def odd_coset(group: Sequence[WeylElement]) -> tuple[WeylElement, ...]:
    return tuple(w for w in group if w.det == -1)


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction, np.integer)) and not isinstance(v, bool)


def pairing(lam: Sequence, x: Sequence, data: AlgebraData):
    """``<lam, x>`` for ``lam`` in omega and ``x`` in omega-check coordinates.

    Returns a Fraction when every input is an int or Fraction, a float otherwise.
    """
    if all(_is_exact(v) for v in (*lam, *x)):
        inv = data.cartan_inv
        return sum(Fraction(lam[i]) * inv[i][j] * Fraction(x[j]) for i in range(2) for j in range(2))
    inv = data.cartan_inv_array
    return float(np.asarray(lam, dtype=float) @ inv @ np.asarray(x, dtype=float))


def barycentric(x: Sequence, data: AlgebraData) -> tuple:
    """Scaled barycentric coordinates ``(1 - m1 x1 - m2 x2, x1, x2)``.

    ``x`` lies in the fundamental domain F exactly when all three are >= 0; on
    grid points of F_M they equal ``(s0, s1, s2) / M``.
    """
    m1, m2 = data.marks
    return (1 - m1 * x[0] - m2 * x[1], x[0], x[1])


def in_fundamental_domain(x: Sequence, data: AlgebraData, tol: float = 0.0) -> bool:
    return all(b >= -tol for b in barycentric(x, data))


def fold_lattice(
    y: np.ndarray, M: int, data: AlgebraData
) -> tuple[np.ndarray, np.ndarray]:
    """Fold integer points ``y = M x`` into ``M F`` with the affine Weyl group.

    ``y`` has shape ``(..., 2)``. Returns the folded points (same shape) and the
    parity (0 or 1) of the number of reflections used, which identifies the
    even-affine class of the input. Works in exact integer arithmetic.
    """
    y = np.array(y, dtype=np.int64, copy=True)
    shape = y.shape
    y = y.reshape(-1, 2)
    parity = np.zeros(len(y), dtype=np.int64)
    c = data.cartan_array
    m = np.array(data.marks, dtype=np.int64)
    xi = np.array(data.highest_coroot_coords, dtype=np.int64)
    for _ in range(FOLD_MAX_ITER):
        s0 = M - y @ m
        bary = np.stack([s0, y[:, 0], y[:, 1]], axis=1)
        worst = np.argmin(bary, axis=1)
        active = bary[np.arange(len(y)), worst] < 0
        if not active.any():
            return y.reshape(shape), parity.reshape(shape[:-1])
        for wall in (0, 1, 2):
            sel = active & (worst == wall)
            if not sel.any():
                continue
            if wall == 0:
                y[sel] = y[sel] + np.outer(s0[sel], xi)
            else:
                col = c[:, wall - 1]
                y[sel] = y[sel] - np.outer(y[sel, wall - 1], col)
            parity[sel] ^= 1
    raise FoldError("lattice fold did not converge")


def fold_with_parity(x: Sequence, data: AlgebraData, tol: float = 1e-12) -> tuple[tuple, int]:
    """Float version of :func:`fold_lattice` for a single point."""
    x0, x1 = float(x[0]), float(x[1])
    c = data.cartan
    m1, m2 = data.marks
    xi = data.highest_coroot_coords
    parity = 0
    for _ in range(FOLD_MAX_ITER):
        bary = (1.0 - m1 * x0 - m2 * x1, x0, x1)
        wall = min(range(3), key=lambda k: bary[k])
        if bary[wall] >= -tol:
            return (x0, x1), parity
        if wall == 0:
            s0 = bary[0]
            x0, x1 = x0 + s0 * xi[0], x1 + s0 * xi[1]
        else:
            v = (x0, x1)[wall - 1]
            x0, x1 = x0 - v * c[0][wall - 1], x1 - v * c[1][wall - 1]
        parity ^= 1
    raise FoldError(f"fold of {tuple(x)} did not converge in {FOLD_MAX_ITER} steps")


def fold_to_fundamental(x: Sequence, data: AlgebraData) -> tuple[float, float]:
    """Representative of the affine Weyl orbit of ``x`` inside F."""
    return fold_with_parity(x, data)[0]


def root_system(data: AlgebraData) -> set[tuple[int, int]]:
    """All roots in omega coordinates (W-orbit of the simple roots)."""
    roots = set()
    for w in generate_weyl_group(data):
        for row in data.cartan:
            roots.add(w.act(row))
    return roots
