"""Point grids F_M, label grids Lambda_M, their even extensions and weights.

Grid points are stored by their integer coordinates ``s = (s0, s1, s2)`` with
``s0 + m1 s1 + m2 s2 = M``; the point itself is ``(s1/M, s2/M)`` in
omega-check coordinates. Labels ``t = (t0, t1, t2)`` satisfy
``t0 + m1v t1 + m2v t2 = M`` and stand for the weight ``(t1, t2)``.

The even grids add the image of the interior under the simple reflection
``r_1``. Such points are stored as their interior base point plus
``reflected=True``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .algebra import (
    AlgebraData,
    AlgebraId,
    WeylElement,
    algebra_data,
    simple_reflection,
)

EVEN_REFLECTION = 1


@dataclass(frozen=True)
class GridPoint:
    s: tuple[int, int, int]
    M: int
    algebra: AlgebraId

    def __post_init__(self):
        object.__setattr__(self, "algebra", AlgebraId.parse(self.algebra))
        object.__setattr__(self, "s", tuple(int(v) for v in self.s))
        m1, m2 = algebra_data(self.algebra).marks
        s0, s1, s2 = self.s
        if min(self.s) < 0 or s0 + m1 * s1 + m2 * s2 != self.M:
            raise ValueError(f"{self.s} is not a point of F_{self.M} for {self.algebra.value}")


@dataclass(frozen=True)
class LabelPoint:
    t: tuple[int, int, int]
    M: int
    algebra: AlgebraId

    def __post_init__(self):
        object.__setattr__(self, "algebra", AlgebraId.parse(self.algebra))
        object.__setattr__(self, "t", tuple(int(v) for v in self.t))
        d1, d2 = algebra_data(self.algebra).dual_marks
        t0, t1, t2 = self.t
        if min(self.t) < 0 or t0 + d1 * t1 + d2 * t2 != self.M:
            raise ValueError(f"{self.t} is not a label of Lambda_{self.M} for {self.algebra.value}")


@dataclass(frozen=True)
class EvenGridPoint:
    base: GridPoint
    reflected: bool = False

    def __post_init__(self):
        if self.reflected and min(self.base.s) == 0:
            raise ValueError("only interior points have a reflected copy")

    @property
    def sector(self) -> str:
        return "reflected" if self.reflected else "F"


@dataclass(frozen=True)
class EvenLabelPoint:
    base: LabelPoint
    reflected: bool = False

    def __post_init__(self):
        if self.reflected and min(self.base.t) == 0:
            raise ValueError("only interior labels have a reflected copy")

    @property
    def sector(self) -> str:
        return "reflected" if self.reflected else "F"


AnyPoint = Union[GridPoint, EvenGridPoint]
AnyLabel = Union[LabelPoint, EvenLabelPoint]


def _solutions(M: int, w1: int, w2: int) -> list[tuple[int, int, int]]:
    out = []
    for a in range(M // w1 + 1):
        for b in range((M - w1 * a) // w2 + 1):
            out.append((M - w1 * a - w2 * b, a, b))
    return out


@functools.lru_cache(maxsize=64)
def _points(algebra: AlgebraId, M: int) -> tuple[GridPoint, ...]:
    m1, m2 = algebra_data(algebra).marks
    return tuple(GridPoint(s, M, algebra) for s in _solutions(M, m1, m2))


@functools.lru_cache(maxsize=64)
def _labels(algebra: AlgebraId, M: int) -> tuple[LabelPoint, ...]:
    d1, d2 = algebra_data(algebra).dual_marks
    return tuple(LabelPoint(t, M, algebra) for t in _solutions(M, d1, d2))


def _check_M(M: int) -> None:
    if int(M) != M or M < 1:
        raise ValueError(f"M must be a positive integer, got {M!r}")


def enumerate_points(algebra, M: int) -> tuple[GridPoint, ...]:
    """All points of F_M, ordered lexicographically by (s1, s2)."""
    _check_M(M)
    return _points(algebra_data(algebra).id, int(M))


def enumerate_labels(algebra, M: int) -> tuple[LabelPoint, ...]:
    """All labels of Lambda_M, ordered lexicographically by (t1, t2)."""
    _check_M(M)
    return _labels(algebra_data(algebra).id, int(M))


def _check_reflection(i: int) -> None:
    if i != EVEN_REFLECTION:
        # the weights in the even tables assume the r_1 copy
        raise ValueError(f"only r_{EVEN_REFLECTION} is supported for the even grids")


@functools.lru_cache(maxsize=64)
def _points_even(algebra: AlgebraId, M: int) -> tuple[EvenGridPoint, ...]:
    base = _points(algebra, M)
    return tuple(EvenGridPoint(p) for p in base) + tuple(
        EvenGridPoint(p, True) for p in base if min(p.s) > 0
    )


@functools.lru_cache(maxsize=64)
def _labels_even(algebra: AlgebraId, M: int) -> tuple[EvenLabelPoint, ...]:
    base = _labels(algebra, M)
    return tuple(EvenLabelPoint(l) for l in base) + tuple(
        EvenLabelPoint(l, True) for l in base if min(l.t) > 0
    )


def enumerate_points_even(algebra, M: int, i: int = EVEN_REFLECTION) -> tuple[EvenGridPoint, ...]:
    """F_M^e: the points of F_M followed by the r_i images of its interior."""
    _check_M(M)
    _check_reflection(i)
    return _points_even(algebra_data(algebra).id, int(M))


def enumerate_labels_even(algebra, M: int, i: int = EVEN_REFLECTION) -> tuple[EvenLabelPoint, ...]:
    _check_M(M)
    _check_reflection(i)
    return _labels_even(algebra_data(algebra).id, int(M))


def point_lattice_coords(p: AnyPoint) -> tuple[int, int]:
    """Integer omega-check coordinates of ``M x``."""
    if isinstance(p, EvenGridPoint):
        y = p.base.s[1:]
        if p.reflected:
            # r_1 on points subtracts x_1 times the first coroot (column 1 of C)
            c = algebra_data(p.base.algebra).cartan
            y = (y[0] - y[0] * c[0][0], y[1] - y[0] * c[1][0])
        return y
    return p.s[1:]


def point_coords(p: AnyPoint) -> tuple[Fraction, Fraction]:
    M = p.base.M if isinstance(p, EvenGridPoint) else p.M
    y = point_lattice_coords(p)
    return (Fraction(y[0], M), Fraction(y[1], M))


def label_coords(l: AnyLabel) -> tuple[int, int]:
    if isinstance(l, EvenLabelPoint):
        lam = l.base.t[1:]
        if l.reflected:
            lam = simple_reflection(EVEN_REFLECTION, lam, algebra_data(l.base.algebra))
        return lam
    return l.t[1:]


def point_array(points: Sequence[AnyPoint]) -> np.ndarray:
    return np.array([point_lattice_coords(p) for p in points], dtype=np.int64).reshape(-1, 2)


def label_array(labels: Sequence[AnyLabel]) -> np.ndarray:
    return np.array([label_coords(l) for l in labels], dtype=np.int64).reshape(-1, 2)


# Zero-pattern tables: key is (c0 != 0, c1 != 0, c2 != 0).
_PATTERNS = (
    (True, True, True),
    (True, True, False),
    (True, False, True),
    (False, True, True),
    (False, False, True),
    (False, True, False),
    (True, False, False),
)


def _table(values: Sequence[int]) -> dict:
    return dict(zip(_PATTERNS, values))


EPSILON_TABLE = {
    AlgebraId.A2: _table((6, 3, 3, 3, 1, 1, 1)),
    AlgebraId.C2: _table((8, 4, 4, 4, 1, 2, 1)),
    AlgebraId.G2: _table((12, 6, 6, 6, 2, 3, 1)),
}
H_DUAL_TABLE = {
    AlgebraId.A2: _table((1, 2, 2, 2, 6, 6, 6)),
    AlgebraId.C2: _table((1, 2, 2, 2, 4, 8, 8)),
    AlgebraId.G2: _table((1, 2, 2, 2, 4, 6, 12)),
}
EPSILON_EVEN_TABLE = {
    AlgebraId.A2: _table((3, 3, 3, 3, 1, 1, 1)),
    AlgebraId.C2: _table((4, 4, 4, 4, 1, 2, 1)),
    AlgebraId.G2: _table((6, 6, 6, 6, 2, 3, 1)),
}
H_DUAL_EVEN_TABLE = {
    AlgebraId.A2: _table((1, 1, 1, 1, 3, 3, 3)),
    AlgebraId.C2: _table((1, 1, 1, 1, 2, 4, 4)),
    AlgebraId.G2: _table((1, 1, 1, 1, 2, 3, 6)),
}

# The commonly printed label tables list the C2 and G2 vertex rows under
# cyclically shifted patterns ([0,0,t2] holding the value of the origin, and
# so on); e.g. they give 6 for the G2 origin although lambda = 0 is fixed by
# all 12 elements of W. The tables above are keyed by the (t0, t1, t2) of the
# label grid and agree with brute-force stabilizers and with the Gram norms.
PRINTED_H_DUAL_TABLE = {
    AlgebraId.A2: _table((1, 2, 2, 2, 6, 6, 6)),
    AlgebraId.C2: _table((1, 2, 2, 2, 8, 4, 8)),
    AlgebraId.G2: _table((1, 2, 2, 2, 12, 4, 6)),
}
PRINTED_H_DUAL_EVEN_TABLE = {
    AlgebraId.A2: _table((1, 1, 1, 1, 3, 3, 3)),
    AlgebraId.C2: _table((1, 1, 1, 1, 4, 2, 4)),
    AlgebraId.G2: _table((1, 1, 1, 1, 6, 2, 3)),
}

def _pattern(c: Sequence[int]) -> tuple[bool, bool, bool]:
    return tuple(v != 0 for v in c)


def epsilon(p: GridPoint) -> int:
    """Size of the W-orbit of a grid point, from its zero pattern."""
    return EPSILON_TABLE[p.algebra][_pattern(p.s)]


def h_dual(l: LabelPoint) -> int:
    """Order of the stabilizer of a label, from its zero pattern."""
    return H_DUAL_TABLE[l.algebra][_pattern(l.t)]


def epsilon_even(p: EvenGridPoint) -> int:
    if p.reflected:
        return algebra_data(p.base.algebra).even_order
    return EPSILON_EVEN_TABLE[p.base.algebra][_pattern(p.base.s)]


def h_dual_even(l: EvenLabelPoint) -> int:
    if l.reflected:
        return 1
    return H_DUAL_EVEN_TABLE[l.base.algebra][_pattern(l.base.t)]


def orbit_stabilizer_oracle(
    coords: Sequence,
    group: Sequence[WeylElement],
    M: int,
    data: AlgebraData,
    side: str = "point",
) -> tuple[int, int]:
    """Brute-force orbit size and stabilizer order of a point or label.

    For ``side="point"`` ``coords`` are the point's omega-check coordinates and
    images are compared modulo the coroot lattice. For ``side="label"``
    ``coords`` is an integral weight and images are compared modulo ``M Q``.
    Returns ``(orbit_size, stabilizer_order)``.
    """
    adj = data.cartan_adj
    det = data.cartan_det
    if side == "point":
        y = tuple(Fraction(v) * M for v in coords)
        if any(v.denominator != 1 for v in y):
            raise ValueError("point is not on the (1/M) coweight lattice")
        y = tuple(int(v) for v in y)

        def key(w):
            v = w.act_point(y, data)
            # coefficients in the coroot basis: C^{-1} v; reduce mod M
            k = tuple(adj[i][0] * v[0] + adj[i][1] * v[1] for i in range(2))
            return tuple(val % (det * M) for val in k)

    elif side == "label":
        lam = tuple(int(v) for v in coords)

        def key(w):
            v = w.act(lam)
            # coefficients in the root basis: C^{-T} v; reduce mod M
            k = tuple(adj[0][i] * v[0] + adj[1][i] * v[1] for i in range(2))
            return tuple(val % (det * M) for val in k)

    else:
        raise ValueError("side must be 'point' or 'label'")

    base = key(_IDENTITY)
    images = {key(w) for w in group}
    stab = sum(1 for w in group if key(w) == base)
    return len(images), stab


_IDENTITY = WeylElement(((1, 0), (0, 1)), 1)


def grid_weights(algebra, M: int, kind: str) -> np.ndarray:
    """epsilon (kind C) or epsilon^e (kind E) for every grid point, in order."""
    if kind == "C":
        return np.array([epsilon(p) for p in enumerate_points(algebra, M)], dtype=float)
    return np.array([epsilon_even(p) for p in enumerate_points_even(algebra, M)], dtype=float)


def label_weights(algebra, M: int, kind: str) -> np.ndarray:
    """h-check (kind C) or h^e-check (kind E) for every label, in order."""
    if kind == "C":
        return np.array([h_dual(l) for l in enumerate_labels(algebra, M)], dtype=float)
    return np.array([h_dual_even(l) for l in enumerate_labels_even(algebra, M)], dtype=float)
