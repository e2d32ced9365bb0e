"""Ready-made multiple tiles and random generators of box-union multiple tiles."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .geometry import BoxUnion, HalfOpenBox, Polygon2D, normalize_box_union


def unit_cube(d: int) -> BoxUnion:
    return normalize_box_union([((0,) * d, (1,) * d)])


def interval(lo, hi) -> BoxUnion:
    return normalize_box_union([((lo,), (hi,))])


def box(lo, hi) -> BoxUnion:
    return normalize_box_union([(lo, hi)])


def two_intervals() -> BoxUnion:
    """[0,1) u [2,3): level 2 over Z."""
    return normalize_box_union([((0,), (1,)), ((2,), (3,))])


def hexagon3() -> Polygon2D:
    """Centrally symmetric lattice hexagon of area 3."""
    return Polygon2D(((0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)))


def hexagon5() -> Polygon2D:
    """Centrally symmetric lattice hexagon of area 5."""
    return Polygon2D(((0, 0), (2, 0), (3, 1), (3, 2), (1, 2), (0, 1)))


def _random_breaks(rng, count: int, max_den: int) -> list[Fraction]:
    vals = {Fraction(0), Fraction(1)}
    while len(vals) < count + 2:
        den = int(rng.integers(2, max_den + 1))
        vals.add(Fraction(int(rng.integers(1, den)), den))
    return sorted(vals)


def random_multi_tile(rng: np.random.Generator, d: int, k: int, spread: int = 3,
                      max_breaks: int = 2, max_den: int = 4) -> BoxUnion:
    """A random box union tiling Z^d at level exactly k.

    [0,1)^d is cut into a random grid of boxes and each box receives k
    distinct integer translates; the translated copies are pairwise disjoint
    because copies of one box differ by distinct integer shifts and copies
    of different boxes lie in different cosets.
    """
    axes = [_random_breaks(rng, int(rng.integers(0, max_breaks + 1)), max_den) for _ in range(d)]
    pool = list(itertools.product(range(-spread, spread + 1), repeat=d))
    boxes = []
    for idx in itertools.product(*(range(len(a) - 1) for a in axes)):
        lo = tuple(axes[i][j] for i, j in enumerate(idx))
        hi = tuple(axes[i][j + 1] for i, j in enumerate(idx))
        for c in rng.choice(len(pool), size=k, replace=False):
            t = pool[int(c)]
            boxes.append(HalfOpenBox(lo, hi).translate(t))
    return BoxUnion(tuple(boxes))


def test_geometries() -> dict:
    """Named normalized instances (region, level) used across the test suite."""
    return {
        "unit_interval": (unit_cube(1), 1),
        "unit_square": (unit_cube(2), 1),
        "unit_cube": (unit_cube(3), 1),
        "interval_0_2": (interval(0, 2), 2),
        "two_intervals": (two_intervals(), 2),
        "strip_2x1": (box((0, 0), (2, 1)), 2),
        "staircase": (
            normalize_box_union([
                ((0, 0), (Fraction(1, 2), 1)),
                ((Fraction(1, 2), 0), (1, 2)),
                ((Fraction(1, 2), 2), (Fraction(3, 2), 3)),
                ((1, 3), (Fraction(5, 2), 4)),
            ]),
            4,
        ),
        "hexagon3": (hexagon3(), 3),
        "hexagon5": (hexagon5(), 5),
    }
