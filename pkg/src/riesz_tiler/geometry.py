"""Exact rational regions: half-open box unions (any dimension) and simple
polygons (plane only), their reduction modulo the integer lattice, and the
cell complex of [0,1)^d on which the translate set is constant.

Membership is always decided exactly.  Boxes are products of half-open
intervals ``[lo, hi)``.  Polygons use the matching half-open rule: a point
``p`` belongs to a polygon iff ``p + (e, e**2)`` lies in its interior for
every small enough ``e > 0``.  On axis-parallel boxes the two rules agree,
and under either rule a region that tiles at level k almost everywhere
tiles at level k everywhere.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import DegenerateCellError, OverlapError, ValidationError

Vector = tuple  # tuple of Fraction
IntVector = tuple  # tuple of int

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or string ("p/q", "p", "0.25") to a Fraction.

    Floats are refused: exactness is the point.
    """
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {value!r}") from exc
    raise ValidationError(f"not a rational (floats are not accepted): {value!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_vector(values: Iterable) -> Vector:
    return tuple(as_rational(v) for v in values)


def _floor(q: Fraction) -> int:
    return math.floor(q)


def _ceil(q: Fraction) -> int:
    return math.ceil(q)


# ---------------------------------------------------------------------------
# boxes


@dataclass(frozen=True)
class HalfOpenBox:
    """The product of half-open intervals ``[lo_i, hi_i)``."""

    lo: Vector
    hi: Vector

    def __post_init__(self):
        lo, hi = as_vector(self.lo), as_vector(self.hi)
        if len(lo) != len(hi) or not lo:
            raise ValidationError(f"box corners have mismatched dimensions: {lo}, {hi}")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValidationError(f"empty box: lo={lo} hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def measure(self) -> Fraction:
        return math.prod((b - a for a, b in zip(self.lo, self.hi)), start=ONE)

    def contains(self, point: Sequence) -> bool:
        return all(a <= x < b for a, x, b in zip(self.lo, point, self.hi))

    def intersection(self, other: HalfOpenBox) -> HalfOpenBox | None:
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        if any(a >= b for a, b in zip(lo, hi)):
            return None
        return HalfOpenBox(lo, hi)

    def translate(self, t: Sequence) -> HalfOpenBox:
        return HalfOpenBox(
            tuple(a + s for a, s in zip(self.lo, t)),
            tuple(b + s for b, s in zip(self.hi, t)),
        )

    def midpoint(self) -> Vector:
        return tuple((a + b) / 2 for a, b in zip(self.lo, self.hi))

    def bounding_box(self) -> tuple[Vector, Vector]:
        return self.lo, self.hi

    def corners_2d(self) -> list[Vector]:
        (x0, y0), (x1, y1) = self.lo, self.hi
        return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


def _check_disjoint(boxes: Sequence[HalfOpenBox]) -> None:
    for i, j in itertools.combinations(range(len(boxes)), 2):
        common = boxes[i].intersection(boxes[j])
        if common is not None:
            witness = common.midpoint()
            raise OverlapError(
                f"boxes {i} and {j} overlap; witness point "
                f"({', '.join(format_rational(x) for x in witness)})",
                witness=witness,
            )


@dataclass(frozen=True)
class BoxUnion:
    """A finite disjoint union of half-open boxes."""

    boxes: tuple

    def __post_init__(self):
        boxes = tuple(self.boxes)
        if not boxes:
            raise ValidationError("a region needs at least one box")
        dims = {b.dim for b in boxes}
        if len(dims) != 1:
            raise ValidationError(f"boxes of mixed dimensions {sorted(dims)}")
        _check_disjoint(boxes)
        object.__setattr__(self, "boxes", boxes)

    @property
    def dim(self) -> int:
        return self.boxes[0].dim

    def measure(self) -> Fraction:
        return sum((b.measure() for b in self.boxes), ZERO)

    def contains(self, point: Sequence) -> bool:
        return any(b.contains(point) for b in self.boxes)

    def bounding_box(self) -> tuple[Vector, Vector]:
        lo = tuple(min(b.lo[i] for b in self.boxes) for i in range(self.dim))
        hi = tuple(max(b.hi[i] for b in self.boxes) for i in range(self.dim))
        return lo, hi

    def translate(self, t: Sequence) -> BoxUnion:
        return BoxUnion(tuple(b.translate(t) for b in self.boxes))


def normalize_box_union(boxes: Iterable) -> BoxUnion:
    """Validate a list of boxes as a disjoint union.

    Accepts ``HalfOpenBox`` objects or ``(lo, hi)`` pairs.  Boxes that only
    touch are disjoint under the half-open convention; any positive-measure
    overlap raises ``OverlapError`` with a witness point in the overlap.
    """
    out = []
    for b in boxes:
        if not isinstance(b, HalfOpenBox):
            lo, hi = b
            b = HalfOpenBox(lo, hi)
        out.append(b)
    return BoxUnion(tuple(out))


# ---------------------------------------------------------------------------
# polygons


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _signed_area2(vertices) -> Fraction:
    n = len(vertices)
    return sum(
        (vertices[i][0] * vertices[(i + 1) % n][1] - vertices[(i + 1) % n][0] * vertices[i][1]
         for i in range(n)),
        ZERO,
    )


def _clean(vertices: list, drop_foldbacks: bool) -> list:
    """Drop repeated vertices and collinear middle vertices."""
    pts = list(vertices)
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        n = len(pts)
        for i in range(n):
            prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % n]
            if cur == prev:
                del pts[i]
                changed = True
                break
            if _cross(prev, cur, nxt) == 0:
                forward = (cur[0] - prev[0]) * (nxt[0] - cur[0]) + (cur[1] - prev[1]) * (nxt[1] - cur[1])
                if forward > 0 or drop_foldbacks:
                    del pts[i]
                    changed = True
                    break
    if len(pts) >= 2 and pts[0] == pts[-1]:
        pts.pop()
    return pts


def _on_segment(p, a, b) -> bool:
    return (
        _cross(a, b, p) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segments_intersect(p1, p2, q1, q2) -> bool:
    """Closed segments [p1,p2] and [q1,q2] share at least one point."""
    d1 = _cross(q1, q2, p1)
    d2 = _cross(q1, q2, p2)
    d3 = _cross(p1, p2, q1)
    d4 = _cross(p1, p2, q2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    return (
        _on_segment(p1, q1, q2) or _on_segment(p2, q1, q2)
        or _on_segment(q1, p1, p2) or _on_segment(q2, p1, p2)
    )


@dataclass(frozen=True)
class Polygon2D:
    """A simple polygon with rational vertices, stored counterclockwise.

    Clockwise input is reversed.  With ``check=False`` the simplicity test is
    skipped; clipped pieces use this, since clipping a non-convex polygon can
    leave zero-width bridges along the clip window.
    """

    vertices: tuple
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        pts = [as_vector(v) for v in self.vertices]
        if any(len(v) != 2 for v in pts):
            raise ValidationError("polygon vertices must be 2D points")
        pts = _clean(pts, drop_foldbacks=not self.check)
        error = ValidationError if self.check else DegenerateCellError
        if len(pts) < 3:
            raise error("polygon has fewer than 3 distinct non-collinear vertices")
        area2 = _signed_area2(pts)
        if area2 == 0:
            raise error("polygon has zero area")
        if area2 < 0:
            pts.reverse()
        if self.check:
            self._check_simple(pts)
        object.__setattr__(self, "vertices", tuple(pts))

    @staticmethod
    def _check_simple(pts) -> None:
        n = len(pts)
        edges = [(pts[i], pts[(i + 1) % n]) for i in range(n)]
        for i, j in itertools.combinations(range(n), 2):
            a, b = edges[i]
            c, d = edges[j]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges may share only their common vertex
                far_j, far_i = (d, a) if j == i + 1 else (c, b)
                if _on_segment(far_j, a, b) or _on_segment(far_i, c, d):
                    raise ValidationError(f"polygon edges {i} and {j} overlap")
                continue
            if segments_intersect(a, b, c, d):
                raise ValidationError(f"polygon is not simple: edges {i} and {j} intersect")

    @property
    def dim(self) -> int:
        return 2

    def area(self) -> Fraction:
        return abs(_signed_area2(self.vertices)) / 2

    measure = area

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def contains(self, point: Sequence) -> bool:
        """Half-open membership: perturb the point by ``(e, e**2)``."""
        px, py = point
        inside = False
        for a, b in self.edges():
            if (a[1] > py) != (b[1] > py):
                x0 = a[0] + (py - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
                if x0 > px:
                    inside = not inside
        return inside

    def on_boundary(self, point: Sequence) -> bool:
        return any(_on_segment(tuple(point), a, b) for a, b in self.edges())

    def bounding_box(self) -> tuple[Vector, Vector]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), min(ys)), (max(xs), max(ys))

    def translate(self, t: Sequence) -> Polygon2D:
        return Polygon2D(
            tuple((x + t[0], y + t[1]) for x, y in self.vertices), check=False
        )

    def transform(self, matrix) -> Polygon2D:
        """Image under an invertible rational 2x2 matrix (rows)."""
        (a, b), (c, d) = matrix
        return Polygon2D(
            tuple((a * x + b * y, c * x + d * y) for x, y in self.vertices), check=self.check
        )

    def centroid_of_vertices(self) -> Vector:
        n = len(self.vertices)
        return (
            sum((v[0] for v in self.vertices), ZERO) / n,
            sum((v[1] for v in self.vertices), ZERO) / n,
        )


Region = Union[BoxUnion, Polygon2D]


def region_measure(region: Region) -> Fraction:
    """Exact Lebesgue measure."""
    return region.measure()


# ---------------------------------------------------------------------------
# clipping and splitting


def _clip_halfplane(pts, inside, intersect):
    out = []
    n = len(pts)
    for i in range(n):
        cur, prev = pts[i], pts[i - 1]
        if inside(cur):
            if not inside(prev):
                out.append(intersect(prev, cur))
            out.append(cur)
        elif inside(prev):
            out.append(intersect(prev, cur))
    return out


def clip_to_box(polygon: Polygon2D, lo: Vector, hi: Vector) -> Polygon2D | None:
    """Sutherland-Hodgman clip against the closed box [lo, hi]; None if empty."""
    pts = list(polygon.vertices)

    def cut(axis, value, keep_above):
        def inside(p):
            return p[axis] >= value if keep_above else p[axis] <= value

        def intersect(p, q):
            s = (value - p[axis]) / (q[axis] - p[axis])
            r = [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]
            r[axis] = value
            return tuple(r)

        return inside, intersect

    for axis, value, keep_above in (
        (0, lo[0], True), (0, hi[0], False), (1, lo[1], True), (1, hi[1], False)
    ):
        if len(pts) < 3:
            return None
        pts = _clip_halfplane(pts, *cut(axis, value, keep_above))
    if len(pts) < 3:
        return None
    try:
        return Polygon2D(tuple(pts), check=False)
    except DegenerateCellError:
        return None


def split_convex(polygon: Polygon2D, line) -> list[Polygon2D]:
    """Split a convex polygon by the line ``a*x + b*y = c``."""
    a, b, c = line
    side = [a * x + b * y - c for x, y in polygon.vertices]
    if all(s >= 0 for s in side) or all(s <= 0 for s in side):
        return [polygon]
    pos, neg = [], []
    n = len(polygon.vertices)
    for i in range(n):
        p, q = polygon.vertices[i], polygon.vertices[(i + 1) % n]
        sp, sq = side[i], side[(i + 1) % n]
        if sp >= 0:
            pos.append(p)
        if sp <= 0:
            neg.append(p)
        if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
            s = sp / (sp - sq)
            r = (p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1]))
            pos.append(r)
            neg.append(r)
    out = []
    for pts in (pos, neg):
        try:
            out.append(Polygon2D(tuple(pts), check=False))
        except DegenerateCellError:
            pass
    return out


def _line_through(p, q):
    a = q[1] - p[1]
    b = p[0] - q[0]
    c = a * p[0] + b * p[1]
    lead = a if a != 0 else b
    return (a / lead, b / lead, c / lead)


# ---------------------------------------------------------------------------
# reduction mod Z^d and cell decomposition


def reduce_mod_unit_lattice(region: Region) -> list[tuple]:
    """Cut a region into pieces inside [0,1)^d.

    Returns ``(piece, t)`` pairs with ``piece + t`` a subset of the region.
    The translated pieces partition the region.
    """
    if isinstance(region, BoxUnion):
        out = []
        for box in region.boxes:
            per_axis = []
            for a, b in zip(box.lo, box.hi):
                segs = []
                for n in range(_floor(a), _ceil(b)):
                    lo, hi = max(a, Fraction(n)), min(b, Fraction(n + 1))
                    if lo < hi:
                        segs.append((lo - n, hi - n, n))
                per_axis.append(segs)
            for combo in itertools.product(*per_axis):
                piece = HalfOpenBox(tuple(s[0] for s in combo), tuple(s[1] for s in combo))
                out.append((piece, tuple(s[2] for s in combo)))
        return out
    if isinstance(region, Polygon2D):
        (x0, y0), (x1, y1) = region.bounding_box()
        out = []
        for i in range(_floor(x0), _ceil(x1)):
            for j in range(_floor(y0), _ceil(y1)):
                clipped = clip_to_box(region, (Fraction(i), Fraction(j)), (Fraction(i + 1), Fraction(j + 1)))
                if clipped is not None:
                    out.append((clipped.translate((-i, -j)), (i, j)))
        return out
    raise ValidationError(f"unsupported region type {type(region).__name__}")


@dataclass(frozen=True)
class Cell:
    """A piece of [0,1)^d together with every integer t carrying it into the region."""

    shape: Union[HalfOpenBox, Polygon2D]
    translates: tuple
    witness: Vector

    def __post_init__(self):
        ts = tuple(tuple(int(x) for x in t) for t in self.translates)
        if any(ts[i] >= ts[i + 1] for i in range(len(ts) - 1)):
            raise ValidationError(f"translates not strictly lex-increasing: {ts}")
        if self.shape.measure() <= 0:
            raise DegenerateCellError("cell of zero measure")
        object.__setattr__(self, "translates", ts)

    def measure(self) -> Fraction:
        return self.shape.measure()

    @property
    def multiplicity(self) -> int:
        return len(self.translates)

    def contains(self, point: Sequence) -> bool:
        return self.shape.contains(point)


@dataclass(frozen=True)
class CellComplex:
    """Exact partition of [0,1)^d into cells of constant translate set.

    Box complexes are tensor grids over ``breakpoints`` and store cells in
    C order; polygon complexes are lists of convex faces.
    """

    cells: tuple
    dimension: int
    breakpoints: tuple | None = None

    @property
    def kind(self) -> str:
        return "box" if self.breakpoints is not None else "polygon"

    def total_measure(self) -> Fraction:
        return sum((c.measure() for c in self.cells), ZERO)

    def locate(self, point: Sequence) -> int:
        """Index of the unique cell containing a point of [0,1)^d."""
        point = tuple(point)
        if any(not (0 <= x < 1) for x in point):
            raise ValidationError(f"point {point} is outside [0,1)^d")
        if self.breakpoints is not None:
            idx = 0
            for x, br in zip(point, self.breakpoints):
                idx = idx * (len(br) - 1) + bisect_right(br, x) - 1
            return idx
        for i, c in enumerate(self.cells):
            if c.contains(point):
                return i
        raise AssertionError(f"no face contains {point}; cell complex is not a partition")

    def denominator_lcm(self) -> int:
        """LCM of the denominators of the box breakpoints (1 for polygons)."""
        if self.breakpoints is None:
            return 1
        return math.lcm(*(q.denominator for br in self.breakpoints for q in br))


def _decompose_boxes(pieces, dim) -> CellComplex:
    breaks = []
    for axis in range(dim):
        vals = {ZERO, ONE}
        for piece, _ in pieces:
            vals.add(piece.lo[axis])
            vals.add(piece.hi[axis])
        breaks.append(tuple(sorted(vals)))
    position = [{v: i for i, v in enumerate(br)} for br in breaks]
    shape = [len(br) - 1 for br in breaks]
    found: dict[tuple, list] = {}
    for piece, t in pieces:
        ranges = [
            range(position[a][piece.lo[a]], position[a][piece.hi[a]]) for a in range(dim)
        ]
        for idx in itertools.product(*ranges):
            found.setdefault(idx, []).append(t)
    cells = []
    for idx in itertools.product(*(range(s) for s in shape)):
        ts = sorted(found.get(idx, []))
        if len(set(ts)) != len(ts):
            raise OverlapError(f"translate repeated on cell {idx}; pieces overlap")
        box = HalfOpenBox(
            tuple(breaks[a][i] for a, i in enumerate(idx)),
            tuple(breaks[a][i + 1] for a, i in enumerate(idx)),
        )
        cells.append(Cell(box, tuple(ts), box.midpoint()))
    return CellComplex(tuple(cells), dim, tuple(breaks))


def _decompose_polygons(pieces) -> CellComplex:
    lines = set()
    for piece, _ in pieces:
        for p, q in piece.edges():
            lines.add(_line_through(p, q))
    unit = Polygon2D(((ZERO, ZERO), (ONE, ZERO), (ONE, ONE), (ZERO, ONE)))
    faces = [unit]
    for line in sorted(lines):
        faces = [f for face in faces for f in split_convex(face, line)]
    cells = []
    for face in faces:
        w = face.centroid_of_vertices()
        # w is interior to the face and the face meets no piece edge, so the
        # plain crossing test at w is unambiguous.
        ts = sorted(t for piece, t in pieces if piece.contains(w))
        cells.append(Cell(face, tuple(ts), w))
    cells.sort(key=lambda c: (c.witness[1], c.witness[0]))
    return CellComplex(tuple(cells), 2, None)


def cell_decompose(pieces: Sequence[tuple]) -> CellComplex:
    """Partition [0,1)^d into cells on which the translate list is constant.

    Cells with an empty translate list are kept; they witness multiplicity 0.
    Zero-area faces never reach the output.
    """
    if not pieces:
        raise ValidationError("no pieces to decompose")
    first = pieces[0][0]
    if isinstance(first, HalfOpenBox):
        return _decompose_boxes(pieces, first.dim)
    return _decompose_polygons(pieces)


@lru_cache(maxsize=64)
def region_cell_complex(region: Region) -> CellComplex:
    return cell_decompose(reduce_mod_unit_lattice(region))


def translate_search_range(region: Region) -> list[range]:
    """Integer ranges containing every t with ([0,1)^d + t) meeting the region."""
    lo, hi = region.bounding_box()
    return [range(_floor(a) - 1, _ceil(b) + 1) for a, b in zip(lo, hi)]


def brute_force_translates(region: Region, point: Sequence) -> tuple:
    """All integer t with point + t in the region, by direct enumeration."""
    point = tuple(point)
    return tuple(
        t
        for t in itertools.product(*translate_search_range(region))
        if region.contains(tuple(x + s for x, s in zip(point, t)))
    )
