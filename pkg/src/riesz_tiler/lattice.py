"""Full-rank rational lattices and the change of variables to Z^d."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NonAxisAlignedError, ValidationError
from .geometry import BoxUnion, HalfOpenBox, Polygon2D, Region, as_rational

Matrix = tuple  # tuple of row tuples of Fraction


def as_matrix(rows) -> Matrix:
    m = tuple(tuple(as_rational(x) for x in row) for row in rows)
    d = len(m)
    if d == 0 or any(len(row) != d for row in m):
        raise ValidationError(f"expected a square matrix, got shape {[len(r) for r in m]}")
    return m


def identity(d: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def matvec(m: Matrix, v: Sequence) -> tuple:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in m)


def _eliminate(m: Matrix):
    """Gauss-Jordan on [m | I]; returns (det, inverse or None)."""
    d = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(d)] for i, row in enumerate(m)]
    det = Fraction(1)
    for col in range(d):
        pivot = next((r for r in range(col, d) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0), None
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        a[col] = [x / p for x in a[col]]
        for r in range(d):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det, tuple(tuple(row[d:]) for row in a)


def determinant(m: Matrix) -> Fraction:
    return _eliminate(m)[0]


def inverse(m: Matrix) -> Matrix:
    det, inv = _eliminate(m)
    if inv is None:
        raise ValidationError("matrix is singular")
    return inv


@dataclass(frozen=True)
class Lattice:
    """The lattice A Z^d; ``basis`` holds the rows of A, so its columns generate."""

    basis: Matrix

    def __post_init__(self):
        basis = as_matrix(self.basis)
        if determinant(basis) == 0:
            raise ValidationError("lattice basis is singular")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def standard(cls, d: int) -> Lattice:
        return cls(identity(d))

    @classmethod
    def from_generators(cls, generators) -> Lattice:
        """Build from a list of generator vectors (the JSON column-major form)."""
        return cls(transpose(as_matrix(generators)))

    def generators(self) -> list[tuple]:
        return [tuple(col) for col in transpose(self.basis)]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def covolume(self) -> Fraction:
        return abs(determinant(self.basis))

    def density(self) -> Fraction:
        return 1 / self.covolume()


def dual_lattice(lattice: Lattice) -> Lattice:
    """The lattice A^{-T} Z^d."""
    return Lattice(transpose(inverse(lattice.basis)))


@dataclass(frozen=True)
class NormalizationMap:
    """y = forward x sends the lattice to Z^d.

    A frequency u in normalized coordinates corresponds to ``dual_inverse u``
    in the original ones; ``dual_forward`` = A^T goes the other way.
    """

    forward: Matrix
    inverse: Matrix

    @property
    def dual_forward(self) -> Matrix:
        return transpose(self.inverse)

    @property
    def dual_inverse(self) -> Matrix:
        return transpose(self.forward)

    def to_normalized(self, x):
        return matvec(self.forward, x)

    def to_original(self, y):
        return matvec(self.inverse, y)

    def frequency_to_original(self, u):
        return matvec(self.dual_inverse, u)

    def is_identity(self) -> bool:
        return self.forward == identity(len(self.forward))


def _monomial_pattern(m: Matrix):
    """For a signed scaled permutation matrix, map output axis -> (input axis, scale)."""
    d = len(m)
    pattern = []
    used = set()
    for i, row in enumerate(m):
        nz = [j for j, x in enumerate(row) if x != 0]
        if len(nz) != 1 or nz[0] in used:
            return None
        used.add(nz[0])
        pattern.append((nz[0], row[nz[0]]))
    return pattern if len(used) == d else None


def transform_region(region: Region, m: Matrix) -> Region:
    """Image of a region under the rational matrix m.

    Box unions only survive signed axis permutations with scaling.  A
    negative scale turns [lo, hi) into (-hi, -lo]; it is stored as the
    half-open [-hi, -lo), which differs on a null set only.
    """
    if isinstance(region, Polygon2D):
        if len(m) != 2:
            raise ValidationError("polygon regions are 2D")
        return region.transform(m)
    pattern = _monomial_pattern(m)
    if pattern is None:
        raise NonAxisAlignedError(
            "box union is not mapped to a box union by this lattice normalization; "
            "supply a polygon (2D) or coordinates already normalized to Z^d"
        )
    boxes = []
    for box in region.boxes:
        lo, hi = [], []
        for src, scale in pattern:
            a, b = box.lo[src] * scale, box.hi[src] * scale
            lo.append(min(a, b))
            hi.append(max(a, b))
        boxes.append(HalfOpenBox(tuple(lo), tuple(hi)))
    return BoxUnion(tuple(boxes))


def normalize_instance(region: Region, lattice: Lattice) -> tuple[Region, NormalizationMap]:
    """Change variables so the lattice becomes Z^d."""
    if region.dim != lattice.dim:
        raise ValidationError(f"region is {region.dim}D but lattice is {lattice.dim}D")
    nmap = NormalizationMap(inverse(lattice.basis), lattice.basis)
    if nmap.is_identity():
        return region, nmap
    return transform_region(region, nmap.forward), nmap


@dataclass(frozen=True)
class DensityVerdict:
    ok: bool
    region_measure: Fraction
    covolume: Fraction
    level: int
    ratio: Fraction  # |region| / covolume, the only level that can possibly work

    @property
    def inferred_level(self) -> int | None:
        return self.ratio.numerator if self.ratio.denominator == 1 else None


def density_check(region_measure, lattice: Lattice, k: int) -> DensityVerdict:
    """Check |region| = k * covolume exactly; a failure disproves level-k tiling."""
    if k < 1:
        raise ValidationError("tiling level must be a positive integer")
    measure = as_rational(region_measure)
    covol = lattice.covolume()
    return DensityVerdict(measure == k * covol, measure, covol, k, measure / covol)
