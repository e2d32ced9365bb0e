"""Level-k tiling verification, the lexicographic splitting into k almost
fundamental domains, and the finite family of translate profiles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotATilingError
from .geometry import (
    BoxUnion,
    Cell,
    CellComplex,
    Polygon2D,
    Region,
    region_cell_complex,
)


@dataclass(frozen=True)
class MultiplicityReport:
    level: int | None  # set iff every cell has the same number of translates
    expected: int | None
    violations: tuple  # (cell, multiplicity) pairs; empty when the check passes
    total_mass: Fraction
    complex: CellComplex

    @property
    def ok(self) -> bool:
        return self.level is not None and (self.expected is None or self.level == self.expected)


def _complex(region_or_complex) -> CellComplex:
    if isinstance(region_or_complex, CellComplex):
        return region_or_complex
    return region_cell_complex(region_or_complex)


def verify_tiling(region: Region | CellComplex, k: int | None = None) -> MultiplicityReport:
    """Exact level-k check on a region already normalized to Z^d.

    With ``k=None`` the level is inferred.  When the multiplicity is not
    constant, or constant but different from ``k``, every cell is listed as
    a violation together with its multiplicity.
    """
    cx = _complex(region)
    mults = {c.multiplicity for c in cx.cells}
    level = mults.pop() if len(mults) == 1 else None
    total = sum((c.measure() * c.multiplicity for c in cx.cells), Fraction(0))
    failing = level is None or (k is not None and level != k)
    violations = tuple((c, c.multiplicity) for c in cx.cells) if failing else ()
    return MultiplicityReport(level, k, violations, total, cx)


def _require_tiling(region, k) -> MultiplicityReport:
    report = verify_tiling(region, k)
    if not report.ok:
        found = report.level if report.level is not None else "non-constant"
        raise NotATilingError(f"region does not tile at level {k} (multiplicity {found})", report)
    return report


@dataclass(frozen=True)
class Splitting:
    """``parts[j]`` lists the (cell, translate) pairs whose union is the j-th part."""

    parts: tuple

    @property
    def level(self) -> int:
        return len(self.parts)

    def part_measure(self, j: int) -> Fraction:
        return sum((cell.measure() for cell, _ in self.parts[j]), Fraction(0))

    def part_region(self, j: int):
        """The j-th part as a region (a BoxUnion, or a list of polygons in 2D)."""
        shapes = [cell.shape.translate(t) for cell, t in self.parts[j]]
        if shapes and isinstance(shapes[0], Polygon2D):
            return shapes
        return BoxUnion(tuple(shapes))


def split(region: Region | CellComplex, k: int | None = None) -> Splitting:
    """Distribute each coset's k points among k parts in lexicographic order.

    For a fixed base point x the order of the points x + t agrees with the
    order of the translates t, so part j takes the j-th translate of every
    cell.
    """
    report = _require_tiling(region, k)
    level = report.level
    parts = tuple(
        tuple((cell, cell.translates[j]) for cell in report.complex.cells) for j in range(level)
    )
    return Splitting(parts)


@dataclass(frozen=True)
class TranslateProfile:
    translates: tuple  # strictly lex-increasing integer vectors
    support_measure: Fraction

    def __post_init__(self):
        ts = self.translates
        if any(ts[i] >= ts[i + 1] for i in range(len(ts) - 1)):
            raise ValueError(f"profile not strictly increasing: {ts}")

    @property
    def k(self) -> int:
        return len(self.translates)

    def shifted(self, offset) -> TranslateProfile:
        return TranslateProfile(
            tuple(tuple(a + b for a, b in zip(t, offset)) for t in self.translates),
            self.support_measure,
        )


@dataclass(frozen=True)
class ProfileTable:
    profiles: tuple  # TranslateProfile, sorted by translate tuple
    cell_profile: tuple  # profile index of every cell of ``complex``
    complex: CellComplex

    def __len__(self):
        return len(self.profiles)

    def __iter__(self):
        return iter(self.profiles)

    def __getitem__(self, i):
        return self.profiles[i]


def profiles(region: Region | CellComplex, k: int | None = None) -> ProfileTable:
    """Distinct translate tuples over all cells with their support measures."""
    report = _require_tiling(region, k)
    cells: tuple[Cell, ...] = report.complex.cells
    support: dict[tuple, Fraction] = {}
    for cell in cells:
        support[cell.translates] = support.get(cell.translates, Fraction(0)) + cell.measure()
    keys = sorted(support)
    index = {key: i for i, key in enumerate(keys)}
    table = tuple(TranslateProfile(key, support[key]) for key in keys)
    return ProfileTable(table, tuple(index[c.translates] for c in cells), report.complex)
