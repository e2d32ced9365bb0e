"""A finite, exactly invertible model of the exponential expansion.

The fundamental cell is sampled at the M^d points ``(g + 1/2)/M``; the
region at the k*M^d points ``x + t_r``.  A function on the region is
decomposed pointwise into k periodic pieces by solving the k x k profile
systems, and each piece is expanded by a DFT over the centered window of M
frequencies per axis.

Array conventions:

* region samples: shape ``(M**d, k)``, entry ``[p, r]`` is the value at
  ``base_points[p] + translates[p, r]``;
* periodic pieces: shape ``(k, M**d)``;
* coefficients: shape ``(k, M, ..., M)``, axis index ``i`` meaning the
  frequency ``i - M//2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotATilingError, ResolutionError
from .geometry import CellComplex
from .riesz import ShiftVectors, e, profile_matrix
from .tiling import ProfileTable


@dataclass(frozen=True)
class SampleGrid:
    M: int
    dim: int
    base_points: np.ndarray  # (M**d, d) floats, exact dyadic-over-M values
    cell_index: np.ndarray  # (M**d,) containing cell of each base point
    complex: CellComplex
    table: ProfileTable | None = None  # present iff the region tiles

    @property
    def n_base(self) -> int:
        return self.M**self.dim

    @property
    def level(self) -> int | None:
        return None if self.table is None else self.table.profiles[0].k

    @property
    def profile_index(self) -> np.ndarray:
        self._require_tiling()
        return np.asarray(self.table.cell_profile)[self.cell_index]

    @property
    def translates(self) -> np.ndarray:
        """(M**d, k, d) integer translates of every base point."""
        self._require_tiling()
        ts = np.array([p.translates for p in self.table.profiles], dtype=np.int64)
        return ts[self.profile_index]

    @property
    def omega_points(self) -> np.ndarray:
        """(M**d, k, d) sample points in the region."""
        return self.base_points[:, None, :] + self.translates

    def cells_present(self) -> np.ndarray:
        return np.unique(self.cell_index)

    def cells_missed(self) -> list[int]:
        hit = set(self.cells_present().tolist())
        return [i for i in range(len(self.complex.cells)) if i not in hit]

    def _require_tiling(self):
        if self.table is None:
            raise NotATilingError("this operation needs a region that tiles")


def window_frequencies(M: int, d: int) -> np.ndarray:
    """Centered integer frequencies, shape (M**d, d) in C order of the coefficient array."""
    axis = np.arange(M) - M // 2
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def build_grid(cx: CellComplex, M: int, table: ProfileTable | None = None) -> SampleGrid:
    """Sample [0,1)^d at (g + 1/2)/M and locate every sample in its cell.

    Box complexes need M to be a multiple of the breakpoint denominators'
    LCM, so that no sample falls on a cell boundary.  Polygon complexes
    accept any M; boundary samples are assigned by the half-open rule.
    """
    if M < 1:
        raise ResolutionError(f"resolution must be positive, got {M}")
    if cx.kind == "box":
        lcm = cx.denominator_lcm()
        if M % lcm:
            raise ResolutionError(f"resolution {M} is not a multiple of the breakpoint denominator LCM {lcm}")
    d = cx.dimension
    coords = [Fraction(2 * g + 1, 2 * M) for g in range(M)]
    idx = np.indices((M,) * d).reshape(d, -1).T
    cells = np.array([cx.locate(tuple(coords[g] for g in row)) for row in idx], dtype=np.int64)
    base = (idx + 0.5) / M
    if table is not None and table.complex is not cx:
        raise ValueError("profile table belongs to a different cell complex")
    return SampleGrid(M, d, base, cells, cx, table)


def _inverse_profile_matrices(grid: SampleGrid, shifts: ShiftVectors) -> list[np.ndarray]:
    return [np.linalg.inv(profile_matrix(p, shifts.a)) for p in grid.table.profiles]


def _base_phases(grid: SampleGrid, shifts: ShiftVectors) -> np.ndarray:
    """(M**d, k) values e(a_j . x)."""
    return e(grid.base_points @ shifts.a.T)


def decompose(grid: SampleGrid, f: np.ndarray, shifts: ShiftVectors) -> np.ndarray:
    """Periodic pieces f_j with f(x + t_r) = sum_j e(a_j.(x + t_r)) f_j(x).

    Solved pointwise as diag(e(-a_j.x)) N^{-1} F with F = (f(x + t_r))_r.
    Returns shape (k, M**d).
    """
    grid._require_tiling()
    f = np.asarray(f, dtype=complex)
    pieces = np.empty((grid.level, grid.n_base), dtype=complex)
    pidx = grid.profile_index
    for p, ninv in enumerate(_inverse_profile_matrices(grid, shifts)):
        mask = pidx == p
        if mask.any():
            pieces[:, mask] = ninv @ f[mask].T
    return pieces * np.conj(_base_phases(grid, shifts)).T


def _half_sample_phase(M: int, d: int) -> np.ndarray:
    """e(-m.(1/2,...,1/2)/M) on the coefficient array shape."""
    return e(-window_frequencies(M, d).sum(axis=1) / (2 * M)).reshape((M,) * d)


def pieces_to_coefficients(grid: SampleGrid, pieces: np.ndarray) -> np.ndarray:
    M, d = grid.M, grid.dim
    shape = (M,) * d
    axes = tuple(range(1, d + 1))
    spec = np.fft.fftn(pieces.reshape((-1,) + shape), axes=axes)
    spec = np.fft.fftshift(spec, axes=axes) / M**d
    return spec * _half_sample_phase(M, d)


def coefficients_to_pieces(grid: SampleGrid, c: np.ndarray) -> np.ndarray:
    M, d = grid.M, grid.dim
    axes = tuple(range(1, d + 1))
    spec = np.asarray(c, dtype=complex) / _half_sample_phase(M, d) * M**d
    spec = np.fft.ifftshift(spec, axes=axes)
    return np.fft.ifftn(spec, axes=axes).reshape(c.shape[0], -1)


def analyze(grid: SampleGrid, f: np.ndarray, shifts: ShiftVectors) -> np.ndarray:
    """Coefficients c[j, m] of f in the system e((a_j + m).x).

    Normalized so that sum_m |c[j, m]|^2 = M^{-d} sum_x |f_j(x)|^2.
    """
    return pieces_to_coefficients(grid, decompose(grid, f, shifts))


def synthesize(grid: SampleGrid, c: np.ndarray, shifts: ShiftVectors) -> np.ndarray:
    """Evaluate sum_{j,m} c[j,m] e((a_j + m).y) at every region sample y."""
    grid._require_tiling()
    pieces = coefficients_to_pieces(grid, c)  # (k, M**d)
    y = grid.omega_points  # (M**d, k, d)
    phases = e(np.einsum("prd,jd->prj", y, shifts.a))  # e(a_j . (x + t_r))
    return np.einsum("prj,jp->pr", phases, pieces)


def region_norm2(grid: SampleGrid, f: np.ndarray) -> float:
    """Discrete |f|^2 on the region: M^{-d} sum over samples."""
    return float(np.sum(np.abs(f) ** 2)) / grid.n_base


def empirical_frame_bounds(grid: SampleGrid, shifts: ShiftVectors) -> tuple[float, float]:
    """Extreme values of sum |c|^2 / |f|^2 over the discrete model.

    The DFT is unitary in these normalizations, so the extremes are
    min 1/sigma_max^2 and max 1/sigma_min^2 over the profiles whose cells
    contain at least one sample.
    """
    grid._require_tiling()
    present = np.unique(grid.profile_index)
    lows, highs = [], []
    for p in present:
        sv = np.linalg.svd(profile_matrix(grid.table.profiles[p], shifts.a), compute_uv=False)
        lows.append(1.0 / sv[0] ** 2)
        highs.append(1.0 / sv[-1] ** 2)
    return float(min(lows)), float(max(highs))


def analysis_matrix(grid: SampleGrid, shifts: ShiftVectors) -> np.ndarray:
    """Dense matrix of ``analyze`` scaled so its squared singular values are
    the ratios sum|c|^2 / |f|^2.  Columns follow the flattened (M**d, k)
    sample layout.  Meant for small oracle checks only.
    """
    n = grid.n_base * grid.level
    cols = []
    for i in range(n):
        unit = np.zeros(n, dtype=complex)
        unit[i] = 1.0
        cols.append(analyze(grid, unit.reshape(grid.n_base, grid.level), shifts).ravel())
    return np.stack(cols, axis=1) * np.sqrt(grid.n_base)


def roundtrip_error(grid: SampleGrid, shifts: ShiftVectors, count: int = 100, seed: int = 0) -> float:
    """Max relative L2 error of synthesize(analyze(f)) over random complex f."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        f = rng.standard_normal((grid.n_base, grid.level)) + 1j * rng.standard_normal((grid.n_base, grid.level))
        back = synthesize(grid, analyze(grid, f, shifts), shifts)
        worst = max(worst, float(np.linalg.norm(back - f) / np.linalg.norm(f)))
    return worst
