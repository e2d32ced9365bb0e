from fractions import Fraction as F

import numpy as np
import pytest

from riesz_tiler import instances
from riesz_tiler.errors import NotATilingError, ResolutionError
from riesz_tiler.geometry import normalize_box_union, region_cell_complex
from riesz_tiler.riesz import explicit_shifts, profile_matrix, riesz_bounds, select_shifts
from riesz_tiler.tiling import profiles
from riesz_tiler.transform import (
    analysis_matrix,
    analyze,
    build_grid,
    decompose,
    empirical_frame_bounds,
    region_norm2,
    synthesize,
    window_frequencies,
)


def setup(name, M, seed=0, shifts=None):
    region, k = instances.test_geometries()[name]
    table = profiles(region, k)
    grid = build_grid(table.complex, M, table)
    s = explicit_shifts(table.profiles, shifts) if shifts is not None else select_shifts(table.profiles, seed=seed)
    return grid, s


def random_f(rng, grid):
    shape = (grid.n_base, grid.level)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_grid_interval_0_2():
    grid, _ = setup("interval_0_2", 4, shifts=[[0], [0.5]])
    assert np.allclose(grid.base_points[:, 0], [1 / 8, 3 / 8, 5 / 8, 7 / 8])
    assert grid.omega_points.shape == (4, 2, 1)
    assert np.allclose(np.sort(grid.omega_points.ravel()), np.arange(8) / 4 + 1 / 8)


def test_grid_on_non_tile_builds_but_refuses():
    cx = region_cell_complex(instances.interval(0, F(3, 2)))
    grid = build_grid(cx, 4)
    assert grid.level is None
    with pytest.raises(NotATilingError):
        grid.omega_points


def test_resolution_must_match_thirds():
    region = normalize_box_union([((0,), (F(1, 3),)), ((F(4, 3),), (2,))])
    cx = region_cell_complex(region)
    build_grid(cx, 6)
    with pytest.raises(ResolutionError):
        build_grid(cx, 4)


def test_decompose_constant():
    grid, s = setup("interval_0_2", 8, shifts=[[0], [0.5]])
    pieces = decompose(grid, np.ones((8, 2)), s)
    assert np.allclose(pieces[0], 1, atol=1e-14) and np.allclose(pieces[1], 0, atol=1e-14)


def test_decompose_pure_second_exponential():
    grid, s = setup("strip_2x1", 8, seed=4)
    f = np.exp(2j * np.pi * grid.omega_points @ s.a[1])
    pieces = decompose(grid, f, s)
    assert np.allclose(pieces[0], 0, atol=1e-12) and np.allclose(pieces[1], 1, atol=1e-12)


def test_decompose_k1():
    grid, s = setup("unit_square", 4, shifts=[[0.3, 0.6]])
    f = random_f(np.random.default_rng(0), grid)
    pieces = decompose(grid, f, s)
    assert np.allclose(pieces[0], np.exp(-2j * np.pi * grid.base_points @ s.a[0]) * f[:, 0])


def test_decompose_matches_full_pointwise_solve():
    # the pieces must satisfy f(x+t_r) = sum_j e(a_j.(x+t_r)) f_j(x), a square nonsingular system
    grid, s = setup("staircase", 4, seed=8)
    f = random_f(np.random.default_rng(1), grid)
    pieces = decompose(grid, f, s)
    for p in range(grid.n_base):
        y = grid.omega_points[p]
        m = np.exp(2j * np.pi * y @ s.a.T)
        assert np.allclose(np.linalg.solve(m, f[p]), pieces[:, p], atol=1e-10)


def test_analyze_constant():
    grid, s = setup("interval_0_2", 8, shifts=[[0], [0.5]])
    c = analyze(grid, np.ones((8, 2)), s)
    expected = np.zeros_like(c)
    expected[0, 8 // 2] = 1
    assert np.allclose(c, expected, atol=1e-14)


@pytest.mark.parametrize("m0", [(-3, 1), (0, 0), (3, -4)])
def test_analyze_pure_tone(m0):
    grid, s = setup("unit_square", 8, shifts=[[0, 0]])
    f = np.exp(2j * np.pi * grid.omega_points @ np.array(m0, dtype=float))
    c = analyze(grid, f, s)
    expected = np.zeros_like(c)
    expected[0, m0[0] + 4, m0[1] + 4] = 1
    assert np.allclose(c, expected, atol=1e-13)


def test_analyze_linear():
    grid, s = setup("staircase", 4, seed=2)
    rng = np.random.default_rng(5)
    f, g = random_f(rng, grid), random_f(rng, grid)
    alpha, beta = 0.3 - 1.2j, 2.1 + 0.4j
    lhs = analyze(grid, alpha * f + beta * g, s)
    rhs = alpha * analyze(grid, f, s) + beta * analyze(grid, g, s)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_single_coefficient_synthesizes_exponential():
    grid, s = setup("strip_2x1", 4, seed=3)
    c = np.zeros((2, 4, 4), dtype=complex)
    c[1, 1, 3] = 1  # m = (-1, 1)
    f = synthesize(grid, c, s)
    freq = s.a[1] + np.array([-1, 1])
    assert np.allclose(f, np.exp(2j * np.pi * grid.omega_points @ freq), atol=1e-12)
    assert np.allclose(synthesize(grid, np.zeros_like(c), s), 0)


def test_window_is_centered():
    assert window_frequencies(4, 1).ravel().tolist() == [-2, -1, 0, 1]
    assert window_frequencies(3, 1).ravel().tolist() == [-1, 0, 1]


GEOMS = [("unit_cube", 4), ("interval_0_2", 8), ("two_intervals", 8), ("strip_2x1", 8),
         ("staircase", 8), ("hexagon3", 8), ("hexagon5", 7)]


@pytest.mark.parametrize("name, M", GEOMS)
def test_perfect_reconstruction_and_parseval(name, M):
    grid, s = setup(name, M, seed=6)
    rng = np.random.default_rng(9)
    rep = riesz_bounds(grid.table.profiles, s)
    for _ in range(100):
        f = random_f(rng, grid)
        c = analyze(grid, f, s)
        back = synthesize(grid, c, s)
        assert np.linalg.norm(back - f) <= 1e-10 * np.linalg.norm(f)
        pieces = decompose(grid, f, s)
        per_piece = np.sum(np.abs(c.reshape(grid.level, -1)) ** 2, axis=1)
        assert np.allclose(per_piece, np.sum(np.abs(pieces) ** 2, axis=1) / grid.n_base, rtol=1e-12, atol=0)
        # norm sandwich with C_j = k A_j
        nf = region_norm2(grid, f)
        middle = grid.level * np.sum(np.abs(pieces) ** 2) / grid.n_base
        assert rep.C1 * nf * (1 - 1e-12) <= middle <= rep.C2 * nf * (1 + 1e-12)


@pytest.mark.parametrize("name, M", GEOMS)
def test_analysis_inverts_synthesis(name, M):
    grid, s = setup(name, M, seed=6)
    rng = np.random.default_rng(2)
    for _ in range(10):
        c = rng.standard_normal((grid.level,) + (M,) * grid.dim) + 1j * rng.standard_normal((grid.level,) + (M,) * grid.dim)
        back = analyze(grid, synthesize(grid, c, s), s)
        assert np.linalg.norm(back - c) <= 1e-10 * np.linalg.norm(c)


def test_empirical_bounds_interval_0_2():
    grid, s = setup("interval_0_2", 8, shifts=[[0], [0.5]])
    assert empirical_frame_bounds(grid, s) == pytest.approx((0.5, 0.5), abs=1e-12)


def test_empirical_bounds_k1():
    grid, s = setup("unit_square", 4, shifts=[[0.2, 0.7]])
    assert empirical_frame_bounds(grid, s) == pytest.approx((1, 1), abs=1e-12)


@pytest.mark.parametrize("name, M", [g for g in GEOMS if g[0] != "unit_cube"])
def test_empirical_bounds_against_dense_svd(name, M):
    grid, s = setup(name, M, seed=12)
    rep = riesz_bounds(grid.table.profiles, s)
    low, high = empirical_frame_bounds(grid, s)
    assert low >= rep.A1 - 1e-10 and high <= rep.A2 + 1e-10
    sv2 = np.linalg.svd(analysis_matrix(grid, s), compute_uv=False) ** 2
    assert sv2.min() == pytest.approx(low, abs=1e-8)
    assert sv2.max() == pytest.approx(high, abs=1e-8)
    if not grid.cells_missed():
        assert (low, high) == pytest.approx((rep.A1, rep.A2), abs=1e-12)


@pytest.mark.parametrize("name, M", [("staircase", 2), ("two_intervals", 4), ("strip_2x1", 3)])
def test_resolution_doubling(name, M):
    a, s = setup(name, M, seed=1)
    b, _ = setup(name, 2 * M, seed=1)
    assert np.allclose(empirical_frame_bounds(a, s), empirical_frame_bounds(b, s), atol=1e-10, rtol=0)


def test_profile_matrix_used_per_base_point():
    grid, s = setup("hexagon3", 6, seed=0)
    for p in range(grid.n_base):
        prof = grid.table.profiles[grid.profile_index[p]]
        assert np.array_equal(np.array(prof.translates), grid.translates[p])
        assert np.allclose(np.abs(profile_matrix(prof, s.a)), 1)
