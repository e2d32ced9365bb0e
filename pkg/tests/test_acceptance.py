"""Exit criteria.  Each test records one PASS/FAIL line, printed in the
pytest terminal summary under "acceptance criteria"."""

import itertools
import time

import numpy as np
import pytest

from riesz_tiler import instances
from riesz_tiler.geometry import BoxUnion, cell_decompose, reduce_mod_unit_lattice
from riesz_tiler.io import parse_instance
from riesz_tiler.pipeline import render_report, run_pipeline
from riesz_tiler.riesz import (
    build_profile_matrix,
    det_as_function_of_shifts,
    explicit_shifts,
    riesz_bounds,
    select_shifts,
)
from riesz_tiler.tiling import profiles, split, verify_tiling
from riesz_tiler.transform import (
    analysis_matrix,
    build_grid,
    empirical_frame_bounds,
    roundtrip_error,
    synthesize,
)

pytestmark = pytest.mark.acceptance

GEOMETRIES = instances.test_geometries()


def _grid(name, M, seed=0):
    region, k = GEOMETRIES[name]
    table = profiles(region, k)
    return build_grid(table.complex, M, table), select_shifts(table.profiles, seed=seed)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_ac1_orthogonal_basis_degeneration(d, criterion):
    spec = parse_instance({
        "dimension": d,
        "lattice": {"basis": [[str(int(i == j)) for j in range(d)] for i in range(d)]},
        "region": {"type": "box_union", "boxes": [{"lo": ["0"] * d, "hi": ["1"] * d}]},
        "level": 1,
    })
    t0 = time.perf_counter()
    rep = run_pipeline(spec)
    elapsed = time.perf_counter() - t0
    b = rep.stages["bounds"]
    ok = rep.exit_code == 0 and abs(b["C1"] - 1) <= 1e-12 and abs(b["C2"] - 1) <= 1e-12 and elapsed < 1
    criterion(f"AC1 d={d}", ok, f"C1={b['C1']!r} C2={b['C2']!r} t={elapsed:.3f}s")


def test_ac2_tight_instance(criterion):
    t0 = time.perf_counter()
    spec = parse_instance({
        "dimension": 1,
        "lattice": {"basis": [["1"]]},
        "region": {"type": "box_union", "boxes": [{"lo": ["0"], "hi": ["2"]}]},
        "shifts": [["0"], ["1/2"]],
        "resolution": 16,
    })
    rep = run_pipeline(spec)
    st = rep.state
    n = st.riesz.matrices[0].N
    low, high = empirical_frame_bounds(st.grid, st.shifts)
    # sampled exponentials e((a_j + m) y) on the region, one column per coefficient
    k, M = 2, 16
    cols = []
    for idx in range(k * M):
        c = np.zeros((k, M), dtype=complex)
        c.flat[idx] = 1
        cols.append(synthesize(st.grid, c, st.shifts).ravel())
    basis = np.stack(cols, axis=1)
    gram = basis.conj().T @ basis / M
    off = np.max(np.abs(gram - np.diag(np.diag(gram))))
    # continuous check: int_0^2 e(s y) dy = (e(2s) - 1)/(2 pi i s) for the frequency gaps s
    freqs = np.concatenate([m + np.arange(-M // 2, M // 2) for m in (0.0, 0.5)])
    gaps = (freqs[:, None] - freqs[None, :])[~np.eye(len(freqs), dtype=bool)]
    continuous = np.max(np.abs((np.exp(4j * np.pi * gaps) - 1) / (2j * np.pi * gaps)))
    elapsed = time.perf_counter() - t0
    ok = (
        np.allclose(n, [[1, 1], [1, -1]], atol=1e-12)
        and abs(st.riesz.A1 - 0.5) <= 1e-12 and abs(st.riesz.A2 - 0.5) <= 1e-12
        and abs(low - 0.5) <= 1e-10 and abs(high - 0.5) <= 1e-10
        and off < 1e-10 and continuous < 1e-10
        and np.allclose(np.diag(gram), 2)
        and elapsed < 1
    )
    criterion("AC2 tight [0,2)", ok,
              f"A=({st.riesz.A1:.15f},{st.riesz.A2:.15f}) emp=({low:.15f},{high:.15f}) gram_off={off:.2e} t={elapsed:.3f}s")


def test_ac3_exact_verdicts(criterion):
    from fractions import Fraction

    t0 = time.perf_counter()
    bad = verify_tiling(instances.interval(0, Fraction(3, 2)))
    good = verify_tiling(instances.two_intervals(), 2)
    elapsed = time.perf_counter() - t0
    cells = [(c.shape.lo, c.shape.hi) for c, _ in bad.violations]
    ok = (
        not bad.ok
        and [m for _, m in bad.violations] == [2, 1]
        and cells == [((0,), (Fraction(1, 2),)), ((Fraction(1, 2),), (1,))]
        and good.ok and good.level == 2
        and elapsed < 1
    )
    criterion("AC3 exact verdicts", ok, f"violations={[m for _, m in bad.violations]} level={good.level} t={elapsed:.3f}s")


def test_ac4_splitting(criterion):
    rng = np.random.default_rng(2024)
    failures = []
    for i in range(20):
        d = 1 + i % 2
        k = 1 + (i // 2) % 4
        region = instances.random_multi_tile(rng, d, k)
        s = split(region, k)
        if sum(s.part_measure(j) for j in range(k)) != region.measure():
            failures.append((i, "total"))
        for j in range(k):
            part = s.part_region(j)
            pieces = reduce_mod_unit_lattice(part)
            cx = cell_decompose(pieces)
            if sum(p.measure() for p, _ in pieces) != 1 or {c.multiplicity for c in cx.cells} != {1}:
                failures.append((i, j))
    criterion("AC4 splitting", not failures, f"20 instances, failures={failures}")


def test_ac5_round_trip(criterion):
    t0 = time.perf_counter()
    worst = {}
    levels_ok = True
    for name, (region, k) in GEOMETRIES.items():
        rep = verify_tiling(region)
        if name.startswith("hexagon"):
            levels_ok &= rep.level == region.area()
        cx = rep.complex
        M = 8 if cx.kind == "polygon" else min(16, cx.denominator_lcm() * 8)
        if region.dim == 3:
            M = 4
        grid, s = _grid(name, M)
        worst[name] = roundtrip_error(grid, s, count=100, seed=1)
    elapsed = time.perf_counter() - t0
    top = max(worst.values())
    criterion("AC5 round trip", top <= 1e-10 and levels_ok and elapsed < 30,
              f"max rel err={top:.2e} over {len(worst)} geometries, hexagon levels=area: {levels_ok}, t={elapsed:.2f}s")


def _permutation_det(n):
    k = n.shape[0]
    total = 0j
    for perm in itertools.permutations(range(k)):
        sign = (-1) ** sum(perm[i] > perm[j] for i in range(k) for j in range(i + 1, k))
        total += sign * np.prod([n[perm[j], j] for j in range(k)])
    return total


def test_ac6_oracle_equivalence(criterion):
    details = []
    ok = True
    for name, M in [("interval_0_2", 8), ("two_intervals", 8), ("strip_2x1", 8), ("staircase", 8),
                    ("hexagon3", 8), ("unit_square", 4)]:
        grid, s = _grid(name, M, seed=3)
        rep = riesz_bounds(grid.table.profiles, s)
        sv2 = np.linalg.svd(analysis_matrix(grid, s), compute_uv=False) ** 2
        this = not grid.cells_missed() and abs(sv2.min() - rep.A1) <= 1e-8 and abs(sv2.max() - rep.A2) <= 1e-8
        ok &= this
        details.append(f"{name}:{'ok' if this else 'FAIL'}")
    rng = np.random.default_rng(6)
    det_err = 0.0
    for name in ("unit_square", "interval_0_2", "strip_2x1", "hexagon3"):
        for prof in profiles(*GEOMETRIES[name]).profiles:
            for _ in range(50):
                a = rng.random((prof.k, len(prof.translates[0])))
                n = build_profile_matrix(prof, a).N
                det_err = max(det_err, abs(det_as_function_of_shifts(prof, a) - _permutation_det(n)))
    ok &= det_err <= 1e-10
    criterion("AC6 oracle equivalence", ok, f"{' '.join(details)} det_err={det_err:.1e}")


def test_ac7_genericity(criterion):
    failures = 0
    for name, (region, k) in GEOMETRIES.items():
        table = profiles(region, k)
        for seed in range(100):
            try:
                s = select_shifts(table.profiles, seed=seed, tolerance=1e-6)
                assert s.quality > 1e-6
            except Exception:
                failures += 1
    criterion("AC7 genericity", failures == 0, f"{len(GEOMETRIES)} geometries x 100 seeds, failures={failures}")


def test_ac8_invariance(criterion):
    problems = []
    offset = {1: (5,), 2: (-3, 4), 3: (1, 1, -2)}
    for name, (region, k) in GEOMETRIES.items():
        t = offset[region.dim]
        base = profiles(region, k)
        moved = profiles(region.translate(t), k)
        if [p.shifted(t) for p in base] != list(moved):
            problems.append(f"profiles:{name}")
        s = select_shifts(base.profiles, seed=4)
        r0 = riesz_bounds(base.profiles, s)
        r1 = riesz_bounds(moved.profiles, s)
        if abs(r0.A1 - r1.A1) > 1e-12 or abs(r0.A2 - r1.A2) > 1e-12:
            problems.append(f"bounds:{name}")
    rng = np.random.default_rng(99)
    for i in range(10):
        d = 1 + i % 2
        k1, k2 = 1 + i % 3, 1 + (i + 1) % 2
        a = instances.random_multi_tile(rng, d, k1)
        b = instances.random_multi_tile(rng, d, k2).translate((10,) * d)
        if verify_tiling(BoxUnion(a.boxes + b.boxes)).level != k1 + k2:
            problems.append(f"union:{i}")
    for name in ("interval_0_2", "two_intervals", "strip_2x1", "staircase", "unit_cube"):
        lcm = profiles(*GEOMETRIES[name]).complex.denominator_lcm()
        g1, s = _grid(name, 2 * lcm, seed=7)
        g2, _ = _grid(name, 4 * lcm, seed=7)
        e1, e2 = empirical_frame_bounds(g1, s), empirical_frame_bounds(g2, s)
        if max(abs(e1[0] - e2[0]), abs(e1[1] - e2[1])) > 1e-10:
            problems.append(f"resolution:{name}")
    criterion("AC8 invariance", not problems, f"problems={problems}")


def test_ac9_determinism(criterion):
    spec = parse_instance({
        "dimension": 2,
        "lattice": {"basis": [["1", "0"], ["0", "1"]]},
        "region": {"type": "polygon2d", "vertices": [["0", "0"], ["1", "0"], ["2", "1"], ["2", "2"], ["1", "2"], ["0", "1"]]},
        "seed": 42,
        "resolution": 8,
    })
    a = render_report(run_pipeline(spec)).encode()
    b = render_report(run_pipeline(spec)).encode()
    criterion("AC9 determinism", a == b, f"{len(a)} bytes, identical={a == b}")
