"""Instance files and the bit-stable JSON writer."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .geometry import BoxUnion, Polygon2D, Region, as_vector, format_rational, normalize_box_union
from .lattice import Lattice, transpose


@dataclass(frozen=True)
class InstanceSpec:
    dimension: int
    lattice: Lattice
    region: Region
    level: int | None = None
    seed: int = 0
    restarts: int = 64
    tolerance: float = 1e-6
    resolution: int | None = None
    shifts: tuple | None = None  # explicit shift vectors, overriding the seeded search
    spectrum_radius: int = 1
    roundtrip_samples: int = 4


def _region_from_json(obj, d: int) -> Region:
    kind = obj.get("type")
    if kind == "box_union":
        boxes = [(as_vector(b["lo"]), as_vector(b["hi"])) for b in obj["boxes"]]
        region = normalize_box_union(boxes)
    elif kind == "polygon2d":
        region = Polygon2D(tuple(as_vector(v) for v in obj["vertices"]))
    else:
        raise ValidationError(f"unknown region type {kind!r}")
    if region.dim != d:
        raise ValidationError(f"region is {region.dim}D but dimension is {d}")
    return region


def parse_instance(obj: dict) -> InstanceSpec:
    """Validate an instance dictionary; every problem becomes a ValidationError."""
    try:
        d = int(obj["dimension"])
        if d < 1:
            raise ValidationError("dimension must be positive")
        lattice = Lattice.from_generators(obj["lattice"]["basis"])
        if lattice.dim != d:
            raise ValidationError(f"lattice is {lattice.dim}D but dimension is {d}")
        region = _region_from_json(obj["region"], d)
        level = obj.get("level")
        if level is not None and (int(level) != level or level < 1):
            raise ValidationError(f"level must be a positive integer, got {level!r}")
        shifts = obj.get("shifts")
        if shifts is not None:
            shifts = tuple(tuple(float(Fraction(str(x))) for x in v) for v in shifts)
            if any(len(v) != d for v in shifts):
                raise ValidationError("every shift vector needs `dimension` entries")
        resolution = obj.get("resolution")
        return InstanceSpec(
            dimension=d,
            lattice=lattice,
            region=region,
            level=None if level is None else int(level),
            seed=int(obj.get("seed", 0)),
            restarts=int(obj.get("restarts", 64)),
            tolerance=float(obj.get("tolerance", 1e-6)),
            resolution=None if resolution is None else int(resolution),
            shifts=shifts,
            spectrum_radius=int(obj.get("spectrum_radius", 1)),
            roundtrip_samples=int(obj.get("roundtrip_samples", 4)),
        )
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed instance: {exc!r}") from exc


def load_instance(path) -> InstanceSpec:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return parse_instance(obj)


def region_to_json(region: Region) -> dict:
    if isinstance(region, BoxUnion):
        return {
            "type": "box_union",
            "boxes": [
                {"lo": [format_rational(x) for x in b.lo], "hi": [format_rational(x) for x in b.hi]}
                for b in region.boxes
            ],
        }
    return {"type": "polygon2d", "vertices": [[format_rational(x) for x in v] for v in region.vertices]}


def instance_to_json(spec: InstanceSpec) -> dict:
    obj = {
        "dimension": spec.dimension,
        "lattice": {"basis": [[format_rational(x) for x in col] for col in transpose(spec.lattice.basis)]},
        "region": region_to_json(spec.region),
        "seed": spec.seed,
        "restarts": spec.restarts,
        "tolerance": spec.tolerance,
        "spectrum_radius": spec.spectrum_radius,
        "roundtrip_samples": spec.roundtrip_samples,
    }
    if spec.level is not None:
        obj["level"] = spec.level
    if spec.resolution is not None:
        obj["resolution"] = spec.resolution
    if spec.shifts is not None:
        obj["shifts"] = [list(v) for v in spec.shifts]
    return obj


def to_jsonable(obj):
    """Plain JSON types: Fractions become "p/q" strings, complex numbers [re, im]."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize {x} as JSON")
    return format(x, ".17g")


def dumps_stable(obj, indent: int = 2) -> str:
    """JSON with sorted keys and every float written with 17 significant digits."""

    def write(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {write(o[k], level + 1)}" for k in sorted(o)]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, list):
            if not o:
                return "[]"
            if all(not isinstance(v, (dict, list)) for v in o):
                return "[" + ", ".join(write(v, level) for v in o) + "]"
            return "[\n" + ",\n".join(pad + write(v, level + 1) for v in o) + "\n" + end + "]"
        if isinstance(o, bool) or o is None or isinstance(o, (int, str)):
            return json.dumps(o)
        if isinstance(o, float):
            return _format_float(o)
        raise TypeError(f"not JSON serializable: {type(o).__name__}")

    return write(to_jsonable(obj), 0) + "\n"


# ---------------------------------------------------------------------------
# sampled functions and coefficient arrays


def write_samples(path, points: np.ndarray, values: np.ndarray, fmt: str = "json") -> Path:
    """Write (point, re, im) records; points (n, d), values (n,)."""
    path = Path(path)
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=complex).ravel()
    if fmt == "json":
        records = [
            {"point": list(p), "re": float(v.real), "im": float(v.imag)} for p, v in zip(points, values)
        ]
        text = dumps_stable(records)
    elif fmt == "csv":
        d = points.shape[1]
        lines = [",".join([f"x{i}" for i in range(d)] + ["re", "im"])]
        for p, v in zip(points, values):
            lines.append(",".join([_format_float(float(x)) for x in p] + [_format_float(v.real), _format_float(v.imag)]))
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    path.write_text(text)
    return path


def read_samples(path, fmt: str = "json") -> tuple[np.ndarray, np.ndarray]:
    """Inverse of ``write_samples``: returns (points, values)."""
    text = Path(path).read_text()
    if fmt == "json":
        records = json.loads(text)
        points = np.array([r["point"] for r in records], dtype=float)
        values = np.array([complex(r["re"], r["im"]) for r in records])
    elif fmt == "csv":
        rows = [line.split(",") for line in text.strip().splitlines()[1:]]
        data = np.array(rows, dtype=float)
        points, values = data[:, :-2], data[:, -2] + 1j * data[:, -1]
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return points, values


def write_region_function(path, grid, f: np.ndarray, fmt: str = "json") -> Path:
    """A function on the region samples, shape (M**d, k), one record per sample point."""
    pts = grid.omega_points.reshape(-1, grid.dim)
    return write_samples(path, pts, np.asarray(f).reshape(-1), fmt)


def read_region_function(path, grid, fmt: str = "json") -> np.ndarray:
    """Read values back onto the grid; the points must be the grid's region samples, in order."""
    points, values = read_samples(path, fmt)
    expected = grid.omega_points.reshape(-1, grid.dim)
    if points.shape != expected.shape or not np.allclose(points, expected, atol=1e-12, rtol=0):
        raise ValidationError("sample points do not match this grid")
    return values.reshape(grid.n_base, grid.level)


def coefficients_to_json(c: np.ndarray) -> list[dict]:
    """Records {j, m, re, im}; j counts from 1, m is the centered integer frequency."""
    c = np.asarray(c)
    M = c.shape[1]
    out = []
    for idx in np.ndindex(c.shape):
        v = c[idx]
        out.append({
            "j": idx[0] + 1,
            "m": [i - M // 2 for i in idx[1:]],
            "re": float(v.real),
            "im": float(v.imag),
        })
    return out


def coefficients_from_json(records: list[dict]) -> np.ndarray:
    k = max(r["j"] for r in records)
    d = len(records[0]["m"])
    M = round((len(records) / k) ** (1 / d))
    if k * M**d != len(records):
        raise ValidationError("coefficient records do not form a full window")
    c = np.zeros((k,) + (M,) * d, dtype=complex)
    for r in records:
        c[(r["j"] - 1,) + tuple(m + M // 2 for m in r["m"])] = complex(r["re"], r["im"])
    return c
