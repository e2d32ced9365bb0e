"""The full chain: normalize, verify, split, profiles, select, bounds, round trip."""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    NotATilingError,
    ResolutionError,
    RieszTilerError,
    SelectionFailure,
    SingularProfileError,
    ValidationError,
)
from .geometry import HalfOpenBox, format_rational
from .io import InstanceSpec, dumps_stable, instance_to_json, region_to_json
from .lattice import density_check, normalize_instance
from .riesz import explicit_shifts, riesz_bounds, select_shifts, spectrum
from .tiling import profiles, split, verify_tiling
from .transform import build_grid, empirical_frame_bounds, roundtrip_error

log = logging.getLogger(__name__)

STAGES = ("normalize", "verify", "split", "profiles", "select", "bounds", "roundtrip")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_TILING = 2
EXIT_SELECTION = 3
EXIT_RESOLUTION = 4


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, NotATilingError):
        return EXIT_NOT_TILING
    if isinstance(exc, (SelectionFailure, SingularProfileError)):
        return EXIT_SELECTION
    if isinstance(exc, ResolutionError):
        return EXIT_RESOLUTION
    return EXIT_INVALID


def shape_to_json(shape) -> dict:
    if isinstance(shape, HalfOpenBox):
        return {"lo": list(shape.lo), "hi": list(shape.hi)}
    return {"vertices": [list(v) for v in shape.vertices]}


def default_resolution(cx) -> int:
    lcm = cx.denominator_lcm()
    return lcm * max(1, math.ceil(8 / lcm))


@dataclass
class PipelineState:
    spec: InstanceSpec
    region: object = None
    nmap: object = None
    tiling: object = None
    splitting: object = None
    table: object = None
    shifts: object = None
    riesz: object = None
    grid: object = None


@dataclass
class PipelineReport:
    instance: dict
    stages: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    failed_stage: str | None = None
    error: str | None = None
    exit_code: int = EXIT_OK
    state: PipelineState | None = field(default=None, repr=False, compare=False)

    def to_dict(self, include_timings: bool = False) -> dict:
        out = {
            "instance": self.instance,
            "stages": self.stages,
            "status": "ok" if self.exit_code == EXIT_OK else "failed",
            "exit_code": self.exit_code,
        }
        if self.failed_stage is not None:
            out["failed_stage"] = self.failed_stage
            out["error"] = self.error
        if include_timings:
            out["timings"] = self.timings
        return out


def _stage_normalize(st: PipelineState) -> dict:
    spec = st.spec
    st.region, st.nmap = normalize_instance(spec.region, spec.lattice)
    measure = spec.region.measure()
    ratio = measure / spec.lattice.covolume()
    k = spec.level if spec.level is not None else max(1, math.ceil(ratio))
    verdict = density_check(measure, spec.lattice, k)
    return {
        "identity_map": st.nmap.is_identity(),
        "normalized_region": region_to_json(st.region),
        "region_measure": measure,
        "covolume": verdict.covolume,
        "measure_over_covolume": verdict.ratio,
        "density_identity_holds": verdict.ok,
        "density_level_checked": verdict.level,
    }


def _stage_verify(st: PipelineState) -> dict:
    report = verify_tiling(st.region, st.spec.level)
    st.tiling = report
    payload = {
        "level": report.level,
        "expected_level": report.expected,
        "ok": report.ok,
        "total_mass": report.total_mass,
        "cell_count": len(report.complex.cells),
        "violations": [
            {"cell": shape_to_json(c.shape), "witness": list(c.witness), "multiplicity": m}
            for c, m in report.violations
        ],
    }
    if not report.ok:
        err = NotATilingError(
            f"multiplicity is {'non-constant' if report.level is None else report.level}"
            + (f", expected {report.expected}" if report.expected is not None else ""),
            report,
        )
        err.payload = payload
        raise err
    return payload


def _stage_split(st: PipelineState) -> dict:
    st.splitting = split(st.tiling.complex, st.tiling.level)
    return {
        "parts": [
            {"index": j + 1, "measure": st.splitting.part_measure(j), "cells": len(part)}
            for j, part in enumerate(st.splitting.parts)
        ]
    }


def _stage_profiles(st: PipelineState) -> dict:
    st.table = profiles(st.tiling.complex, st.tiling.level)
    return {
        "count": len(st.table),
        "profiles": [
            {"tuple": [list(t) for t in p.translates], "support_measure": p.support_measure}
            for p in st.table
        ],
    }


def _stage_select(st: PipelineState) -> dict:
    spec = st.spec
    if spec.shifts is not None:
        if len(spec.shifts) != st.tiling.level:
            raise ValidationError(f"{len(spec.shifts)} shift vectors given, level is {st.tiling.level}")
        st.shifts = explicit_shifts(st.table.profiles, np.array(spec.shifts))
    else:
        st.shifts = select_shifts(st.table.profiles, spec.restarts, spec.seed, spec.tolerance)
    return {
        "a": st.shifts.a,
        "seed": st.shifts.seed,
        "explicit": spec.shifts is not None,
        "quality": st.shifts.quality,
        "restarts": spec.restarts,
        "tolerance": spec.tolerance,
    }


def _stage_bounds(st: PipelineState) -> dict:
    st.riesz = riesz_bounds(st.table.profiles, st.shifts, st.spec.tolerance)
    covol = float(st.spec.lattice.covolume())
    out = st.riesz.to_dict()
    out["coefficient_bounds_original_coordinates"] = [st.riesz.A1 / covol, st.riesz.A2 / covol]
    out["spectrum_radius"] = st.spec.spectrum_radius
    out["spectrum"] = spectrum(st.shifts, st.nmap, st.spec.spectrum_radius)
    return out


def _stage_roundtrip(st: PipelineState) -> dict:
    cx = st.tiling.complex
    M = st.spec.resolution if st.spec.resolution is not None else default_resolution(cx)
    st.grid = build_grid(cx, M, st.table)
    err = roundtrip_error(st.grid, st.shifts, st.spec.roundtrip_samples, st.spec.seed)
    low, high = empirical_frame_bounds(st.grid, st.shifts)
    return {
        "resolution": M,
        "samples": st.spec.roundtrip_samples,
        "max_relative_error": err,
        "empirical_frame_bounds": [low, high],
        "cells_missed": st.grid.cells_missed(),
    }


_RUNNERS = {
    "normalize": _stage_normalize,
    "verify": _stage_verify,
    "split": _stage_split,
    "profiles": _stage_profiles,
    "select": _stage_select,
    "bounds": _stage_bounds,
    "roundtrip": _stage_roundtrip,
}


def run_pipeline(spec: InstanceSpec, until: str = "roundtrip") -> PipelineReport:
    """Run stages in order up to ``until``; stop at the first failing stage.

    Stage failures are recorded in the report (``failed_stage``, ``error``,
    ``exit_code``) instead of being raised.
    """
    if until not in STAGES:
        raise ValueError(f"unknown stage {until!r}")
    st = PipelineState(spec)
    report = PipelineReport(instance=instance_to_json(spec), state=st)
    for name in STAGES[: STAGES.index(until) + 1]:
        t0 = time.perf_counter()
        try:
            report.stages[name] = _RUNNERS[name](st)
        except RieszTilerError as exc:
            payload = getattr(exc, "payload", None)
            if payload is not None:
                report.stages[name] = payload
            report.failed_stage = name
            report.error = str(exc)
            report.exit_code = exit_code_for(exc)
            log.warning("stage %s failed: %s", name, exc)
            break
        finally:
            report.timings[name] = time.perf_counter() - t0
        log.info("stage %s done in %.3fs", name, report.timings[name])
    return report


def splitting_to_json(splitting) -> list:
    return [
        [{"cell": shape_to_json(cell.shape), "translate": list(t)} for cell, t in part]
        for part in splitting.parts
    ]


def profile_rows(report: PipelineReport) -> list[dict]:
    bounds = report.stages.get("bounds")
    if bounds is not None:
        rows = bounds["profiles"]
    else:
        rows = report.stages.get("profiles", {}).get("profiles", [])
    out = []
    for row in rows:
        out.append({
            "tuple": " ".join("(" + ",".join(str(x) for x in t) + ")" for t in row["tuple"]),
            "support_measure": format_rational(row["support_measure"]),
            "sigma_min": format(row["sigma_min"], ".17g") if "sigma_min" in row else "",
            "sigma_max": format(row["sigma_max"], ".17g") if "sigma_max" in row else "",
            "abs_det": format(row["abs_det"], ".17g") if "abs_det" in row else "",
        })
    return out


def render_report(report: PipelineReport, fmt: str = "json", include_timings: bool = False) -> str:
    if fmt == "json":
        return dumps_stable(report.to_dict(include_timings))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf, ["tuple", "support_measure", "sigma_min", "sigma_max", "abs_det"], lineterminator="\n"
        )
        writer.writeheader()
        writer.writerows(profile_rows(report))
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def export_report(report: PipelineReport, fmt: str, path, include_timings: bool = False) -> Path:
    """Write the report (json) or its profile table (csv)."""
    path = Path(path)
    text = render_report(report, fmt, include_timings)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report to {path}: {exc.strerror}") from exc
    return path
