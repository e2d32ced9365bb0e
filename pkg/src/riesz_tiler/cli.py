"""Command-line front end.

Exit codes: 0 ok, 1 parse/validation, 2 not a tiling, 3 shift selection
failure, 4 bad resolution.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys

from .errors import RieszTilerError
from .io import dumps_stable, load_instance
from .pipeline import (
    EXIT_INVALID,
    EXIT_OK,
    exit_code_for,
    render_report,
    run_pipeline,
    splitting_to_json,
)
from .svg import render_svg
from .tiling import profiles

LOG_ENV = "RIESZ_TILER_LOG"

COMMANDS = {
    "verify": "verify",
    "split": "split",
    "profiles": "profiles",
    "select": "select",
    "bounds": "bounds",
    "roundtrip": "roundtrip",
    "report": "roundtrip",
    "render": "split",
}


def _configure_logging():
    level = os.environ.get(LOG_ENV, "warn").lower()
    level = {"warn": "warning"}.get(level, level)
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-g", "--geometry", required=True, help="instance JSON file")
    common.add_argument("--seed", type=int, help="shift-selection seed")
    common.add_argument("--restarts", type=int, help="number of candidate shift tuples")
    common.add_argument("--tol", type=float, help="minimum acceptable sigma_min")
    common.add_argument("--resolution", type=int, help="samples per axis of the fundamental cell")
    common.add_argument("-k", "--level", type=int, help="tiling level (inferred if omitted)")
    common.add_argument("-o", "--output", help="output path (stdout if omitted)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in JSON")

    parser = argparse.ArgumentParser(
        prog="riesz-tiler",
        description="Riesz bases of exponentials for multiple lattice tiles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "verify": "exact level-k tiling check",
        "split": "split the region into k almost fundamental domains",
        "profiles": "list the distinct translate profiles",
        "select": "choose generic shift vectors",
        "bounds": "compute the Riesz constants",
        "roundtrip": "discrete analysis/synthesis round trip",
        "report": "run the full pipeline",
        "render": "draw a 2D instance as SVG",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def _apply_overrides(spec, args):
    changes = {}
    for attr, field in (("seed", "seed"), ("restarts", "restarts"), ("tol", "tolerance"),
                        ("resolution", "resolution"), ("level", "level")):
        value = getattr(args, attr)
        if value is not None:
            changes[field] = value
    return dataclasses.replace(spec, **changes) if changes else spec


def _emit(text: str, output):
    if output is None:
        sys.stdout.write(text)
        return
    try:
        with open(output, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {output}: {exc.strerror}") from exc


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        spec = _apply_overrides(load_instance(args.geometry), args)
    except RieszTilerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)

    report = run_pipeline(spec, until=COMMANDS[args.command])
    if report.exit_code != EXIT_OK:
        print(f"error in stage {report.failed_stage}: {report.error}", file=sys.stderr)

    try:
        if args.command == "render":
            if report.exit_code != EXIT_OK:
                return report.exit_code
            st = report.state
            render_svg(st.region, st.splitting, st.tiling.complex, args.output or "instance.svg",
                       table=profiles(st.tiling.complex, st.tiling.level))
        elif args.command == "split" and report.exit_code == EXIT_OK:
            _emit(dumps_stable(splitting_to_json(report.state.splitting)), args.output)
        else:
            _emit(render_report(report, args.format, args.timings), args.output)
    except RieszTilerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
