"""Command-line entry point: present, dirichlet, verify, factor and draw.

Exit status is 0 on success, 2 on validation failure and 3 when tile
exploration hits its cap. Diagnostics are JSON lines on stderr; the
``POINCARE_LOG`` environment variable sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import io
from .geometry import GeometryError, Point
from .paths import factor_element
from .presentation import ValidationError
from .svg import render_svg
from .tessellation import (
    DEFAULT_CAP,
    ExplorationCapError,
    Window,
    explore_tiles,
    verify_local_tessellation,
)

EXIT_OK, EXIT_INVALID, EXIT_CAP = 0, 2, 3

log = logging.getLogger("poincare")


class JsonLineFormatter(logging.Formatter):
    def format(self, record):
        out = {"level": record.levelname.lower(), "logger": record.name, "message": record.getMessage()}
        out.update(getattr(record, "fields", {}))
        return json.dumps(out, sort_keys=True)


def setup_logging():
    level = os.environ.get("POINCARE_LOG", "WARNING").upper()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JsonLineFormatter())
    root = logging.getLogger("poincare")
    root.handlers[:] = [handler]
    root.setLevel(getattr(logging, level, logging.WARNING))
    root.propagate = False


def diagnostic(code: str, message: str, **fields):
    """Machine-readable error line on stderr (always emitted)."""
    line = {"level": "error", "code": code, "message": message}
    line.update({k: v for k, v in fields.items() if v is not None})
    print(json.dumps(line, sort_keys=True), file=sys.stderr)


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="job JSON file")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--tol", type=float, help="geometric tolerance override")
    common.add_argument("--window-center", type=_floats, help="comma-separated chart coordinates")
    common.add_argument("--window-radius", type=float, help="metric radius of the window")
    common.add_argument("--word-radius", type=int, help="word length for Dirichlet enumeration")
    common.add_argument("--seed", type=int, help="random seed (default 0)")
    common.add_argument("--format", choices=("json", "gap"), default="json")
    common.add_argument("--max-tiles", type=int, default=DEFAULT_CAP,
                        help=f"tile exploration cap (default {DEFAULT_CAP})")
    parser = argparse.ArgumentParser(prog="poincare", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("present", "fundamental polyhedron and pairings to a finite presentation"),
        ("dirichlet", "Dirichlet domain of matrix generators"),
        ("verify", "local tessellation checks on the window"),
        ("factor", "write a group element as a word in the side pairings"),
        ("draw", "SVG drawing of a 2-dimensional window"),
    ]:
        sub.add_parser(name, parents=[common], help=text)
    return parser


def load(args) -> io.Job:
    job = io.load_job(args.input)
    if args.tol is not None:
        if args.tol <= 0:
            raise ValidationError("schema", "--tol must be positive")
        job.tolerance = args.tol
    if args.word_radius is not None:
        job.word_radius = args.word_radius
    if args.seed is not None:
        job.seed = args.seed
    if args.max_tiles < 1:
        raise ValidationError("schema", "--max-tiles must be positive")
    if args.window_center is not None or args.window_radius is not None:
        center = (Point(job.space, args.window_center) if args.window_center is not None
                  else (job.window.center if job.window else job.basepoint))
        radius = args.window_radius or (job.window.radius if job.window else io.DEFAULT_WINDOW_RADIUS)
        job.window = Window(center, radius)
    return job


def emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_present(args, job) -> int:
    analysis = io.run_analysis(job, cap=args.max_tiles)
    report = verify_local_tessellation(analysis.polyhedron, [], analysis.window, samples=1000,
                                       seed=job.seed, tess=analysis.tessellation)
    pres = analysis.presentation
    if args.format == "gap":
        emit(args, io.presentation_gap(pres))
    else:
        emit(args, io.dumps(io.presentation_json(pres)))
    if not report.passed:
        for name in report.failures():
            diagnostic(f"verify_{name}", f"verification check {name!r} failed",
                       witness=report.checks[name]["witness"])
        return EXIT_INVALID
    return EXIT_OK


def cmd_dirichlet(args, job) -> int:
    dom = io.job_dirichlet(job)
    if not dom.stable:
        log.warning("essential faces changed at word radius %d; result is provisional", dom.word_radius)
    emit(args, io.dumps(io.dirichlet_json(job, dom)))
    return EXIT_OK


def cmd_verify(args, job) -> int:
    P, isos, _, _ = io.job_pairings(job)
    window = job.window or Window(job.basepoint, io.DEFAULT_WINDOW_RADIUS)
    tess = explore_tiles(P, io.close_under_inverse(isos), window, cap=args.max_tiles, tol=job.tolerance)
    report = verify_local_tessellation(P, isos, window, samples=2000, seed=job.seed, tess=tess)
    emit(args, io.dumps({"passed": report.passed, "checks": report.checks}))
    for name in report.failures():
        diagnostic(f"verify_{name}", f"verification check {name!r} failed",
                   witness=report.checks[name]["witness"])
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_factor(args, job) -> int:
    if "element" not in job.raw:
        raise ValidationError("schema", "factor needs an 'element' (matrix or generator word)")
    g = io.parse_element(job, job.raw["element"])
    analysis = io.run_analysis(job, cap=args.max_tiles)
    fac = factor_element(g, analysis.polyhedron, analysis.pairings, basepoint=job.basepoint,
                         seed=job.seed)
    pres = analysis.presentation
    out = {"word": str(fac.word), "retries": fac.retries, **io.presentation_json(pres)}
    emit(args, io.dumps(out))
    return EXIT_OK


def cmd_draw(args, job) -> int:
    if job.space.dim != 2:
        raise ValidationError("dimension", "draw needs a 2-dimensional space")
    analysis = io.run_analysis(job, cap=args.max_tiles)
    emit(args, render_svg(analysis.tessellation, analysis.pairings))
    return EXIT_OK


COMMANDS = {
    "present": cmd_present,
    "dirichlet": cmd_dirichlet,
    "verify": cmd_verify,
    "factor": cmd_factor,
    "draw": cmd_draw,
}


def main(argv=None) -> int:
    setup_logging()
    args = build_parser().parse_args(argv)
    try:
        job = load(args)
        return COMMANDS[args.command](args, job)
    except ExplorationCapError as exc:
        diagnostic("exploration_cap", str(exc))
        return EXIT_CAP
    except ValidationError as exc:
        diagnostic(exc.code, str(exc), **exc.detail)
        return EXIT_INVALID
    except (GeometryError, ValueError, KeyError, OSError) as exc:
        diagnostic("invalid_input", f"{type(exc).__name__}: {exc}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
