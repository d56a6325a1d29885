"""Command-line driver: validate, curvature, delaunay, uniformize.

Reports go to stdout as JSON, logs to stderr.  Exit codes: 0 success,
1 validation failure, 2 parse/format error, 3 flip limit exceeded,
4 not converged (partial trace still printed), 5 positive Euler
characteristic.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from .delaunay import edge_height_sums, make_weighted_delaunay
from .energy import evaluate
from .errors import (
    FlipLimitExceededError,
    MeshBuildError,
    NotConvergedError,
    PositiveEulerError,
)
from .io import (
    SurfaceFormatError,
    dump_json,
    load_factor,
    load_surface,
    report_to_dict,
    result_to_dict,
)
from .mesh import euler_characteristic
from .metric import validate_metric
from .uniformize import SolverOptions, uniformize

logger = logging.getLogger("disc-uniform")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_FLIP_LIMIT = 3
EXIT_NOT_CONVERGED = 4
EXIT_POSITIVE_EULER = 5


def _emit(doc: dict, output: str | None) -> None:
    text = dump_json(doc)
    print(text)
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _load(args):
    mesh, metric = load_surface(args.input)
    if getattr(args, "factor_file", None):
        metric.u = load_factor(args.factor_file, mesh.vertex_count)
    return mesh, metric


def cmd_validate(args) -> int:
    mesh, metric = _load(args)
    diagnostics = validate_metric(mesh, metric)
    chi = euler_characteristic(mesh)
    logger.info(
        "surface: %d vertices, %d edges, %d faces, chi = %d",
        mesh.vertex_count,
        mesh.edge_count,
        mesh.face_count,
        chi,
    )
    doc = {
        "valid": diagnostics.ok,
        "chi": chi,
        "unseparated_edges": [[e, value] for e, value in diagnostics.unseparated_edges],
        "degenerate_faces": [[f, list(lengths)] for f, lengths in diagnostics.degenerate_faces],
    }
    _emit(doc, getattr(args, "output", None))
    for line in diagnostics.describe():
        logger.warning("%s", line)
    return EXIT_OK if diagnostics.ok else EXIT_INVALID


def cmd_curvature(args) -> int:
    mesh, metric = _load(args)
    report = evaluate(mesh, metric)
    doc = report_to_dict(report, mesh, metric)
    logger.info(
        "gauss-bonnet: sum W = %.17g (2*pi*chi = %.17g)",
        float(sum(report.defects)),
        2.0 * math.pi * doc["chi"],
    )
    _emit(doc, getattr(args, "output", None))
    return EXIT_OK


def cmd_delaunay(args) -> int:
    mesh, metric = _load(args)
    log = make_weighted_delaunay(mesh, metric)
    sums = edge_height_sums(mesh, metric)
    doc = {
        "faces": [list(f) for f in mesh.face_list()],
        "h_sums": [float(x) for x in sums],
        "flips": log.flip_count,
        "flipped_edges": [[e, gap] for e, gap in log.entries],
        "tolerance": log.tolerance,
        "chi": euler_characteristic(mesh),
    }
    logger.info("%d flips, min height sum %.3e", log.flip_count, float(sums.min()))
    _emit(doc, getattr(args, "output", None))
    return EXIT_OK


def cmd_uniformize(args) -> int:
    mesh, metric = _load(args)
    try:
        options = SolverOptions(residual_tol=args.tol, max_iters=args.max_iters)
    except ValueError as exc:
        logger.error("bad solver options: %s", exc)
        return EXIT_PARSE
    try:
        result = uniformize(mesh, metric, options)
    except NotConvergedError as exc:
        logger.error("%s", exc)
        if exc.result is not None:
            _emit(result_to_dict(exc.result), args.output)
            _write_report(exc.result, args.report_dir)
        return EXIT_NOT_CONVERGED
    logger.info(
        "converged in %d iterations, residual %.3e, constant curvature %.12g",
        result.iterations,
        result.residual,
        result.constant_curvature,
    )
    _emit(result_to_dict(result), args.output)
    _write_report(result, args.report_dir)
    return EXIT_OK


def _write_report(result, report_dir) -> None:
    if not report_dir:
        return
    from . import report  # matplotlib import deferred until needed

    for path in report.write_report(result, report_dir):
        logger.info("wrote %s", path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disc-uniform",
        description="Constant-curvature uniformization of decorated "
        "piecewise-Euclidean surfaces",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, factor=False, solver=False):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--input", required=True, help="surface JSON file")
        sub.add_argument("--output", help="also write the JSON report to this file")
        if factor:
            sub.add_argument(
                "--u",
                dest="factor_file",
                help="JSON file with a conformal factor (array or object with 'u')",
            )
        if solver:
            sub.add_argument("--tol", type=float, default=1e-10, help="residual tolerance")
            sub.add_argument("--max-iters", type=int, default=100, help="iteration cap")
            sub.add_argument(
                "--report-dir",
                help="write trace.csv and convergence/curvature figures here",
            )
        sub.set_defaults(handler=handler)

    add("validate", cmd_validate, "check separation and triangle inequalities")
    add("curvature", cmd_curvature, "evaluate defects, areas and curvature", factor=True)
    add("delaunay", cmd_delaunay, "flip to a weighted Delaunay triangulation", factor=True)
    add("uniformize", cmd_uniformize, "solve for constant curvature", solver=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    try:
        return args.handler(args)
    except (SurfaceFormatError, MeshBuildError, json.JSONDecodeError, OSError) as exc:
        logger.error("cannot load input: %s", exc)
        return EXIT_PARSE
    except PositiveEulerError as exc:
        logger.error("%s", exc)
        return EXIT_POSITIVE_EULER
    except FlipLimitExceededError as exc:
        logger.error("%s", exc)
        return EXIT_FLIP_LIMIT


if __name__ == "__main__":
    sys.exit(main())
