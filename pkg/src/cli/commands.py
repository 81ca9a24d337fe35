"""
Command-line surface
Every subcommand prints a deterministic answer on stdout; logs go to stderr.
Exit codes: 0 solved or validated, 1 certified negative answer or failed validation, 2 input error,
3 a solver produced a certificate that does not verify.
"""

import argparse
import json
import logging
import random
import sys
import time
from typing import List, Optional

from cli.report import SolveReport, check_report, height_line, load_instance
from geometry.exact import format_scalar, to_scalar
from parsers.mesh_parser import parse_mesh
from parsers.terrain_parser import parse_terrain_1d
from solvers.oracle import MODES, GridSpec, oracle_1d, oracle_2_5d_height, oracle_2_5d_zero
from solvers.watchtower_1d import solve_continuous_1d, solve_discrete_1d
from solvers.watchtower_2_5d import approx_watchtower, zero_watchtower
from terrain.mesh import ImpreciseMesh2_5D
from terrain.model import ImpreciseTerrain1D, UncertainVertex1D
from utils.errors import CertificateFailure, ValidationError, WatchtowerError
from utils.settings import settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3

SOLVERS_1D = {"discrete": solve_discrete_1d, "continuous": solve_continuous_1d}


def _scalar_arg(text: str):
    try:
        return to_scalar(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact number: {text!r}")


def _sizes_arg(text: str) -> List[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers: {text!r}")
    if not sizes or any(n < 2 for n in sizes):
        raise argparse.ArgumentTypeError("every size must be at least 2")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="watchtower", description="Optimistic shortest watchtower on imprecise terrains"
    )
    parser.add_argument("--verbose", action="store_true", help="Log debug output to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve1d", help="Solve an imprecise 1.5D terrain")
    p.add_argument("--mode", choices=sorted(SOLVERS_1D), default="continuous")
    p.add_argument("--input", required=True, help="Terrain JSON")
    p.add_argument("--json", action="store_true", help="Print the full report as JSON")
    p.add_argument("--svg", default=None, help="Write a figure of the solution")
    p.add_argument("--cert", default=None, help="Write the report as a certificate file")
    p.set_defaults(handler=cmd_solve1d)

    p = sub.add_parser("solve25d-zero", help="Decide the zero-watchtower problem on a mesh")
    p.add_argument("--input", required=True, help="Mesh JSON")
    p.add_argument("--output", default=None, help="Write the certified realization report")
    p.add_argument("--json", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(handler=cmd_solve25d_zero)

    p = sub.add_parser("solve25d-approx", help="Tower height within epsilon of the optimum")
    p.add_argument("--input", required=True, help="Mesh JSON")
    p.add_argument("--epsilon", required=True, type=_scalar_arg)
    p.add_argument("--search", choices=("linear", "binary"), default=None)
    p.add_argument("--output", default=None, help="Write the certified realization report")
    p.add_argument("--json", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(handler=cmd_solve25d_approx)

    p = sub.add_parser("oracle", help="Brute-force grid baseline (small inputs only)")
    p.add_argument("--input", required=True, help="Terrain or mesh JSON")
    p.add_argument("--grid", type=int, default=None, help="Samples per interval (>= 2)")
    p.add_argument("--mode", choices=MODES, default="discrete", help="1.5D base placement")
    p.add_argument("--epsilon", type=_scalar_arg, default=None, help="2.5D height step")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("validate", help="Re-check a certificate against its instance")
    p.add_argument("--input", required=True, help="Terrain or mesh JSON")
    p.add_argument("--cert", required=True, help="Certificate written by a solve command")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("bench", help="Time the 1.5D solver on seeded random terrains")
    p.add_argument("--sizes", type=_sizes_arg, default=[10_000, 100_000])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=sorted(SOLVERS_1D), default="continuous")
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("config", help="Show or change persistent settings")
    actions = p.add_subparsers(dest="action", required=True)
    a = actions.add_parser("show", help="Print every setting, or one by dotted key")
    a.add_argument("key", nargs="?", default=None)
    a = actions.add_parser("set", help="Set a dotted key; the value is read as JSON when it parses")
    a.add_argument("key")
    a.add_argument("value")
    actions.add_parser("reset", help="Restore the defaults")
    a = actions.add_parser("export", help="Write the settings to a file")
    a.add_argument("path")
    a = actions.add_parser("import", help="Merge settings from a file and save them")
    a.add_argument("path")
    p.set_defaults(handler=cmd_config)
    return parser


def setup_logging(verbose: bool):
    level = logging.DEBUG if verbose else settings.get("logging.level", "WARNING")
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _emit(report: SolveReport, as_json: bool):
    if as_json:
        print(report.to_json())
    else:
        print(height_line(report.height))


def cmd_solve1d(args) -> int:
    terrain = parse_terrain_1d(args.input)
    started = time.perf_counter()
    solution = SOLVERS_1D[args.mode](terrain)
    elapsed = time.perf_counter() - started
    report = SolveReport.from_solution_1d(args.mode, terrain, solution, elapsed)
    logger.info("solve1d %s: %s in %.4fs", args.mode, solution.height, elapsed)
    _emit(report, args.json)
    if args.cert:
        report.save(args.cert)
    if args.svg:
        # lxml is only needed for figures
        from render.svg_renderer import render_svg

        render_svg(terrain, solution, args.svg)
    return EXIT_OK


def cmd_solve25d_zero(args) -> int:
    mesh = parse_mesh(args.input)
    started = time.perf_counter()
    solution = zero_watchtower(mesh, workers=args.workers)
    elapsed = time.perf_counter() - started
    if solution is None:
        print("none")
        return EXIT_NEGATIVE
    report = SolveReport.from_guard(mesh, solution, elapsed=elapsed)
    if args.json:
        print(report.to_json())
    else:
        print(f"vertex {solution.vertex}")
    if args.output:
        report.save(args.output)
    return EXIT_OK


def cmd_solve25d_approx(args) -> int:
    mesh = parse_mesh(args.input)
    started = time.perf_counter()
    solution = approx_watchtower(mesh, args.epsilon, search=args.search, workers=args.workers)
    elapsed = time.perf_counter() - started
    report = SolveReport.from_guard(mesh, solution, epsilon=args.epsilon, elapsed=elapsed)
    if args.json:
        print(report.to_json())
    else:
        print(f"{height_line(solution.height)} vertex {solution.vertex}")
    if args.output:
        report.save(args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = load_instance(args.input)
    samples = args.grid if args.grid is not None else int(settings.get("oracle.samples", 3))
    try:
        grid = GridSpec(samples)
    except ValueError as e:
        raise ValidationError(str(e)) from e
    if isinstance(instance, ImpreciseMesh2_5D):
        if args.epsilon is None:
            found = oracle_2_5d_zero(instance, grid)
            print("true" if found else "false")
            return EXIT_OK if found else EXIT_NEGATIVE
        print(height_line(oracle_2_5d_height(instance, grid, args.epsilon)))
        return EXIT_OK
    print(height_line(oracle_1d(instance, grid, args.mode)))
    return EXIT_OK


def cmd_validate(args) -> int:
    instance = load_instance(args.input)
    try:
        report = SolveReport.load(args.cert)
    except ValidationError as e:
        # the certificate parses but violates the model
        print(f"invalid: {e}")
        return EXIT_NEGATIVE
    reason = check_report(report, instance)
    print(reason if reason == "ok" else f"invalid: {reason}")
    return EXIT_OK if reason == "ok" else EXIT_NEGATIVE


def random_terrain(n: int, rng: random.Random, spread: int = 100) -> ImpreciseTerrain1D:
    """Integer abscissas 0..n-1 and bounded integer intervals"""
    vertices = []
    for x in range(n):
        low = rng.randint(0, spread)
        vertices.append(UncertainVertex1D(x, low, low + rng.randint(0, spread // 5)))
    return ImpreciseTerrain1D(tuple(vertices))


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    solve = SOLVERS_1D[args.mode]
    previous: Optional[float] = None
    for n in args.sizes:
        terrain = random_terrain(n, rng)
        started = time.perf_counter()
        solution = solve(terrain)
        elapsed = time.perf_counter() - started
        line = f"n={n} seconds={elapsed:.4f} height={format_scalar(solution.height)}"
        if previous:
            line += f" ratio={elapsed / previous:.2f}"
        print(line)
        previous = elapsed
    return EXIT_OK


def _setting_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def cmd_config(args) -> int:
    if args.action == "show":
        if args.key is None:
            print(json.dumps(settings.get_all_settings(), indent=2, sort_keys=True))
            return EXIT_OK
        missing = object()
        value = settings.get(args.key, missing)
        if value is missing:
            print(f"error: no setting {args.key!r}", file=sys.stderr)
            return EXIT_INPUT
        print(json.dumps(value, sort_keys=True))
    elif args.action == "set":
        settings.set(args.key, _setting_value(args.value))
        settings.save_settings()
        logger.info("setting %s saved to %s", args.key, settings.settings_file)
    elif args.action == "reset":
        settings.reset_to_defaults()
    elif args.action == "export":
        settings.export_settings(args.path)
    else:
        settings.import_settings(args.path)
    return EXIT_OK


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    setup_logging(args.verbose)
    try:
        return args.handler(args)
    except CertificateFailure as e:
        logger.error("certificate check failed: %s", e, exc_info=True)
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except WatchtowerError as e:
        logger.debug("command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
