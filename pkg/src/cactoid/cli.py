"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch or a singular matrix where an
inverse was requested, 2 bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .composition import graph_cof, graph_det, graph_inverse, make_graph_bag
from .distance import OracleDomainError, graph_distance_matrix, shortest_path_oracle
from .formulas import ZeroCycleWeightError, verify_left_lapexp, verify_right_lapexp
from .fuzz import FuzzBounds, fuzz, verify_graph
from .graph import StructuralError
from .io import (SpecError, bag_to_json, dumps, load_spec, matrix_to_json, parse_graph_spec,
                 parse_undirected_spec)
from .linalg import SingularMatrixError, cofactor_sum, det, format_rational, inverse
from .undirected import ORACLE_MAX_VERTICES, classify_with_oracle, undirected_distance_matrix

log = logging.getLogger("cactoid")

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class _Mismatch(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj) + "\n")


def _load(arg: str):
    spec = load_spec(arg)
    kind = spec.get("kind")
    if kind == "cactoid_digraph":
        return kind, parse_graph_spec(spec)
    if kind == "undirected_family":
        return kind, parse_undirected_spec(spec)
    raise SpecError(f"unknown spec kind {kind!r}")


def _load_graph(arg: str):
    kind, obj = _load(arg)
    if kind != "cactoid_digraph":
        raise SpecError("this command needs a 'cactoid_digraph' spec")
    return obj


def _cross_check(what: str, got, oracle) -> None:
    if got != oracle:
        raise _Mismatch(f"{what}: closed form {got} but oracle gives {oracle}")
    log.info("%s agrees with the oracle", what)


def cmd_dist(args) -> int:
    kind, obj = _load(args.spec)
    if kind == "undirected_family":
        _emit(matrix_to_json(undirected_distance_matrix(obj)))
        return EXIT_OK
    dmat = graph_distance_matrix(obj)
    if args.oracle:
        try:
            fw = shortest_path_oracle(obj)
        except OracleDomainError as exc:
            log.warning("skipping shortest-path cross-check: %s", exc)
        else:
            mm = dmat.first_mismatch(fw)
            if mm is not None:
                raise _Mismatch(f"distance table differs from Floyd-Warshall at {mm[:2]}: {mm[2]} vs {mm[3]}")
    _emit(matrix_to_json(dmat))
    return EXIT_OK


def cmd_det(args) -> int:
    kind, obj = _load(args.spec)
    if kind == "undirected_family":
        _emit({"det": format_rational(det(undirected_distance_matrix(obj)))})
        return EXIT_OK
    value = graph_det(obj)
    if args.oracle:
        _cross_check("det", value, det(graph_distance_matrix(obj)))
    _emit({"det": format_rational(value)})
    return EXIT_OK


def cmd_cof(args) -> int:
    graph = _load_graph(args.spec)
    value = graph_cof(graph)
    if args.oracle:
        _cross_check("cof", value, cofactor_sum(graph_distance_matrix(graph)))
    _emit({"cof": format_rational(value)})
    return EXIT_OK


def cmd_inv(args) -> int:
    graph = _load_graph(args.spec)
    result = graph_inverse(graph)
    if args.oracle:
        oracle = inverse(graph_distance_matrix(graph))
        mm = oracle.first_mismatch(result)
        if mm is not None:
            raise _Mismatch(f"inverse differs from the oracle at {mm[:2]}: {mm[3]} vs {mm[2]}")
    _emit(matrix_to_json(result))
    return EXIT_OK


def cmd_bag(args) -> int:
    graph = _load_graph(args.spec)
    bag = make_graph_bag(graph)
    if args.oracle:
        for report in (verify_left_lapexp(bag), verify_right_lapexp(bag)):
            if not report.passed:
                names = ", ".join(c.name for c in report.failures())
                raise _Mismatch(f"{report.side} LapExp conditions fail: {names}")
    _emit(bag_to_json(bag))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify_graph(_load_graph(args.spec))
    _emit(report.to_json())
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_classify(args) -> int:
    kind, obj = _load(args.spec)
    if kind != "undirected_family":
        raise SpecError("classify needs an 'undirected_family' spec")
    result = classify_with_oracle(obj, args.max_oracle_vertices)
    record = result.discrepancy()
    if record is not None:
        log.warning("stated determinant %s differs from oracle %s for %s",
                    record["stated"], record["oracle"], record["shape"])
    _emit(result.to_json())
    return EXIT_OK


def cmd_fuzz(args) -> int:
    if not 0 <= args.seed < 2 ** 64:
        raise SpecError("seed must be a 64-bit unsigned integer")
    try:
        bounds = FuzzBounds(max_n=args.max_n, max_r=args.max_r, max_m=args.max_m,
                            num_min=args.num_min, num_max=args.num_max, den_max=args.den_max,
                            max_blocks=args.max_blocks)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    report = fuzz(args.seed, args.cases, bounds, graph_cases=args.graph_cases,
                  include_degenerate=args.include_degenerate, jobs=args.jobs)
    _emit(report.to_json())
    return EXIT_OK if report.passed else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cactoid", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    spec_help = "inline JSON (starting with '{') or a path to a JSON file"
    for name, func, text in (
        ("dist", cmd_dist, "distance matrix"),
        ("det", cmd_det, "determinant of the distance matrix"),
        ("cof", cmd_cof, "sum of all cofactors of the distance matrix"),
        ("inv", cmd_inv, "inverse of the distance matrix via the rank-one formula"),
        ("bag", cmd_bag, "lambda, alpha, beta and the Laplacian-like matrix"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("spec", help=spec_help)
        p.add_argument("--oracle", action="store_true",
                       help="cross-check against the brute-force oracle; exit 1 on mismatch")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run every identity check on one graph")
    p.add_argument("spec", help=spec_help)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="determinant verdict for an undirected C(n; m..) shape")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--max-oracle-vertices", type=int, default=ORACLE_MAX_VERTICES)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("fuzz", help="seeded random verification sweep")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--graph-cases", type=int, default=None,
                   help="random cactoid graphs to check (default: cases // 5)")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--max-r", type=int, default=4)
    p.add_argument("--max-m", type=int, default=4)
    p.add_argument("--num-min", type=int, default=-5)
    p.add_argument("--num-max", type=int, default=5)
    p.add_argument("--den-max", type=int, default=4)
    p.add_argument("--max-blocks", type=int, default=5)
    p.add_argument("--include-degenerate", action="store_true",
                   help="keep blocks with a zero-weight cycle instead of resampling")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_fuzz)
    return parser


def _configure_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except (SpecError, StructuralError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except ZeroCycleWeightError as exc:
        log.error("zero cycle weight: %s", exc)
        return EXIT_MISMATCH
    except SingularMatrixError as exc:
        log.error("singular: %s", exc)
        return EXIT_MISMATCH
    except _Mismatch as exc:
        log.error("oracle mismatch: %s", exc)
        return EXIT_MISMATCH


def main() -> None:
    sys.exit(run())
