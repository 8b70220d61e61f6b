"""Command-line surface: cover, encode, mutexgraph, plan, bench.

Exit codes: 0 success (plan found), 10 no plan within the makespan cap,
1 usage error, 2 input error, 3 solver error.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .aspplan import DEFAULT_SOLVER, solve_loop
from .cover import Covering, find_cover, identify_biclique_cover, naive_cover, write_covering
from .encode import (
    EncodingStats,
    biclique_sat_stats,
    emit_multiclique_program,
    emit_naive_program,
    program_text,
)
from .errors import MutexCoverError, NoPlanError, SolverError
from .graph import MutexGraph, read_graph, write_graph
from .pddl import parse_pddl
from .planning import eventual_fluent_mutexes, mutex_graph_of

EXIT_OK = 0
EXIT_NO_PLAN = 10
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_SOLVER = 3

BENCH_HEADER = "Instance,Edges,CL,Lit,Edges*,CL*,Lit*,time_ms"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_file(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_output(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cover_for(g: MutexGraph, baseline: str, fraction: float) -> Covering:
    if baseline == "multiclique":
        return find_cover(g, fraction)
    if baseline == "biclique":
        return identify_biclique_cover(g)
    return naive_cover(g)


def _stats_for(g: MutexGraph, c: Covering, baseline: str) -> EncodingStats:
    if baseline == "naive":
        _, stats = emit_naive_program(g)
        return stats
    if baseline == "biclique":
        return biclique_sat_stats(c)
    _, stats = emit_multiclique_program(c)
    return stats


def _emit_stats(args, g: MutexGraph, stats: EncodingStats, instance: str) -> None:
    if args.stats_json:
        _write_output(args.stats_json, stats.as_json(g.edge_count()) + "\n")
    if args.stats_csv:
        _write_output(args.stats_csv, stats.as_csv_row(instance, g.edge_count()) + "\n")


def cmd_cover(args) -> int:
    g = read_graph(_read_file(args.graph))
    c = _cover_for(g, args.baseline, args.coverage_fraction)
    stats = _stats_for(g, c, args.baseline)
    _write_output(args.output, write_covering(c))
    _emit_stats(args, g, stats, args.graph)
    return EXIT_OK


def cmd_encode(args) -> int:
    g = read_graph(_read_file(args.graph))
    if args.baseline == "naive":
        rules, stats = emit_naive_program(g)
    else:
        c = _cover_for(g, args.baseline, args.coverage_fraction)
        if args.baseline == "biclique":
            stats = biclique_sat_stats(c)
            rules, _ = emit_multiclique_program(c)
        else:
            rules, stats = emit_multiclique_program(c)
    _write_output(args.output, program_text(rules))
    _emit_stats(args, g, stats, args.graph)
    return EXIT_OK


def _mutex_graph_from_pddl(domain_path: str, problem_path: str, neededness: bool) -> MutexGraph:
    problem = parse_pddl(_read_file(domain_path), _read_file(problem_path), neededness)
    pairs, _ = eventual_fluent_mutexes(problem)
    return mutex_graph_of(pairs, all_fluents=sorted(problem.fluents))


def cmd_mutexgraph(args) -> int:
    g = _mutex_graph_from_pddl(args.domain, args.problem, args.neededness)
    _write_output(args.output, write_graph(g))
    return EXIT_OK


def cmd_plan(args) -> int:
    problem = parse_pddl(_read_file(args.domain), _read_file(args.problem), args.neededness)
    pairs, _ = eventual_fluent_mutexes(problem)
    g = mutex_graph_of(pairs, all_fluents=sorted(problem.fluents))
    covering = find_cover(g, args.coverage_fraction)
    plan = solve_loop(
        problem,
        covering,
        solver_cmd=args.solver,
        max_makespan=args.max_makespan,
        naive=args.naive,
        pairs=pairs,
    )
    lines = [" ".join(sorted(step)) for step in plan.steps]
    _write_output(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


def _bench_row(instance: str, neededness: bool) -> str:
    start = time.perf_counter()
    try:
        if ":" in instance:
            domain_path, problem_path = instance.split(":", 1)
            g = _mutex_graph_from_pddl(domain_path, problem_path, neededness)
        else:
            g = read_graph(_read_file(instance))
        full = find_cover(g, 1.0)
        _, full_stats = emit_multiclique_program(full)
        partial = find_cover(g, 0.9)
        _, partial_stats = emit_multiclique_program(partial)
    except (MutexCoverError, OSError, ValueError) as exc:
        return f"{instance},error: {exc},,,,,,"
    ms = (time.perf_counter() - start) * 1000.0
    return (
        f"{instance},{g.edge_count()},{full_stats.rules},{full_stats.literals},"
        f"{len(partial.covered)},{partial_stats.rules},{partial_stats.literals},"
        f"{ms:.1f}"
    )


def cmd_bench(args) -> int:
    rows = [BENCH_HEADER]
    for instance in args.instances:
        rows.append(_bench_row(instance, args.neededness))
    _write_output(args.output, "\n".join(rows) + "\n")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="mutexcover", description=__doc__)
    parser.add_argument("--version", action="version", version=f"mutexcover {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_cover_flags(p):
        p.add_argument("--coverage-fraction", type=float, default=1.0, metavar="F")
        p.add_argument(
            "--baseline",
            choices=["multiclique", "biclique", "naive"],
            default="multiclique",
        )
        p.add_argument("--stats-json", metavar="PATH")
        p.add_argument("--stats-csv", metavar="PATH")

    p = sub.add_parser("cover", help="cover a mutex graph with multicliques")
    p.add_argument("graph")
    p.add_argument("-o", "--output", default="-")
    add_cover_flags(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("encode", help="emit ASP constraints for a mutex graph")
    p.add_argument("graph")
    p.add_argument("-o", "--output", default="-")
    add_cover_flags(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("mutexgraph", help="compute the mutex graph of a PDDL problem")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--neededness", action="store_true")
    p.set_defaults(func=cmd_mutexgraph)

    p = sub.add_parser("plan", help="find a parallel plan for a PDDL problem")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--neededness", action="store_true")
    p.add_argument("--naive", action="store_true", help="pairwise mutex rules instead of the compact encoding")
    p.add_argument("--coverage-fraction", type=float, default=1.0, metavar="F")
    p.add_argument("--solver", default=DEFAULT_SOLVER, metavar="CMD")
    p.add_argument("--max-makespan", type=int, default=50, metavar="N")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("bench", help="coverage statistics table over instances")
    p.add_argument("instances", nargs="*", metavar="GRAPH|DOMAIN:PROBLEM")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--neededness", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "coverage_fraction", 1.0) <= 0 or getattr(args, "coverage_fraction", 1.0) > 1:
        print("error: --coverage-fraction must be in (0, 1]", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except NoPlanError as exc:
        print(f"no plan: {exc}", file=sys.stderr)
        return EXIT_NO_PLAN
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (MutexCoverError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
