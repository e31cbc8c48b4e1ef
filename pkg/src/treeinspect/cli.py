"""Command line entry point: ``treeinspect {gen,solve,schedule,bench,verify}``.

Exit status: 0 success, 1 usage error, 2 infeasible or invalid input.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import bench
from .exact import SearchLimitExceeded, bc_min_distance, bc_min_immersions
from .exact import brute_force_min_distance, brute_force_min_immersions
from .heuristics import dftn, sweeping_leaves
from .immersion import (SolutionFormatError, format_solution, parse_solution,
                        verify_solution)
from .scheduling import brute_force_min_time, dp_makespan_partition, min_time_heuristic
from .tree import (InfeasibleInstance, InstanceParams, TreeError, height, parse_tree,
                   random_tree, serialize_tree)

EXIT_USAGE = 1
EXIT_INPUT = 2

ALGOS = ("sweeping", "dftn", "bc-dist", "bc-imm", "brute-dist", "brute-imm",
         "mintime", "mintime-exact")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}")


def _sizes(text):
    # accepts "20,25,30" or "20..45:5"
    if ".." in text:
        span, _, step = text.partition(":")
        lo, hi = (int(x) for x in span.split(".."))
        return list(range(lo, hi + 1, int(step or 1)))
    return _int_list(text)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="treeinspect", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a random tree")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")

    s = sub.add_parser("solve", help="cover a tree")
    s.add_argument("--algo", choices=ALGOS, required=True)
    pgroup = s.add_mutually_exclusive_group()
    pgroup.add_argument("--p", type=int)
    pgroup.add_argument("--p-policy", choices=("2h", "2h+2"))
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--node-limit", type=int, help="abort exact search after this many nodes")
    s.add_argument("tree")

    c = sub.add_parser("schedule", help="optimal split of job costs among k agents")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--costs", type=_int_list, required=True)

    b = sub.add_parser("bench", help="run the random-tree experiment")
    b.add_argument("--sizes", type=_sizes, default=[30])
    b.add_argument("--trees-per-size", type=int, default=15)
    b.add_argument("--p-policy", choices=("both", "2h", "2h+2"), default="both")
    b.add_argument("--k", type=int, default=2)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out-dir", default="bench-out")
    b.add_argument("--exact-max-n", type=int, default=45)
    b.add_argument("--node-limit", type=int)
    b.add_argument("--time-limit", type=float, help="seconds per exact solve")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--no-plots", action="store_true")

    v = sub.add_parser("verify", help="check a solution file against a tree")
    v.add_argument("tree")
    v.add_argument("solution")
    v.add_argument("--p", type=int, help="autonomy (default 2h)")
    v.add_argument("--k", type=int, help="agent count (default: agents in the file, else 1)")
    return ap


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_tree(path):
    return parse_tree(_read(path))


def cmd_gen(args):
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    text = serialize_tree(random_tree(args.n, args.seed))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_solve(args):
    t = _load_tree(args.tree)
    h = height(t)
    if args.p is not None:
        p = args.p
    else:
        p = bench.autonomy(h, args.p_policy or "2h")
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    lim = {"node_limit": args.node_limit}
    runners = {
        "sweeping": lambda: sweeping_leaves(t, p),
        "dftn": lambda: dftn(t, p),
        "bc-dist": lambda: bc_min_distance(t, p, **lim),
        "bc-imm": lambda: bc_min_immersions(t, p, **lim),
        "brute-dist": lambda: brute_force_min_distance(t, p),
        "brute-imm": lambda: brute_force_min_immersions(t, p),
        "mintime": lambda: min_time_heuristic(t, p, args.k),
        "mintime-exact": lambda: brute_force_min_time(t, p, args.k),
    }
    t0 = time.perf_counter()
    sol = runners[args.algo]()
    ms = (time.perf_counter() - t0) * 1000.0
    out = format_solution(t, sol)
    if args.algo.startswith(("bc-", "brute-")):
        if sol.nodes_explored is not None:
            out += f"nodes_explored={sol.nodes_explored}\n"
        out += f"runtime_ms={ms:.3f}\n"
        if sol.optimal is False:
            out += "optimal=false\n"
            print("search limit reached: incumbent, not proven optimal", file=sys.stderr)
    sys.stdout.write(out)
    return 0


def cmd_schedule(args):
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    costs = args.costs
    value, blocks = dp_makespan_partition(costs, args.k)
    for j, block in enumerate(blocks, start=1):
        parts = [f"agent {j}:"] + [str(i + 1) for i in block]
        parts.append(f"time={sum(costs[i] for i in block)}")
        print(" ".join(parts))
    print(f"makespan={value}")
    return 0


def cmd_bench(args):
    policies = ("2h", "2h+2") if args.p_policy == "both" else (args.p_policy,)
    cfg = bench.BenchConfig(sizes=args.sizes, trees_per_size=args.trees_per_size,
                            policies=policies, k=args.k, seed=args.seed,
                            exact_max_n=args.exact_max_n, node_limit=args.node_limit,
                            time_limit=args.time_limit, jobs=args.jobs)
    records = bench.run_benchmark(cfg)
    paths = bench.write_outputs(records, cfg, args.out_dir, plots=not args.no_plots)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def cmd_verify(args):
    t = _load_tree(args.tree)
    parsed = parse_solution(_read(args.solution))
    sol = parsed.to_solution()
    p = args.p if args.p is not None else 2 * height(t)
    k = args.k if args.k is not None else max(1, len(sol.assignment or []))
    problems = verify_solution(t, InstanceParams(p, k), sol,
                               claimed_total=parsed.total, claimed_makespan=parsed.makespan)
    if problems:
        for msg in problems:
            print(msg)
        return EXIT_INPUT
    print("ok")
    return 0


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "schedule": cmd_schedule,
            "bench": cmd_bench, "verify": cmd_verify}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.cmd](args)
    except UsageError as exc:
        print(f"treeinspect: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TreeError, SolutionFormatError, InfeasibleInstance, SearchLimitExceeded) as exc:
        print(f"treeinspect: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
