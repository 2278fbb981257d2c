"""Command-line interface.

Exit codes are the machine contract: 0 feasible (or pass), 1 infeasible (or
verification failure), 2 usage/input error, 3 oracle budget exhausted.
Human-readable output may change between versions.
"""

import argparse
import logging
import os
import sys
import time
from typing import Optional, Sequence

from .bench import (
    RunReport,
    dispatch_solve,
    loglog_slope,
    plot_bench,
    rows_to_csv,
    run_bench,
)
from .dual import HuggingCycle, NotConvexPositionError, solve_hugged
from .generate import KINDS, GenerationError, generate
from .model import (
    Instance,
    InvalidInstanceError,
    StructureError,
    happy_set_from_json,
    happy_set_to_json,
    instance_digest,
    instance_from_json,
    instance_to_json,
    verify_happy_set,
)
from .oracle import OracleBudgetError, OracleLimits, brute_force
from .paths import NotAPathError
from .render import render_svg

EXIT_FEASIBLE = 0
EXIT_INFEASIBLE = 1
EXIT_ERROR = 2
EXIT_BUDGET = 3

log = logging.getLogger("parity")


def _setup_logging() -> None:
    level = os.environ.get("PARITY_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _load_instance(args) -> Instance:
    with open(args.instance, "r", encoding="utf-8") as fh:
        return instance_from_json(fh.read(), skip_gp_check=args.skip_gp_check)


def _load_cycle_order(path: str) -> list[int]:
    import json

    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return list(payload["cycle"])


def _solve(inst: Instance, args, construct: bool):
    if args.hugging_cycle:
        order = _load_cycle_order(args.hugging_cycle)
        cycle = HuggingCycle.build(inst.graph, order)
        cycle.validate_geometry(inst.graph)
        res = solve_hugged(inst.graph, cycle, inst.unhappy, construct=construct)
        return res.feasible, res.happy_set, "convex-dp"
    try:
        return dispatch_solve(inst, construct, args.seed)
    except NotConvexPositionError as exc:
        raise SystemExit2(
            f"{exc}\nsupported without --hugging-cycle: plane paths and "
            "convex-position graphs"
        )


class SystemExit2(Exception):
    pass


def _report(inst: Instance, mode: str, feasible: bool, h_size: int, wall_ns: int,
            route: str, seed: int) -> RunReport:
    return RunReport(
        digest=instance_digest(inst),
        mode=mode,
        decision="feasible" if feasible else "infeasible",
        h_size=h_size,
        wall_ns=wall_ns,
        solver_path=route,
        seed=seed,
    )


def cmd_decide(args) -> int:
    inst = _load_instance(args)
    start = time.perf_counter_ns()
    feasible, _, route = _solve(inst, args, construct=False)
    wall = time.perf_counter_ns() - start
    for line in _report(inst, "decide", feasible, 0, wall, route, args.seed).lines():
        print(line)
    return EXIT_FEASIBLE if feasible else EXIT_INFEASIBLE


def cmd_construct(args) -> int:
    inst = _load_instance(args)
    start = time.perf_counter_ns()
    feasible, happy, route = _solve(inst, args, construct=True)
    wall = time.perf_counter_ns() - start
    size = len(happy) if happy else 0
    for line in _report(inst, "construct", feasible, size, wall, route, args.seed).lines():
        print(line)
    if not feasible:
        return EXIT_INFEASIBLE
    if happy is None:
        print("note: decision is feasible but no construction was found", file=sys.stderr)
        return EXIT_FEASIBLE
    report = verify_happy_set(inst, happy)
    if not report.ok:
        log.error("constructed set failed verification: %s", report.failures[:3])
        return EXIT_ERROR
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(happy_set_to_json(happy))
    return EXIT_FEASIBLE


def cmd_verify(args) -> int:
    inst = _load_instance(args)
    with open(args.happy_set, "r", encoding="utf-8") as fh:
        happy = happy_set_from_json(fh.read())
    report = verify_happy_set(inst, happy)
    if report.ok:
        print("verification: pass")
        return EXIT_FEASIBLE
    print("verification: fail")
    for kind, where, detail in report.failures:
        print(f"  {kind} {where}: {detail}")
    return EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    inst = _load_instance(args)
    limits = OracleLimits(
        max_vertices=args.max_vertices,
        max_vis_edges=args.max_vis_edges,
        node_budget=args.node_budget,
    )
    start = time.perf_counter_ns()
    res = brute_force(inst, limits)
    wall = time.perf_counter_ns() - start
    for line in _report(inst, "oracle", res.feasible,
                        len(res.happy_set) if res.happy_set else 0,
                        wall, "oracle", args.seed).lines():
        print(line)
    print(f"nodes: {res.nodes}")
    if args.output and res.happy_set is not None:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(happy_set_to_json(res.happy_set))
    return EXIT_FEASIBLE if res.feasible else EXIT_INFEASIBLE


def cmd_gen(args) -> int:
    inst = generate(args.kind, args.n, args.seed)
    text = instance_to_json(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_FEASIBLE


def cmd_render(args) -> int:
    inst = _load_instance(args)
    happy = None
    if args.happy_set:
        with open(args.happy_set, "r", encoding="utf-8") as fh:
            happy = happy_set_from_json(fh.read())
    svg = render_svg(inst, happy, show_vis=args.show_vis)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_FEASIBLE


def cmd_bench(args) -> int:
    sizes = [int(x) for x in args.n.split(",")]
    seeds = [int(x) for x in args.seed.split(",")]
    rows = run_bench(args.kind, sizes, seeds, args.mode, args.unhappy_frac)
    csv_text = rows_to_csv(rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.plot:
        plot_bench(rows, args.plot)
    if len(sizes) >= 2:
        pts = [(r["n"], max(r["wall_ns"], 1)) for r in rows]
        print(f"log-log slope: {loglog_slope(pts):.3f}", file=sys.stderr)
    return EXIT_FEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parity",
        description="decide and construct crossing-free parity augmentations "
        "of plane geometric graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_instance=True):
        if needs_instance:
            p.add_argument("-i", "--instance", required=True, help="instance JSON file")
        p.add_argument("--skip-gp-check", action="store_true",
                       help="skip the cubic collinearity validation")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("decide", help="decide feasibility")
    add_common(p)
    p.add_argument("--hugging-cycle", help="JSON file with a spanning cycle")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("construct", help="decide and write a happy set")
    add_common(p)
    p.add_argument("-o", "--output", required=True, help="happy-set JSON output")
    p.add_argument("--hugging-cycle")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="verify a happy set against an instance")
    add_common(p)
    p.add_argument("--happy-set", required=True, help="happy-set JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive ground-truth search")
    add_common(p)
    p.add_argument("-o", "--output", help="write the found happy set here")
    p.add_argument("--max-vertices", type=int, default=OracleLimits.max_vertices)
    p.add_argument("--max-vis-edges", type=int, default=OracleLimits.max_vis_edges)
    p.add_argument("--node-budget", type=int, default=OracleLimits.node_budget)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("render", help="render an instance (and happy set) to SVG")
    add_common(p)
    p.add_argument("--happy-set")
    p.add_argument("--show-vis", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="timing sweep over generated instances")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--n", required=True, help="comma-separated sizes")
    p.add_argument("--seed", default="0", help="comma-separated seeds")
    p.add_argument("--mode", choices=("decide", "construct"), default="construct")
    p.add_argument("--unhappy-frac", type=float, default=0.5,
                   help="per-vertex probability of being unhappy (even total)")
    p.add_argument("-o", "--output", help="CSV output path (default stdout)")
    p.add_argument("--plot", help="also render a log-log timing figure (PNG/SVG)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OracleBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInstanceError, StructureError, NotAPathError,
            NotConvexPositionError, GenerationError, SystemExit2,
            FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
