"""Benchmark cells: generate, solve, verify, and report timings.

Verification is quadratic in the instance size, so bench cells skip it above
VERIFY_MAX_N vertices; the recorded wall time always covers exactly the
decide(+construct) call.
"""

import csv
import gc
import io
import logging
import math
import random
import time
from dataclasses import dataclass
from typing import Sequence

from .dual import convex_graph_solve
from .generate import generate
from .model import Instance, instance_digest, verify_happy_set
from .paths import NotAPathError, solve_path

log = logging.getLogger(__name__)

VERIFY_MAX_N = 2000

CSV_COLUMNS = (
    "kind",
    "n",
    "seed",
    "mode",
    "digest",
    "decision",
    "h_size",
    "wall_ns",
    "solver_path",
    "verified",
)


@dataclass(frozen=True)
class RunReport:
    digest: str
    mode: str
    decision: str          # feasible | infeasible
    h_size: int
    wall_ns: int
    solver_path: str
    seed: int

    def lines(self) -> list[str]:
        return [
            f"digest: {self.digest}",
            f"mode: {self.mode}",
            f"decision: {self.decision}",
            f"happy-set-size: {self.h_size}",
            f"wall-ns: {self.wall_ns}",
            f"solver-path: {self.solver_path}",
            f"seed: {self.seed}",
        ]


def random_even_unhappy(n: int, seed: int, frac: float = 0.5) -> frozenset[int]:
    """A seeded unhappy set of even size; each vertex joins with probability frac."""
    rng = random.Random(f"unhappy:{seed}:{n}:{frac}")
    chosen = [v for v in range(n) if rng.random() < frac]
    if len(chosen) % 2:
        chosen.pop()
    return frozenset(chosen)


def dispatch_solve(inst: Instance, construct: bool, seed: int = 0):
    """Route an instance to the path solver or the convex solver."""
    try:
        res = solve_path(inst.graph, inst.unhappy, construct=construct, seed=seed)
        return res.feasible, res.happy_set, res.route
    except NotAPathError:
        pass
    res = convex_graph_solve(inst.graph, inst.unhappy, construct=construct)
    return res.feasible, res.happy_set, "convex-dp"


def run_cell(
    kind: str,
    n: int,
    seed: int,
    mode: str = "construct",
    unhappy_frac: float = 0.5,
) -> dict:
    inst = generate(kind, n, seed)
    if unhappy_frac > 0:
        inst = Instance(inst.graph, random_even_unhappy(n, seed, unhappy_frac))
    construct = mode == "construct"
    gc_was_on = gc.isenabled()
    gc.disable()
    try:
        start = time.perf_counter_ns()
        feasible, happy, route = dispatch_solve(inst, construct, seed)
        wall = time.perf_counter_ns() - start
    finally:
        if gc_was_on:
            gc.enable()
    verified = "skipped"
    if construct and feasible and happy is not None:
        if n <= VERIFY_MAX_N:
            report = verify_happy_set(inst, happy)
            verified = "pass" if report.ok else "FAIL"
            if not report.ok:
                log.error("bench cell %s n=%d seed=%d failed verification", kind, n, seed)
        else:
            verified = "skipped-large"
    return {
        "kind": kind,
        "n": n,
        "seed": seed,
        "mode": mode,
        "digest": instance_digest(inst),
        "decision": "feasible" if feasible else "infeasible",
        "h_size": len(happy) if happy else 0,
        "wall_ns": wall,
        "solver_path": route,
        "verified": verified,
    }


def run_bench(
    kind: str,
    sizes: Sequence[int],
    seeds: Sequence[int],
    mode: str = "construct",
    unhappy_frac: float = 0.5,
) -> list[dict]:
    rows = []
    for n in sizes:
        for seed in seeds:
            rows.append(run_cell(kind, n, seed, mode, unhappy_frac))
    rows.sort(key=lambda r: (r["kind"], r["n"], r["seed"]))
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\r\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row[k] for k in CSV_COLUMNS})
    return buf.getvalue()


def loglog_slope(points: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    if len(points) < 2:
        raise ValueError("need at least two points for a slope")
    lx = [math.log(x) for x, _ in points]
    ly = [math.log(y) for _, y in points]
    mx = sum(lx) / len(lx)
    my = sum(ly) / len(ly)
    var = sum((a - mx) ** 2 for a in lx)
    cov = sum((a - mx) * (b - my) for a, b in zip(lx, ly))
    return cov / var


def plot_bench(rows: Sequence[dict], path: str) -> None:
    """Log-log scatter of solve time against size, one series per kind."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 5))
    kinds = sorted({r["kind"] for r in rows})
    for kind in kinds:
        pts = sorted(
            (r["n"], r["wall_ns"] / 1e9) for r in rows if r["kind"] == kind
        )
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=kind)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("vertices")
    ax.set_ylabel("solve wall time [s]")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
