"""Experiment harness: random trees, every algorithm, CSV tables and SVG plots."""
from __future__ import annotations

import csv
import logging
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .exact import bc_min_distance, bc_min_immersions
from .heuristics import dftn, sweeping_leaves
from .immersion import verify_solution
from .scheduling import min_time_heuristic
from .tree import InstanceParams, height, random_tree

log = logging.getLogger(__name__)

POLICIES = {"2h": 0, "2h+2": 1}
# column prefix per policy; '+' kept out of CSV headers
POLICY_TAG = {"2h": "p2h", "2h+2": "p2h2"}
ALGORITHMS = ("bcmd", "bcmi", "dftn", "swpl")
LABELS = {"bcmd": "B&C MD", "bcmi": "B&C MI", "dftn": "DFTN", "swpl": "Swp.L", "mT": "mT"}


def autonomy(h: int, policy: str) -> int:
    """p = 2(h + delta) with delta 0 for '2h' and 1 for '2h+2'."""
    return 2 * (h + POLICIES[policy])


def instance_seed(seed: int, n: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, n, i]).generate_state(1)[0])


@dataclass
class BenchConfig:
    sizes: Sequence[int] = (30,)
    trees_per_size: int = 15
    policies: Sequence[str] = ("2h", "2h+2")
    k: int = 2
    seed: int = 0
    exact_max_n: int = 45
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    jobs: int = 1


@dataclass
class RatioSummary:
    policy: str
    n: int
    algorithm: str
    metric: str
    samples: int
    min: float
    mean: float
    max: float


def record_columns(policies: Sequence[str]) -> List[str]:
    cols = ["tree_id", "n", "seed", "l", "h"]
    for pol in policies:
        tag = POLICY_TAG[pol]
        cols.append(f"{tag}_p")
        for alg in ALGORITHMS:
            cols += [f"{tag}_{alg}_dist", f"{tag}_{alg}_im"]
        cols += [f"{tag}_mT", f"{tag}_bcmd_optimal", f"{tag}_bcmi_optimal"]
        cols += [f"{tag}_{alg}_ms" for alg in ALGORITHMS + ("mT",)]
    return cols


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, (time.perf_counter() - t0) * 1000.0


def _checked(t, p, k, sol, name):
    problems = verify_solution(t, InstanceParams(p, k), sol)
    if problems:
        raise RuntimeError(f"{name} produced an invalid solution: {problems}")
    return sol


def solve_instance(n: int, i: int, cfg: BenchConfig) -> Dict[str, object]:
    seed = instance_seed(cfg.seed, n, i)
    t = random_tree(n, seed)
    h = height(t)
    rec: Dict[str, object] = {"tree_id": f"n{n}-{i:03d}", "n": n, "seed": seed,
                              "l": len(t.leaves), "h": h}
    for pol in cfg.policies:
        tag = POLICY_TAG[pol]
        p = autonomy(h, pol)
        rec[f"{tag}_p"] = p
        runs = {"dftn": (dftn, {}), "swpl": (sweeping_leaves, {})}
        if n <= cfg.exact_max_n:
            lim = {"node_limit": cfg.node_limit, "time_limit": cfg.time_limit}
            runs["bcmd"] = (bc_min_distance, lim)
            runs["bcmi"] = (bc_min_immersions, lim)
        for alg in ALGORITHMS:
            if alg not in runs:
                for col in ("dist", "im", "ms"):
                    rec[f"{tag}_{alg}_{col}"] = ""
                if alg in ("bcmd", "bcmi"):
                    rec[f"{tag}_{alg}_optimal"] = ""
                continue
            fn, kw = runs[alg]
            sol, ms = _timed(fn, t, p, **kw)
            _checked(t, p, 1, sol, alg)
            rec[f"{tag}_{alg}_dist"] = sol.total_distance
            rec[f"{tag}_{alg}_im"] = sol.count
            rec[f"{tag}_{alg}_ms"] = f"{ms:.3f}"
            if alg in ("bcmd", "bcmi"):
                rec[f"{tag}_{alg}_optimal"] = int(bool(sol.optimal))
        for ref, col in (("bcmd", "dist"), ("bcmi", "im")):
            if rec[f"{tag}_{ref}_optimal"] == 1:
                for alg in ("dftn", "swpl"):
                    if rec[f"{tag}_{alg}_{col}"] < rec[f"{tag}_{ref}_{col}"]:
                        raise RuntimeError(f"{alg} beats the exact {ref} on {rec['tree_id']}")
        sol, ms = _timed(min_time_heuristic, t, p, cfg.k)
        _checked(t, p, cfg.k, sol, "mT")
        rec[f"{tag}_mT"] = sol.makespan
        rec[f"{tag}_mT_ms"] = f"{ms:.3f}"
    return rec


def _solve_star(args):
    return solve_instance(*args)


def run_benchmark(cfg: BenchConfig) -> List[Dict[str, object]]:
    """Solve every instance; records come back in (size, index) order."""
    tasks = [(n, i, cfg) for n in cfg.sizes for i in range(cfg.trees_per_size)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            return list(pool.map(_solve_star, tasks))
    out = []
    for task in tasks:
        out.append(solve_instance(*task))
        log.info("solved %s", out[-1]["tree_id"])
    return out


def ratio_summaries(records: Sequence[Dict[str, object]], policies: Sequence[str]) -> List[RatioSummary]:
    """Heuristic / optimal ratios per size, for distance and immersion count.

    Instances whose exact run was skipped or stopped early are left out.
    """
    out = []
    sizes = sorted({r["n"] for r in records})
    for pol in policies:
        tag = POLICY_TAG[pol]
        for n in sizes:
            rows = [r for r in records if r["n"] == n]
            for alg in ("dftn", "swpl"):
                for metric, col, ref in (("distance", "dist", "bcmd"), ("immersions", "im", "bcmi")):
                    ratios = [r[f"{tag}_{alg}_{col}"] / r[f"{tag}_{ref}_{col}"] for r in rows
                              if r[f"{tag}_{ref}_optimal"] == 1 and r[f"{tag}_{ref}_{col}"]]
                    if not ratios:
                        continue
                    out.append(RatioSummary(pol, n, alg, metric, len(ratios), min(ratios),
                                            statistics.fmean(ratios), max(ratios)))
    return out


def runtime_summary(records, policies) -> List[Dict[str, object]]:
    """Mean wall-clock runtime per (size, algorithm), pooled over policies."""
    out = []
    for n in sorted({r["n"] for r in records}):
        rows = [r for r in records if r["n"] == n]
        for alg in ALGORITHMS + ("mT",):
            vals = [float(r[f"{POLICY_TAG[pol]}_{alg}_ms"]) for r in rows for pol in policies
                    if r.get(f"{POLICY_TAG[pol]}_{alg}_ms", "") != ""]
            if vals:
                out.append({"n": n, "algorithm": alg, "samples": len(vals),
                            "mean_ms": f"{statistics.fmean(vals):.3f}"})
    return out


def write_records_csv(records, policies, path: Path) -> None:
    cols = record_columns(policies)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in records:
            w.writerow(r)


def write_ratio_csv(summaries: Sequence[RatioSummary], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["policy", "n", "algorithm", "metric", "samples", "min", "mean", "max"])
        for s in summaries:
            w.writerow([s.policy, s.n, s.algorithm, s.metric, s.samples,
                        f"{s.min:.6f}", f"{s.mean:.6f}", f"{s.max:.6f}"])


def write_runtime_csv(rows, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=["n", "algorithm", "samples", "mean_ms"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def emit_plots(summaries: Sequence[RatioSummary], runtimes, out_dir: Path) -> List[Path]:
    """Ratio interval plots (distance and immersion count) and a runtime plot, as SVG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "treeinspect"
    out_dir = Path(out_dir)
    written = []
    for metric in ("distance", "immersions"):
        rows = [s for s in summaries if s.metric == metric]
        if not rows:
            print(f"no {metric} ratios to plot", file=sys.stderr)
            continue
        fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
        for ax, alg in zip(axes, ("dftn", "swpl")):
            policies = sorted({s.policy for s in rows}, key=list(POLICIES).index)
            for j, pol in enumerate(policies):
                sel = sorted((s for s in rows if s.algorithm == alg and s.policy == pol), key=lambda s: s.n)
                if not sel:
                    continue
                xs = np.array([s.n for s in sel], dtype=float) + 0.3 * j
                mean = np.array([s.mean for s in sel])
                lo = mean - np.array([s.min for s in sel])
                hi = np.array([s.max for s in sel]) - mean
                ax.errorbar(xs, mean, yerr=np.vstack([lo, hi]), fmt="o-", capsize=4, label=f"p={pol}")
            ax.set_title(LABELS[alg])
            ax.set_xlabel("n")
            if ax.get_legend_handles_labels()[0]:
                ax.legend()
        axes[0].set_ylabel(f"{metric} ratio (heuristic / optimal)")
        fig.tight_layout()
        path = out_dir / f"ratio_{metric}.svg"
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        written.append(path)

    if runtimes:
        fig, axes = plt.subplots(1, 2, figsize=(10, 4))
        panels = ((axes[0], ("dftn", "swpl", "bcmd"), "Min-Distance"),
                  (axes[1], ("mT", "bcmi"), "Min-Time / Min-Immersions"))
        for ax, algs, title in panels:
            for alg in algs:
                sel = [r for r in runtimes if r["algorithm"] == alg]
                if not sel:
                    print(f"no runtimes for {alg}; series omitted", file=sys.stderr)
                    continue
                ax.plot([r["n"] for r in sel], [float(r["mean_ms"]) for r in sel], "o-", label=LABELS[alg])
            ax.set_yscale("log")
            ax.set_xlabel("n")
            ax.set_ylabel("mean runtime (ms)")
            ax.set_title(title)
            if ax.get_legend_handles_labels()[0]:
                ax.legend()
        fig.tight_layout()
        path = out_dir / "runtime.svg"
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        written.append(path)
    return written


def write_outputs(records, cfg: BenchConfig, out_dir, plots: bool = True) -> Dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summaries = ratio_summaries(records, cfg.policies)
    runtimes = runtime_summary(records, cfg.policies)
    paths = {"results": out_dir / "results.csv", "ratios": out_dir / "ratios.csv",
             "runtime": out_dir / "runtime.csv"}
    write_records_csv(records, cfg.policies, paths["results"])
    write_ratio_csv(summaries, paths["ratios"])
    write_runtime_csv(runtimes, paths["runtime"])
    if plots and (summaries or runtimes):
        for p in emit_plots(summaries, runtimes, out_dir):
            paths[f"{p.stem}_svg"] = p
    return paths
