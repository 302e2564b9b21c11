"""Command-line entry point: compute, simulate, export-viz.

Results go to files, one-line summaries to stdout, progress to stderr.
Exit codes: 0 success, 1 runtime failure, 2 usage or file errors. All
randomness flows from --seed; ENI_THREADS caps metric parallelism.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from .errors import (
    EniError,
    FormatError,
    InvalidInput,
    PlanningFailed,
)
from .geometry import Environment, points_in_free_space
from .io import (
    export_viz_bundle,
    load_environment,
    load_eni_result,
    load_simulation_report,
    save_eni_result,
    save_simulation_report,
)
from .metric import RotationSet, compute_eni
from .simulator import (
    AGENT_RADIUS,
    AgentState,
    CONTROLLERS,
    navigability,
    plan_virtual_path,
    simulate_path,
)


@dataclass
class RunConfig:
    """Parsed flags; defaults mirror the metric's standard parameters."""

    subcommand: str
    pe: str = ""
    ve: str = ""
    samples: int = 500
    thetas: int = 10
    seed: int = 0
    paths: int = 50
    controller: str = "none"
    result: str = ""
    traces: str = ""
    out: str = ""


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _load_env(path: str) -> Environment:
    return load_environment(path)


def cmd_compute(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    env_phys = _load_env(cfg.pe)
    env_virt = _load_env(cfg.ve)
    _progress(f"sampling ~{cfg.samples} points per environment")
    result = compute_eni(
        env_phys, env_virt, target_count=cfg.samples, thetas=RotationSet.uniform(cfg.thetas)
    )
    if cfg.out:
        save_eni_result(cfg.out, result)
        _progress(f"result written to {cfg.out}")
    elapsed = time.perf_counter() - t0
    n = len(result.virt_samples)
    m = len(result.phys_samples)
    print(
        f"ENI mu={result.mean:.3f} sigma={result.std:.3f} n={n} m={m} "
        f"time_s={elapsed:.2f}"
    )
    return 0


def _random_free_point(env: Environment, rng: np.random.Generator, clearance: float) -> np.ndarray:
    xmin, ymin, xmax, ymax = env.bbox
    for _ in range(10000):
        p = rng.uniform((xmin, ymin), (xmax, ymax))
        if points_in_free_space(env, p[None, :], clearance=clearance)[0]:
            return p
    raise PlanningFailed("could not sample a free configuration")


def _start_goal(env: Environment, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    xmin, ymin, xmax, ymax = env.bbox
    min_sep = 0.25 * math.hypot(xmax - xmin, ymax - ymin)
    start = _random_free_point(env, rng, AGENT_RADIUS)
    for _ in range(10000):
        goal = _random_free_point(env, rng, AGENT_RADIUS)
        if float(np.linalg.norm(goal - start)) >= min_sep:
            return start, goal
    raise PlanningFailed("could not sample a start/goal pair with enough separation")


def cmd_simulate(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    env_phys = _load_env(cfg.pe)
    env_virt = _load_env(cfg.ve)
    identical = env_phys == env_virt
    traces = []
    failures = 0
    for k in range(cfg.paths):
        rng = np.random.default_rng([cfg.seed, k])
        try:
            start, goal = _start_goal(env_virt, rng)
            plan = plan_virtual_path(env_virt, start, goal, rng_seed=int(rng.integers(2 ** 31)))
        except PlanningFailed:
            failures += 1
            continue
        d0 = plan.waypoints[min(1, plan.waypoints.shape[0] - 1)] - plan.waypoints[0]
        heading = math.atan2(float(d0[1]), float(d0[0])) if d0.any() else 0.0
        if identical:
            state = AgentState(start.copy(), heading, start.copy(), heading)
        else:
            phys = _random_free_point(env_phys, rng, AGENT_RADIUS + 0.05)
            state = AgentState(phys, float(rng.uniform(0.0, 2 * math.pi)), start.copy(), heading)
        traces.append(simulate_path(env_phys, env_virt, plan, cfg.controller, state))
        _progress(f"path {k + 1}/{cfg.paths}: resets={len(traces[-1].resets)}")
    if not traces:
        raise PlanningFailed(f"all {cfg.paths} paths failed to plan")
    report = navigability(traces)
    if cfg.out:
        save_simulation_report(
            cfg.out, report, traces, cfg.controller, cfg.paths, failures, cfg.seed
        )
        _progress(f"report written to {cfg.out}")
    elapsed = time.perf_counter() - t0
    print(
        f"navigability mean={report.mean_distance:.3f} std={report.std_distance:.3f} "
        f"paths={report.paths} resets={report.total_resets} "
        f"planning_failures={failures} time_s={elapsed:.2f}"
    )
    return 0


def cmd_export_viz(cfg: RunConfig) -> int:
    result = load_eni_result(cfg.result)
    traces = None
    if cfg.traces:
        _, traces, _ = load_simulation_report(cfg.traces)
    export_viz_bundle(cfg.out, result, traces)
    print(cfg.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eni",
        description="Environment-pair navigation incompatibility tools",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_compute = sub.add_parser("compute", help="compute the metric for a PE/VE pair")
    p_compute.add_argument("--pe", required=True, help="physical environment file")
    p_compute.add_argument("--ve", required=True, help="virtual environment file")
    p_compute.add_argument("--samples", type=int, default=500)
    p_compute.add_argument("--thetas", type=int, default=10, help="rotation count")
    p_compute.add_argument("--out", default="", help="result file to write")

    p_sim = sub.add_parser("simulate", help="simulate seeded walks and report resets")
    p_sim.add_argument("--pe", required=True)
    p_sim.add_argument("--ve", required=True)
    p_sim.add_argument("--paths", type=int, default=50)
    p_sim.add_argument("--controller", choices=CONTROLLERS, default="none")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", default="", help="report file to write")

    p_viz = sub.add_parser("export-viz", help="bundle a result for the explorer UI")
    p_viz.add_argument("--result", required=True, help="metric result file")
    p_viz.add_argument("--traces", default="", help="optional simulation report file")
    p_viz.add_argument("--out", required=True, help="bundle file to write")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    try:
        if cfg.subcommand == "compute":
            return cmd_compute(cfg)
        if cfg.subcommand == "simulate":
            return cmd_simulate(cfg)
        if cfg.subcommand == "export-viz":
            return cmd_export_viz(cfg)
        raise InvalidInput(f"unknown subcommand {cfg.subcommand!r}")
    except (FormatError, FileNotFoundError, IsADirectoryError) as exc:
        _progress(f"error: {exc}")
        return 2
    except EniError as exc:
        _progress(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
