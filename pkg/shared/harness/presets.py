"""
shared/harness/presets.py

Sweep engine and the figure presets.

Every grid point is an independent task. Points are evaluated inline
(WGS_WORKERS=1) or on a process pool, and rows are assembled in canonical
row-major order after all points complete, so the table never depends on
the worker count.

Presets (columns are fixed):
  fig2        phi                -> phi,ps,baseline
  fig3a/b     phi12 x phi23      -> phi12,phi23,concurrence,ps_minus_branch,ps_best_branch
  fig3c       phi23 (phi12 fixed) -> phi23,concurrence,reference_concurrence,delta_c
  fig4a/b/c   phi x p, depolarizing -> phi,p,concurrence,ps,reference_concurrence,delta_c
  fig5a/b/c   phi x p, dephasing    -> same as fig4
  custom      any axes            -> <axes>,ps,ghz_fidelity[,concurrence when n = 1]

Usage:
    table = run_preset(preset_config("fig2"))
    table = run_preset(load_config("sweeps/custom.conf"), workers=1)
"""
from __future__ import annotations

import asyncio
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Optional

from shared.harness.config import SweepConfig, worker_count
from shared.harness.sweep_tracker import SweepTracker
from shared.harness.table import ResultTable
from shared.metrics.concurrence import concurrence, reference_concurrence
from shared.metrics.fidelity import ghz_orbit_fidelity
from shared.optimize.basis import analytic_basis_guess, branch_table, optimize_basis
from shared.protocol.concentration import (
    analytic_bases,
    apply_correction,
    correction_rotation_for,
    run_concentration,
    success_outcome,
    uniform_bases,
)
from shared.protocol.kraus import linear_optics_baseline
from shared.qsim.states import MeasurementBasis, NoiseKind, NoiseSpec
from shared.wgs.builder import build_noisy_state, build_state, build_uniform_chain
from shared.wgs.graph import ChainSpec, path_graph

logger = logging.getLogger(__name__)

Point = tuple[float, ...]
Row = tuple[float, ...]

FIG3_COLUMNS = ("phi12", "phi23", "concurrence", "ps_minus_branch", "ps_best_branch")
FIG3C_COLUMNS = ("phi23", "concurrence", "reference_concurrence", "delta_c")
NOISY_COLUMNS = ("phi", "p", "concurrence", "ps", "reference_concurrence", "delta_c")

PRESET_COLUMNS = {
    "fig2": ("phi", "ps", "baseline"),
    "fig3a": FIG3_COLUMNS,
    "fig3b": FIG3_COLUMNS,
    "fig3c": FIG3C_COLUMNS,
    **{f"fig{k}{s}": NOISY_COLUMNS for k in (4, 5) for s in "abc"},
}

VALUE_COLUMNS = {
    "fig2": "ps",
    "fig3a": "concurrence",
    "fig3b": "ps_best_branch",
    "fig3c": "delta_c",
    "fig4a": "concurrence", "fig4b": "ps", "fig4c": "delta_c",
    "fig5a": "concurrence", "fig5b": "ps", "fig5c": "delta_c",
    "custom": "ps",
}


@dataclass(frozen=True)
class PointContext:
    """Everything a worker needs besides the grid point itself."""
    axes: tuple[str, ...]
    n: int
    noise_kind: NoiseKind
    noise_p: float
    phi: float
    phi12: float
    optimize: bool

    @classmethod
    def from_config(cls, config: SweepConfig) -> "PointContext":
        return cls(
            axes=config.axis_names,
            n=config.n,
            noise_kind=config.noise_kind,
            noise_p=config.noise.probability if config.noise else 0.0,
            phi=config.phi,
            phi12=config.phi12,
            optimize=config.optimize,
        )


# ── Point functions (module level so the process pool can pickle them) ──

def simulated_success_probability(n: int, phi: float) -> float:
    """All -1 branch probability of the uniform chain, by full simulation."""
    outcomes = run_concentration(build_uniform_chain(ChainSpec(n, phi)), uniform_bases(n, phi))
    return success_outcome(outcomes).probability


def fig2_point(ctx: PointContext, point: Point) -> Row:
    (phi,) = point
    return (phi, simulated_success_probability(ctx.n, phi), linear_optics_baseline())


def _optimized_pair(phi12: float, phi23: float):
    state = build_state(path_graph([phi12, phi23]))
    return optimize_basis(state, seed=analytic_basis_guess(phi12, phi23))


def fig3_point(ctx: PointContext, point: Point) -> Row:
    phi12, phi23 = point
    result = _optimized_pair(phi12, phi23)
    return (
        phi12,
        phi23,
        result.best_concurrence,
        result.minus_branch_probability,
        result.success_probability,
    )


def fig3c_point(ctx: PointContext, point: Point) -> Row:
    (phi23,) = point
    result = _optimized_pair(ctx.phi12, phi23)
    reference = reference_concurrence(max(ctx.phi12, phi23), NoiseSpec.noiseless())
    return (phi23, result.best_concurrence, reference, result.best_concurrence - reference)


def noisy_point(ctx: PointContext, point: Point) -> Row:
    phi, p = point
    noise = NoiseSpec(ctx.noise_kind, p)
    rho = build_noisy_state(path_graph([phi, phi]), noise)
    if ctx.optimize:
        result = optimize_basis(rho, seed=MeasurementBasis.equatorial(phi))
        value, ps = result.best_concurrence, result.success_probability
    else:
        # -1 branch at M_phi
        table = branch_table(rho, [math.pi / 2], [phi])
        value, ps = float(table.concurrences[0, 1]), float(table.probabilities[0, 1])
    reference = reference_concurrence(phi, noise)
    return (phi, p, value, ps, reference, value - reference)


def custom_point(ctx: PointContext, point: Point) -> Row:
    values = dict(zip(ctx.axes, point))
    weights = [values.get("phi", ctx.phi)] * (2 * ctx.n)
    if "phi12" in values:
        weights[0] = values["phi12"]
    if "phi23" in values:
        weights[1] = values["phi23"]
    graph = path_graph(weights)

    p = values.get("p", ctx.noise_p)
    if "p" in ctx.axes or p > 0:
        state = build_noisy_state(graph, NoiseSpec(ctx.noise_kind, p))
    else:
        state = build_state(graph)

    bases = analytic_bases(graph)
    success = success_outcome(run_concentration(state, bases))
    corrected = apply_correction(success, correction_rotation_for(bases))

    post = corrected.post_state
    fidelity = ghz_orbit_fidelity(post) if post is not None else 0.0
    row = tuple(point) + (success.probability, fidelity)
    if ctx.n == 1:
        row += (concurrence(post).value if post is not None else 0.0,)
    return row


_POINT_FUNCTIONS: dict[str, Callable[[PointContext, Point], Row]] = {
    "fig2": fig2_point,
    "fig3a": fig3_point,
    "fig3b": fig3_point,
    "fig3c": fig3c_point,
    **{f"fig{k}{s}": noisy_point for k in (4, 5) for s in "abc"},
    "custom": custom_point,
}


def table_columns(config: SweepConfig) -> tuple[str, ...]:
    if config.preset != "custom":
        return PRESET_COLUMNS[config.preset]
    columns = config.axis_names + ("ps", "ghz_fidelity")
    return columns + ("concurrence",) if config.n == 1 else columns


def grid_points(config: SweepConfig) -> list[Point]:
    """Row-major: the first axis varies slowest."""
    return [
        tuple(float(v) for v in combo)
        for combo in itertools.product(*(axis.values() for axis in config.axes))
    ]


# ── Engine ───────────────────────────────────────────────────

async def _evaluate(
    fn: Callable[[Point], Row],
    points: list[Point],
    workers: int,
    run: SweepTracker,
) -> list[Row]:
    if workers <= 1:
        rows = []
        for point in points:
            try:
                rows.append(fn(point))
            except Exception as e:
                run.log_error(point, e)
                raise
        return rows

    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        tasks = [loop.run_in_executor(pool, fn, point) for point in points]
        results = await asyncio.gather(*tasks, return_exceptions=True)

    failures = [(p, r) for p, r in zip(points, results) if isinstance(r, BaseException)]
    for point, error in failures:
        run.log_error(point, error)
    if failures:
        raise failures[0][1]
    return list(results)


async def run_preset_async(config: SweepConfig, workers: Optional[int] = None) -> ResultTable:
    points = grid_points(config)
    workers = max(1, min(workers or worker_count(), len(points)))
    fn = partial(_POINT_FUNCTIONS[config.preset], PointContext.from_config(config))

    async with SweepTracker(config.preset, workers) as run:
        run.points_total = len(points)
        rows = await _evaluate(fn, points, workers, run)
        table = ResultTable(
            name=config.preset,
            columns=table_columns(config),
            axes=config.axis_names,
            rows=[tuple(float(v) for v in row) for row in rows],
            value_column=VALUE_COLUMNS[config.preset],
        )
        run.rows_written = len(table.rows)
    return table


def run_preset(config: SweepConfig, workers: Optional[int] = None) -> ResultTable:
    return asyncio.run(run_preset_async(config, workers))
