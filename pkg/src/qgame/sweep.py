"""Parameter sweeps over entanglement gamma and type probability p.

Bayesian sweeps cover the (p, gamma) plane; two-player games sweep
gamma alone.  Payoff tables are built once per gamma and shared across
every p in that row, which makes the p direction nearly free.  Rows are
independent work units: with ``workers > 1`` they are evaluated in a
process pool, and the merged result is sorted so output is identical
regardless of parallelism.  The ``QGAME_THREADS`` environment variable
caps the worker count.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .equilibrium import (
    DEFAULT_EPS_TIE,
    EquilibriumClass,
    bayesian_tables,
    classify,
    find_ne_bayesian,
    find_ne_two_player,
    two_player_tables,
)
from .games import BayesianGame, TwoPlayerGame
from .strategies import DEFAULT_GRID, GridSteps

DEFAULT_STEP = 0.05


def value_grid(limit: float, step: float = DEFAULT_STEP) -> tuple[float, ...]:
    """Multiples of ``step`` from 0, with the endpoint included by clamping.

    The last regular point closer than half a step to the limit is
    replaced by the limit itself, so [0, 1] at 0.05 gives 21 values and
    [0, pi/2] at 0.05 gives 32 (0, 0.05, ..., 1.5, pi/2).
    """
    if step <= 0 or limit <= 0:
        raise ValueError("limit and step must be positive")
    values = []
    i = 0
    while i * step < limit - step / 2.0:
        values.append(i * step)
        i += 1
    values.append(limit)
    return tuple(values)


def p_grid(step: float = DEFAULT_STEP) -> tuple[float, ...]:
    return value_grid(1.0, step)


def gamma_grid(step: float = DEFAULT_STEP) -> tuple[float, ...]:
    return value_grid(math.pi / 2.0, step)


@dataclass(frozen=True)
class SweepSpec:
    game: BayesianGame | TwoPlayerGame
    gamma_values: tuple[float, ...]
    p_values: tuple[float, ...] = ()
    steps: GridSteps = DEFAULT_GRID
    eps_tie: float = DEFAULT_EPS_TIE

    def __post_init__(self):
        if not self.gamma_values or list(self.gamma_values) != sorted(self.gamma_values):
            raise ValueError("gamma_values must be non-empty and ascending")
        if isinstance(self.game, BayesianGame):
            if not self.p_values or list(self.p_values) != sorted(self.p_values):
                raise ValueError("p_values must be non-empty and ascending")


def default_bayesian_spec(
    p_step: float = DEFAULT_STEP,
    gamma_step: float = DEFAULT_STEP,
    steps: GridSteps = DEFAULT_GRID,
    eps_tie: float = DEFAULT_EPS_TIE,
) -> SweepSpec:
    from .games import builtin_bayesian

    return SweepSpec(
        game=builtin_bayesian(),
        gamma_values=gamma_grid(gamma_step),
        p_values=p_grid(p_step),
        steps=steps,
        eps_tie=eps_tie,
    )


@dataclass(frozen=True)
class CellResult:
    """Equilibrium classes found at one grid cell; p is None for 1-D sweeps."""

    p: float | None
    gamma: float
    classes: tuple[EquilibriumClass, ...]


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    cells: tuple[CellResult, ...]
    elapsed: float = 0.0

    def cell(self, p: float | None, gamma: float, tol: float = 1e-9) -> CellResult:
        for c in self.cells:
            if abs(c.gamma - gamma) <= tol and (
                (c.p is None and p is None)
                or (c.p is not None and p is not None and abs(c.p - p) <= tol)
            ):
                return c
        raise KeyError(f"no cell at p={p}, gamma={gamma}")


@dataclass(frozen=True)
class RegionSummary:
    """Occupied-cell bounding ranges for one class signature.

    Ranges are read off occupied cells, not interpolated, so boundaries
    are only resolved to the sweep step.
    """

    theta_profile: tuple[float, ...]
    operator_label: str | None
    p_range: tuple[float, float] | None
    gamma_range: tuple[float, float]
    cells: tuple[tuple[float | None, float], ...]

    @property
    def n_cells(self) -> int:
        return len(self.cells)


def _recheck(records, tables, p, eps_tie):
    """Cheap table-backed deviation re-check of every found record."""
    ta1, tb1, ta2, tb2 = tables
    for rec in records:
        a, b1, b2 = rec.profile
        pay_a = p * ta1[:, b1] + (1.0 - p) * ta2[:, b2]
        ok = (
            pay_a[a] >= pay_a.max() - eps_tie
            and tb1[a, b1] >= tb1[a].max() - eps_tie
            and tb2[a, b2] >= tb2[a].max() - eps_tie
        )
        if not ok:
            raise RuntimeError(f"record {rec.profile} failed deviation re-check")


def _bayesian_row(args) -> list[CellResult]:
    game, gamma, p_values, steps, eps_tie = args
    from .strategies import enumerate_strategies

    sset = enumerate_strategies(steps)
    tables = bayesian_tables(game, gamma, sset)
    cells = []
    for p in p_values:
        cell_game = replace(game, p=p)
        records = find_ne_bayesian(cell_game, gamma, sset, eps_tie, tables=tables)
        _recheck(records, tables, p, eps_tie)
        cells.append(CellResult(p, gamma, tuple(classify(records, sset))))
    return cells


def _two_player_row(args) -> list[CellResult]:
    game, gamma, steps, eps_tie = args
    from .strategies import enumerate_strategies

    sset = enumerate_strategies(steps)
    tables = two_player_tables(game, gamma, sset)
    records = find_ne_two_player(game, gamma, sset, eps_tie, tables=tables)
    return [CellResult(None, gamma, tuple(classify(records, sset)))]


def effective_workers(requested: int | None) -> int:
    """Requested worker count, capped by the QGAME_THREADS environment variable."""
    workers = max(1, int(requested or 1))
    cap = os.environ.get("QGAME_THREADS")
    if cap is not None:
        try:
            workers = max(1, min(workers, int(cap)))
        except ValueError:
            raise ValueError(f"QGAME_THREADS must be an integer, got {cap!r}")
    return workers


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Evaluate every grid cell; deterministic regardless of parallelism."""
    workers = effective_workers(workers)
    start = time.perf_counter()
    if isinstance(spec.game, BayesianGame):
        jobs = [
            (spec.game, g, spec.p_values, spec.steps, spec.eps_tie)
            for g in spec.gamma_values
        ]
        row_fn = _bayesian_row
    else:
        jobs = [(spec.game, g, spec.steps, spec.eps_tie) for g in spec.gamma_values]
        row_fn = _two_player_row

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row_fn, jobs))
    else:
        rows = [row_fn(job) for job in jobs]

    cells = [cell for row in rows for cell in row]
    cells.sort(key=lambda c: (c.p if c.p is not None else -1.0, c.gamma))
    return SweepResult(spec, tuple(cells), time.perf_counter() - start)


def summarize_regions(result: SweepResult) -> list[RegionSummary]:
    """Bounding (p, gamma) ranges per class signature across occupied cells."""
    occupied: dict[tuple, list[tuple[float | None, float]]] = {}
    samples: dict[tuple, EquilibriumClass] = {}
    for cell in result.cells:
        for cls in cell.classes:
            sig = cls.signature()
            occupied.setdefault(sig, []).append((cell.p, cell.gamma))
            samples.setdefault(sig, cls)

    summaries = []
    for sig in sorted(occupied, key=lambda s: (s[0], s[1] or "")):
        cells = sorted(
            occupied[sig], key=lambda c: (c[0] if c[0] is not None else -1.0, c[1])
        )
        ps = [c[0] for c in cells if c[0] is not None]
        gammas = [c[1] for c in cells]
        summaries.append(
            RegionSummary(
                theta_profile=samples[sig].theta_profile,
                operator_label=samples[sig].operator_label,
                p_range=(min(ps), max(ps)) if ps else None,
                gamma_range=(min(gammas), max(gammas)),
                cells=tuple(cells),
            )
        )
    return summaries
