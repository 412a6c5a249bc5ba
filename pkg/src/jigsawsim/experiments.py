"""Monte Carlo drivers: solve probabilities, p sweeps, critical-density fits.

Determinism contract: every result is a pure function of the parameters
and the master seed.  Trials draw from per-trial streams (stream = trial
index) and aggregation uses integer counts and sums, so scheduling and
worker count change wall-clock time only, never the numbers.

Sweeps couple the grid points by default: each trial draws one uniform
per vertex pair and an edge is present at p iff its uniform is below p.
Edge sets are then nested along the grid, the per-trial solve indicator
is monotone in p, and critical-density estimates lose the noise that
independent draws would add between neighboring points.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass

import numpy as np

from .engine import JigsawInstance, MergeRule, run
from .generators import Seed, erdos_renyi, power_law_people
from .graph import Graph, _from_canonical_arrays, is_connected, max_degree
from .theory import upper_bound_pc

_Z95 = 1.959963984540054

CSV_COLUMNS = ("p", "trials", "solves", "fraction", "ci_low", "ci_high",
               "mean_rounds_solved", "mean_rounds_unsolved")


class EstimationError(RuntimeError):
    """No pair of evaluation points straddles solve fraction 1/2."""


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Score interval for a binomial fraction; sane at 0/1 fractions."""
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes {successes} outside [0, {trials}]")
    ph = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (ph + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(ph * (1.0 - ph) / trials + z2 / (4.0 * trials * trials)) / denom
    # the interval endpoints are exactly 0/1 at the boundary fractions,
    # but the float evaluation above can land a hair inside
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


@dataclass
class SweepPoint:
    """Aggregated trial results at one edge density (p is None when the
    people graphs do not come from an edge-density model)."""

    p: float | None
    trials: int
    solves: int
    solve_fraction: float
    ci_low: float
    ci_high: float
    mean_rounds_solved: float | None
    mean_rounds_unsolved: float | None
    sd_rounds: float


@dataclass
class StepStats:
    """Round-count statistics at one grid point, split by outcome."""

    p: float
    solved_trials: int
    unsolved_trials: int
    mean_rounds_solved: float | None
    sd_rounds_solved: float | None
    mean_rounds_unsolved: float | None
    sd_rounds_unsolved: float | None


@dataclass
class PcEstimate:
    """Bracketing pair around solve fraction 1/2 plus the interpolated root."""

    p_low: float
    p_high: float
    f_low: float
    f_high: float
    p_c_hat: float
    trials_per_point: int
    master_seed: int
    strategy: str


# accumulator row layout, all int64:
# [solves, rounds_sum_solved, rounds_sumsq_solved,
#          rounds_sum_unsolved, rounds_sumsq_unsolved]
_ACC_WIDTH = 5

_TRIU_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _triu(n: int) -> tuple[np.ndarray, np.ndarray]:
    got = _TRIU_CACHE.get(n)
    if got is None:
        iu, jv = np.triu_indices(n, k=1)
        got = (iu.astype(np.int64), jv.astype(np.int64))
        _TRIU_CACHE[n] = got
    return got


def _tally(acc_row: np.ndarray, outcome) -> None:
    r = outcome.rounds
    if outcome.solved:
        acc_row[0] += 1
        acc_row[1] += r
        acc_row[2] += r * r
    else:
        acc_row[3] += r
        acc_row[4] += r * r


def _coupled_chunk(args) -> np.ndarray:
    puzzle, grid, rule, master, stream_base, t0, t1 = args
    iu, jv = _triu(puzzle.n)
    acc = np.zeros((len(grid), _ACC_WIDTH), dtype=np.int64)
    for t in range(t0, t1):
        u = Seed(master, stream_base + t).rng().random(iu.shape[0])
        for i, p in enumerate(grid):
            mask = u < p
            people = _from_canonical_arrays(puzzle.n, iu[mask], jv[mask])
            inst = JigsawInstance(people, puzzle, allow_disconnected_puzzle=True)
            _tally(acc[i], run(inst, rule))
    return acc


def _er_chunk(args) -> np.ndarray:
    puzzle, p, rule, master, stream_base, t0, t1 = args
    acc = np.zeros((1, _ACC_WIDTH), dtype=np.int64)
    for t in range(t0, t1):
        people = erdos_renyi(puzzle.n, p, Seed(master, stream_base + t))
        inst = JigsawInstance(people, puzzle, allow_disconnected_puzzle=True)
        _tally(acc[0], run(inst, rule))
    return acc


def _power_law_chunk(args) -> np.ndarray:
    puzzle, gamma, rule, master, stream_base, t0, t1 = args
    acc = np.zeros((1, _ACC_WIDTH), dtype=np.int64)
    for t in range(t0, t1):
        people = power_law_people(puzzle.n, gamma, Seed(master, stream_base + t))
        inst = JigsawInstance(people, puzzle, allow_disconnected_puzzle=True)
        _tally(acc[0], run(inst, rule))
    return acc


def _dispatch(worker, common: tuple, trials: int, workers: int,
              progress=None) -> np.ndarray:
    """Run trial chunks serially or on a process pool and sum the tallies.

    Tallies are integer arrays, so the sum (and therefore every derived
    statistic) is independent of chunking and completion order.
    """
    workers = max(1, workers)
    per = max(1, -(-trials // (workers * 4)))
    spans = [(t0, min(t0 + per, trials)) for t0 in range(0, trials, per)]
    acc = None
    if workers == 1:
        done = 0
        for t0, t1 in spans:
            part = worker((*common, t0, t1))
            acc = part if acc is None else acc + part
            done += t1 - t0
            if progress is not None:
                progress(done, trials)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(worker, (*common, t0, t1)): t1 - t0
                       for t0, t1 in spans}
            done = 0
            for fut in as_completed(futures):
                part = fut.result()
                acc = part if acc is None else acc + part
                done += futures[fut]
                if progress is not None:
                    progress(done, trials)
    return acc


def _point_from_row(p: float | None, trials: int, row: np.ndarray) -> SweepPoint:
    solves = int(row[0])
    sum_s, sumsq_s, sum_u, sumsq_u = (int(v) for v in row[1:])
    unsolved = trials - solves
    lo, hi = wilson_interval(solves, trials)
    total = sum_s + sum_u
    var = (sumsq_s + sumsq_u) / trials - (total / trials) ** 2
    return SweepPoint(
        p=p,
        trials=trials,
        solves=solves,
        solve_fraction=solves / trials,
        ci_low=lo,
        ci_high=hi,
        mean_rounds_solved=sum_s / solves if solves else None,
        mean_rounds_unsolved=sum_u / unsolved if unsolved else None,
        sd_rounds=math.sqrt(max(0.0, var)),
    )


def _cond_stats(count: int, total: int, total_sq: int) -> tuple[float | None, float | None]:
    if count == 0:
        return None, None
    mean = total / count
    var = total_sq / count - mean * mean
    return mean, math.sqrt(max(0.0, var))


def _stats_from_row(p: float, trials: int, row: np.ndarray) -> StepStats:
    solves = int(row[0])
    mean_s, sd_s = _cond_stats(solves, int(row[1]), int(row[2]))
    mean_u, sd_u = _cond_stats(trials - solves, int(row[3]), int(row[4]))
    return StepStats(p, solves, trials - solves, mean_s, sd_s, mean_u, sd_u)


def _check_grid(p_grid) -> list[float]:
    grid = [float(p) for p in p_grid]
    if not grid:
        raise ValueError("p grid must be nonempty")
    for p in grid:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"grid value {p} outside [0, 1]")
    return grid


def _require_puzzle(puzzle: Graph) -> None:
    if not is_connected(puzzle):
        raise ValueError("puzzle graph is disconnected")


def sweep_detailed(puzzle: Graph, p_grid, trials: int, seed: Seed,
                   rule: MergeRule = MergeRule.STANDARD, *, workers: int = 1,
                   coupled: bool = True, progress=None
                   ) -> tuple[list[SweepPoint], list[StepStats]]:
    """One pass over the grid returning both sweep points and round stats."""
    grid = _check_grid(p_grid)
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    _require_puzzle(puzzle)
    if coupled:
        acc = _dispatch(_coupled_chunk,
                        (puzzle, tuple(grid), rule, seed.master, seed.stream),
                        trials, workers, progress)
    else:
        rows = []
        for i, p in enumerate(grid):
            # independent mode: separate stream region per grid point
            base = seed.stream + (i << 32)
            rows.append(_dispatch(_er_chunk,
                                  (puzzle, p, rule, seed.master, base),
                                  trials, workers, progress))
        acc = np.concatenate(rows, axis=0)
    points = [_point_from_row(p, trials, acc[i]) for i, p in enumerate(grid)]
    stats = [_stats_from_row(p, trials, acc[i]) for i, p in enumerate(grid)]
    return points, stats


def sweep(puzzle: Graph, p_grid, trials: int, seed: Seed,
          rule: MergeRule = MergeRule.STANDARD, *, workers: int = 1,
          coupled: bool = True, progress=None) -> list[SweepPoint]:
    """Estimate the solve probability at every grid point."""
    return sweep_detailed(puzzle, p_grid, trials, seed, rule, workers=workers,
                          coupled=coupled, progress=progress)[0]


def step_statistics(puzzle: Graph, p_grid, trials: int, seed: Seed,
                    rule: MergeRule = MergeRule.STANDARD, *, workers: int = 1,
                    progress=None) -> list[StepStats]:
    """Round-count means and spreads per grid point, split by outcome."""
    return sweep_detailed(puzzle, p_grid, trials, seed, rule,
                          workers=workers, progress=progress)[1]


def estimate_solve_prob(puzzle: Graph, people_gen, p: float, trials: int,
                        seed: Seed, rule: MergeRule = MergeRule.STANDARD, *,
                        workers: int = 1) -> SweepPoint:
    """Monte Carlo estimate of P(solve) at a single edge density.

    people_gen is "er" for Erdos-Renyi people graphs, or any callable
    (p, Seed) -> Graph; callables run serially since they cannot be
    shipped to worker processes in general.
    """
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    _require_puzzle(puzzle)
    if people_gen == "er":
        acc = _dispatch(_er_chunk,
                        (puzzle, p, rule, seed.master, seed.stream),
                        trials, workers)
    elif callable(people_gen):
        acc = np.zeros((1, _ACC_WIDTH), dtype=np.int64)
        for t in range(trials):
            people = people_gen(p, seed.with_stream(seed.stream + t))
            inst = JigsawInstance(people, puzzle, allow_disconnected_puzzle=True)
            _tally(acc[0], run(inst, rule))
    else:
        raise ValueError(f"unknown people generator spec {people_gen!r}")
    return _point_from_row(p, trials, acc[0])


def default_p_grid(n: int, points: int = 21) -> list[float]:
    """Evenly spaced grid from 0 to 1.05 times the upper critical bound."""
    top = min(1.0, 1.05 * upper_bound_pc(n))
    return np.linspace(0.0, top, points).tolist()


def estimate_pc(puzzle: Graph, trials_per_point: int, strategy: str,
                seed: Seed, *, rule: MergeRule = MergeRule.STANDARD,
                grid=None, tol: float = 1e-3, workers: int = 1,
                progress=None) -> PcEstimate:
    """Locate the edge density where the solve fraction crosses 1/2.

    strategy "grid" sweeps a fixed grid (default: 21 points up to 1.05x
    the theoretical upper bound) and interpolates between the bracketing
    pair; "bisect" shrinks the bracket [0, 1] until it is narrower than
    tol, then interpolates.  Monotonicity of the true curve justifies
    bracketing.
    """
    if puzzle.n < 2:
        raise ValueError("critical-density estimation needs n >= 2")
    _require_puzzle(puzzle)
    if strategy == "grid":
        g = _check_grid(default_p_grid(puzzle.n) if grid is None else grid)
        points = sweep(puzzle, g, trials_per_point, seed, rule,
                       workers=workers, progress=progress)
        fracs = [pt.solve_fraction for pt in points]
        idx = next((i for i, f in enumerate(fracs) if f >= 0.5), None)
        if idx is None or idx == 0:
            raise EstimationError(
                "no grid pair with solve fractions straddling 1/2")
        p_low, p_high = g[idx - 1], g[idx]
        f_low, f_high = fracs[idx - 1], fracs[idx]
    elif strategy == "bisect":
        # endpoints are exact: edgeless people never solve (n >= 2),
        # complete people solve any connected puzzle in one round
        p_low, f_low = 0.0, 0.0
        p_high, f_high = 1.0, 1.0
        evaluation = 0
        while p_high - p_low > tol:
            evaluation += 1
            mid = 0.5 * (p_low + p_high)
            pt = estimate_solve_prob(
                puzzle, "er", mid, trials_per_point,
                seed.with_stream(seed.stream + (evaluation << 32)),
                rule, workers=workers)
            if pt.solve_fraction >= 0.5:
                p_high, f_high = mid, pt.solve_fraction
            else:
                p_low, f_low = mid, pt.solve_fraction
    else:
        raise ValueError(f"unknown strategy {strategy!r}; use 'grid' or 'bisect'")
    p_c = p_low + (0.5 - f_low) * (p_high - p_low) / (f_high - f_low)
    return PcEstimate(p_low, p_high, f_low, f_high, p_c,
                      trials_per_point, seed.master, strategy)


def power_law_failure_check(n: int, gamma: float, puzzle: Graph, trials: int,
                            seed: Seed, *, degree_cap: int = 16,
                            rule: MergeRule = MergeRule.STANDARD,
                            workers: int = 1) -> SweepPoint:
    """Solve fraction with power-law people graphs on a bounded-degree puzzle.

    The degree cap is the precondition gate: with an unbounded-degree
    puzzle (a star, say) heavy-tailed people graphs can solve easily and
    the check would be meaningless.
    """
    if puzzle.n != n:
        raise ValueError(f"puzzle has {puzzle.n} vertices, expected {n}")
    d = max_degree(puzzle)
    if d > degree_cap:
        raise ValueError(
            f"power-law failure check needs a bounded-degree puzzle: "
            f"max degree {d} exceeds the cap {degree_cap}")
    _require_puzzle(puzzle)
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    acc = _dispatch(_power_law_chunk,
                    (puzzle, gamma, rule, seed.master, seed.stream),
                    trials, workers)
    return _point_from_row(None, trials, acc[0])


def _cell(value) -> str:
    return "" if value is None else str(value)


def sweep_csv(points: list[SweepPoint]) -> str:
    """Render sweep points as CSV text (stable byte-for-byte)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for pt in points:
        writer.writerow([_cell(v) for v in (
            pt.p, pt.trials, pt.solves, pt.solve_fraction, pt.ci_low,
            pt.ci_high, pt.mean_rounds_solved, pt.mean_rounds_unsolved)])
    return buf.getvalue()


def sweep_jsonl(points: list[SweepPoint], seed: Seed, generator: dict) -> str:
    """One JSON object per sweep point, with seed and generator metadata."""
    lines = []
    for pt in points:
        obj = {
            "p": pt.p,
            "trials": pt.trials,
            "solves": pt.solves,
            "fraction": pt.solve_fraction,
            "ci_low": pt.ci_low,
            "ci_high": pt.ci_high,
            "mean_rounds_solved": pt.mean_rounds_solved,
            "mean_rounds_unsolved": pt.mean_rounds_unsolved,
            "seed": {"master": seed.master, "stream": seed.stream},
            "generator": generator,
        }
        lines.append(json.dumps(obj, sort_keys=True))
    return "\n".join(lines) + "\n"
