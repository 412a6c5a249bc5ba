"""Command line front end.

Standard output carries only the result payload (JSON or CSV) so it can
be piped; progress and diagnostics go to standard error.  Exit codes:
0 success, 2 usage or input error, 1 internal error.

Every JSON result embeds the parameters and master seed needed to replay
it.  An INI config file can supply defaults per subcommand (section name
= subcommand name); explicit flags win over config values.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time
import traceback

from .engine import JigsawInstance, MergeRule, run
from .experiments import (EstimationError, default_p_grid, estimate_pc,
                          sweep_csv, sweep_detailed, sweep_jsonl)
from .generators import (Seed, cycle_puzzle, erdos_renyi, power_law_people,
                         puzzle_from_file, random_tree_puzzle, star_puzzle,
                         torus_puzzle)
from .graph import load_edge_list, max_degree, save_edge_list
from .theory import (find_cut_certificate, lower_bound_pc_ring,
                     ring_lower_objective, upper_bound_pc)

WORKERS_ENV = "JIGSAWSIM_WORKERS"

PUZZLE_SPEC_HELP = "cycle:N, star:N, torus:RxC, tree:N,D, or a file path"

# randomized puzzle specs draw from a stream region far above any
# per-trial stream, so the puzzle and the trials never share a stream
_PUZZLE_STREAM = 1 << 48


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def parse_puzzle_spec(spec: str, master_seed: int):
    """Build a puzzle from a generator string or load it from a file.

    Generator strings: cycle:N, star:N, torus:RxC, tree:N,MAXDEG.
    Anything else is treated as an edge-list file path.  Returns the
    graph and a replayable description of where it came from.
    """
    kind, sep, rest = spec.partition(":")
    if sep and kind in ("cycle", "star", "torus", "tree"):
        try:
            if kind == "cycle":
                return cycle_puzzle(int(rest)), {"kind": "cycle", "n": int(rest)}
            if kind == "star":
                return star_puzzle(int(rest)), {"kind": "star", "n": int(rest)}
            if kind == "torus":
                rows_text, _, cols_text = rest.partition("x")
                rows, cols = int(rows_text), int(cols_text)
                return torus_puzzle(rows, cols), {"kind": "torus", "rows": rows, "cols": cols}
            count_text, _, deg_text = rest.partition(",")
            n, max_deg = int(count_text), int(deg_text)
            tree = random_tree_puzzle(n, max_deg, Seed(master_seed, _PUZZLE_STREAM))
            return tree, {"kind": "tree", "n": n, "max_degree": max_deg,
                          "seed": master_seed}
        except ValueError as exc:
            # int() failures get a message naming the spec, not "int()..."
            if "invalid literal" in str(exc):
                raise ValueError(f"malformed puzzle spec {spec!r}") from exc
            raise
    return puzzle_from_file(spec), {"kind": "file", "path": spec}


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def _get(args, cfg, section: str, key: str, cast, default):
    """Flag value if given, else config value, else default."""
    value = getattr(args, key.replace("-", "_"))
    if value is not None:
        return value
    if cfg is not None and cfg.has_option(section, key):
        return cast(cfg.get(section, key))
    return default


def _resolve_workers(args, cfg, section: str) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    env = os.environ.get(WORKERS_ENV)
    if env is not None and env.strip():
        return max(1, int(env))
    if cfg is not None and cfg.has_option(section, "workers"):
        return max(1, cfg.getint(section, "workers"))
    return os.cpu_count() or 1


def _progress_printer(label: str):
    def report(done: int, total: int) -> None:
        print(f"{label}: {done}/{total} trials", file=sys.stderr, flush=True)
    return report


def cmd_gen(args, cfg) -> int:
    kind = args.kind
    seed = _get(args, cfg, "gen", "seed", int, 0)
    n = args.n

    def need(name, value):
        if value is None:
            raise ValueError(f"gen {kind} requires --{name}")
        return value

    meta: dict = {"kind": kind, "seed": seed}
    if kind == "cycle":
        g = cycle_puzzle(need("n", n))
    elif kind == "star":
        g = star_puzzle(need("n", n))
    elif kind == "torus":
        g = torus_puzzle(need("rows", args.rows), need("cols", args.cols))
        meta.update(rows=args.rows, cols=args.cols)
    elif kind == "tree":
        g = random_tree_puzzle(need("n", n), args.max_deg, Seed(seed, _PUZZLE_STREAM))
        meta.update(max_deg=args.max_deg)
    elif kind == "er":
        g = erdos_renyi(need("n", n), need("p", args.p), Seed(seed))
        meta.update(p=args.p)
    elif kind == "powerlaw":
        g = power_law_people(need("n", n), args.gamma, Seed(seed))
        meta.update(gamma=args.gamma)
    else:  # argparse choices make this unreachable
        raise ValueError(f"unknown generator {kind!r}")

    save_edge_list(g, args.out)
    meta.update(n=g.n, m=g.m, max_degree=max_degree(g), out=args.out)
    _emit(meta)
    return 0


def cmd_run(args, cfg) -> int:
    seed_master = _get(args, cfg, "run", "seed", int, 0)
    puzzle, desc = parse_puzzle_spec(args.puzzle, seed_master)
    people = load_edge_list(args.people)
    rule = MergeRule(args.rule)
    inst = JigsawInstance(people, puzzle)
    trace: list[int] | None = [] if args.trace else None
    out = run(inst, rule, trace=trace)
    payload = {
        "solved": out.solved,
        "rounds": out.rounds,
        "clusters": out.final_cluster_count,
        "largest": out.largest_cluster,
        "histogram": {str(size): count for size, count in sorted(out.histogram.items())},
        "rule": rule.value,
        "people": args.people,
        "puzzle": desc,
    }
    if trace is not None:
        payload["cluster_counts"] = trace
    _emit(payload)
    return 0


def cmd_sweep(args, cfg) -> int:
    seed_master = _get(args, cfg, "sweep", "seed", int, 0)
    trials = _get(args, cfg, "sweep", "trials", int, 200)
    points = _get(args, cfg, "sweep", "points", int, 21)
    rule = MergeRule(_get(args, cfg, "sweep", "rule", str, "std"))
    workers = _resolve_workers(args, cfg, "sweep")
    puzzle, desc = parse_puzzle_spec(args.puzzle, seed_master)

    p_min = _get(args, cfg, "sweep", "p-min", float, 0.0)
    p_max = _get(args, cfg, "sweep", "p-max", float, None)
    if p_max is None:
        grid = default_p_grid(puzzle.n, points)
        if p_min != 0.0:
            raise ValueError("--p-min without --p-max is not supported")
    elif points == 1:
        grid = [p_max]
    else:
        step = (p_max - p_min) / (points - 1)
        grid = [p_min + i * step for i in range(points)]

    started = time.monotonic()
    print(f"sweep: n={puzzle.n} points={len(grid)} trials={trials} "
          f"workers={workers}", file=sys.stderr, flush=True)
    sweep_points, _ = sweep_detailed(
        puzzle, grid, trials, Seed(seed_master), rule,
        workers=workers, coupled=not args.independent,
        progress=_progress_printer("sweep"))
    print(f"sweep: done in {time.monotonic() - started:.1f}s",
          file=sys.stderr, flush=True)

    text = sweep_csv(sweep_points)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as handle:
            handle.write(text)
        print(f"sweep: wrote {args.out}", file=sys.stderr)
    if args.jsonl is not None:
        meta = {"puzzle": desc, "people": "er", "rule": rule.value,
                "coupled": not args.independent}
        with open(args.jsonl, "w") as handle:
            handle.write(sweep_jsonl(sweep_points, Seed(seed_master), meta))
        print(f"sweep: wrote {args.jsonl}", file=sys.stderr)
    return 0


def cmd_estimate_pc(args, cfg) -> int:
    seed_master = _get(args, cfg, "estimate-pc", "seed", int, 0)
    trials = _get(args, cfg, "estimate-pc", "trials", int, 200)
    strategy = _get(args, cfg, "estimate-pc", "strategy", str, "grid")
    tol = _get(args, cfg, "estimate-pc", "tol", float, 1e-3)
    rule = MergeRule(_get(args, cfg, "estimate-pc", "rule", str, "std"))
    workers = _resolve_workers(args, cfg, "estimate-pc")
    puzzle, desc = parse_puzzle_spec(args.puzzle, seed_master)

    est = estimate_pc(puzzle, trials, strategy, Seed(seed_master), rule=rule,
                      tol=tol, workers=workers,
                      progress=_progress_printer("estimate-pc"))
    _emit({
        "p_c_hat": est.p_c_hat,
        "p_low": est.p_low,
        "p_high": est.p_high,
        "f_low": est.f_low,
        "f_high": est.f_high,
        "trials_per_point": est.trials_per_point,
        "strategy": est.strategy,
        "seed": est.master_seed,
        "rule": rule.value,
        "puzzle": desc,
    })
    return 0


def cmd_bounds(args, cfg) -> int:
    n = args.n
    t_min = _get(args, cfg, "bounds", "t-min", float, 0.001)
    t_max = _get(args, cfg, "bounds", "t-max", float, 0.333)
    t_step = _get(args, cfg, "bounds", "t-step", float, 0.001)
    if t_step <= 0:
        raise ValueError(f"t-step must be positive, got {t_step}")
    best_t, best_val = None, None
    t = t_min
    while t <= t_max + 1e-12:
        if 0.0 < t < 1.0 / 3.0:
            value = ring_lower_objective(t)
            if best_val is None or value > best_val:
                best_t, best_val = t, value
        t += t_step
    if best_val is None:
        raise ValueError(
            f"t grid [{t_min}, {t_max}] has no points inside (0, 1/3)")
    _emit({
        "n": n,
        "upper": upper_bound_pc(n),
        "lower_ring": lower_bound_pc_ring(n),
        "objective_max_over_grid": best_val,
        "objective_argmax": best_t,
        "t_grid": {"min": t_min, "max": t_max, "step": t_step},
    })
    return 0


def cmd_certify(args, cfg) -> int:
    people = load_edge_list(args.people)
    cert = find_cut_certificate(people, args.n, args.x)
    payload = {
        "certified_unsolvable": cert is not None,
        "n": args.n,
        "x": args.x,
        "people": args.people,
    }
    if cert is not None:
        payload["boundaries"] = list(cert.boundaries)
        payload["witnesses"] = list(cert.witnesses)
    _emit(payload)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jigsawsim",
        description="Jigsaw percolation simulations on ring, torus, and tree puzzles.")
    parser.add_argument("--config", metavar="FILE",
                        help="INI file with per-subcommand default sections")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a graph and save it as an edge list")
    gen.add_argument("kind", choices=("cycle", "star", "torus", "tree", "er", "powerlaw"))
    gen.add_argument("--n", type=_positive_int)
    gen.add_argument("--rows", type=_positive_int)
    gen.add_argument("--cols", type=_positive_int)
    gen.add_argument("--max-deg", type=_positive_int, default=3)
    gen.add_argument("--p", type=float)
    gen.add_argument("--gamma", type=float, default=2.5)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--out", required=True)
    gen.set_defaults(handler=cmd_gen)

    run_p = sub.add_parser("run", help="run one instance to its fixed point")
    run_p.add_argument("--people", required=True,
                       help="edge-list file with the people graph")
    run_p.add_argument("--puzzle", required=True, help=PUZZLE_SPEC_HELP)
    run_p.add_argument("--rule", choices=("std", "ae"), default="std")
    run_p.add_argument("--seed", type=int,
                       help="master seed for randomized puzzle specs")
    run_p.add_argument("--trace", action="store_true",
                       help="include per-round cluster counts in the output")
    run_p.set_defaults(handler=cmd_run)

    sweep_p = sub.add_parser("sweep", help="solve-fraction sweep over an edge-density grid")
    sweep_p.add_argument("--puzzle", required=True, help=PUZZLE_SPEC_HELP)
    sweep_p.add_argument("--trials", type=_positive_int)
    sweep_p.add_argument("--points", type=_positive_int)
    sweep_p.add_argument("--p-min", dest="p_min", type=float)
    sweep_p.add_argument("--p-max", dest="p_max", type=float)
    sweep_p.add_argument("--rule", choices=("std", "ae"))
    sweep_p.add_argument("--seed", type=int)
    sweep_p.add_argument("--workers", type=_positive_int,
                         help=f"process count (default: ${WORKERS_ENV} or all cores)")
    sweep_p.add_argument("--independent", action="store_true",
                         help="draw fresh people graphs per grid point instead of coupling")
    sweep_p.add_argument("--out", help="CSV path (default: standard output)")
    sweep_p.add_argument("--jsonl", help="also write per-point JSON lines here")
    sweep_p.set_defaults(handler=cmd_sweep)

    est = sub.add_parser("estimate-pc", help="estimate the critical edge density")
    est.add_argument("--puzzle", required=True, help=PUZZLE_SPEC_HELP)
    est.add_argument("--trials", type=_positive_int)
    est.add_argument("--strategy", choices=("grid", "bisect"))
    est.add_argument("--tol", type=float)
    est.add_argument("--rule", choices=("std", "ae"))
    est.add_argument("--seed", type=int)
    est.add_argument("--workers", type=_positive_int)
    est.set_defaults(handler=cmd_estimate_pc)

    bounds = sub.add_parser("bounds", help="theoretical critical-density bounds for n")
    bounds.add_argument("--n", type=_positive_int, required=True)
    bounds.add_argument("--t-min", dest="t_min", type=float)
    bounds.add_argument("--t-max", dest="t_max", type=float)
    bounds.add_argument("--t-step", dest="t_step", type=float)
    bounds.set_defaults(handler=cmd_bounds)

    cert = sub.add_parser("certify",
                          help="search for an interval cut certificate of unsolvability")
    cert.add_argument("--people", required=True)
    cert.add_argument("--n", type=_positive_int, required=True)
    cert.add_argument("--x", type=_positive_int, required=True)
    cert.set_defaults(handler=cmd_certify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = None
    if args.config is not None:
        cfg = configparser.ConfigParser()
        try:
            with open(args.config) as handle:
                cfg.read_file(handle)
        except (OSError, configparser.Error) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    try:
        return args.handler(args, cfg)
    except EstimationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
