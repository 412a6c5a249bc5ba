"""Seeded graph generators: structured puzzles and random people graphs.

Every generator is a pure function of its parameters and a Seed, so any
graph drawn here can be reproduced from (master, stream) alone, on any
machine and under any degree of parallelism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import (Graph, _from_canonical_arrays, _from_pair_arrays,
                    is_connected, connected_components, load_edge_list)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Seed:
    """Key for a counter-based RNG stream.

    master identifies the whole experiment, stream the trial (or purpose)
    within it: per-trial streams let independent trials run concurrently
    and still be replayed one at a time.
    """

    master: int
    stream: int = 0

    def rng(self) -> np.random.Generator:
        key = np.array([self.master & _MASK64, self.stream & _MASK64],
                       dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def with_stream(self, stream: int) -> "Seed":
        return Seed(self.master, stream)


@dataclass
class DegreeSequence:
    """Per-vertex degrees; sum is even and every degree is < n."""

    degrees: np.ndarray

    def total(self) -> int:
        return int(self.degrees.sum())


def cycle_puzzle(n: int) -> Graph:
    """The n-cycle with edges {i, (i+1) mod n}."""
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n} (a 2-cycle is a multi-edge)")
    i = np.arange(n, dtype=np.int64)
    return _from_pair_arrays(n, i, (i + 1) % n)


def star_puzzle(n: int) -> Graph:
    """Star with center n-1 adjacent to all other vertices."""
    if n < 2:
        raise ValueError(f"star needs n >= 2, got {n}")
    leaves = np.arange(n - 1, dtype=np.int64)
    return _from_canonical_arrays(n, leaves, np.full(n - 1, n - 1, dtype=np.int64))


def torus_puzzle(rows: int, cols: int) -> Graph:
    """4-regular wrap-around grid on rows x cols vertices."""
    if rows < 3 or cols < 3:
        raise ValueError(f"torus needs rows, cols >= 3, got {rows}x{cols}")
    n = rows * cols
    v = np.arange(n, dtype=np.int64)
    r, c = v // cols, v % cols
    right = r * cols + (c + 1) % cols
    down = ((r + 1) % rows) * cols + c
    return _from_pair_arrays(n, np.concatenate([v, v]), np.concatenate([right, down]))


def random_tree_puzzle(n: int, max_deg: int, seed: Seed) -> Graph:
    """Random tree grown by uniform attachment under a degree cap.

    Vertex v attaches to a uniformly chosen earlier vertex that still has
    residual capacity (degree < max_deg); with max_deg >= 2 capacity can
    never run out.
    """
    if n < 1:
        raise ValueError(f"tree needs n >= 1, got {n}")
    if max_deg < 2:
        raise ValueError(f"tree needs max_deg >= 2, got {max_deg}")
    rng = seed.rng()
    deg = [0] * n
    eligible = [0]
    us = np.empty(max(n - 1, 0), dtype=np.int64)
    vs = np.empty(max(n - 1, 0), dtype=np.int64)
    for v in range(1, n):
        i = int(rng.integers(len(eligible)))
        parent = eligible[i]
        us[v - 1], vs[v - 1] = parent, v
        deg[parent] += 1
        deg[v] = 1
        if deg[parent] == max_deg:
            eligible[i] = eligible[-1]
            eligible.pop()
        if deg[v] < max_deg:
            eligible.append(v)
    return _from_pair_arrays(n, us, vs)


def _decode_pair_index(n: int, k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # invert k = i*(2n-i-1)/2 + (j-i-1) for the lexicographic pair (i, j), i < j
    b = 2 * n - 1
    i = ((b - np.sqrt(b * b - 8.0 * k)) // 2).astype(np.int64)
    # float slack near row boundaries: nudge onto the right row
    off = i * (2 * n - i - 1) // 2
    i -= off > k
    off = i * (2 * n - i - 1) // 2
    nxt = (i + 1) * (2 * n - i - 2) // 2
    adv = k >= nxt
    i += adv
    off = np.where(adv, nxt, off)
    j = k - off + i + 1
    return i, j


def erdos_renyi(n: int, p: float, seed: Seed) -> Graph:
    """G(n, p): every unordered pair is an edge independently with probability p.

    Sampling walks the C(n,2) pair sequence with geometric skips, so the
    work is O(p n^2) instead of one Bernoulli draw per pair.
    """
    if n < 0:
        raise ValueError(f"vertex count must be non-negative, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    total = n * (n - 1) // 2
    empty = np.empty(0, dtype=np.int64)
    if total == 0 or p == 0.0:
        return _from_canonical_arrays(n, empty, empty)
    if p == 1.0:
        iu, jv = np.triu_indices(n, k=1)
        return _from_canonical_arrays(n, iu.astype(np.int64), jv.astype(np.int64))
    rng = seed.rng()
    log_q = math.log1p(-p)
    chunks = []
    pos = -1
    while pos < total - 1:
        want = max(64, int((total - 1 - pos) * p * 1.1) + 16)
        u = rng.random(want)
        skips = np.floor(np.log1p(-u) / log_q).astype(np.int64)
        hits = pos + np.cumsum(skips + 1)
        inside = hits < total
        if inside.all():
            chunks.append(hits)
            pos = int(hits[-1])
        else:
            chunks.append(hits[inside])
            break
    keys = np.concatenate(chunks) if chunks else empty
    eu, ev = _decode_pair_index(n, keys)
    return _from_canonical_arrays(n, eu, ev)


def _check_power_law_args(n: int, gamma: float) -> None:
    if gamma <= 2:
        raise ValueError(f"power-law exponent must exceed 2, got {gamma}")
    if n < 2:
        raise ValueError(f"power-law graph needs n >= 2, got {n}")


def _draw_power_law_degrees(n: int, gamma: float, rng: np.random.Generator) -> np.ndarray:
    ks = np.arange(1, n, dtype=np.float64)
    cdf = np.cumsum(ks ** -gamma)
    cdf /= cdf[-1]
    deg = np.searchsorted(cdf, rng.random(n), side="right").astype(np.int64) + 1
    if int(deg.sum()) % 2 == 1:
        while True:
            i = int(rng.integers(n))
            if deg[i] < n - 1:
                deg[i] += 1
                break
    return deg


def power_law_degrees(n: int, gamma: float, seed: Seed) -> DegreeSequence:
    """Draw i.i.d. degrees with P(k) proportional to k^(-gamma), k in 1..n-1.

    An odd total is fixed by bumping one uniformly chosen vertex whose
    degree is still below n-1 (the smallest perturbation that restores
    parity without breaking simplicity).
    """
    _check_power_law_args(n, gamma)
    return DegreeSequence(_draw_power_law_degrees(n, gamma, seed.rng()))


def power_law_people(n: int, gamma: float, seed: Seed) -> Graph:
    """Configuration-model graph with power-law degrees, loops and doubles erased.

    The erased variant approximates uniform sampling over simple graphs
    with the drawn sequence; exact uniform sampling is intractable for
    heavy-tailed sequences and the edge-density conclusions we need are
    insensitive to the difference.
    """
    _check_power_law_args(n, gamma)
    rng = seed.rng()
    deg = _draw_power_law_degrees(n, gamma, rng)
    stubs = np.repeat(np.arange(n, dtype=np.int64), deg)
    shuffled = stubs[rng.permutation(stubs.shape[0])]
    return _from_pair_arrays(n, shuffled[0::2], shuffled[1::2])


def puzzle_from_file(path) -> Graph:
    """Load a puzzle graph from an edge-list file; must be connected."""
    g = load_edge_list(path)
    if not is_connected(g):
        k = len(connected_components(g))
        raise ValueError(f"puzzle graph is disconnected ({k} components)")
    return g
