"""Closed-form quantities behind the ring-puzzle solvability analysis.

Numeric pieces: the increasing concave function theta(x) with limit
pi^2/6, a truncation error bound for its log-sum form, the explicit
upper and lower critical-density estimates, the interval objective whose
supremum beats 1/27, and the probability bound for an interval lacking
an isolated vertex.  Constructive pieces: partition of a connected graph
into small connected blocks with tiny overlap, and a sound (but
incomplete) unsolvability certificate for ring puzzles built from
x-good intervals.

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, connected_components, is_connected

PI2_OVER_6 = math.pi ** 2 / 6


def theta(x: float) -> float:
    """theta(x) = sum_{j>=1} (1 - e^(-jx))/j^2, the integral of -log(1-e^(-t)).

    Evaluated as pi^2/6 minus the exponential series sum_j e^(-jx)/j^2,
    whose geometric tail gives rigorous truncation control; absolute
    error stays below 1e-12.  theta(0) = 0 and theta(inf) = pi^2/6
    exactly.
    """
    x = float(x)
    if math.isnan(x) or x < 0:
        raise ValueError(f"theta needs x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return PI2_OVER_6
    if x < 1e-6:
        # the exponential series needs ~30/x terms here; the Maclaurin
        # form of the integrand is exact to O(x^5) < 1e-30 instead
        return x * (1.0 - math.log(x)) + x * x / 4.0 - x ** 3 / 72.0
    total = 0.0
    j0 = 1
    chunk = 1024
    one_minus_q = -math.expm1(-x)
    while True:
        js = np.arange(j0, j0 + chunk, dtype=np.float64)
        total += float(np.sum(np.exp(-x * js) / (js * js)))
        j0 += chunk
        tail = math.exp(-x * j0) / (j0 * j0 * one_minus_q)
        if tail < 1e-13:
            break
        chunk = min(chunk * 2, 1 << 20)
    return PI2_OVER_6 - total


def theta_sum_error_bound(m: int, eps: float) -> tuple[float, float, bool]:
    """Check the truncation estimate for the partial log-sum.

    lhs = |sum_{i=1..m} log(1 - e^(-i eps)) + pi^2/(6 eps)|
    rhs = log(2 e^2 / eps)/2 + pi^2/(6 eps e^(m eps))
    Returns (lhs, rhs, lhs <= rhs).
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if not eps > 0:
        raise ValueError(f"need eps > 0, got {eps}")
    i = np.arange(1, m + 1, dtype=np.float64)
    partial = float(np.sum(np.log1p(-np.exp(-i * eps))))
    lhs = abs(partial + PI2_OVER_6 / eps)
    rhs = 0.5 * math.log(2.0 * math.e ** 2 / eps) \
        + (PI2_OVER_6 / eps) * math.exp(-m * eps)
    return lhs, rhs, lhs <= rhs


def upper_bound_pc(n: int) -> float:
    """Leading-order upper estimate pi^2/(6 ln n) for the critical density.

    The full statement carries a 1 + O(log log n / log n) correction
    factor; only the leading term is exposed here.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return PI2_OVER_6 / math.log(n)


def lower_bound_pc_ring(n: int) -> float:
    """Lower estimate 1/(27 ln n) for the ring puzzle's critical density."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return 1.0 / (27.0 * math.log(n))


def ring_lower_objective(t: float) -> float:
    """The interval-density objective (t/2)[2 ln(sqrt(1+1/t)-1) + 7t - 2t sqrt(1+1/t) - 1].

    Its supremum over t in (0, 1/3) exceeds 1/27, which is what makes
    the ring lower bound constant 1/27 achievable; t = 0.07 is a witness.
    """
    t = float(t)
    if not 0.0 < t < 1.0 / 3.0:
        raise ValueError(f"need t in (0, 1/3), got {t}")
    s = math.sqrt(1.0 + 1.0 / t)
    return (t / 2.0) * (2.0 * math.log(s - 1.0) + 7.0 * t - 2.0 * t * s - 1.0)


def not_x_good_bound(l: float, t: float, p: float) -> float:
    """Upper bound on the probability that an interval of length l*x is not x-good.

    An interval is x-good when it contains a vertex with no people edge
    reaching within distance x of the interval.  Valid for t = p*x in
    (0, 1/(l+2)); under that constraint sqrt(1 + l/t) - 1 > l, keeping
    the logarithm positive.
    """
    if not l > 0:
        raise ValueError(f"need l > 0, got {l}")
    if not 0.0 < t < 1.0 / (l + 2.0):
        raise ValueError(f"need t in (0, 1/(l+2)), got t={t} for l={l}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"need p in (0, 1), got {p}")
    s = math.sqrt(1.0 + l / t)
    inner = (2.0 * l * math.log(s - 1.0) + (l * l + 4.0 * l + 2.0) * t
             - 2.0 * t * s - 2.0 * l * math.log(l) - l)
    return math.exp(-(t / (2.0 * p)) * inner)


@dataclass
class BlockPartition:
    """Connected blocks covering all vertices.

    All blocks but the last have size in [m, 2m]; the last is smaller
    than 2m; two blocks share at most one vertex; the block count is at
    least n/(2m).
    """

    blocks: list[list[int]]
    m: int


def _dfs_tree(g: Graph, members: list[int]):
    """Rooted DFS spanning tree of the induced subgraph on members.

    Root is the smallest member; neighbors are explored in ascending
    order so the tree (and everything derived from it) is deterministic.
    Returns (preorder, parent, size, pos) with pos[v] the index of v in
    preorder and size[v] its subtree size.
    """
    root = members[0]
    alive = set(members)
    parent = {root: -1}
    preorder: list[int] = []
    stack = [root]
    while stack:
        v = stack.pop()
        preorder.append(v)
        for w in g.neighbors(v).tolist()[::-1]:
            if w in alive and w not in parent:
                parent[w] = v
                stack.append(w)
    size = {v: 1 for v in preorder}
    for v in preorder[:0:-1]:
        size[parent[v]] += size[v]
    pos = {v: i for i, v in enumerate(preorder)}
    return preorder, parent, size, pos


def _carve_block(g: Graph, members: list[int], m: int) -> tuple[list[int], set[int]]:
    """One block of size in [m, 2m] plus the vertices it consumes.

    Walks down the spanning tree: emit a child subtree whose size lands
    in [m, 2m]; if every child subtree is smaller than m, bundle a
    prefix of them (ordered by smallest member) together with the pivot,
    which stays available for later blocks; otherwise descend into an
    oversized subtree.
    """
    preorder, parent, size, pos = _dfs_tree(g, members)
    children: dict[int, list[int]] = {}
    for v in preorder[1:]:
        children.setdefault(parent[v], []).append(v)
    v = members[0]
    while True:
        subs = []
        for c in children.get(v, []):
            verts = preorder[pos[c]:pos[c] + size[c]]
            subs.append((min(verts), verts))
        subs.sort()
        fit = next((verts for _, verts in subs if m <= len(verts) <= 2 * m), None)
        if fit is not None:
            consumed = set(fit)
            return sorted(fit), consumed
        big = next((verts for _, verts in subs if len(verts) > 2 * m), None)
        if big is None:
            chosen: list[int] = []
            for _, verts in subs:
                chosen.extend(verts)
                if len(chosen) >= m:
                    break
            consumed = set(chosen)
            return sorted(chosen + [v]), consumed
        v = big[0]


def block_partition(puzzle: Graph, m: int) -> BlockPartition:
    """Split a connected graph into connected blocks of size about m.

    Every block induces a connected subgraph, consecutive blocks overlap
    in at most one vertex, all blocks except possibly the last have
    between m and 2m vertices, and the last has fewer than 2m.  Built by
    repeatedly carving one block off a DFS spanning tree (rooted at the
    smallest remaining vertex) and recursing on the connected remainder.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if not is_connected(puzzle):
        k = len(connected_components(puzzle))
        raise ValueError(f"puzzle graph is disconnected ({k} components)")
    remaining = list(range(puzzle.n))
    blocks: list[list[int]] = []
    while True:
        if len(remaining) < 2 * m:
            if remaining:
                blocks.append(remaining)
            break
        block, consumed = _carve_block(puzzle, remaining, m)
        blocks.append(block)
        remaining = [v for v in remaining if v not in consumed]
    return BlockPartition(blocks, m)


@dataclass
class CutCertificate:
    """Proof that a ring puzzle cannot be solved.

    The ring 0..n-1 is split at the given boundaries into intervals of
    length x or x-1; each witness vertex lies in its interval and has no
    people edge reaching within distance x beyond it.  No cluster can
    then grow past an interval boundary.
    """

    x: int
    boundaries: list[int]
    witnesses: list[int]


def find_cut_certificate(people: Graph, n: int, x: int) -> CutCertificate | None:
    """Search for an x-good witness in every interval of the standard split.

    The split uses k = floor(n/(x-1)) intervals, the first n - k(x-1) of
    length x and the rest of length x-1.  Present means provably
    unsolvable on the ring; absent proves nothing.  Intervals are checked
    in order with the smallest x-good vertex as witness.
    """
    if people.n != n:
        raise ValueError(f"people graph has {people.n} vertices, expected {n}")
    if x < 2:
        raise ValueError(f"need x >= 2, got {x} (length x-1 intervals degenerate)")
    if n < x * x:
        raise ValueError(f"need n >= x^2, got n={n}, x={x}")
    k = n // (x - 1)
    long_count = n - k * (x - 1)
    boundaries = [0]
    for i in range(k):
        boundaries.append(boundaries[-1] + (x if i < long_count else x - 1))
    witnesses: list[int] = []
    for j in range(k):
        lo, hi = boundaries[j], boundaries[j + 1] - 1
        span = (hi - lo) + 2 * x          # window [lo-x, hi+x], inclusive
        start = (lo - x) % n
        witness = -1
        for u in range(lo, hi + 1):
            nbrs = people.neighbors(u)
            if span >= n - 1:
                hit = nbrs.size > 0
            else:
                hit = bool((((nbrs - start) % n) <= span).any())
            if not hit:
                witness = u
                break
        if witness < 0:
            return None
        witnesses.append(witness)
    return CutCertificate(x=x, boundaries=boundaries, witnesses=witnesses)
