"""Small graph constructions shared across test modules."""

from __future__ import annotations

import heapq
from itertools import combinations, product

from jigsawsim import Seed, graph_from_edges


def path_graph(n):
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(n):
    return graph_from_edges(n, [(i, n - 1) for i in range(n - 1)])


def complete_graph(n):
    return graph_from_edges(n, list(combinations(range(n), 2)))


def all_people_graphs(n):
    """Every graph on n labeled vertices, one per edge-subset bitmask."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield graph_from_edges(
            n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def tree_from_prufer(seq, n):
    """Edge list of the labeled tree with the given Prufer sequence."""
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, w = leaves
    edges.append((u, w))
    return edges


def all_labeled_trees(n):
    """Yields the edge list of every labeled tree on n vertices."""
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return
    for seq in product(range(n), repeat=n - 2):
        yield tree_from_prufer(seq, n)


def random_connected_graph(n, seed, extra=0.02):
    """Uniform-attachment tree plus a sprinkling of extra edges."""
    rng = Seed(seed).rng()
    edges = [(int(rng.integers(v)), v) for v in range(1, n)]
    total = n * (n - 1) // 2
    want = rng.binomial(total, extra)
    us = rng.integers(0, n, size=want)
    vs = rng.integers(0, n, size=want)
    edges.extend((int(u), int(v)) for u, v in zip(us, vs) if u != v)
    return graph_from_edges(n, edges)


def bfs_connected(members, adj):
    """True iff the induced subgraph on members is connected."""
    members = set(members)
    if not members:
        return False
    start = next(iter(members))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w in members and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == members


def check_block_invariants(g, bp, m):
    """Assert every contract property of a block partition."""
    blocks = bp.blocks
    assert bp.m == m
    assert blocks, "no blocks"
    n = g.n
    union = set()
    for b in blocks:
        union.update(b)
    assert union == set(range(n)), "blocks do not cover the vertex set"
    k = len(blocks)
    for i, b in enumerate(blocks):
        if i < k - 1:
            assert m <= len(b) <= 2 * m, (i, len(b), m)
        else:
            assert 1 <= len(b) < 2 * m, (i, len(b), m)
    adj = [set(g.neighbors(v).tolist()) for v in range(n)]
    for b in blocks:
        assert bfs_connected(b, adj), ("disconnected block", b)
    for i in range(k):
        for j in range(i + 1, k):
            assert len(set(blocks[i]) & set(blocks[j])) <= 1, (i, j)
    assert k >= n / (2 * m)
