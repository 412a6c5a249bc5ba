"""Jigsaw percolation dynamics on a pair of graphs over one vertex set.

Round 0 puts every vertex in its own cluster.  Round 1 replaces the
partition with the connected components of the graph whose edges appear
in BOTH the people and the puzzle graph.  Every later round builds the
cluster-level graph whose edges are cluster pairs adjacent in both
graphs and merges each connected group of clusters at once, so chains of
pairwise-mergeable clusters collapse in a single round.  The process
stops at the first round that changes nothing; the instance is solved
when a single cluster remains.

The reported round count is the smallest i with C_i = C_{i+1}.  In
particular, when the two edge sets are disjoint the partition never
moves and the count is 0.

Two merge rules exist.  Standard is the process above.  AdjacentEdge
additionally demands witness edges sharing a vertex: clusters U and W
may merge only if some u in one of them has a puzzle edge and a people
edge both ending in the other (the two endpoints may coincide).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graph import (Graph, _from_canonical_arrays, connected_components,
                    is_connected)


class MergeRule(Enum):
    STANDARD = "std"
    ADJACENT_EDGE = "ae"


class JigsawInstance:
    """A people graph and a puzzle graph sharing the vertex set 0..n-1."""

    __slots__ = ("n", "people", "puzzle")

    def __init__(self, people: Graph, puzzle: Graph, *,
                 allow_disconnected_puzzle: bool = False):
        if people.n != puzzle.n:
            raise ValueError(
                f"people graph has {people.n} vertices, puzzle has {puzzle.n}")
        if people.n < 1:
            raise ValueError("instance needs at least one vertex")
        if not allow_disconnected_puzzle and not is_connected(puzzle):
            k = len(connected_components(puzzle))
            raise ValueError(f"puzzle graph is disconnected ({k} components)")
        self.n = people.n
        self.people = people
        self.puzzle = puzzle


@dataclass
class ClusterState:
    """Partition of the vertices after some round.

    parent[v] is the smallest vertex of v's cluster, i.e. a fully
    flattened disjoint-set forest; equal parents mean same cluster.
    """

    parent: np.ndarray
    round: int
    cluster_count: int

    @classmethod
    def from_sets(cls, n: int, sets, round: int = 0) -> "ClusterState":
        """Build a state from explicit disjoint vertex sets (testing aid)."""
        parent = np.full(n, -1, dtype=np.int64)
        for block in sets:
            rep = min(block)
            for v in block:
                if parent[v] != -1:
                    raise ValueError(f"vertex {v} appears in two clusters")
                parent[v] = rep
        if (parent == -1).any():
            missing = int(np.flatnonzero(parent == -1)[0])
            raise ValueError(f"vertex {missing} missing from the partition")
        return cls(parent, round, int(np.unique(parent).size))

    def partition(self) -> list[list[int]]:
        """Clusters ordered by smallest member, members ascending."""
        by_rep: dict[int, list[int]] = {}
        for v, rep in enumerate(self.parent.tolist()):
            by_rep.setdefault(rep, []).append(v)
        return [by_rep[rep] for rep in sorted(by_rep)]

    def histogram(self) -> dict[int, int]:
        sizes = np.bincount(np.unique(self.parent, return_inverse=True)[1])
        uniq, counts = np.unique(sizes, return_counts=True)
        return {int(s): int(c) for s, c in zip(uniq, counts)}


@dataclass(eq=False)
class TrialOutcome:
    """Result of running the dynamics to the fixed point.

    rounds is None for the contraction engine, which reaches the same
    final partition but has no synchronous round structure.
    """

    solved: bool
    rounds: int | None
    final_cluster_count: int
    largest_cluster: int
    histogram: dict[int, int]
    parent: np.ndarray


def _compact(labels: np.ndarray) -> tuple[np.ndarray, int]:
    uniq, inv = np.unique(labels, return_inverse=True)
    return inv.astype(np.int64, copy=False), int(uniq.size)


def _min_vertex_parent(lab: np.ndarray, k: int) -> np.ndarray:
    # lab holds compact cluster ids 0..k-1; the first occurrence of each id
    # (scanning vertices in order) is the smallest member of that cluster
    _, first = np.unique(lab, return_index=True)
    return first[lab]


def _find(forest: dict[int, int], x: int) -> int:
    root = x
    while forest.get(root, root) != root:
        root = forest[root]
    while forest.get(x, x) != root:
        forest[x], x = root, forest[x]
    return root


def _apply_merges(lab: np.ndarray, k: int, ca: np.ndarray,
                  cb: np.ndarray) -> tuple[np.ndarray, int]:
    forest: dict[int, int] = {}
    for a, b in zip(ca.tolist(), cb.tolist()):
        ra, rb = _find(forest, a), _find(forest, b)
        if ra != rb:
            forest[max(ra, rb)] = min(ra, rb)
    rootmap = np.arange(k, dtype=np.int64)
    for x in forest:
        rootmap[x] = _find(forest, x)
    return _compact(rootmap[lab])


def _merge_pairs(lab: np.ndarray, k: int, pu: np.ndarray, pv: np.ndarray,
                 qu: np.ndarray, qv: np.ndarray,
                 rule: MergeRule) -> tuple[np.ndarray, np.ndarray]:
    """Cluster pairs (as compact ids) that the rule allows to merge."""
    pa, pb = lab[pu], lab[pv]
    pm = pa != pb
    qa, qb = lab[qu], lab[qv]
    qm = qa != qb
    if rule is MergeRule.STANDARD:
        pkeys = np.unique(np.minimum(pa[pm], pb[pm]) * k + np.maximum(pa[pm], pb[pm]))
        qkeys = np.unique(np.minimum(qa[qm], qb[qm]) * k + np.maximum(qa[qm], qb[qm]))
        keys = np.intersect1d(pkeys, qkeys, assume_unique=True)
    else:
        # witness key u*k + c: vertex u has an edge into cluster c
        wp = np.unique(np.concatenate([pu[pm] * k + pb[pm], pv[pm] * k + pa[pm]]))
        wq = np.unique(np.concatenate([qu[qm] * k + qb[qm], qv[qm] * k + qa[qm]]))
        w = np.intersect1d(wp, wq, assume_unique=True)
        if w.size == 0:
            return w, w
        own = lab[w // k]
        other = w % k
        keys = np.unique(np.minimum(own, other) * k + np.maximum(own, other))
    return keys // k, keys % k


def _intersection_labels(inst: JigsawInstance) -> tuple[np.ndarray, int]:
    n = inst.n
    pk = inst.people.edge_u * n + inst.people.edge_v
    qk = inst.puzzle.edge_u * n + inst.puzzle.edge_v
    ik = np.intersect1d(pk, qk, assume_unique=True)
    lab = np.arange(n, dtype=np.int64)
    if ik.size:
        return _apply_merges(lab, n, ik // n, ik % n)
    return lab, n


def initial_round(inst: JigsawInstance) -> ClusterState:
    """State after round 1: components of the edge-intersection graph."""
    lab, k = _intersection_labels(inst)
    return ClusterState(_min_vertex_parent(lab, k), 1, k)


def step(inst: JigsawInstance, state: ClusterState,
         rule: MergeRule = MergeRule.STANDARD) -> tuple[ClusterState, bool]:
    """One synchronous round; merged_any reports whether anything changed."""
    lab, k = _compact(state.parent)
    ca, cb = _merge_pairs(lab, k, inst.people.edge_u, inst.people.edge_v,
                          inst.puzzle.edge_u, inst.puzzle.edge_v, rule)
    if ca.size == 0:
        return ClusterState(state.parent, state.round + 1, k), False
    lab2, k2 = _apply_merges(lab, k, ca, cb)
    return ClusterState(_min_vertex_parent(lab2, k2), state.round + 1, k2), True


def _outcome(lab: np.ndarray, k: int, rounds: int | None) -> TrialOutcome:
    n = lab.shape[0]
    sizes = np.bincount(lab, minlength=k)
    uniq, counts = np.unique(sizes, return_counts=True)
    hist = {int(s): int(c) for s, c in zip(uniq, counts)}
    return TrialOutcome(
        solved=(k == 1),
        rounds=rounds,
        final_cluster_count=k,
        largest_cluster=int(sizes.max()) if k else 0,
        histogram=hist,
        parent=_min_vertex_parent(lab, k),
    )


def run(inst: JigsawInstance, rule: MergeRule = MergeRule.STANDARD,
        trace: list | None = None) -> TrialOutcome:
    """Iterate rounds to the fixed point and report the outcome.

    If trace is a list it receives the cluster count of every partition
    from round 0 through the fixed point.

    Edges inside a cluster can never separate again, so between rounds we
    drop them; each surviving round then costs one pass over the still
    live edges instead of the whole edge set.
    """
    n = inst.n
    if trace is not None:
        trace.append(n)
    lab, k = _intersection_labels(inst)
    rounds = 0
    if k < n:
        rounds = 1
        if trace is not None:
            trace.append(k)
    pu, pv = inst.people.edge_u, inst.people.edge_v
    qu, qv = inst.puzzle.edge_u, inst.puzzle.edge_v
    while k > 1:
        live = lab[pu] != lab[pv]
        pu, pv = pu[live], pv[live]
        live = lab[qu] != lab[qv]
        qu, qv = qu[live], qv[live]
        ca, cb = _merge_pairs(lab, k, pu, pv, qu, qv, rule)
        if ca.size == 0:
            break
        lab, k = _apply_merges(lab, k, ca, cb)
        rounds += 1
        if trace is not None:
            trace.append(k)
    return _outcome(lab, k, rounds)


def run_contraction(inst: JigsawInstance,
                    rule: MergeRule = MergeRule.STANDARD) -> TrialOutcome:
    """Asynchronous worklist contraction; same fixed point, no round count.

    Maintains per-cluster neighbor sets in both graphs and greedily
    contracts any cluster pair adjacent in both until none remains.  The
    AE rule does not commute with contraction order, so for it we fall
    back to the synchronous engine and only drop the round count.
    """
    if rule is MergeRule.ADJACENT_EDGE:
        out = run(inst, rule)
        out.rounds = None
        return out
    n = inst.n
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    padj: list[set[int]] = [set() for _ in range(n)]
    for u, v in zip(inst.people.edge_u.tolist(), inst.people.edge_v.tolist()):
        padj[u].add(v)
        padj[v].add(u)
    qadj: list[set[int]] = [set() for _ in range(n)]
    for u, v in zip(inst.puzzle.edge_u.tolist(), inst.puzzle.edge_v.tolist()):
        qadj[u].add(v)
        qadj[v].add(u)

    work = [(u, v) for u in range(n) for v in padj[u] & qadj[u] if v > u]
    while work:
        a, b = work.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if rb not in padj[ra] or rb not in qadj[ra]:
            continue
        if len(padj[ra]) + len(qadj[ra]) < len(padj[rb]) + len(qadj[rb]):
            ra, rb = rb, ra
        parent[rb] = ra
        for adj in (padj, qadj):
            merged, absorbed = adj[ra], adj[rb]
            merged.discard(rb)
            absorbed.discard(ra)
            for c in absorbed:
                adj[c].discard(rb)
                adj[c].add(ra)
            merged |= absorbed
            adj[rb] = set()
        for c in padj[ra] & qadj[ra]:
            work.append((ra, c))

    lab, k = _compact(np.array([find(v) for v in range(n)], dtype=np.int64))
    return _outcome(lab, k, None)


def is_internally_solved(inst: JigsawInstance, subset) -> bool:
    """Whether the induced sub-instance on the given vertices solves itself.

    The induced puzzle graph must be connected.
    """
    sub = sorted(set(int(v) for v in subset))
    if not sub:
        raise ValueError("subset must be nonempty")
    if sub[0] < 0 or sub[-1] >= inst.n:
        raise ValueError(f"subset vertex out of range for n={inst.n}")
    remap = np.full(inst.n, -1, dtype=np.int64)
    remap[sub] = np.arange(len(sub), dtype=np.int64)

    def induce(g: Graph) -> Graph:
        keep = (remap[g.edge_u] >= 0) & (remap[g.edge_v] >= 0)
        # remap is increasing on the subset, so canonical order survives
        return _from_canonical_arrays(len(sub), remap[g.edge_u[keep]],
                                      remap[g.edge_v[keep]])

    induced = JigsawInstance(induce(inst.people), induce(inst.puzzle))
    return run(induced).solved
