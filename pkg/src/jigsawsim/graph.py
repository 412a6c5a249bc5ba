"""Immutable undirected simple graphs on the vertex set {0, ..., n-1}.

Vertex ids are dense integers so that two graphs (people and puzzle) can
share one vertex set.  Adjacency is stored in compressed sparse form with
each neighbor list sorted ascending; a canonical edge list (u < v, sorted
lexicographically) is kept alongside because the cluster engines iterate
edges, not neighborhoods.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np


class Graph:
    """Read-only simple graph. Build via graph_from_edges or a generator."""

    __slots__ = ("n", "indptr", "indices", "edge_u", "edge_v")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray,
                 edge_u: np.ndarray, edge_v: np.ndarray):
        self.n = n
        self.indptr = indptr
        self.indices = indices
        self.edge_u = edge_u
        self.edge_v = edge_v

    @property
    def m(self) -> int:
        """Number of edges."""
        return int(self.edge_u.shape[0])

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of v (a view, do not mutate)."""
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edges(self) -> Iterable[tuple[int, int]]:
        """Canonical edge pairs (u, v) with u < v, lexicographic order."""
        return zip(self.edge_u.tolist(), self.edge_v.tolist())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _from_canonical_arrays(n: int, eu: np.ndarray, ev: np.ndarray) -> Graph:
    # eu < ev elementwise, pairs unique and sorted by (u, v)
    eu = np.ascontiguousarray(eu, dtype=np.int64)
    ev = np.ascontiguousarray(ev, dtype=np.int64)
    deg = np.bincount(eu, minlength=n) + np.bincount(ev, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    order = np.argsort(src * n + dst)
    return Graph(n, indptr, dst[order], eu, ev)


def _from_pair_arrays(n: int, us: np.ndarray, vs: np.ndarray) -> Graph:
    # arbitrary pair arrays: drop self-loops, dedupe, canonicalize
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    keep = us != vs
    us, vs = us[keep], vs[keep]
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    keys = np.unique(lo * n + hi)
    return _from_canonical_arrays(n, keys // n, keys % n)


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build the simple graph on n vertices from (u, v) pairs.

    Self-loops are stripped and duplicate edges (in either orientation)
    collapse to one; endpoints outside [0, n) are rejected.
    """
    if n < 0:
        raise ValueError(f"vertex count must be non-negative, got {n}")
    pairs = list(edges)
    if not pairs:
        empty = np.empty(0, dtype=np.int64)
        return _from_canonical_arrays(n, empty, empty)
    arr = np.asarray(pairs, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("edges must be (u, v) pairs")
    bad = (arr < 0) | (arr >= n)
    if bad.any():
        u, v = arr[np.flatnonzero(bad.any(axis=1))[0]]
        raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
    return _from_pair_arrays(n, arr[:, 0], arr[:, 1])


def are_adjacent(g: Graph, u: int, v: int) -> bool:
    """True iff {u, v} is an edge; always false for u == v."""
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError(f"vertex pair ({u}, {v}) invalid for n={g.n}")
    if u == v:
        return False
    if g.degree(u) > g.degree(v):
        u, v = v, u
    nbrs = g.neighbors(u)
    i = np.searchsorted(nbrs, v)
    return bool(i < nbrs.shape[0] and nbrs[i] == v)


def connected_components(g: Graph) -> list[list[int]]:
    """Components in canonical order: sorted by smallest member, members ascending."""
    seen = np.zeros(g.n, dtype=bool)
    comps: list[list[int]] = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        stack = [start]
        comp = [start]
        while stack:
            v = stack.pop()
            for w in g.neighbors(v).tolist():
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
                    comp.append(w)
        comp.sort()
        comps.append(comp)
    return comps


def is_connected(g: Graph) -> bool:
    """True iff g has at most one component (n = 0 and n = 1 count as connected)."""
    if g.n <= 1:
        return True
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        for w in g.neighbors(v).tolist():
            if not seen[w]:
                seen[w] = True
                stack.append(w)
                count += 1
    return count == g.n


def max_degree(g: Graph) -> int:
    if g.n == 0:
        return 0
    return int(np.max(np.diff(g.indptr)))


def load_edge_list(path) -> Graph:
    """Read a graph from the shared edge-list text format.

    First non-comment line is "n m"; then m lines "u v" with 0-based ids.
    Lines starting with '#' and blank lines are skipped.
    """
    header: tuple[int, int] | None = None
    us: list[int] = []
    vs: list[int] = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two fields, got {line!r}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer field in {line!r}") from None
            if header is None:
                if a < 0 or b < 0:
                    raise ValueError(f"{path}:{lineno}: bad header {line!r}")
                header = (a, b)
            else:
                if not (0 <= a < header[0] and 0 <= b < header[0]):
                    raise ValueError(
                        f"{path}:{lineno}: edge ({a}, {b}) out of range for n={header[0]}")
                us.append(a)
                vs.append(b)
    if header is None:
        raise ValueError(f"{path}: missing 'n m' header line")
    n, m = header
    if len(us) != m:
        raise ValueError(f"{path}: header declares {m} edges, found {len(us)}")
    return _from_pair_arrays(n, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64))


def save_edge_list(g: Graph, path) -> None:
    """Write g in the shared edge-list format (canonical edge order, LF endings)."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in zip(g.edge_u.tolist(), g.edge_v.tolist()):
            fh.write(f"{u} {v}\n")
