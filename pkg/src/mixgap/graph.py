"""Immutable sparse undirected graphs in compressed adjacency form.

Vertices are ``0 .. n-1``. Neighbor lists are sorted, self-loops and
parallel edges are rejected. Edges may carry a binary label (0 or 1);
edges without a label are treated as unlabeled.
"""

from __future__ import annotations

from collections import deque
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import GraphFormatError

CORE = 0
BRIDGE_MID = 1
SUBDIVISION = 2
ROLE_NAMES = {CORE: "core", BRIDGE_MID: "bridge_mid", SUBDIVISION: "subdivision"}

UNLABELED = -1


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph stored as CSR arrays.

    Use :meth:`from_edges` to build one. Instances are never mutated; the
    numpy buffers are flagged read-only.
    """

    __slots__ = ("indptr", "indices", "edge_labels", "roles", "_adj")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray,
                 edge_labels: Mapping[tuple[int, int], int] | None = None,
                 roles: np.ndarray | None = None):
        n = len(indptr) - 1
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False
        self.edge_labels = dict(edge_labels or {})
        if roles is None:
            roles = np.zeros(n, dtype=np.int8)
        self.roles = np.asarray(roles, dtype=np.int8).copy()
        self.roles.flags.writeable = False
        self._adj = None

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[tuple[int, int]],
                   edge_labels: Mapping[tuple[int, int], int] | None = None,
                   roles: Iterable[int] | None = None) -> "Graph":
        """Build a graph from an edge list, validating simplicity."""
        n = int(num_vertices)
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("self-loops are not allowed")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        codes = lo * n + hi
        if len(np.unique(codes)) != len(codes):
            raise ValueError("parallel edges are not allowed")
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        labels = {}
        for (u, v), lab in (edge_labels or {}).items():
            if lab in (0, 1):
                labels[_key(int(u), int(v))] = int(lab)
        return cls(indptr, dst, labels, None if roles is None else np.fromiter(roles, dtype=np.int8))

    # ------------------------------------------------------------------
    @property
    def num_vertices(self) -> int:
        return len(self.indptr) - 1

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def label(self, u: int, v: int) -> int:
        return self.edge_labels.get(_key(u, v), UNLABELED)

    def edges(self) -> list[tuple[int, int]]:
        """Sorted list of ``(u, v)`` with ``u < v``."""
        src = np.repeat(np.arange(self.num_vertices), self.degrees)
        mask = src < self.indices
        return list(zip(src[mask].tolist(), self.indices[mask].tolist()))

    def edge_array(self) -> np.ndarray:
        src = np.repeat(np.arange(self.num_vertices), self.degrees)
        mask = src < self.indices
        return np.stack([src[mask], self.indices[mask]], axis=1)

    def adjacency(self) -> sp.csr_matrix:
        if self._adj is None:
            data = np.ones(len(self.indices), dtype=np.float64)
            self._adj = sp.csr_matrix((data, self.indices, self.indptr),
                                      shape=(self.num_vertices,) * 2)
        return self._adj

    # ------------------------------------------------------------------
    def is_symmetric(self) -> bool:
        a = self.adjacency()
        return (a != a.T).nnz == 0

    def bfs_distances(self, source: int, max_depth: int | None = None) -> np.ndarray:
        """Hop distances from ``source``; ``-1`` marks unreached vertices."""
        dist = np.full(self.num_vertices, -1, dtype=np.int64)
        dist[source] = 0
        queue = deque([source])
        indptr, indices = self.indptr, self.indices
        while queue:
            u = queue.popleft()
            du = dist[u]
            if max_depth is not None and du >= max_depth:
                continue
            for w in indices[indptr[u]:indptr[u + 1]]:
                if dist[w] < 0:
                    dist[w] = du + 1
                    queue.append(w)
        return dist

    def distances_from(self, sources: Iterable[int]) -> np.ndarray:
        """Rows of exact hop distances (``inf`` if unreachable)."""
        idx = np.asarray(list(sources), dtype=np.int64)
        return csgraph.shortest_path(self.adjacency(), directed=False,
                                     unweighted=True, indices=idx)

    def multi_source_distance(self, sources: Iterable[int]) -> np.ndarray:
        """Distance from each vertex to the nearest vertex in ``sources``."""
        n = self.num_vertices
        src = np.unique(np.asarray(list(sources), dtype=np.int64))
        dist = np.full(n, -1, dtype=np.int64)
        dist[src] = 0
        frontier = src
        level = 0
        while frontier.size:
            level += 1
            starts, stops = self.indptr[frontier], self.indptr[frontier + 1]
            nb = np.concatenate([self.indices[a:b] for a, b in zip(starts, stops)]) \
                if frontier.size else np.empty(0, dtype=np.int64)
            nb = np.unique(nb)
            nb = nb[dist[nb] < 0]
            dist[nb] = level
            frontier = nb
        return dist

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return True
        ncomp = csgraph.connected_components(self.adjacency(), directed=False,
                                             return_labels=False)
        return ncomp == 1

    def with_roles(self, roles: np.ndarray) -> "Graph":
        return Graph(self.indptr, self.indices, self.edge_labels, roles)

    def with_labels(self, labels: Mapping[tuple[int, int], int]) -> "Graph":
        merged = dict(self.edge_labels)
        for (u, v), lab in labels.items():
            if not self.has_edge(u, v):
                raise ValueError(f"label on missing edge {(u, v)}")
            if lab in (0, 1):
                merged[_key(u, v)] = int(lab)
        return Graph(self.indptr, self.indices, merged, self.roles)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and self.edge_labels == other.edge_labels)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Graph(n={self.num_vertices}, m={self.num_edges})"

    # ------------------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"graph {self.num_vertices} {self.num_edges}"]
        for u, v in self.edges():
            lab = self.edge_labels.get((u, v))
            lines.append(f"{u} {v}" if lab is None else f"{u} {v} {lab}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not rows or rows[0][0] != "graph" or len(rows[0]) != 3:
            raise GraphFormatError("missing 'graph <n> <m>' header")
        try:
            n, m = int(rows[0][1]), int(rows[0][2])
            edges, labels = [], {}
            for row in rows[1:]:
                if len(row) not in (2, 3):
                    raise GraphFormatError(f"bad edge line: {' '.join(row)}")
                u, v = int(row[0]), int(row[1])
                edges.append((u, v))
                if len(row) == 3:
                    labels[_key(u, v)] = int(row[2])
        except ValueError as exc:
            raise GraphFormatError(str(exc)) from exc
        if len(edges) != m:
            raise GraphFormatError(f"header says {m} edges, found {len(edges)}")
        try:
            return cls.from_edges(n, edges, labels)
        except ValueError as exc:
            raise GraphFormatError(str(exc)) from exc

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def read(cls, path: str | Path) -> "Graph":
        return cls.from_text(Path(path).read_text())


def girth(g: Graph, cutoff: int | None = None) -> int | None:
    """Length of the shortest cycle, or ``None`` if it exceeds ``cutoff``.

    Runs a truncated BFS from every vertex. ``cutoff=None`` means no bound
    (forests still return ``None``).
    """
    n = g.num_vertices
    best = np.iinfo(np.int64).max if cutoff is None else cutoff + 1
    indptr, indices = g.indptr, g.indices
    dist = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    for s in range(n):
        touched = [s]
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = int(dist[u])
            # any cycle found from here on has length >= 2*du + 1
            if 2 * du + 1 >= best:
                break
            for w in indices[indptr[u]:indptr[u + 1]]:
                if dist[w] < 0:
                    dist[w] = du + 1
                    parent[w] = u
                    touched.append(w)
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, du + int(dist[w]) + 1)
        for v in touched:
            dist[v] = -1
            parent[v] = -1
    if cutoff is not None and best > cutoff:
        return None
    if cutoff is None and best == np.iinfo(np.int64).max:
        return None
    return int(best)


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
