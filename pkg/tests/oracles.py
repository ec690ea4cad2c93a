"""Reference computations for tests, independent of the package internals."""

import itertools
from collections import deque

import networkx as nx
import numpy as np


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.num_vertices))
    G.add_edges_from(g.edges())
    return G


def girth_by_edge_removal(g):
    """Shortest cycle = min over edges (u, v) of 1 + dist(u, v) without that edge."""
    G = to_nx(g)
    best = None
    for u, v in list(G.edges()):
        G.remove_edge(u, v)
        try:
            d = nx.shortest_path_length(G, u, v)
            best = d + 1 if best is None else min(best, d + 1)
        except nx.NetworkXNoPath:
            pass
        G.add_edge(u, v)
    return best


def dense_P(g, laziness=0.0):
    n = g.num_vertices
    A = np.zeros((n, n))
    for u, v in g.edges():
        A[u, v] = A[v, u] = 1.0
    P = A / A.sum(axis=1, keepdims=True)
    return laziness * np.eye(n) + (1 - laziness) * P


def dense_gap(g, laziness=0.0):
    P = dense_P(g, laziness)
    ev = np.sort(np.linalg.eigvals(P).real)
    return 1.0 - ev[-2]


def balanced_words(depth_lo, depth_hi, pred):
    out = set()
    for k in range(depth_lo, depth_hi + 1):
        for bits in itertools.product("01", repeat=k):
            w = "".join(bits)
            if pred(w):
                out.add(w)
    return out


def bfs_dist(g, s):
    dist = {s: 0}
    q = deque([s])
    while q:
        u = q.popleft()
        for w in g.neighbors(u).tolist():
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def absorbing_curve(g, S, t_max, mu0, laziness=0.0, from_time=1):
    """Dense ``P[T <= t]`` with ``S`` absorbing, started from ``mu0``."""
    P = dense_P(g, laziness)
    keep = np.ones(g.num_vertices)
    keep[list(S)] = 0.0
    mu = np.asarray(mu0, dtype=float).copy()
    if from_time == 0:
        mu = mu * keep
    out = [1.0 - mu.sum()]
    for _ in range(t_max):
        mu = (mu @ P) * keep
        out.append(1.0 - mu.sum())
    return np.array(out)


def random_connected_graph(rng, n, p):
    """Random spanning tree plus G(n, p) edges."""
    from mixgap.graph import Graph

    edges = set()
    perm = rng.permutation(n)
    for i in range(1, n):
        j = perm[rng.integers(i)]
        u, v = int(perm[i]), int(j)
        edges.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


def binary_tree(depth, root_children=3):
    """Tree whose root has ``root_children`` children and other internal vertices two."""
    from mixgap.graph import Graph

    edges, frontier, nxt = [], [0], 1
    for k in range(depth):
        new = []
        for u in frontier:
            for _ in range(root_children if k == 0 else 2):
                edges.append((u, nxt))
                new.append(nxt)
                nxt += 1
        frontier = new
    return Graph.from_edges(nxt, edges)
