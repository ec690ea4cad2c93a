"""Random d-regular expanders with certified large girth or tree balls.

Two methods:

``swap_repair``
    Uniform stub pairing, then edge swaps that only ever remove short
    cycles, until the whole graph has girth at least ``girth_min``.
``tree_graft``
    An explicit depth-``r`` tree is planted at vertex 0 and its leaf
    half-edges are matched into a random regular graph on fresh vertices,
    so the radius-``r`` ball at vertex 0 is a tree by construction.
"""

from __future__ import annotations

import logging
import warnings

import numpy as np

from .errors import GenerationFailed, InfeasibleParameters
from .graph import Graph, girth

log = logging.getLogger(__name__)

METHODS = ("swap_repair", "tree_graft")


def moore_bound(d: int, g: int) -> int:
    """Minimum vertex count of a d-regular graph with girth ``g``."""
    if g % 2 == 1:
        k = (g - 1) // 2
        return 1 + d * sum((d - 1) ** i for i in range(k))
    k = g // 2
    return 2 * sum((d - 1) ** i for i in range(k))


def tree_size(d: int, r: int) -> tuple[int, int]:
    """(vertex count, leaf count) of the depth-r tree: root degree d, others d-1 children."""
    if r == 0:
        return 1, 1
    leaves = d * (d - 1) ** (r - 1)
    return 1 + d * sum((d - 1) ** i for i in range(r)), leaves


class _EdgeSet:
    """Mutable simple-graph edge store used during generation only."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.edges: list[tuple[int, int]] = []
        self.pos: dict[tuple[int, int], int] = {}

    def add(self, u: int, v: int) -> None:
        e = (u, v) if u < v else (v, u)
        self.pos[e] = len(self.edges)
        self.edges.append(e)
        self.adj[u].add(v)
        self.adj[v].add(u)

    def remove(self, u: int, v: int) -> None:
        e = (u, v) if u < v else (v, u)
        i = self.pos.pop(e)
        last = self.edges.pop()
        if i < len(self.edges):
            self.edges[i] = last
            self.pos[last] = i
        self.adj[u].discard(v)
        self.adj[v].discard(u)

    def dist_at_most(self, s: int, t: int, limit: int) -> bool:
        """True if ``t`` is within ``limit`` hops of ``s``."""
        if s == t:
            return True
        seen = {s}
        frontier = [s]
        for _ in range(limit):
            nxt = []
            for u in frontier:
                for w in self.adj[u]:
                    if w == t:
                        return True
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
            if not frontier:
                break
        return False

    def graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)


def _pair_stubs(stubs: np.ndarray, es: _EdgeSet, rng: np.random.Generator,
                movable: set[tuple[int, int]] | None = None,
                max_swaps: int = 100_000) -> bool:
    """Pair stubs into simple edges, fixing loops/multi-edges by swaps.

    Edges in ``movable`` (default: all edges created here) may be rewired
    while fixing conflicts.
    """
    stubs = stubs.copy()
    rng.shuffle(stubs)
    bad = []
    own = set() if movable is None else movable
    for u, v in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
        if u == v or v in es.adj[u]:
            bad.append((u, v))
        else:
            es.add(u, v)
            own.add((min(u, v), max(u, v)))
    swaps = 0
    while bad:
        if swaps > max_swaps or not own:
            return False
        swaps += 1
        u, v = bad[-1]
        x, y = list(own)[rng.integers(len(own))]
        if rng.random() < 0.5:
            x, y = y, x
        # rewire (u,v) + (x,y) -> (u,x) + (v,y)
        if len({u, x}) < 2 or len({v, y}) < 2 or x in es.adj[u] or y in es.adj[v]:
            continue
        if (u, x) == (v, y) or (u, x) == (y, v):
            continue
        es.remove(x, y)
        own.discard((min(x, y), max(x, y)))
        es.add(u, x)
        es.add(v, y)
        own.add((min(u, x), max(u, x)))
        own.add((min(v, y), max(v, y)))
        bad.pop()
    return True


def _random_regular(n: int, d: int, rng: np.random.Generator) -> Graph | None:
    es = _EdgeSet(n)
    stubs = np.repeat(np.arange(n), d)
    if not _pair_stubs(stubs, es, rng):
        return None
    return es.graph()


def _short_cycle_edge(es: _EdgeSet, g_min: int) -> tuple[int, int] | None:
    """Some edge lying on a cycle shorter than ``g_min``, if any."""
    for u, v in es.edges:
        es.adj[u].discard(v)
        es.adj[v].discard(u)
        short = es.dist_at_most(u, v, g_min - 2)
        es.adj[u].add(v)
        es.adj[v].add(u)
        if short:
            return (u, v)
    return None


def _swap_repair(n: int, d: int, girth_min: int, rng: np.random.Generator,
                 max_swaps: int) -> Graph | None:
    base = _random_regular(n, d, rng)
    if base is None:
        return None
    es = _EdgeSet(n)
    for u, v in base.edges():
        es.add(u, v)
    limit = girth_min - 2
    for _ in range(max_swaps):
        e = _short_cycle_edge(es, girth_min)
        if e is None:
            return es.graph()
        u, v = e
        x, y = es.edges[rng.integers(len(es.edges))]
        if rng.random() < 0.5:
            x, y = y, x
        if len({u, v, x, y}) < 4 or x in es.adj[u] or y in es.adj[v]:
            continue
        es.remove(u, v)
        es.remove(x, y)
        # accept only if neither new edge closes a cycle shorter than girth_min
        if not es.dist_at_most(u, x, limit):
            es.add(u, x)
            if not es.dist_at_most(v, y, limit):
                es.add(v, y)
                continue
            es.remove(u, x)
        es.add(u, v)
        es.add(x, y)
    return None


def _tree_graft(n_target: int, d: int, r: int, rng: np.random.Generator) -> Graph | None:
    t_size, leaves = tree_size(d, r)
    es_edges = []
    # BFS-ordered tree: vertex 0 is the root
    nxt = 1
    frontier = [0]
    for depth in range(r):
        new = []
        for u in frontier:
            k = d if depth == 0 else d - 1
            for _ in range(k):
                es_edges.append((u, nxt))
                new.append(nxt)
                nxt += 1
        frontier = new
    leaf_ids = np.asarray(frontier if r > 0 else [0], dtype=np.int64)
    leaf_need = d - 1 if r > 0 else d
    m = n_target - t_size
    while m * d < leaves * leaf_need or ((t_size + m) * d) % 2 or m <= d:
        m += 1
    n = t_size + m
    es = _EdgeSet(n)
    for u, v in es_edges:
        es.add(u, v)
    fresh = np.arange(t_size, n)
    fresh_stubs = np.repeat(fresh, d)
    rng.shuffle(fresh_stubs)
    # leaf half-edges go to fresh stubs, distinct fresh vertices per leaf
    pool = list(fresh_stubs.tolist())
    for leaf in leaf_ids.tolist():
        for _ in range(leaf_need):
            for tries in range(len(pool)):
                j = int(rng.integers(len(pool)))
                w = pool[j]
                if w not in es.adj[leaf]:
                    pool[j] = pool[-1]
                    pool.pop()
                    es.add(leaf, w)
                    break
            else:
                return None
    rest = np.asarray(pool, dtype=np.int64)
    if len(rest) % 2:
        return None
    if len(rest) and not _pair_stubs(rest, es, rng, movable=set()):
        return None
    return es.graph()


def generate_regular_expander(n_target: int, d: int = 3, girth_min: int = 3,
                              seed: int | np.random.SeedSequence | None = 0,
                              method: str = "swap_repair",
                              gap_threshold: float = 0.05,
                              retries: int = 20,
                              max_swaps: int | None = None) -> Graph:
    """Random connected d-regular graph with a certified girth or tree ball.

    ``swap_repair`` certifies global girth ``>= girth_min`` and keeps
    ``n == n_target``. ``tree_graft`` certifies only that the ball of
    radius ``(girth_min - 1) // 2`` around vertex 0 is a tree, and may
    return more than ``n_target`` vertices when the tree needs room.
    Every returned graph has simple-walk spectral gap ``>= gap_threshold``.
    """
    from .spectral import spectral_gap

    if d < 3:
        raise InfeasibleParameters("d must be at least 3")
    if girth_min < 3:
        raise InfeasibleParameters("girth_min must be at least 3")
    if method not in METHODS:
        raise InfeasibleParameters(f"unknown method {method!r}")
    if method == "swap_repair":
        if (n_target * d) % 2:
            raise InfeasibleParameters("n * d must be even")
        if n_target <= d:
            raise InfeasibleParameters("need n > d")
        need = moore_bound(d, girth_min)
        if n_target < need:
            raise GenerationFailed(
                f"girth {girth_min} needs at least {need} vertices at degree {d}")
    if max_swaps is None:
        max_swaps = 200 * n_target
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    radius = (girth_min - 1) // 2
    for attempt, child in enumerate(ss.spawn(retries)):
        rng = np.random.default_rng(child)
        if method == "swap_repair":
            g = _swap_repair(n_target, d, girth_min, rng, max_swaps)
        else:
            g = _tree_graft(n_target, d, radius, rng)
        if g is None or not g.is_connected():
            log.debug("attempt %d: construction failed", attempt)
            continue
        if method == "swap_repair":
            gg = girth(g, girth_min - 1)
            assert gg is None, "swap repair left a short cycle"
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            # simple-walk gap = 2 x the gap at laziness 1/2
            gap = 2.0 * spectral_gap(g, laziness=0.5, tol=1e-7, max_iter=20_000).gap
        if gap < gap_threshold:
            log.debug("attempt %d: gap %.4f below threshold", attempt, gap)
            continue
        return g
    raise GenerationFailed(
        f"no {method} graph with n>={n_target}, d={d}, girth_min={girth_min} "
        f"after {retries} attempts")
