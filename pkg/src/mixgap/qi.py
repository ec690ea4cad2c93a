"""Stretching label-1 ball edges into long paths, and checking the quasi-isometry."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ball import RootedBall
from .errors import MissingLabels
from .graph import SUBDIVISION, UNLABELED, Graph


@dataclass(frozen=True)
class QiMap:
    """Vertex map ``G -> G'`` with quasi-isometry constants ``(a, b)``."""

    forward: np.ndarray
    a: float
    b: float
    subdivided: tuple[tuple[int, ...], ...] = ()
    """Each stretched edge as the full vertex path in ``G'``."""

    def __call__(self, v):
        return self.forward[v]


@dataclass(frozen=True)
class QiReport:
    violations: int
    pairs_checked: int
    max_ratio: float
    min_ratio: float
    near_surjective: bool
    max_gap_to_image: int


def _stretch_edges(g: Graph, targets: set[tuple[int, int]], stretch: int) -> tuple[Graph, QiMap]:
    n = g.num_vertices
    keep, new_edges, labels, paths = [], [], {}, []
    nxt = n
    for u, v in g.edges():
        if (u, v) not in targets:
            keep.append((u, v))
            lab = g.label(u, v)
            if lab != UNLABELED:
                labels[(u, v)] = lab
            continue
        path = [u, *range(nxt, nxt + stretch - 1), v]
        nxt += stretch - 1
        new_edges.extend(zip(path[:-1], path[1:]))
        paths.append(tuple(path))
    roles = np.concatenate([g.roles, np.full(nxt - n, SUBDIVISION, dtype=np.int8)])
    out = Graph.from_edges(nxt, keep + new_edges, labels, roles)
    return out, QiMap(np.arange(n, dtype=np.int64), float(stretch), float(stretch), tuple(paths))


def apply_quasi_isometry(g: Graph, balls: list[RootedBall], stretch: int = 10) -> tuple[Graph, QiMap]:
    """Replace every label-1 tree edge of each ball by a path of ``stretch`` edges.

    New interior vertices get ids after the existing ones, in order of the
    sorted stretched edges. Original vertices keep their ids, so the map
    is the identity on ``G`` with constants ``a = b = stretch``.
    """
    if stretch < 2:
        raise ValueError("stretch must be at least 2")
    targets = set()
    for ball in balls:
        tree = ball.tree_edges()
        if not any(lab in (0, 1) for _, _, lab in tree):
            raise MissingLabels(f"ball at root {ball.root} has no 0/1 labels")
        for p, v, lab in tree:
            if lab == 1:
                if not g.has_edge(p, v):
                    raise ValueError(f"ball edge ({p}, {v}) not in graph")
                targets.add((min(p, v), max(p, v)))
    return _stretch_edges(g, targets, stretch)


def apply_edge_label_stretch(g: Graph, stretch: int = 10) -> tuple[Graph, QiMap]:
    """Stretch every label-1 edge of ``g`` (labels as read from a graph file)."""
    if stretch < 2:
        raise ValueError("stretch must be at least 2")
    targets = {e for e, lab in g.edge_labels.items() if lab == 1}
    if not targets:
        raise MissingLabels("graph carries no label-1 edges")
    return _stretch_edges(g, targets, stretch)


def contract_subdivisions(g2: Graph, qmap: QiMap) -> Graph:
    """Undo :func:`apply_quasi_isometry`: collapse each stretched path to one edge."""
    n = len(qmap.forward)
    interior = set()
    restored = []
    for path in qmap.subdivided:
        interior.update(path[1:-1])
        restored.append((path[0], path[-1]))
    inv = {int(x): i for i, x in enumerate(qmap.forward)}
    edges = [(inv[u], inv[v]) for u, v in g2.edges()
             if u not in interior and v not in interior]
    edges += [(inv[u], inv[v]) for u, v in restored]
    return Graph.from_edges(n, edges)


def verify_quasi_isometry(g: Graph, g2: Graph, qmap: QiMap, sample_pairs: int = 10_000,
                          seed: int = 0, sources: int | None = None) -> QiReport:
    """Check ``d/a - b <= d'(psi u, psi v) <= a d + b`` on random pairs.

    Pairs are drawn as ``sources`` random sources times ``sample_pairs /
    sources`` random targets each, so distances come from a handful of
    BFS sweeps. Near-surjectivity is checked exactly by a multi-source BFS
    from the image.
    """
    rng = np.random.default_rng(seed)
    n = g.num_vertices
    if sources is None:
        sources = max(1, min(n, int(np.sqrt(sample_pairs))))
    per = int(np.ceil(sample_pairs / sources))
    src = rng.integers(0, n, size=sources)
    tgt = rng.integers(0, n, size=(sources, per))
    d1 = g.distances_from(src)
    d2 = g2.distances_from(qmap.forward[src])
    a, b = qmap.a, qmap.b
    violations = 0
    max_ratio, min_ratio = 0.0, np.inf
    checked = 0
    for i in range(sources):
        t = tgt[i][: max(0, min(per, sample_pairs - checked))]
        if t.size == 0:
            break
        x = d1[i, t]
        y = d2[i, qmap.forward[t]]
        checked += t.size
        bad = (y < x / a - b - 1e-9) | (y > a * x + b + 1e-9) | ~np.isfinite(y) & np.isfinite(x)
        violations += int(bad.sum())
        pos = x > 0
        if pos.any():
            r = y[pos] / x[pos]
            max_ratio = max(max_ratio, float(r.max()))
            min_ratio = min(min_ratio, float(r.min()))
    gap = g2.multi_source_distance(np.unique(qmap.forward))
    reach = int(gap.max()) if (gap >= 0).all() else -1
    near = reach >= 0 and reach <= a + b
    return QiReport(violations, checked, max_ratio,
                    float(min_ratio) if np.isfinite(min_ratio) else 0.0, near, reach)
