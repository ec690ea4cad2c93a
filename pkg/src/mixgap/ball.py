"""Rooted tree balls with binary word coordinates, and the balanced-word set."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BallNotTree
from .graph import UNLABELED, Graph


@dataclass(frozen=True)
class VertexSet:
    """Sorted, deduplicated vertex ids on a host graph."""

    members: tuple[int, ...]
    host: str = ""
    empty_flag: bool = field(default=False, compare=False)

    @classmethod
    def of(cls, ids, host: str = "", num_vertices: int | None = None) -> "VertexSet":
        members = tuple(sorted({int(v) for v in ids}))
        if num_vertices is not None and members and (members[0] < 0 or members[-1] >= num_vertices):
            raise ValueError("vertex id out of range for host graph")
        return cls(members, host, empty_flag=not members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, v) -> bool:
        i = np.searchsorted(self.members, v)
        return i < len(self.members) and self.members[i] == v

    @property
    def is_empty(self) -> bool:
        return not self.members

    def as_array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    def mask(self, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[list(self.members)] = True
        return m


@dataclass(frozen=True)
class RootedBall:
    """BFS tree of radius ``radius`` around ``root``.

    ``child_label[v]`` is 0, 1 or ``UNLABELED``; ``word[v]`` is the 0/1 string
    read along the tree path from the root, or ``None`` when some edge on
    that path is unlabeled. The root has the empty word.
    """

    root: int
    radius: int
    parent: dict[int, int]
    depth: dict[int, int]
    child_label: dict[int, int]
    word: dict[int, str | None]

    @property
    def vertices(self) -> list[int]:
        return sorted(self.depth)

    @property
    def boundary(self) -> list[int]:
        return sorted(v for v, k in self.depth.items() if k == self.radius)

    def __len__(self) -> int:
        return len(self.depth)

    def tree_edges(self) -> list[tuple[int, int, int]]:
        """(parent, child, label) for every non-root ball vertex."""
        return [(p, v, self.child_label[v]) for v, p in sorted(self.parent.items())]

    def by_word(self) -> dict[str, int]:
        return {w: v for v, w in self.word.items() if w is not None}

    def shifted(self, offset: int) -> "RootedBall":
        """Same ball with every vertex id increased by ``offset``."""
        return RootedBall(
            self.root + offset, self.radius,
            {v + offset: p + offset for v, p in self.parent.items()},
            {v + offset: k for v, k in self.depth.items()},
            {v + offset: lab for v, lab in self.child_label.items()},
            {v + offset: w for v, w in self.word.items()},
        )

    def label_map(self) -> dict[tuple[int, int], int]:
        return {(min(p, v), max(p, v)): lab for p, v, lab in self.tree_edges() if lab != UNLABELED}


def extract_rooted_ball(g: Graph, root: int, r: int) -> RootedBall:
    """BFS ball with canonical 0/1 child labels; raises ``BallNotTree`` on a cycle.

    The ball is a tree when no vertex within distance ``r`` is reached
    twice; an edge joining two vertices at depth exactly ``r`` is allowed,
    so girth ``>= 2r + 1`` always suffices.

    Children of a vertex are taken in ascending id order: the first gets
    label 0, the second label 1, any further child is unlabeled, and so is
    its whole subtree.
    """
    if r < 1:
        raise ValueError("radius must be at least 1")
    parent: dict[int, int] = {}
    depth = {root: 0}
    label = {root: UNLABELED}
    word: dict[int, str | None] = {root: ""}
    frontier = [root]
    for k in range(r):
        nxt = []
        for u in frontier:
            kids = []
            for w in g.neighbors(u).tolist():
                if w == parent.get(u):
                    continue
                if w in depth:
                    raise BallNotTree(f"edge ({u}, {w}) closes a cycle within radius {r}")
                kids.append(w)
            for i, w in enumerate(kids):
                parent[w] = u
                depth[w] = k + 1
                lab = i if i < 2 else UNLABELED
                pw = word[u]
                label[w] = lab
                word[w] = None if (pw is None or lab == UNLABELED) else pw + str(lab)
                nxt.append(w)
        frontier = nxt
    return RootedBall(root, r, parent, depth, label, word)


def balanced_tolerance(length: int, delta: float) -> int:
    return math.ceil(delta * length - 1e-12)


def word_is_balanced(w: str, ratio_lo: float | None = None, ratio_hi: float | None = None,
                     delta: float | None = None) -> bool:
    """Predicate shared by the A-set: nonzero ones and a ratio window or count window."""
    ones = w.count("1")
    zeros = len(w) - ones
    if ones == 0:
        return False
    if delta is not None:
        return abs(zeros - ones) <= balanced_tolerance(len(w), delta)
    return ratio_lo <= zeros / ones <= ratio_hi


def compute_a_set(ball: RootedBall, ratio_lo: float | None = None,
                  ratio_hi: float | None = None, depth_min: int = 2,
                  delta: float | None = None, host: str = "") -> VertexSet:
    """Ball vertices whose word is balanced, at depth ``>= depth_min``.

    Supply either a raw window ``ratio_lo <= #0/#1 <= ratio_hi`` or a count
    tolerance ``|#0 - #1| <= ceil(delta * depth)``. An empty result is
    returned with ``empty_flag`` set rather than raised.
    """
    if depth_min < 2:
        raise ValueError("depth_min must be at least 2")
    if delta is None:
        if ratio_lo is None or ratio_hi is None:
            raise ValueError("give ratio_lo/ratio_hi or delta")
        if not 0 < ratio_lo <= 1 <= ratio_hi:
            raise ValueError("need 0 < ratio_lo <= 1 <= ratio_hi")
    elif delta < 0:
        raise ValueError("delta must be nonnegative")
    members = [v for v, w in ball.word.items()
               if w is not None and len(w) >= depth_min
               and word_is_balanced(w, ratio_lo, ratio_hi, delta)]
    return VertexSet.of(members, host)


def best_tree_root(g: Graph, r_max: int) -> tuple[int, int]:
    """Vertex with the largest certified tree-ball radius (ties -> lowest id)."""
    best_v, best_r = 0, 0
    for v in range(g.num_vertices):
        lo = best_r + 1
        if lo > r_max:
            break
        r = best_r
        for rr in range(lo, r_max + 1):
            try:
                extract_rooted_ball(g, v, rr)
            except BallNotTree:
                break
            r = rr
        if r > best_r:
            best_v, best_r = v, r
    return best_v, best_r
