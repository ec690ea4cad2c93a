"""Two expander copies glued along their balanced-word sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ball import RootedBall, VertexSet, compute_a_set, extract_rooted_ball
from .errors import EmptyASet
from .graph import BRIDGE_MID, CORE, SUBDIVISION, Graph


@dataclass(frozen=True)
class GnMeta:
    """Bookkeeping for a glued graph.

    Copy 1 occupies ids ``0..n_h-1``, copy 2 ids ``n_h..2*n_h-1``, bridge
    interiors follow. ``mirror`` is the involutive automorphism swapping the
    copies (``u <-> twin``) and reversing each bridge; when ``root1 == root2``
    in ``h`` it is a graph automorphism and bridge centres are its fixed points.
    """

    n_h: int
    roots: tuple[int, int]
    radius: int
    bridge_len: int
    balls: tuple[RootedBall, RootedBall]
    a_sets: tuple[VertexSet, VertexSet]
    bridges: tuple[tuple[int, ...], ...]
    bridge_middles: tuple[int, ...]
    mirror: np.ndarray
    symmetric: bool
    a_params: dict

    @property
    def a_size(self) -> int:
        return len(self.a_sets[0])

    def to_json(self) -> dict:
        return {
            "n_h": self.n_h,
            "roots": list(self.roots),
            "radius": self.radius,
            "bridge_len": self.bridge_len,
            "a_size": self.a_size,
            "a_sets": [list(a.members) for a in self.a_sets],
            "bridges": [list(b) for b in self.bridges],
            "bridge_middles": list(self.bridge_middles),
            "symmetric": self.symmetric,
            "a_params": dict(self.a_params),
        }


def build_gn(h: Graph, root1: int = 0, root2: int | None = None, r: int = 4,
             ratio_lo: float | None = None, ratio_hi: float | None = None,
             depth_min: int = 2, bridge_len: int = 2,
             delta: float | None = 0.1) -> tuple[Graph, GnMeta]:
    """Glue two copies of ``h`` by paths of ``bridge_len`` edges between word twins.

    The balanced-word set is taken in the radius-``r`` ball of each root
    (``delta`` count window by default; pass ``delta=None`` with a ratio
    window to use that instead). Raises ``BallNotTree`` if either ball has a
    cycle and ``EmptyASet`` if no balanced word exists.
    """
    if root2 is None:
        root2 = root1
    if bridge_len < 2:
        raise ValueError("bridge_len must be at least 2")
    n = h.num_vertices
    ball1 = extract_rooted_ball(h, root1, r)
    ball2 = ball1 if root2 == root1 else extract_rooted_ball(h, root2, r)
    a1 = compute_a_set(ball1, ratio_lo, ratio_hi, depth_min, delta)
    if a1.is_empty:
        raise EmptyASet(f"no balanced words at depth {depth_min}..{r}")
    words2 = ball2.by_word()
    twin_of = {}
    for v in a1:
        w = ball1.word[v]
        if w not in words2:
            raise EmptyASet(f"word {w!r} missing from the second ball")
        twin_of[v] = words2[w] + n

    edges = h.edge_array()
    edge_list = [edges, edges + n]
    roles = [np.full(2 * n, CORE, dtype=np.int8)]
    mirror = np.concatenate([np.arange(n, 2 * n), np.arange(n)]).tolist()
    nxt = 2 * n
    bridges, middles, extra = [], [], []
    for v in a1:
        interior = list(range(nxt, nxt + bridge_len - 1))
        nxt += bridge_len - 1
        path = [v, *interior, twin_of[v]]
        extra.extend(zip(path[:-1], path[1:]))
        bridges.append(tuple(path))
        k = len(interior)
        middles.append(interior[k // 2] if k % 2 else -1)
        mirror.extend(reversed(interior))
        role = np.full(k, SUBDIVISION, dtype=np.int8)
        if k % 2:
            role[k // 2] = BRIDGE_MID
        roles.append(role)
    edge_list.append(np.asarray(extra, dtype=np.int64).reshape(-1, 2))

    labels = {}
    for off, ball in ((0, ball1), (n, ball2)):
        for (u, v), lab in ball.label_map().items():
            labels[(u + off, v + off)] = lab
    g = Graph.from_edges(nxt, np.concatenate(edge_list), labels, np.concatenate(roles))

    b1, b2 = ball1, ball2.shifted(n)
    a2 = VertexSet.of(twin_of.values(), "copy2")
    meta = GnMeta(
        n_h=n,
        roots=(root1, root2 + n),
        radius=r,
        bridge_len=bridge_len,
        balls=(b1, b2),
        a_sets=(VertexSet.of(a1, "copy1"), a2),
        bridges=tuple(bridges),
        bridge_middles=tuple(middles),
        mirror=np.asarray(mirror, dtype=np.int64),
        symmetric=(root1 == root2),
        a_params={"ratio_lo": ratio_lo, "ratio_hi": ratio_hi, "delta": delta,
                  "depth_min": depth_min},
    )
    return g, meta
