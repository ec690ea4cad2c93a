"""Dense reference computations for small graphs.

These use explicit transition matrices and full eigendecompositions, so
they share no code path with the sparse routines they are compared to.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph, complete_graph, cycle_graph


def dense_transition(g: Graph, laziness: float = 0.0) -> np.ndarray:
    n = g.num_vertices
    a = np.zeros((n, n))
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1.0
    deg = a.sum(axis=1)
    p = a / deg[:, None]
    return laziness * np.eye(n) + (1.0 - laziness) * p


def dense_mixing_time(g: Graph, start: int, epsilon: float = 0.25,
                      laziness: float = 0.5, t_max: int = 100_000) -> int | None:
    p = dense_transition(g, laziness)
    deg = np.array([g.degree(v) for v in range(g.num_vertices)], dtype=float)
    pi = deg / deg.sum() if g.num_vertices > 1 else np.ones(1)
    row = np.zeros(g.num_vertices)
    row[start] = 1.0
    for t in range(t_max + 1):
        if 0.5 * np.abs(row - pi).sum() < epsilon:
            return t
        row = row @ p
    return None


def dense_spectral_gap(g: Graph, laziness: float = 0.0) -> float:
    """``1 - lambda_2`` from a full symmetric eigendecomposition."""
    p = dense_transition(g, laziness)
    deg = np.array([g.degree(v) for v in range(g.num_vertices)], dtype=float)
    d = np.sqrt(deg)
    sym = d[:, None] * p / d[None, :]
    ev = np.sort(np.linalg.eigvalsh(0.5 * (sym + sym.T)))
    return float(1.0 - ev[-2])


def run_oracles(seed: int = 0) -> list[tuple[str, float, float, bool]]:
    """Compare sparse routines with dense references on small instances.

    Returns ``(name, sparse value, dense value, agrees)`` rows.
    """
    from .expander import generate_regular_expander
    from .spectral import spectral_gap
    from .walk import WalkConfig, evolve, mixing_time, point_mass

    rows = []
    for n in (8, 16, 32):
        c = cycle_graph(n)
        sg = spectral_gap(c, 0.0).gap
        exact = 1.0 - np.cos(2 * np.pi / n)
        rows.append((f"gap C_{n}", sg, exact, abs(sg - exact) < 1e-9))
    k8 = complete_graph(8)
    tm = mixing_time(k8, 0, 0.25, WalkConfig(0.5, 0, 1000)).t_mix
    rows.append(("t_mix K_8", float(tm), float(dense_mixing_time(k8, 0, 0.25, 0.5)),
                 tm == dense_mixing_time(k8, 0, 0.25, 0.5)))
    h = generate_regular_expander(60, 3, 5, seed=seed)
    sg = spectral_gap(h, 0.5).gap
    dg = dense_spectral_gap(h, 0.5)
    rows.append(("gap expander n=60", sg, dg, abs(sg - dg) < 1e-6))
    mu = evolve(h, point_mass(60, 0), 25, 0.5)
    ref = np.linalg.matrix_power(dense_transition(h, 0.5), 25)[0]
    err = float(np.abs(mu - ref).max())
    rows.append(("P^25 expander n=60 max err", err, 0.0, err < 1e-10))
    tm = mixing_time(h, 0, 0.25, WalkConfig(0.5, 0, 1000)).t_mix
    dm = dense_mixing_time(h, 0, 0.25, 0.5)
    rows.append(("t_mix expander n=60", float(tm), float(dm), tm == dm))
    return rows
