"""Seeded Monte Carlo walks, the mirrored two-walker coupling, and hitting times.

Every routine derives its randomness from ``numpy.random.SeedSequence(seed)``
so results are a pure function of ``(graph, parameters, seed)``.

Hitting times use ``T = min{t >= 0 : X_t in S}``. The stationary-start
bound compares against the return-style ``T+ = min{t >= 1 : X_t in S}``,
for which ``P[T+ <= t] <= E[#{1 <= s <= t : X_s in S}] = pi(S) t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ball import VertexSet
from .errors import CouplingBroken, EmptySet
from .gluing import GnMeta
from .graph import Graph
from .walk import Stepper, WalkConfig, stationary


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def _step_many(g: Graph, pos: np.ndarray, rng: np.random.Generator, laziness: float,
               slots_out: bool = False):
    """Advance each walker in ``pos`` by one lazy step (vectorized)."""
    deg = g.indptr[pos + 1] - g.indptr[pos]
    k = (rng.random(len(pos)) * deg).astype(np.int64)
    slot = g.indptr[pos] + k
    nxt = g.indices[slot]
    if laziness:
        hold = rng.random(len(pos)) < laziness
        nxt = np.where(hold, pos, nxt)
        slot = np.where(hold, -1, slot)
    return (nxt, slot) if slots_out else nxt


# ----------------------------------------------------------------------
@dataclass
class Trajectory:
    end: int
    steps: int
    visits: dict[str, int]
    """Visits to each registered set at times ``0..steps``."""
    first_hit: dict[str, int | None]
    occupation: np.ndarray | None = field(default=None, repr=False)


def simulate_walk(g: Graph, start: int, steps: int, cfg: WalkConfig | None = None,
                  sets: dict[str, VertexSet] | None = None,
                  track_occupation: bool = False) -> Trajectory:
    """One seeded trajectory of the lazy walk."""
    cfg = cfg or WalkConfig()
    sets = sets or {}
    masks = {name: s.mask(g.num_vertices) for name, s in sets.items()}
    rng = _rng(cfg.seed)
    u_move = rng.random(steps)
    u_hold = rng.random(steps) if cfg.laziness else None
    indptr, indices = g.indptr, g.indices
    visits = {name: int(m[start]) for name, m in masks.items()}
    first = {name: (0 if m[start] else None) for name, m in masks.items()}
    occ = np.zeros(g.num_vertices, dtype=np.int64) if track_occupation else None
    if occ is not None:
        occ[start] += 1
    v = start
    lazy = cfg.laziness
    for t in range(steps):
        if u_hold is None or u_hold[t] >= lazy:
            a, b = indptr[v], indptr[v + 1]
            v = int(indices[a + int(u_move[t] * (b - a))])
        if occ is not None:
            occ[v] += 1
        for name, m in masks.items():
            if m[v]:
                visits[name] += 1
                if first[name] is None:
                    first[name] = t + 1
    return Trajectory(v, steps, visits, first, occ)


# ----------------------------------------------------------------------
@dataclass
class CouplingResult:
    trials: int
    horizon: int
    meet_probability: float
    meet_stderr: float
    mean_meet_time: float | None
    met_inside_ball_fraction: float
    """Fraction of all trials that met before either walker left its ball."""
    meet_times: np.ndarray = field(repr=False)
    paths: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)
    """``(horizon + 1, trials)`` positions of both walkers when requested."""


def _mirror_slots(g: Graph, mirror: np.ndarray) -> np.ndarray:
    """For CSR slot ``u->w`` the slot of ``mirror[u] -> mirror[w]``."""
    n = g.num_vertices
    src = np.repeat(np.arange(n), g.degrees)
    codes = src * n + g.indices
    img = mirror[src] * n + mirror[g.indices]
    slot = np.searchsorted(codes, img)
    # CSR with sorted rows makes codes globally sorted
    ok = (slot < len(codes)) & (codes[np.minimum(slot, len(codes) - 1)] == img)
    if not ok.all():
        raise CouplingBroken("copy mirror is not a graph automorphism")
    return slot


def coupled_walk_experiment(gn: Graph, meta: GnMeta, trials: int = 1000, horizon: int = 500,
                            cfg: WalkConfig | None = None,
                            keep_paths: bool = False) -> CouplingResult:
    """Mirror-coupled walkers from the two roots; they meet on a bridge centre.

    Walker 2 always takes the mirror image of walker 1's step, read off its
    own adjacency. Once on a fixed point of the mirror (a bridge centre) the
    two walkers coincide and stay together.
    """
    cfg = cfg or WalkConfig()
    if not meta.symmetric:
        raise ValueError("coupling needs root1 == root2 so the copies mirror exactly")
    if meta.bridge_len % 2:
        raise ValueError("odd bridge length has no centre vertex to meet on")
    mirror = meta.mirror
    mslot = _mirror_slots(gn, mirror)
    inside = np.zeros(gn.num_vertices, dtype=bool)
    for ball in meta.balls:
        inside[list(ball.depth)] = True
    for path in meta.bridges:
        inside[list(path)] = True

    rng = _rng(cfg.seed)
    p1 = np.full(trials, meta.roots[0], dtype=np.int64)
    p2 = np.full(trials, meta.roots[1], dtype=np.int64)
    met = p1 == p2
    meet_time = np.where(met, 0, -1)
    exited = ~inside[p1]
    met_inside = met & ~exited
    trace1 = [p1.copy()] if keep_paths else None
    trace2 = [p2.copy()] if keep_paths else None
    for t in range(1, horizon + 1):
        nxt1, slot = _step_many(gn, p1, rng, cfg.laziness, slots_out=True)
        moved = slot >= 0
        nxt2 = p2.copy()
        nxt2[moved] = gn.indices[mslot[slot[moved]]]
        # walkers that already met share one trajectory
        nxt2[met] = nxt1[met]
        p1, p2 = nxt1, nxt2
        if (p1[met] != p2[met]).any():
            raise CouplingBroken("walkers separated after meeting")
        un = ~met
        if (p2[un] != mirror[p1[un]]).any():
            raise CouplingBroken("unmet walkers at non-mirrored positions")
        new = un & (p1 == p2)
        meet_time[new] = t
        met_inside |= new & ~exited
        met |= new
        exited |= ~inside[p1] | ~inside[p2]
        if keep_paths:
            trace1.append(p1.copy())
            trace2.append(p2.copy())
    p = float(met.mean()) if trials else 0.0
    times = meet_time[met]
    return CouplingResult(
        trials, horizon, p,
        float(np.sqrt(p * (1 - p) / trials)) if trials else 0.0,
        float(times.mean()) if times.size else None,
        float(met_inside.mean()) if trials else 0.0,
        meet_time,
        (np.array(trace1), np.array(trace2)) if keep_paths else None,
    )


# ----------------------------------------------------------------------
@dataclass(frozen=True)
class HittingBound:
    probability_bound: float
    """``pi(S) * t``: bound on ``P[T+ <= t]`` from stationarity."""
    mixing_lower_scale: float
    """``N / |S|`` for the core."""
    pi_s: float


def hitting_time_bound(g: Graph, s: VertexSet, t: int) -> HittingBound:
    if s.is_empty:
        raise EmptySet("hitting set is empty")
    pi = stationary(g)
    pi_s = float(pi[s.as_array()].sum())
    return HittingBound(pi_s * t, g.num_vertices / len(s), pi_s)


def exact_hitting_curve(g: Graph, s: VertexSet, t_max: int, start: np.ndarray | int | None = None,
                        laziness: float = 0.0, from_time: int = 0) -> np.ndarray:
    """Exact ``P[T <= t]`` for ``t = 0..t_max`` with ``S`` absorbing.

    ``start`` is a vertex, an initial distribution, or ``None`` for
    stationarity. ``from_time=1`` ignores presence in ``S`` at time 0.
    """
    if s.is_empty:
        raise EmptySet("hitting set is empty")
    n = g.num_vertices
    if start is None:
        mu = stationary(g).copy()
    elif np.isscalar(start):
        mu = np.zeros(n)
        mu[int(start)] = 1.0
    else:
        mu = np.asarray(start, dtype=np.float64).copy()
    idx = s.as_array()
    step = Stepper(g, laziness)
    curve = np.zeros(t_max + 1)
    absorbed = 0.0
    if from_time == 0:
        absorbed = float(mu[idx].sum())
        mu[idx] = 0.0
    curve[0] = absorbed
    for t in range(1, t_max + 1):
        mu = step(mu)
        absorbed += float(mu[idx].sum())
        mu[idx] = 0.0
        curve[t] = absorbed
    return curve


@dataclass
class HittingStats:
    trials: int
    mean: float
    mean_stderr: float
    median: float
    censored: int
    """Trials that had not hit ``S`` by ``t_max`` (counted as ``t_max``)."""
    curve_t: np.ndarray = field(repr=False)
    curve_p: np.ndarray = field(repr=False)
    curve_stderr: np.ndarray = field(repr=False)
    times: np.ndarray = field(repr=False)


def empirical_hitting_time(g: Graph, s: VertexSet, start: int | str = "stationary",
                           trials: int = 1000, cfg: WalkConfig | None = None,
                           curve_points: int = 50) -> HittingStats:
    """Monte Carlo first-hitting statistics for ``T = min{t >= 0 : X_t in S}``."""
    cfg = cfg or WalkConfig()
    if s.is_empty:
        raise EmptySet("hitting set is empty")
    rng = _rng(cfg.seed)
    n = g.num_vertices
    if start == "stationary":
        pos = rng.choice(n, size=trials, p=stationary(g))
    else:
        pos = np.full(trials, int(start), dtype=np.int64)
    target = s.mask(n)
    times = np.where(target[pos], 0, -1)
    active = np.flatnonzero(times < 0)
    cur = pos[active]
    t = 0
    while active.size and t < cfg.t_max:
        t += 1
        cur = _step_many(g, cur, rng, cfg.laziness)
        hit = target[cur]
        times[active[hit]] = t
        active, cur = active[~hit], cur[~hit]
    censored = int(active.size)
    times[active] = cfg.t_max
    tt = np.unique(np.linspace(0, max(int(times.max()), 1), curve_points).astype(np.int64))
    srt = np.sort(times)
    p = np.searchsorted(srt, tt, side="right") / trials
    return HittingStats(
        trials, float(times.mean()), float(times.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0,
        float(np.median(times)), censored, tt, p, np.sqrt(p * (1 - p) / trials), times,
    )
