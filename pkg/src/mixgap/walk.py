"""Exact evolution of random-walk distributions and mixing distances."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DisconnectedGraph, LengthMismatch, ZeroStationaryMass
from .graph import Graph

EXACT_SIZE_CUTOFF = 200_000


@dataclass(frozen=True)
class WalkConfig:
    laziness: float = 0.5
    seed: int = 0
    t_max: int = 100_000

    def __post_init__(self):
        if not 0.0 <= self.laziness < 1.0:
            raise ValueError("laziness must lie in [0, 1)")


@dataclass
class MixingResult:
    t_mix: int | None
    """First recorded ``t`` with ``d(t) < epsilon``; ``None`` if not mixed by ``t_max``."""
    epsilon: float
    profile: list[tuple[int, float]] = field(repr=False)

    @property
    def mixed(self) -> bool:
        return self.t_mix is not None


def check_distribution(mu: np.ndarray, n: int | None = None, atol: float = 1e-12) -> np.ndarray:
    mu = np.asarray(mu, dtype=np.float64)
    if n is not None and len(mu) != n:
        raise LengthMismatch(f"distribution has length {len(mu)}, graph has {n} vertices")
    if (mu < 0).any() or abs(mu.sum() - 1.0) > atol * max(1, len(mu)):
        raise ValueError("not a probability vector")
    return mu


def point_mass(n: int, v: int) -> np.ndarray:
    mu = np.zeros(n)
    mu[v] = 1.0
    return mu


def stationary(g: Graph) -> np.ndarray:
    """``pi(v) = deg(v) / 2|E|``; lazy walks share it."""
    if g.num_vertices == 1:
        return np.ones(1)
    if not g.is_connected():
        raise DisconnectedGraph("stationary distribution is not unique")
    deg = g.degrees.astype(np.float64)
    return deg / deg.sum()


class Stepper:
    """Precomputed sparse one-step operator ``mu -> mu P`` for repeated use."""

    def __init__(self, g: Graph, laziness: float = 0.5):
        self.laziness = float(laziness)
        deg = g.degrees.astype(np.float64)
        self.inv_deg = np.divide(1.0, deg, out=np.zeros_like(deg), where=deg > 0)
        self.adj: sp.csr_matrix = g.adjacency()
        self.isolated = deg == 0

    def __call__(self, mu: np.ndarray) -> np.ndarray:
        moved = self.adj @ (mu * self.inv_deg)
        # isolated vertices hold their mass
        if self.isolated.any():
            moved[self.isolated] += mu[self.isolated]
        if self.laziness:
            return self.laziness * mu + (1.0 - self.laziness) * moved
        return moved


def step_distribution(g: Graph, mu: np.ndarray, laziness: float = 0.5) -> np.ndarray:
    """One step of the lazy walk applied to ``mu``."""
    mu = check_distribution(mu, g.num_vertices)
    return Stepper(g, laziness)(mu)


def tv_distance(mu: np.ndarray, nu: np.ndarray) -> float:
    mu, nu = np.asarray(mu, dtype=np.float64), np.asarray(nu, dtype=np.float64)
    if mu.shape != nu.shape:
        raise LengthMismatch(f"lengths {mu.shape} and {nu.shape} differ")
    return float(min(1.0, 0.5 * np.abs(mu - nu).sum()))


def lp_mixing_distance(mu: np.ndarray, pi: np.ndarray, p: str = "tv") -> float:
    """Distance to stationarity: ``tv``, pi-weighted ``l2``, or ``linf`` of ``mu/pi - 1``."""
    mu, pi = np.asarray(mu, dtype=np.float64), np.asarray(pi, dtype=np.float64)
    if mu.shape != pi.shape:
        raise LengthMismatch(f"lengths {mu.shape} and {pi.shape} differ")
    if p == "tv":
        return tv_distance(mu, pi)
    if (pi <= 0).any():
        raise ZeroStationaryMass("pi must be strictly positive")
    f = mu / pi - 1.0
    if p == "l2":
        return float(np.sqrt(np.sum(pi * f * f)))
    if p == "linf":
        return float(np.abs(f).max())
    raise ValueError(f"unknown distance {p!r}")


def evolve(g: Graph, mu: np.ndarray, steps: int, laziness: float = 0.5) -> np.ndarray:
    step = Stepper(g, laziness)
    for _ in range(steps):
        mu = step(mu)
    return mu


def mixing_time(g: Graph, start: int, epsilon: float = 0.25,
                cfg: WalkConfig | None = None, record_every: int = 1,
                distance: str = "tv") -> MixingResult:
    """Exact ``t_mix(epsilon)`` from ``start`` by distribution evolution.

    ``d(t)`` is recorded at every ``record_every``-th step (and at the
    first ``t`` found below ``epsilon``); the profile is not assumed
    monotone.
    """
    cfg = cfg or WalkConfig()
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if g.num_vertices > EXACT_SIZE_CUTOFF:
        raise ValueError(f"exact evolution limited to {EXACT_SIZE_CUTOFF} vertices")
    pi = stationary(g)
    mu = point_mass(g.num_vertices, start)
    step = Stepper(g, cfg.laziness)
    profile = []
    for t in range(cfg.t_max + 1):
        if t:
            mu = step(mu)
        dist = lp_mixing_distance(mu, pi, distance)
        below = dist < epsilon
        if t % record_every == 0 or below:
            profile.append((t, dist))
        if below:
            return MixingResult(t, epsilon, profile)
    return MixingResult(None, epsilon, profile)


def distribution_csv(mu: np.ndarray) -> str:
    lines = ["vertex,weight"] + [f"{i},{w:.17g}" for i, w in enumerate(mu)]
    return "\n".join(lines) + "\n"
