"""Spectral gap of the (lazy) random-walk operator by deflated power iteration."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DisconnectedGraph
from .graph import Graph


@dataclass(frozen=True)
class SpectralGap:
    gap: float
    """``1 - lambda_2`` of the lazy operator (signed second eigenvalue)."""
    lambda2: float
    abs_gap: float | None
    """``1 - max(|lambda_2|, |lambda_min|)``; only filled for ``laziness < 1/2``."""
    iterations: int
    converged: bool


def _normalized_adjacency(g: Graph) -> tuple[sp.csr_matrix, np.ndarray]:
    deg = g.degrees.astype(np.float64)
    inv_sqrt = 1.0 / np.sqrt(deg)
    s = sp.diags(inv_sqrt) @ g.adjacency() @ sp.diags(inv_sqrt)
    top = np.sqrt(deg / deg.sum())
    return s.tocsr(), top


def _deflated_power(op, top: np.ndarray, rng: np.random.Generator,
                    tol: float, max_iter: int) -> tuple[float, int, bool]:
    """Largest-magnitude eigenvalue of symmetric ``op`` restricted to top-perp.

    Stops when the residual ``||Av - (v.Av) v||`` drops below ``tol``; for a
    symmetric operator this bounds the eigenvalue error by ``tol``.
    """
    v = rng.standard_normal(len(top))
    v -= top * (top @ v)
    v /= np.linalg.norm(v)
    lam = 0.0
    for it in range(1, max_iter + 1):
        w = op(v)
        w -= top * (top @ w)
        lam = float(v @ w)
        res = np.linalg.norm(w - lam * v)
        nrm = np.linalg.norm(w)
        if res < tol:
            return lam, it, True
        if nrm == 0.0:
            return 0.0, it, True
        v = w / nrm
    return lam, max_iter, False


def spectral_gap(g: Graph, laziness: float = 0.5, tol: float = 1e-10,
                 max_iter: int = 200_000, seed: int = 0) -> SpectralGap:
    """Spectral gap ``1 - lambda_2`` of the walk with hold probability ``laziness``.

    The iteration runs on ``(I + S)/2`` with ``S = D^-1/2 A D^-1/2``, whose
    spectrum is nonnegative, so the dominant eigenvalue on the complement of
    the stationary direction is the signed ``lambda_2`` of ``S``. For
    ``laziness < 1/2`` the lazy operator can have negative eigenvalues, so
    the absolute gap is additionally computed from ``S`` itself.
    A ``NoConvergence`` condition is signalled by ``converged=False`` and a
    ``RuntimeWarning``; the best estimate is still returned.
    """
    if not 0.0 <= laziness < 1.0:
        raise ValueError("laziness must lie in [0, 1)")
    n = g.num_vertices
    if n == 1:
        return SpectralGap(1.0, 0.0, 1.0 if laziness < 0.5 else None, 0, True)
    if not g.is_connected():
        raise DisconnectedGraph("spectral gap needs a connected graph")
    s, top = _normalized_adjacency(g)
    rng = np.random.default_rng(seed)
    half, it1, ok1 = _deflated_power(lambda x: 0.5 * (x + s @ x), top, rng,
                                     tol / 2, max_iter)
    lam_s = 2.0 * half - 1.0
    lam2 = laziness + (1.0 - laziness) * lam_s
    iters, converged = it1, ok1
    abs_gap = None
    if laziness < 0.5:
        q = 1.0 - laziness
        mag, it2, ok2 = _deflated_power(lambda x: laziness * x + q * (s @ x), top,
                                        rng, tol, max_iter)
        abs_gap = 1.0 - max(abs(mag), abs(lam2))
        iters += it2
        converged = converged and ok2
    if not converged:
        warnings.warn("power iteration reached max_iter before tolerance",
                      RuntimeWarning, stacklevel=2)
    return SpectralGap(1.0 - lam2, lam2, abs_gap, iters, converged)
