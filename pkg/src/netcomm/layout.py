"""Force-directed layout (Fruchterman-Reingold) on the unit square."""

from __future__ import annotations

import numpy as np

from ._kernels import fr_iterate_kernel
from .errors import InputError
from .graph import Graph

DEFAULT_ITERATIONS = 500


def fruchterman_reingold(g: Graph, iterations: int = DEFAULT_ITERATIONS,
                         seed: int | None = None) -> np.ndarray:
    """(n, 2) coordinates in the unit square; deterministic per seed.

    Standard forces with k = sqrt(area/n) on unit area: attraction d^2/k
    along edges, repulsion k^2/d between all pairs, displacement capped by
    a temperature cooling linearly to 0 from 0.1.
    """
    if iterations < 1:
        raise InputError("iterations must be >= 1")
    if seed is None:
        raise InputError("layout requires a seed")
    n = g.n_vertices
    if n == 0:
        return np.zeros((0, 2))
    if n == 1:
        return np.array([[0.5, 0.5]])
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    k = np.sqrt(1.0 / n)
    t0 = 0.1
    fr_iterate_kernel(pos, g.edges_u, g.edges_v, k, t0, t0 / iterations,
                      int(iterations))
    return rescale_unit_square(pos)


def rescale_unit_square(pos: np.ndarray) -> np.ndarray:
    """Center the bounding box in [0,1]^2 with a uniform (aspect-keeping)
    scale; degenerate extents collapse to the center."""
    pos = np.asarray(pos, np.float64)
    if len(pos) == 0:
        return pos
    lo = pos.min(axis=0)
    hi = pos.max(axis=0)
    span = float((hi - lo).max())
    if span <= 0:
        return np.full_like(pos, 0.5)
    centered = pos - (lo + hi) / 2.0
    return centered / span + 0.5
