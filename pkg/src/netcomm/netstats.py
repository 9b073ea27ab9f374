"""Whole-network descriptive statistics and eigenvector centrality."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from ._kernels import common_neighbor_total_kernel
from .errors import ConvergenceError, InputError, UndefinedStatisticError
from .graph import Graph, connected_components

GAMMA_METHODS = ("loglog-ls", "discrete-mle")


def connectedness(g: Graph) -> float:
    """Krackhardt connectedness: fraction of ordered vertex pairs that are
    mutually reachable."""
    n = g.n_vertices
    if n < 2:
        raise UndefinedStatisticError("connectedness needs at least 2 vertices")
    sizes = np.array([len(c) for c in connected_components(g)], np.float64)
    return float(np.sum(sizes * (sizes - 1)) / (n * (n - 1)))


def global_clustering(g: Graph) -> float:
    """Transitivity: 3 * triangles / connected triples, unweighted."""
    triples = float(np.sum(g.degree * (g.degree - 1) // 2))
    if triples == 0:
        return 0.0
    common = common_neighbor_total_kernel(g.indptr, g.nbr, g.edges_u, g.edges_v)
    return float(common) / triples  # common-neighbor total == 3 * triangles


def maximal_cliques(g: Graph, min_size: int = 3) -> list[tuple[int, ...]]:
    """All maximal cliques of at least min_size vertices (Bron-Kerbosch
    with pivoting), ordered by size descending then lexicographically."""
    if min_size < 2:
        raise InputError("min_size must be >= 2")
    adj = [set(map(int, g.neighbors(v))) for v in range(g.n_vertices)]
    found: list[tuple[int, ...]] = []

    def expand(clique, candidates, excluded):
        if not candidates and not excluded:
            if len(clique) >= min_size:
                found.append(tuple(sorted(clique)))
            return
        pivot = max(candidates | excluded, key=lambda u: len(adj[u] & candidates))
        for v in sorted(candidates - adj[pivot]):
            expand(clique + [v], candidates & adj[v], excluded & adj[v])
            candidates = candidates - {v}
            excluded = excluded | {v}

    expand([], set(range(g.n_vertices)), set())
    found.sort(key=lambda c: (-len(c), c))
    return found


def degree_exponent(g: Graph, method: str = "loglog-ls") -> float:
    """Power-law exponent of the degree distribution (degrees k >= 1).

    "loglog-ls" fits log(count(k)) on log(k) by least squares and negates
    the slope; "discrete-mle" maximizes the discrete power-law likelihood
    with k_min = 1 via the Hurwitz zeta normalization.
    """
    if method not in GAMMA_METHODS:
        raise InputError(f"unknown method {method!r}")
    ks = g.degree[g.degree >= 1]
    if len(np.unique(ks)) < 2:
        raise UndefinedStatisticError(
            "degree exponent needs at least 2 distinct nonzero degrees")
    if method == "loglog-ls":
        vals, counts = np.unique(ks, return_counts=True)
        slope, _ = np.polyfit(np.log(vals.astype(float)),
                              np.log(counts.astype(float)), 1)
        return float(-slope)
    mean_log = float(np.mean(np.log(ks.astype(float))))

    def nll(alpha):
        return np.log(special.zeta(alpha, 1.0)) + alpha * mean_log

    res = optimize.minimize_scalar(nll, bounds=(1.0 + 1e-9, 30.0),
                                   method="bounded",
                                   options={"xatol": 1e-10})
    return float(res.x)


def _component_centrality(sub_adj: np.ndarray, tol: float, max_iter: int):
    k = sub_adj.shape[0]
    if k == 1:
        return np.ones(1), 0.0
    shift = float(sub_adj.sum(axis=1).max())  # >= spectral radius
    v = np.full(k, 1.0 / np.sqrt(k))
    lam = 0.0
    for _ in range(max_iter):
        w = sub_adj @ v + shift * v
        w /= np.linalg.norm(w)
        diff = float(np.abs(w - v).max())
        v = w
        if diff < tol:
            lam = float(v @ (sub_adj @ v))
            # Residual is checked on the returned max=1 scale.
            out = v / v.max()
            if float(np.abs(sub_adj @ out - lam * out).max()) <= 10.0 * tol:
                return out, lam
    lam = float(v @ (sub_adj @ v))
    out = v / v.max()
    residual = float(np.abs(sub_adj @ out - lam * out).max())
    raise ConvergenceError(
        f"eigenvector centrality did not converge within {max_iter} "
        f"iterations (residual {residual:.3e})", residual=residual)


def eigenvector_centrality(g: Graph, tol: float = 1e-10,
                           max_iter: int = 10_000) -> dict[int, float]:
    """Power iteration on the weighted adjacency, computed per connected
    component, each component normalized so its maximum score is 1."""
    scores = np.zeros(g.n_vertices)
    if g.n_vertices == 0:
        return {}
    adj = g.adjacency_matrix()
    for comp in connected_components(g):
        idx = np.asarray(comp, np.int64)
        vec, _ = _component_centrality(adj[np.ix_(idx, idx)], tol, max_iter)
        scores[idx] = vec
    return {v: float(scores[v]) for v in range(g.n_vertices)}


@dataclass(frozen=True)
class NetStatsReport:
    vertices: int
    edges: int
    component_sizes: list[int]
    connectedness: float | None
    clustering_coefficient: float | None
    gamma_exponent: float | None
    gamma_method: str
    clique_min_size: int
    maximal_cliques: int

    def to_json(self) -> str:
        def sig6(x):
            return None if x is None else float(f"{x:.6g}")

        doc = {
            "vertices": self.vertices,
            "edges": self.edges,
            "component_sizes": self.component_sizes,
            "connectedness": sig6(self.connectedness),
            "clustering_coefficient": sig6(self.clustering_coefficient),
            "gamma_exponent": sig6(self.gamma_exponent),
            "gamma_method": self.gamma_method,
            "clique_min_size": self.clique_min_size,
            "maximal_cliques": self.maximal_cliques,
        }
        return json.dumps(doc, separators=(",", ":")) + "\n"


def summary(g: Graph, gamma_method: str = "loglog-ls",
            clique_min_size: int = 3) -> NetStatsReport:
    """Aggregate report; statistics whose preconditions fail are reported
    as undefined (None) rather than raising."""
    comps = connected_components(g)
    try:
        conn = connectedness(g)
    except UndefinedStatisticError:
        conn = None
    clustering = global_clustering(g) if g.n_vertices else None
    try:
        gamma = degree_exponent(g, gamma_method)
    except UndefinedStatisticError:
        gamma = None
    return NetStatsReport(
        vertices=g.n_vertices,
        edges=g.n_edges,
        component_sizes=[len(c) for c in comps],
        connectedness=conn,
        clustering_coefficient=clustering,
        gamma_exponent=gamma,
        gamma_method=gamma_method,
        clique_min_size=clique_min_size,
        maximal_cliques=len(maximal_cliques(g, clique_min_size)),
    )
