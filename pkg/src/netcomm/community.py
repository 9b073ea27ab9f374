"""Modularity and the four structural-community detection algorithms.

Each algorithm returns a total Partition with dense community ids; the
hierarchical ones (walktrap, girvan_newman) also return a Dendrogram whose
prefix cuts are valid partitions.  All tie-breaks resolve toward the
smallest vertex/edge ids so repeated runs are identical.
"""

from __future__ import annotations

import heapq
import io
import json
from dataclasses import dataclass

import numpy as np

from ._kernels import (component_labels_kernel, edge_betweenness_kernel,
                       spinglass_anneal_kernel)
from .errors import (ConnectivityError, ConvergenceError, InputError,
                     UndefinedStatisticError)
from .graph import Graph, component_labels, connected_components

ALGORITHMS = ("lev", "walktrap", "eb", "spinglass")


def _densify(membership) -> tuple[np.ndarray, int]:
    """Relabel community ids to 0..c-1 in first-seen vertex order."""
    out = np.empty(len(membership), np.int64)
    seen: dict[int, int] = {}
    for i, c in enumerate(membership):
        c = int(c)
        if c not in seen:
            seen[c] = len(seen)
        out[i] = seen[c]
    return out, len(seen)


@dataclass(frozen=True, eq=False)
class Partition:
    """Total map vertex id -> community id (dense 0..c-1, none empty)."""

    membership: np.ndarray
    labels: tuple[str, ...]
    n_communities: int

    @classmethod
    def from_membership(cls, membership, labels) -> "Partition":
        membership = np.asarray(membership, np.int64)
        labels = tuple(labels)
        if len(membership) != len(labels):
            raise InputError("membership and labels length mismatch")
        if len(membership):
            c = int(membership.max()) + 1
            if membership.min() < 0:
                raise InputError("negative community id")
            if len(np.unique(membership)) != c:
                raise InputError("community ids must be dense 0..c-1 and non-empty")
        else:
            c = 0
        membership = membership.copy()
        membership.setflags(write=False)
        return cls(membership=membership, labels=labels, n_communities=c)

    def members(self, community: int) -> list[int]:
        return [i for i, c in enumerate(self.membership) if c == community]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("id,community\n")
        for lab, c in zip(self.labels, self.membership):
            esc = lab.replace('"', '""')
            cell = f'"{esc}"' if ("," in lab or '"' in lab or "\n" in lab) else lab
            buf.write(f"{cell},{int(c)}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, graph: Graph | None = None) -> "Partition":
        import csv as _csv

        reader = _csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != ["id", "community"]:
            raise InputError("membership CSV must have header id,community")
        labs, mem = [], []
        seen = set()
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise InputError(f"bad membership row: {row!r}")
            if row[0] in seen:
                raise InputError(f"duplicate membership label {row[0]!r}")
            seen.add(row[0])
            labs.append(row[0])
            try:
                mem.append(int(row[1]))
            except ValueError:
                raise InputError(f"bad community id {row[1]!r}") from None
        if graph is not None:
            unknown = [lab for lab in labs if not graph.has_label(lab)]
            if unknown:
                raise InputError("membership labels not in graph: "
                                 + ", ".join(repr(u) for u in unknown[:5]))
        dense, _ = _densify(mem)
        return cls.from_membership(dense, labs)


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """Agglomerative merge hierarchy.

    Leaves 0..n_leaves-1 are single vertices; merge k joins two live
    cluster ids into a new cluster with id n_leaves + k.  Cutting after any
    merge prefix yields a valid partition.
    """

    n_leaves: int
    merges: tuple[tuple[int, int, float], ...]

    def cut(self, n_merges: int) -> np.ndarray:
        """Leaf membership after the first n_merges merges (dense ids)."""
        if not 0 <= n_merges <= len(self.merges):
            raise InputError(f"cut at {n_merges} outside 0..{len(self.merges)}")
        parent = list(range(self.n_leaves + n_merges))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for k in range(n_merges):
            a, b, _ = self.merges[k]
            new = self.n_leaves + k
            parent[find(int(a))] = new
            parent[find(int(b))] = new
        roots = [find(v) for v in range(self.n_leaves)]
        dense, _ = _densify(roots)
        return dense

    def to_json(self) -> str:
        return json.dumps(
            {"leaves": self.n_leaves,
             "merges": [[int(a), int(b), float(s)] for a, b, s in self.merges]},
            separators=(",", ":")) + "\n"


def modularity_membership(g: Graph, membership) -> float:
    """Weighted modularity of a membership array over g's vertices."""
    membership = np.asarray(membership, np.int64)
    if len(membership) != g.n_vertices:
        raise InputError("membership must cover every vertex")
    w = g.total_weight
    if w <= 0:
        raise UndefinedStatisticError("modularity undefined for total weight 0")
    c = int(membership.max()) + 1
    same = membership[g.edges_u] == membership[g.edges_v]
    intra = np.bincount(membership[g.edges_u[same]],
                        weights=g.weights[same], minlength=c)
    comm_strength = np.bincount(membership, weights=g.strength, minlength=c)
    return float(np.sum(intra / w - (comm_strength / (2.0 * w)) ** 2))


def modularity(g: Graph, p: Partition) -> float:
    return modularity_membership(g, p.membership)


def community_sizes(p: Partition) -> list[int]:
    """Community sizes, sorted descending."""
    if p.n_communities == 0:
        return []
    counts = np.bincount(p.membership, minlength=p.n_communities)
    return sorted((int(x) for x in counts), reverse=True)


# ---------------------------------------------------------------------------
# Edge betweenness and Girvan-Newman

def component_labels_with(g: Graph, active) -> np.ndarray:
    return component_labels_kernel(g.indptr, g.nbr, g.nbr_edge,
                                   np.asarray(active, np.uint8), g.n_vertices)


def edge_betweenness_array(g: Graph, active=None) -> np.ndarray:
    if active is None:
        active = np.ones(g.n_edges, np.uint8)
    return edge_betweenness_kernel(g.indptr, g.nbr, g.nbr_edge, active,
                                   g.n_vertices, g.n_edges)


def edge_betweenness_scores(g: Graph) -> dict[tuple[int, int], float]:
    """Unordered vertex-id pair -> betweenness over unweighted shortest
    paths, each pair counted once, tied paths sharing credit equally."""
    scores = edge_betweenness_array(g)
    return {(int(u), int(v)): float(s)
            for u, v, s in zip(g.edges_u, g.edges_v, scores)}


def girvan_newman(g: Graph) -> tuple[Dendrogram, Partition]:
    """Remove the highest-betweenness edge (recomputing after every
    removal, ties to the smallest endpoint pair), recording component
    splits top-down.  The returned partition is the split state with
    maximum modularity on the original graph."""
    n, m = g.n_vertices, g.n_edges
    active = np.ones(m, np.uint8)
    labels = component_labels(g)

    has_weight = g.total_weight > 0
    states = [labels.copy()]
    qs = [modularity_membership(g, labels) if has_weight else float("-inf")]
    splits = []  # (side_a vertex ids, side_b vertex ids, removed-edge score)

    while active.any():
        scores = edge_betweenness_kernel(g.indptr, g.nbr, g.nbr_edge, active, n, m)
        scores = np.where(active.astype(bool), scores, -1.0)
        best = int(np.flatnonzero(scores == scores.max())[0])  # edges sorted by (u, v)
        active[best] = 0
        u, v = int(g.edges_u[best]), int(g.edges_v[best])
        labels = component_labels_with(g, active)
        if labels[u] != labels[v]:
            side_u = np.flatnonzero(labels == labels[u])
            side_v = np.flatnonzero(labels == labels[v])
            splits.append((side_u, side_v, float(scores[best])))
            states.append(labels.copy())
            qs.append(modularity_membership(g, labels) if has_weight else float("-inf"))

    best_state = int(np.argmax(qs)) if has_weight else 0
    dense, _ = _densify(states[best_state])
    part = Partition.from_membership(dense, g.labels)

    # Reverse the splits into an agglomerative dendrogram: the last split,
    # read backwards, is the first merge.  Laminarity guarantees each side
    # is a single cluster by the time its merge is replayed.
    root = list(range(n))

    def find(x):
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    cluster_id = list(range(n))
    merges = []
    for k, (side_u, side_v, score) in enumerate(reversed(splits)):
        a = find(int(side_u[0]))
        b = find(int(side_v[0]))
        merges.append((cluster_id[a], cluster_id[b], score))
        root[b] = a
        cluster_id[a] = n + k
    return Dendrogram(n_leaves=n, merges=tuple(merges)), part


# ---------------------------------------------------------------------------
# Walktrap

def walktrap(g: Graph, t: int = 4) -> tuple[Dendrogram, Partition]:
    """Agglomerate adjacent communities by the Ward-style increase of mean
    squared random-walk distance after t steps; return the full dendrogram
    and its maximum-modularity prefix cut."""
    if t < 1:
        raise InputError("walk length t must be >= 1")
    n = g.n_vertices
    if n == 0:
        return Dendrogram(0, ()), Partition.from_membership([], [])
    if g.n_edges == 0:
        return (Dendrogram(n, ()),
                Partition.from_membership(np.arange(n), g.labels))

    walkers = np.flatnonzero(g.degree > 0)  # degree-0 vertices stay singletons
    a = g.adjacency_matrix()[np.ix_(walkers, walkers)]
    p = a / g.strength[walkers][:, None]
    pt = np.linalg.matrix_power(p, t)
    inv_s = 1.0 / g.strength[walkers]

    # Community state, keyed by a running community index.
    size = {}
    min_vertex = {}
    vectors = {}
    neighbors = {}
    alive = set()
    vert_comm = np.arange(n, dtype=np.int64)  # graph-wide membership
    comm_of = {}  # community index -> dendrogram cluster id
    for v in range(n):
        size[v] = 1
        min_vertex[v] = v
        comm_of[v] = v
        alive.add(v)
        neighbors[v] = set()
    for i, v in enumerate(walkers):
        vectors[int(v)] = pt[i]
    for u, v in zip(g.edges_u, g.edges_v):
        neighbors[int(u)].add(int(v))
        neighbors[int(v)].add(int(u))

    def dsigma(c1, c2):
        diff = vectors[c1] - vectors[c2]
        r2 = float(np.sum(diff * diff * inv_s))
        s1, s2 = size[c1], size[c2]
        return (s1 * s2) / ((s1 + s2) * n) * r2

    heap = []
    current = {}
    for u, v in zip(g.edges_u, g.edges_v):
        u, v = int(u), int(v)
        d = dsigma(u, v)
        current[(u, v)] = d
        heapq.heappush(heap, (d, min_vertex[u], min_vertex[v], u, v))

    merges = []
    qs = [modularity_membership(g, _densify(vert_comm)[0])]
    memberships = [vert_comm.copy()]
    next_comm = n

    while True:
        entry = None
        while heap:
            d, _, _, c1, c2 = heapq.heappop(heap)
            if c1 in alive and c2 in alive and current.get((c1, c2)) == d:
                entry = (d, c1, c2)
                break
        if entry is None:
            break
        d, c1, c2 = entry

        new = next_comm
        next_comm += 1
        s1, s2 = size[c1], size[c2]
        size[new] = s1 + s2
        min_vertex[new] = min(min_vertex[c1], min_vertex[c2])
        vectors[new] = (s1 * vectors[c1] + s2 * vectors[c2]) / (s1 + s2)
        nbrs = (neighbors[c1] | neighbors[c2]) - {c1, c2}
        neighbors[new] = nbrs
        for x in nbrs:
            neighbors[x].discard(c1)
            neighbors[x].discard(c2)
            neighbors[x].add(new)
        alive.discard(c1)
        alive.discard(c2)
        alive.add(new)
        current.pop((min(c1, c2), max(c1, c2)), None)

        merges.append((comm_of[c1], comm_of[c2], float(d)))
        comm_of[new] = n + len(merges) - 1

        vert_comm = vert_comm.copy()
        vert_comm[(vert_comm == c1) | (vert_comm == c2)] = new
        memberships.append(vert_comm.copy())
        qs.append(modularity_membership(g, _densify(vert_comm)[0]))

        for x in nbrs:
            dn = dsigma(new, x)
            key = (min(new, x), max(new, x))
            current[key] = dn
            heapq.heappush(heap, (dn, min(min_vertex[new], min_vertex[x]),
                                  max(min_vertex[new], min_vertex[x]),
                                  key[0], key[1]))

    best = int(np.argmax(qs))
    dense, _ = _densify(memberships[best])
    part = Partition.from_membership(dense, g.labels)
    return Dendrogram(n_leaves=n, merges=tuple(merges)), part


# ---------------------------------------------------------------------------
# Leading eigenvector

_EIG_MAX_ITER = 200_000


def _power_leading(mat: np.ndarray, tol: float) -> tuple[float, np.ndarray]:
    """Most-positive eigenpair of a symmetric matrix via power iteration
    shifted by the matrix 1-norm."""
    k = mat.shape[0]
    shift = float(np.abs(mat).sum(axis=0).max())
    rng = np.random.default_rng(20_17)  # fixed start: deterministic runs
    v = rng.random(k) + 0.1
    v /= np.linalg.norm(v)
    for _ in range(_EIG_MAX_ITER):
        w = mat @ v + shift * v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0, v  # v spans the null space of the shifted matrix
        w /= norm
        if np.abs(w - v).max() < tol:
            v = w
            break
        v = w
    else:
        lam = float(v @ (mat @ v))
        residual = float(np.abs(mat @ v - lam * v).max())
        raise ConvergenceError(
            f"eigen-iteration did not converge within {_EIG_MAX_ITER} steps",
            residual=residual)
    lam = float(v @ (mat @ v))
    return lam, v


def _fine_tune_split(g: Graph, group: np.ndarray, side: np.ndarray) -> np.ndarray:
    """Greedy single-vertex refinement of a group bipartition.

    Repeated sweeps move every vertex across the cut exactly once, in order
    of modularity gain (ties to the smallest vertex id), then keep the best
    intermediate state; stops when a sweep no longer improves.  This is the
    deterministic fine-tuning stage that rescues sign splits whose
    eigenvector entries sit at numerical zero.
    """
    w = g.total_weight
    two_w2 = 2.0 * w * w
    in_group = np.zeros(g.n_vertices, bool)
    in_group[group] = True
    pos = {int(v): i for i, v in enumerate(group)}
    k = len(group)
    side = side.copy()

    # wside[i, 0/1] = weight from group[i] to current side-0/1 group members.
    wside = np.zeros((k, 2))
    for u, v, wt in zip(g.edges_u, g.edges_v, g.weights):
        if in_group[u] and in_group[v]:
            iu, iv = pos[int(u)], pos[int(v)]
            wside[iu, 1 if side[iv] else 0] += wt
            wside[iv, 1 if side[iu] else 0] += wt
    strength = g.strength[group]
    s_tot = np.array([strength[~side].sum(), strength[side].sum()])

    def gain(i):
        src = 1 if side[i] else 0
        dst = 1 - src
        si = strength[i]
        return ((wside[i, dst] - wside[i, src]) / w
                - si * (s_tot[dst] - (s_tot[src] - si)) / two_w2)

    while True:
        moved = np.zeros(k, bool)
        best_cum = 0.0
        best_step = -1
        cum = 0.0
        trace = []
        start_side = side.copy()
        for step in range(k):
            cand = -1
            cand_gain = -np.inf
            for i in range(k):
                if moved[i]:
                    continue
                gi = gain(i)
                if gi > cand_gain:
                    cand_gain = gi
                    cand = i
            cum += cand_gain
            src = 1 if side[cand] else 0
            dst = 1 - src
            side[cand] = not side[cand]
            moved[cand] = True
            s_tot[src] -= strength[cand]
            s_tot[dst] += strength[cand]
            for j in range(g.indptr[group[cand]], g.indptr[group[cand] + 1]):
                nb = int(g.nbr[j])
                if in_group[nb]:
                    wt = g.weights[g.nbr_edge[j]]
                    wside[pos[nb], src] -= wt
                    wside[pos[nb], dst] += wt
            trace.append(cand)
            if cum > best_cum + 1e-13:
                best_cum = cum
                best_step = step
        # Roll back to the best intermediate state of this sweep.
        for step in range(k - 1, best_step, -1):
            i = trace[step]
            src = 1 if side[i] else 0
            dst = 1 - src
            side[i] = not side[i]
            s_tot[src] -= strength[i]
            s_tot[dst] += strength[i]
            for j in range(g.indptr[group[i]], g.indptr[group[i] + 1]):
                nb = int(g.nbr[j])
                if in_group[nb]:
                    wt = g.weights[g.nbr_edge[j]]
                    wside[pos[nb], src] -= wt
                    wside[pos[nb], dst] += wt
        if best_step < 0:
            side = start_side
            break
    return side


def leading_eigenvector(g: Graph, tol: float = 1e-10) -> Partition:
    """Recursive spectral bisection on the (generalized) modularity matrix,
    splitting by eigenvector sign with greedy vertex fine-tuning; a branch
    stops when its leading eigenvalue is <= tol or the realized modularity
    gain is <= 0."""
    n = g.n_vertices
    if n == 0:
        return Partition.from_membership([], [])
    w = g.total_weight
    membership = np.zeros(n, np.int64)
    if w <= 0:
        # No edges: every vertex is its own community.
        return Partition.from_membership(np.arange(n), g.labels)

    adj = g.adjacency_matrix()
    two_w = 2.0 * w
    b_full = adj - np.outer(g.strength, g.strength) / two_w

    comps = connected_components(g)
    for i, comp in enumerate(comps):
        membership[comp] = i
    next_id = len(comps)

    stack = [np.asarray(comp, np.int64) for comp in comps]
    while stack:
        group = stack.pop()
        if len(group) < 2:
            continue
        bg = b_full[np.ix_(group, group)].copy()
        bg[np.diag_indices(len(group))] -= bg.sum(axis=1)
        lam, vec = _power_leading(bg, tol)
        if lam <= tol:
            continue
        # Sign-normalize toward the smallest vertex id; exact zeros join the
        # non-negative side.
        nz = np.flatnonzero(vec != 0.0)
        if len(nz) == 0:
            continue
        if vec[nz[0]] < 0:
            vec = -vec
        side = _fine_tune_split(g, group, vec >= 0.0)
        if side.all() or not side.any():
            continue
        part_a = group[side]
        part_b = group[~side]
        q_before = modularity_membership(g, membership)
        old = membership[part_b[0]]
        membership[part_b] = next_id
        q_after = modularity_membership(g, membership)
        if q_after - q_before <= 0.0:
            membership[part_b] = old
            continue
        next_id += 1
        stack.append(part_a)
        stack.append(part_b)

    dense, _ = _densify(membership)
    return Partition.from_membership(dense, g.labels)


# ---------------------------------------------------------------------------
# Spinglass

def spinglass(g: Graph, q_max: int = 25, gamma: float = 1.0,
              t_start: float = 1.0, t_stop: float = 0.01,
              cooling: float = 0.99, seed: int | None = None) -> Partition:
    """Potts-model simulated annealing on a connected graph.

    Minimizes H = -sum_{i<j} (w_ij - gamma*s_i*s_j/2W) * [spin_i == spin_j]
    by single-spin Metropolis updates with geometric cooling; one sweep of n
    proposals, in seeded-shuffle order, per temperature.  Deterministic for
    a fixed seed.
    """
    if q_max < 2:
        raise InputError("q_max must be >= 2")
    if not (0.0 < cooling < 1.0):
        raise InputError("cooling must be in (0, 1)")
    if not (t_stop < t_start):
        raise InputError("t_stop must be below t_start")
    if seed is None:
        raise InputError("spinglass requires a seed")
    n = g.n_vertices
    if n == 0:
        return Partition.from_membership([], [])
    if len(connected_components(g)) != 1:
        raise ConnectivityError(
            "spinglass requires a connected network; pass the largest "
            "connected component to analyze a disconnected graph")

    q = min(q_max, n)
    n_temps = 0
    t = t_start
    while t > t_stop:
        n_temps += 1
        t *= cooling

    rng = np.random.default_rng(seed)
    spins = rng.integers(0, q, n).astype(np.int64)
    orders = np.empty((n_temps, n), np.int64)
    for i in range(n_temps):
        orders[i] = rng.permutation(n)
    props = rng.integers(0, q, (n_temps, n)).astype(np.int64)
    unis = rng.random((n_temps, n))
    temps = t_start * cooling ** np.arange(n_temps, dtype=np.float64)

    comm_strength = np.bincount(spins, weights=g.strength, minlength=q)
    spinglass_anneal_kernel(g.indptr, g.nbr, g.edge_weight_csr(),
                            g.strength, 2.0 * g.total_weight if g.n_edges else 1.0,
                            float(gamma), spins, comm_strength,
                            temps, orders, props, unis)

    dense, _ = _densify(spins)
    return Partition.from_membership(dense, g.labels)


def spinglass_hamiltonian(g: Graph, membership, gamma: float = 1.0) -> float:
    """H(sigma) over unordered pairs; the annealer's objective."""
    membership = np.asarray(membership, np.int64)
    two_w = 2.0 * g.total_weight
    same = membership[g.edges_u] == membership[g.edges_v]
    link = float(g.weights[same].sum())
    c = int(membership.max()) + 1
    comm_strength = np.bincount(membership, weights=g.strength, minlength=c)
    null = (float(np.sum(comm_strength ** 2)) - float(np.sum(g.strength ** 2))) / 2.0
    return -(link - gamma * null / two_w)


def detect(g: Graph, algorithm: str, seed: int | None = None, **kwargs) -> Partition:
    """Dispatch by algorithm name ('lev', 'walktrap', 'eb', 'spinglass')."""
    if algorithm == "lev":
        return leading_eigenvector(g, **kwargs)
    if algorithm == "walktrap":
        return walktrap(g, **kwargs)[1]
    if algorithm == "eb":
        return girvan_newman(g)[1]
    if algorithm == "spinglass":
        return spinglass(g, seed=seed, **kwargs)
    raise InputError(f"unknown algorithm {algorithm!r}")
