"""Undirected weighted simple graph and elementary structure queries."""

from __future__ import annotations

import numpy as np

from ._kernels import component_labels_kernel
from .errors import InputError


class Graph:
    """Immutable undirected weighted graph with dense integer vertex ids.

    Vertices are 0..n-1; `labels[i]` is the external name of vertex i.
    Edges are stored once with u < v, sorted by (u, v); `events[e]` counts
    the coauthoring events merged into edge e.  No self-loops, at most one
    edge per pair, weights strictly positive.
    """

    __slots__ = ("labels", "edges_u", "edges_v", "weights", "events",
                 "indptr", "nbr", "nbr_edge", "degree", "strength",
                 "_label_index")

    def __init__(self, labels, edges_u, edges_v, weights, events=None):
        self.labels = list(labels)
        n = len(self.labels)
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._label_index) != n:
            raise InputError("duplicate vertex labels")

        edges_u = np.asarray(edges_u, np.int64)
        edges_v = np.asarray(edges_v, np.int64)
        weights = np.asarray(weights, np.float64)
        if events is None:
            events = np.ones(len(edges_u), np.int64)
        events = np.asarray(events, np.int64)
        m = len(edges_u)

        if m:
            if edges_u.min() < 0 or max(edges_u.max(), edges_v.max()) >= n:
                raise InputError("edge endpoint is not a declared vertex")
            if np.any(edges_u == edges_v):
                raise InputError("self-loops are not allowed")
            if np.any(weights <= 0):
                raise InputError("edge weights must be strictly positive")
            lo = np.minimum(edges_u, edges_v)
            hi = np.maximum(edges_u, edges_v)
            order = np.lexsort((hi, lo))
            edges_u, edges_v = lo[order], hi[order]
            weights, events = weights[order], events[order]
            if np.any((edges_u[1:] == edges_u[:-1]) & (edges_v[1:] == edges_v[:-1])):
                raise InputError("duplicate edge for a vertex pair")

        self.edges_u = edges_u
        self.edges_v = edges_v
        self.weights = weights
        self.events = events

        # CSR adjacency with neighbor lists sorted ascending; nbr_edge maps
        # each CSR slot back to its edge id.
        ends = np.concatenate([edges_u, edges_v])
        other = np.concatenate([edges_v, edges_u])
        eids = np.concatenate([np.arange(m), np.arange(m)]).astype(np.int64)
        order = np.lexsort((other, ends))
        self.nbr = other[order]
        self.nbr_edge = eids[order]
        self.indptr = np.zeros(n + 1, np.int64)
        np.add.at(self.indptr, ends + 1, 1)
        np.cumsum(self.indptr, out=self.indptr)

        self.degree = np.diff(self.indptr).astype(np.int64)
        self.strength = np.zeros(n, np.float64)
        np.add.at(self.strength, edges_u, weights)
        np.add.at(self.strength, edges_v, weights)

        for arr in (self.edges_u, self.edges_v, self.weights, self.events,
                    self.indptr, self.nbr, self.nbr_edge, self.degree,
                    self.strength):
            arr.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return len(self.edges_u)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def vertex_id(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise InputError(f"unknown vertex label {label!r}") from None

    def has_label(self, label: str) -> bool:
        return label in self._label_index

    def neighbors(self, v: int) -> np.ndarray:
        return self.nbr[self.indptr[v]:self.indptr[v + 1]]

    def edge_weight_csr(self) -> np.ndarray:
        """Edge weights aligned with the CSR neighbor array."""
        return self.weights[self.nbr_edge]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n_vertices, self.n_vertices), np.float64)
        a[self.edges_u, self.edges_v] = self.weights
        a[self.edges_v, self.edges_u] = self.weights
        return a

    def __repr__(self):
        return f"Graph(n={self.n_vertices}, m={self.n_edges})"


def _build_merged(rows, context="row"):
    """Shared builder: rows of (src_label, dst_label, weight, position)."""
    labels: list[str] = []
    index: dict[str, int] = {}
    acc: dict[tuple[int, int], list] = {}

    def vid(lab):
        i = index.get(lab)
        if i is None:
            i = len(labels)
            index[lab] = i
            labels.append(lab)
        return i

    for src, dst, w, pos in rows:
        if src == dst:
            raise InputError(f"{context} {pos}: self-loop on {src!r}")
        if not (w > 0):
            raise InputError(f"{context} {pos}: non-positive weight {w!r}")
        u, v = vid(src), vid(dst)
        key = (u, v) if u < v else (v, u)
        cell = acc.get(key)
        if cell is None:
            acc[key] = [float(w), 1]
        else:
            cell[0] += float(w)
            cell[1] += 1

    keys = sorted(acc)
    eu = np.array([k[0] for k in keys], np.int64)
    ev = np.array([k[1] for k in keys], np.int64)
    ws = np.array([acc[k][0] for k in keys], np.float64)
    ev_counts = np.array([acc[k][1] for k in keys], np.int64)
    return Graph(labels, eu, ev, ws, ev_counts)


def from_edge_list(rows) -> Graph:
    """Build a graph from (src_label, dst_label, weight) rows.

    Duplicate pairs merge by summing weights; vertex ids are assigned
    densely in first-seen order.  Rows are reported 1-based in errors.
    """
    prepared = []
    for i, row in enumerate(rows, start=1):
        if len(row) != 3:
            raise InputError(f"row {i}: expected (src, dst, weight)")
        src, dst, w = row
        prepared.append((str(src), str(dst), w, i))
    return _build_merged(prepared, context="row")


def read_edge_tsv(path) -> Graph:
    """Read `src<TAB>dst<TAB>weight` lines; '#' comments ignored, weight
    defaults to 1 when the column is absent."""
    prepared = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) == 2:
                src, dst = parts
                w = 1.0
            elif len(parts) == 3:
                src, dst = parts[0], parts[1]
                try:
                    w = float(parts[2])
                except ValueError:
                    raise InputError(
                        f"line {lineno}: bad weight {parts[2]!r}") from None
            else:
                raise InputError(f"line {lineno}: expected 2 or 3 columns")
            src, dst = src.strip(), dst.strip()
            if not src or not dst:
                raise InputError(f"line {lineno}: empty vertex label")
            prepared.append((src, dst, w, lineno))
    return _build_merged(prepared, context="line")


def component_labels(g: Graph) -> np.ndarray:
    """Per-vertex component index, in discovery order of smallest vertex."""
    active = np.ones(g.n_edges, np.uint8)
    return component_labels_kernel(g.indptr, g.nbr, g.nbr_edge, active,
                                   g.n_vertices)


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex-id sets of the components, largest first, ties by smallest
    contained vertex id."""
    if g.n_vertices == 0:
        return []
    labels = component_labels(g)
    comps: list[list[int]] = [[] for _ in range(labels.max() + 1)]
    for v, c in enumerate(labels):
        comps[c].append(v)
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def degrees(g: Graph) -> dict[int, tuple[int, float]]:
    """vertex -> (incident edge count, incident weight sum)."""
    return {v: (int(g.degree[v]), float(g.strength[v]))
            for v in range(g.n_vertices)}


def induced_subgraph(g: Graph, vertex_ids) -> tuple[Graph, np.ndarray]:
    """Subgraph on the given vertex ids plus the old->new id map (-1 when
    a vertex is not kept).  Labels are preserved."""
    keep = sorted(set(int(v) for v in vertex_ids))
    for v in keep:
        if v < 0 or v >= g.n_vertices:
            raise InputError(f"vertex id {v} out of range")
    old_to_new = np.full(g.n_vertices, -1, np.int64)
    for new, old in enumerate(keep):
        old_to_new[old] = new
    mask = (old_to_new[g.edges_u] >= 0) & (old_to_new[g.edges_v] >= 0)
    sub = Graph([g.labels[v] for v in keep],
                old_to_new[g.edges_u[mask]],
                old_to_new[g.edges_v[mask]],
                g.weights[mask],
                g.events[mask])
    return sub, old_to_new
