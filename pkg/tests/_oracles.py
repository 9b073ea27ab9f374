"""Independent brute-force oracles used to freeze expected test values.

Everything here is deliberately naive and separate from the library's
implementations: set-based BFS, exact Fraction arithmetic, exhaustive
enumeration.  Tests compare the fast paths against these.
"""

from fractions import Fraction
from itertools import combinations, permutations, product

import numpy as np


def bfs_reachable(n, edge_pairs, start):
    adj = {v: set() for v in range(n)}
    for u, v in edge_pairs:
        adj[u].add(v)
        adj[v].add(u)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def components_oracle(n, edge_pairs):
    remaining = set(range(n))
    comps = []
    while remaining:
        start = min(remaining)
        comp = bfs_reachable(n, edge_pairs, start) & remaining
        comps.append(sorted(comp))
        remaining -= comp
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def modularity_exact(n, weighted_edges, membership):
    """Exact rational modularity: (1/2W) sum_ij (w_ij - s_i s_j/2W) d(ci,cj)."""
    w = {}
    strength = [Fraction(0)] * n
    for u, v, wt in weighted_edges:
        wt = Fraction(wt)
        w[(u, v)] = w.get((u, v), Fraction(0)) + wt
        strength[u] += wt
        strength[v] += wt
    two_w = sum(strength)
    total = Fraction(0)
    for i in range(n):
        for j in range(n):
            if membership[i] != membership[j]:
                continue
            wij = Fraction(0)
            if i != j:
                key = (min(i, j), max(i, j))
                wij = w.get(key, Fraction(0))
            total += wij - strength[i] * strength[j] / two_w
    return total / two_w


def all_partitions(items):
    """Every set partition of `items` (Bell-number many)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in all_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def best_partition_exact(n, weighted_edges):
    """Argmax-modularity partitions by exhaustive enumeration (n <= ~9)."""
    best_q = None
    best = []
    for blocks in all_partitions(range(n)):
        membership = [0] * n
        for c, block in enumerate(blocks):
            for v in block:
                membership[v] = c
        q = modularity_exact(n, weighted_edges, membership)
        if best_q is None or q > best_q:
            best_q = q
            best = [frozenset(map(frozenset, [set(b) for b in blocks]))]
        elif q == best_q:
            best.append(frozenset(map(frozenset, [set(b) for b in blocks])))
    return best_q, best


def edge_betweenness_oracle(n, edge_pairs):
    """Floyd-Warshall distances + per-pair enumeration of all shortest
    paths with equal credit sharing.  Returns {(u,v): score}."""
    inf = float("inf")
    dist = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    adj = {v: set() for v in range(n)}
    for u, v in edge_pairs:
        dist[u][v] = dist[v][u] = 1
        adj[u].add(v)
        adj[v].add(u)
    for k in range(n):
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            for j in range(n):
                if dik + dist[k][j] < dist[i][j]:
                    dist[i][j] = dik + dist[k][j]
    scores = {tuple(sorted(e)): Fraction(0) for e in edge_pairs}

    def paths(s, t):
        if s == t:
            return [[s]]
        out = []
        for nb in adj[t]:
            if dist[s][nb] == dist[s][t] - 1:
                out.extend(path + [t] for path in paths(s, nb))
        return out

    for s, t in combinations(range(n), 2):
        if dist[s][t] == inf:
            continue
        all_paths = paths(s, t)
        share = Fraction(1, len(all_paths))
        for path in all_paths:
            for a, b in zip(path, path[1:]):
                scores[(min(a, b), max(a, b))] += share
    return {e: float(x) for e, x in scores.items()}


def maximal_cliques_oracle(n, edge_pairs, min_size):
    """All maximal cliques by exhaustive subset checking (n <= 12)."""
    adj = {v: set() for v in range(n)}
    for u, v in edge_pairs:
        adj[u].add(v)
        adj[v].add(u)
    cliques = []
    for size in range(1, n + 1):
        for sub in combinations(range(n), size):
            if all(v in adj[u] for u, v in combinations(sub, 2)):
                cliques.append(set(sub))
    maximal = [c for c in cliques
               if not any(c < other for other in cliques)]
    out = [tuple(sorted(c)) for c in maximal if len(c) >= min_size]
    out.sort(key=lambda c: (-len(c), c))
    return out


def spinglass_hamiltonian_exact(n, weighted_edges, spins, gamma=1):
    """H(spins) = -sum_{i<j} (w_ij - gamma s_i s_j / 2W) [spin_i == spin_j]."""
    strength = [Fraction(0)] * n
    for u, v, wt in weighted_edges:
        strength[u] += Fraction(wt)
        strength[v] += Fraction(wt)
    two_w = sum(strength)
    link = sum(Fraction(wt) for u, v, wt in weighted_edges
               if spins[u] == spins[v])
    comm_s = {}
    for v in range(n):
        comm_s[spins[v]] = comm_s.get(spins[v], Fraction(0)) + strength[v]
    null = (sum(s * s for s in comm_s.values())
            - sum(s * s for s in strength)) / 2
    return -(link - Fraction(gamma) * null / two_w)


def spinglass_ground_states(n, weighted_edges, q, gamma=1):
    """All minimum-H spin groupings by exhaustive enumeration (q^n)."""
    best_h = None
    best = set()
    for spins in product(range(q), repeat=n):
        h = spinglass_hamiltonian_exact(n, weighted_edges, spins, gamma)
        grouping = frozenset(frozenset(v for v in range(n) if spins[v] == c)
                             for c in set(spins))
        if best_h is None or h < best_h:
            best_h = h
            best = {grouping}
        elif h == best_h:
            best.add(grouping)
    return best_h, best


def chisq_stat_exact(table):
    """Pearson chi-square of an integer table in exact arithmetic."""
    table = [[Fraction(x) for x in row] for row in table]
    total = sum(sum(row) for row in table)
    rm = [sum(row) for row in table]
    cm = [sum(row[c] for row in table) for c in range(len(table[0]))]
    stat = Fraction(0)
    for r in range(len(table)):
        for c in range(len(table[0])):
            e = rm[r] * cm[c] / total
            stat += (table[r][c] - e) ** 2 / e
    return stat


def exact_permutation_p_2x2(table):
    """P(chi2 >= observed) under uniform label pairing for a 2x2 table,
    by enumerating the hypergeometric range exactly.

    Enumerating the multivariate hypergeometric support with exact
    multiplicities is identical to enumerating all N! label pairings.
    """
    from math import comb

    (a, b), (c, d) = table
    n = a + b + c + d
    r1 = a + b
    c1 = a + c
    obs = chisq_stat_exact(table)
    p = Fraction(0)
    denom = comb(n, c1)
    for k in range(max(0, r1 + c1 - n), min(r1, c1) + 1):
        t = [[k, r1 - k], [c1 - k, n - r1 - (c1 - k)]]
        if chisq_stat_exact(t) >= obs:
            p += Fraction(comb(r1, k) * comb(n - r1, c1 - k), denom)
    return p


def pair_cooccurrence_counts(corpus):
    """Brute-force coauthor pair counter over a list of author-name lists."""
    counts = {}
    for authors in corpus:
        uniq = sorted(set(authors))
        for a, b in combinations(uniq, 2):
            counts[(a, b)] = counts.get((a, b), 0) + 1
    return counts


def walk_distance_oracle(adj_matrix, strength, t, block_a, block_b, n):
    """Ward merge cost between two vertex blocks from scratch dense walks."""
    p = adj_matrix / strength[:, None]
    pt = np.linalg.matrix_power(p, t)
    pa = pt[block_a].mean(axis=0)
    pb = pt[block_b].mean(axis=0)
    r2 = float(np.sum((pa - pb) ** 2 / strength))
    na, nb = len(block_a), len(block_b)
    return na * nb / ((na + nb) * n) * r2
