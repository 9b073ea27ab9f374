"""Hot numeric kernels.

Every kernel is written as a plain loop function over numpy arrays so the
same source runs on both lanes: compiled with numba's @njit on the numba
lane, interpreted on the pure-NumPy lane (see _accel).  Keep these free of
Python objects -- arrays, ints and floats only -- and do not use fastmath:
identical operation order is what makes the two lanes bit-identical.

PURE_KERNELS holds the uncompiled originals for the lane benchmark.
"""

import numpy as np

from ._accel import jit_kernel


def _edge_betweenness(indptr, nbr, eid, active, n, n_edges):
    # Brandes accumulation over unweighted hop-shortest paths, restricted to
    # edges with active[eid] != 0.  Each unordered vertex pair counts once;
    # tied paths share credit equally.
    scores = np.zeros(n_edges, np.float64)
    dist = np.empty(n, np.int64)
    sigma = np.empty(n, np.float64)
    delta = np.empty(n, np.float64)
    order = np.empty(n, np.int64)
    for s in range(n):
        for i in range(n):
            dist[i] = -1
            sigma[i] = 0.0
            delta[i] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        head = 0
        tail = 1
        order[0] = s
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v]
            for j in range(indptr[v], indptr[v + 1]):
                if active[eid[j]] == 0:
                    continue
                w = nbr[j]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        for idx in range(tail - 1, 0, -1):
            w = order[idx]
            coeff = (1.0 + delta[w]) / sigma[w]
            for j in range(indptr[w], indptr[w + 1]):
                if active[eid[j]] == 0:
                    continue
                v = nbr[j]
                if dist[v] == dist[w] - 1:
                    c = sigma[v] * coeff
                    scores[eid[j]] += c
                    delta[v] += c
    for e in range(n_edges):
        scores[e] *= 0.5
    return scores


def _component_labels(indptr, nbr, eid, active, n):
    # BFS labelling over active edges; labels assigned in discovery order of
    # the smallest vertex of each component.
    labels = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    next_label = 0
    for s in range(n):
        if labels[s] >= 0:
            continue
        labels[s] = next_label
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            v = queue[head]
            head += 1
            for j in range(indptr[v], indptr[v + 1]):
                if active[eid[j]] == 0:
                    continue
                w = nbr[j]
                if labels[w] < 0:
                    labels[w] = next_label
                    queue[tail] = w
                    tail += 1
        next_label += 1
    return labels


def _common_neighbor_total(indptr, nbr, edges_u, edges_v):
    # Sum over edges of |N(u) & N(v)|; equals 3x the triangle count.
    # Requires neighbor lists sorted ascending.
    total = 0
    for e in range(edges_u.shape[0]):
        i = indptr[edges_u[e]]
        j = indptr[edges_v[e]]
        iend = indptr[edges_u[e] + 1]
        jend = indptr[edges_v[e] + 1]
        while i < iend and j < jend:
            a = nbr[i]
            b = nbr[j]
            if a == b:
                total += 1
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
    return total


def _spinglass_anneal(indptr, nbr, wgt, strength, two_w, gamma,
                      spins, comm_strength, temps, orders, props, unis):
    # Single-spin Metropolis updates of the Potts Hamiltonian
    #   H = -sum_{i<j} (w_ij - gamma * s_i s_j / 2W) * [spin_i == spin_j]
    # under the given temperature ladder.  All randomness (sweep orders,
    # proposals, uniforms) is precomputed by the caller, so the trajectory
    # is identical on both lanes.
    n = strength.shape[0]
    for ti in range(temps.shape[0]):
        temp = temps[ti]
        for k in range(n):
            i = orders[ti, k]
            a = spins[i]
            b = props[ti, k]
            if b == a:
                continue
            link_a = 0.0
            link_b = 0.0
            for j in range(indptr[i], indptr[i + 1]):
                sp = spins[nbr[j]]
                if sp == a:
                    link_a += wgt[j]
                elif sp == b:
                    link_b += wgt[j]
            si = strength[i]
            null_a = gamma * si * (comm_strength[a] - si) / two_w
            null_b = gamma * si * comm_strength[b] / two_w
            dh = (link_a - null_a) - (link_b - null_b)
            if dh <= 0.0 or unis[ti, k] < np.exp(-dh / temp):
                spins[i] = b
                comm_strength[a] -= si
                comm_strength[b] += si


def _fr_iterate(pos, edges_u, edges_v, k, t0, dt, iterations):
    # Classic force-directed step: repulsion k^2/d between every vertex
    # pair, attraction d^2/k along edges, displacement capped by a linearly
    # cooling temperature.  Positions updated in place.
    n = pos.shape[0]
    m = edges_u.shape[0]
    disp = np.zeros((n, 2), np.float64)
    t = t0
    for _ in range(iterations):
        for i in range(n):
            disp[i, 0] = 0.0
            disp[i, 1] = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                dx = pos[i, 0] - pos[j, 0]
                dy = pos[i, 1] - pos[j, 1]
                d = np.sqrt(dx * dx + dy * dy)
                if d < 0.01:
                    d = 0.01
                f = k * k / (d * d)
                disp[i, 0] += dx * f
                disp[i, 1] += dy * f
                disp[j, 0] -= dx * f
                disp[j, 1] -= dy * f
        for e in range(m):
            u = edges_u[e]
            v = edges_v[e]
            dx = pos[u, 0] - pos[v, 0]
            dy = pos[u, 1] - pos[v, 1]
            d = np.sqrt(dx * dx + dy * dy)
            if d < 0.01:
                d = 0.01
            f = d / k
            disp[u, 0] -= dx * f
            disp[u, 1] -= dy * f
            disp[v, 0] += dx * f
            disp[v, 1] += dy * f
        for i in range(n):
            dl = np.sqrt(disp[i, 0] * disp[i, 0] + disp[i, 1] * disp[i, 1])
            if dl > 0.0:
                step = dl if dl < t else t
                pos[i, 0] += disp[i, 0] / dl * step
                pos[i, 1] += disp[i, 1] / dl * step
        t -= dt
        if t < 0.0:
            t = 0.0


def _chisq_stat(counts, expected):
    # Pearson chi-square in fixed row-major cell order.  The Monte Carlo
    # replicates below use the same order, so mathematically tied statistics
    # compare equal bit-for-bit.
    stat = 0.0
    for r in range(counts.shape[0]):
        for c in range(counts.shape[1]):
            d = counts[r, c] - expected[r, c]
            stat += d * d / expected[r, c]
    return stat


def _chisq_mc_count(row_idx, col_idx, perms, expected, obs_stat):
    # Number of label-permutation replicates whose statistic reaches the
    # observed one.  perms[b] permutes the row side against the column side;
    # margins are preserved, so `expected` never changes.
    n_obs = row_idx.shape[0]
    rows = expected.shape[0]
    cols = expected.shape[1]
    table = np.empty((rows, cols), np.float64)
    count = 0
    for b in range(perms.shape[0]):
        for r in range(rows):
            for c in range(cols):
                table[r, c] = 0.0
        for t in range(n_obs):
            table[row_idx[perms[b, t]], col_idx[t]] += 1.0
        stat = 0.0
        for r in range(rows):
            for c in range(cols):
                d = table[r, c] - expected[r, c]
                stat += d * d / expected[r, c]
        if stat >= obs_stat:
            count += 1
    return count


PURE_KERNELS = {
    "edge_betweenness": _edge_betweenness,
    "component_labels": _component_labels,
    "common_neighbor_total": _common_neighbor_total,
    "spinglass_anneal": _spinglass_anneal,
    "fr_iterate": _fr_iterate,
    "chisq_stat": _chisq_stat,
    "chisq_mc_count": _chisq_mc_count,
}

edge_betweenness_kernel = jit_kernel(_edge_betweenness)
component_labels_kernel = jit_kernel(_component_labels)
common_neighbor_total_kernel = jit_kernel(_common_neighbor_total)
spinglass_anneal_kernel = jit_kernel(_spinglass_anneal)
fr_iterate_kernel = jit_kernel(_fr_iterate)
chisq_stat_kernel = jit_kernel(_chisq_stat)
chisq_mc_count_kernel = jit_kernel(_chisq_mc_count)

ACTIVE_KERNELS = {
    "edge_betweenness": edge_betweenness_kernel,
    "component_labels": component_labels_kernel,
    "common_neighbor_total": common_neighbor_total_kernel,
    "spinglass_anneal": spinglass_anneal_kernel,
    "fr_iterate": fr_iterate_kernel,
    "chisq_stat": chisq_stat_kernel,
    "chisq_mc_count": chisq_mc_count_kernel,
}
