"""Pure-Python versions of the hot loops.

These mirror ``_ckernels.pyx`` operation for operation so both backends
return bit-identical results; keep them in sync when editing either one.
"""

from collections import deque

import numpy as np


def bfs_shells(indptr, indices):
    """Count, for every source node, how many nodes sit at each hop distance.

    Returns an ``(n, width)`` int64 array where ``out[s, l]`` is the number
    of nodes at shortest-path distance ``l`` from ``s`` (``out[s, 0] == 1``).
    ``width`` is the graph diameter (over reachable pairs) plus one.
    """
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    n = len(indptr) - 1
    rows = []
    width = 1
    dist = [-1] * n
    for s in range(n):
        counts = [1]
        dist[s] = 0
        seen = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if dist[v] < 0:
                    dist[v] = du
                    seen.append(v)
                    queue.append(v)
                    if du == len(counts):
                        counts.append(0)
                    counts[du] += 1
        for v in seen:
            dist[v] = -1
        rows.append(counts)
        width = max(width, len(counts))
    out = np.zeros((n, width), dtype=np.int64)
    for s, counts in enumerate(rows):
        out[s, : len(counts)] = counts
    return out


def move_nodes(indptr, indices, weights, strength, comm, tot, order, m2):
    """One Louvain local-moving phase, in place on ``comm`` and ``tot``.

    ``strength`` includes twice any self-loop weight; ``indices`` must not
    contain self-loops. A node moves only when some community strictly
    improves on staying put; equal best gains go to the lowest community id.
    Returns the number of node moves performed.
    """
    indptr = indptr.tolist()
    indices = indices.tolist()
    weights = weights.tolist()
    strength = strength.tolist()
    order = order.tolist()
    c = comm.tolist()
    t = tot.tolist()
    n = len(c)
    wto = [0.0] * n
    touched = []
    moves = 0
    improved = True
    passes = 0
    while improved and passes < 1000:
        improved = False
        passes += 1
        for i in order:
            ki = strength[i]
            own = c[i]
            for p in range(indptr[i], indptr[i + 1]):
                cj = c[indices[p]]
                if wto[cj] == 0.0:
                    touched.append(cj)
                wto[cj] += weights[p]
            t[own] -= ki
            stay = wto[own] - t[own] * ki / m2
            best = own
            best_gain = stay
            for cj in touched:
                if cj == own:
                    continue
                gain = wto[cj] - t[cj] * ki / m2
                if gain > best_gain or (gain == best_gain and best != own and cj < best):
                    best = cj
                    best_gain = gain
            for cj in touched:
                wto[cj] = 0.0
            touched.clear()
            t[best] += ki
            if best != own:
                c[i] = best
                moves += 1
                improved = True
    comm[:] = c
    tot[:] = t
    return moves
