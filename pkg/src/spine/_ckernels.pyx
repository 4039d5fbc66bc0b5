# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Semantics match ``_pykernels`` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def bfs_shells(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t width = 16 if n > 16 else (n if n > 0 else 1)
    out_arr = np.zeros((n, width), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_arr
    cdef cnp.int64_t[::1] dist = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = np.empty(n if n > 0 else 1, dtype=np.int64)
    cdef Py_ssize_t s, head, tail, u, v, p, q
    cdef cnp.int64_t du
    cdef Py_ssize_t used = 1
    for s in range(n):
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        out[s, 0] = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u] + 1
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if dist[v] < 0:
                    dist[v] = du
                    queue[tail] = v
                    tail += 1
                    if du >= width:
                        width = 2 * width if 2 * width < n else n
                        grown = np.zeros((n, width), dtype=np.int64)
                        grown[:, : out_arr.shape[1]] = out_arr
                        out_arr = grown
                        out = out_arr
                    out[s, du] += 1
                    if du + 1 > used:
                        used = du + 1
        for q in range(tail):
            dist[queue[q]] = -1
    return np.ascontiguousarray(out_arr[:, :used])


def move_nodes(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
               const double[::1] weights, const double[::1] strength,
               cnp.int64_t[::1] comm, double[::1] tot,
               const cnp.int64_t[::1] order, double m2):
    cdef Py_ssize_t n = comm.shape[0]
    cdef double[::1] wto = np.zeros(n, dtype=np.float64)
    cdef cnp.int64_t[::1] touched = np.empty(n if n > 0 else 1, dtype=np.int64)
    cdef Py_ssize_t ntouched, idx, i, p, j
    cdef cnp.int64_t own, best, cj
    cdef double ki, stay, best_gain, gain
    cdef long moves = 0
    cdef bint improved = True
    cdef int passes = 0
    while improved and passes < 1000:
        improved = False
        passes += 1
        for idx in range(order.shape[0]):
            i = order[idx]
            ki = strength[i]
            own = comm[i]
            ntouched = 0
            for p in range(indptr[i], indptr[i + 1]):
                cj = comm[indices[p]]
                if wto[cj] == 0.0:
                    touched[ntouched] = cj
                    ntouched += 1
                wto[cj] += weights[p]
            tot[own] -= ki
            stay = wto[own] - tot[own] * ki / m2
            best = own
            best_gain = stay
            for j in range(ntouched):
                cj = touched[j]
                if cj == own:
                    continue
                gain = wto[cj] - tot[cj] * ki / m2
                if gain > best_gain or (gain == best_gain and best != own and cj < best):
                    best = cj
                    best_gain = gain
            for j in range(ntouched):
                wto[touched[j]] = 0.0
            tot[best] += ki
            if best != own:
                comm[i] = best
                moves += 1
                improved = True
    return moves
