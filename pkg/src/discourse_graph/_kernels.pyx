# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels.

Semantics, floating-point operation order and random streams match the
pure-Python twin in ``_pykernels.py`` exactly.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport parallel, prange
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, calloc, free

cnp.import_array()

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def stream_state(uint64_t master_seed, uint64_t run):
    return mix64(master_seed + (run + 1) * GOLDEN)


def voterank(const int64_t[::1] indptr, const int64_t[::1] targets, weights,
             const int64_t[::1] outdeg, Py_ssize_t r, double delta, int threads=1):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef double[::1] ability = np.ones(n, dtype=np.float64)
    cdef unsigned char[::1] excluded = np.zeros(n, dtype=np.uint8)
    elected_arr = np.empty(r, dtype=np.int64)
    scores_arr = np.empty(r, dtype=np.float64)
    cdef int64_t[::1] elected = elected_arr
    cdef double[::1] scores = scores_arr
    cdef Py_ssize_t step, u, e, best
    cdef double s, best_s, a
    cdef int64_t best_deg
    with nogil:
        for step in range(r):
            best = -1
            best_s = -1.0
            best_deg = -1
            for u in range(n):
                if excluded[u]:
                    continue
                s = 0.0
                for e in range(indptr[u], indptr[u + 1]):
                    s += w[e] * ability[targets[e]]
                if s > best_s or (s == best_s and outdeg[u] > best_deg):
                    best = u
                    best_s = s
                    best_deg = outdeg[u]
            elected[step] = best
            scores[step] = best_s
            excluded[best] = 1
            ability[best] = 0.0
            for e in range(indptr[best], indptr[best + 1]):
                a = ability[targets[e]] - delta
                ability[targets[e]] = a if a > 0.0 else 0.0
    return elected_arr, scores_arr


cdef int64_t _ic_run(const int64_t[::1] indptr, const int64_t[::1] targets,
                     const double[::1] prob, const int64_t[::1] seeds,
                     int64_t* stamp, int64_t* queue, int64_t mark,
                     uint64_t state) noexcept nogil:
    cdef Py_ssize_t i, e
    cdef int64_t head = 0, tail = 0, u, v
    for i in range(seeds.shape[0]):
        stamp[seeds[i]] = mark
        queue[tail] = seeds[i]
        tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for e in range(indptr[u], indptr[u + 1]):
            v = targets[e]
            if stamp[v] == mark:
                continue
            state = state + GOLDEN
            if <double>(mix64(state) >> 11) * INV_2_53 < prob[e]:
                stamp[v] = mark
                queue[tail] = v
                tail += 1
    return tail


def ic_spreads(const int64_t[::1] indptr, const int64_t[::1] targets, const double[::1] prob,
               seeds, Py_ssize_t runs, master_seed, int threads=1):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    uniq = np.asarray(list(dict.fromkeys(int(s) for s in seeds)), dtype=np.int64)
    cdef const int64_t[::1] seed_view = uniq
    cdef uint64_t mseed = <uint64_t>(int(master_seed) & 0xFFFFFFFFFFFFFFFF)
    out_arr = np.empty(runs, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t* stamp
    cdef int64_t* queue
    cdef Py_ssize_t k
    if threads < 1:
        threads = 1
    with nogil, parallel(num_threads=threads):
        stamp = <int64_t*> calloc(n + 1, sizeof(int64_t))
        queue = <int64_t*> malloc((n + 1) * sizeof(int64_t))
        for k in prange(runs, schedule="static"):
            # stamps are run-specific, so buffers never need clearing
            out[k] = _ic_run(indptr, targets, prob, seed_view, stamp, queue, k + 1,
                             mix64(mseed + (<uint64_t>k + 1) * GOLDEN))
        free(stamp)
        free(queue)
    return out_arr


def betweenness(const int64_t[::1] indptr, const int64_t[::1] targets, int threads=1):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    bc_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] bc = bc_arr
    cdef double[::1] sigma = np.zeros(n, dtype=np.float64)
    cdef double[::1] delta = np.zeros(n, dtype=np.float64)
    cdef int64_t[::1] dist = np.full(n, -1, dtype=np.int64)
    cdef int64_t[::1] order = np.zeros(n, dtype=np.int64)
    cdef Py_ssize_t s, head, tail, i, e
    cdef int64_t v, w, dv
    cdef double acc
    with nogil:
        for s in range(n):
            sigma[s] = 1.0
            dist[s] = 0
            order[0] = s
            head = 0
            tail = 1
            while head < tail:
                v = order[head]
                head += 1
                dv = dist[v]
                for e in range(indptr[v], indptr[v + 1]):
                    w = targets[e]
                    if dist[w] < 0:
                        dist[w] = dv + 1
                        order[tail] = w
                        tail += 1
                    if dist[w] == dv + 1:
                        sigma[w] += sigma[v]
            for i in range(tail - 1, -1, -1):
                v = order[i]
                dv = dist[v]
                acc = 0.0
                for e in range(indptr[v], indptr[v + 1]):
                    w = targets[e]
                    if dist[w] == dv + 1:
                        acc += sigma[v] / sigma[w] * (1.0 + delta[w])
                delta[v] = acc
                if v != s:
                    bc[v] += acc
            for i in range(tail):
                v = order[i]
                sigma[v] = 0.0
                delta[v] = 0.0
                dist[v] = -1
    return bc_arr


cdef double _harmonic_from(const int64_t[::1] indptr, const int64_t[::1] targets,
                           Py_ssize_t s, int64_t* dist, int64_t* queue) noexcept nogil:
    cdef int64_t head = 0, tail = 1, v, w, i
    cdef Py_ssize_t e
    cdef double total = 0.0
    dist[s] = 0
    queue[0] = s
    while head < tail:
        v = queue[head]
        head += 1
        if v != s:
            total += 1.0 / <double>dist[v]
        for e in range(indptr[v], indptr[v + 1]):
            w = targets[e]
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue[tail] = w
                tail += 1
    for i in range(tail):
        dist[queue[i]] = -1
    return total


def harmonic_closeness(const int64_t[::1] indptr, const int64_t[::1] targets, int threads=1):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef int64_t* dist
    cdef int64_t* queue
    cdef Py_ssize_t s, i
    if threads < 1:
        threads = 1
    with nogil, parallel(num_threads=threads):
        dist = <int64_t*> malloc((n + 1) * sizeof(int64_t))
        queue = <int64_t*> malloc((n + 1) * sizeof(int64_t))
        for i in range(n + 1):
            dist[i] = -1
        for s in prange(n, schedule="dynamic"):
            out[s] = _harmonic_from(indptr, targets, s, dist, queue)
        free(dist)
        free(queue)
    return out_arr
