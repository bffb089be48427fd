"""Pure-Python graph kernels.

Reference twin of ``_kernels.pyx``. Both modules take the same CSR arrays,
perform floating-point operations in the same order and draw from the same
random streams, so they return identical results.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
INV_2_53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    """splitmix64 finalizer."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_state(master_seed: int, run: int) -> int:
    """Initial splitmix64 state of run ``run`` under ``master_seed``."""
    return mix64((master_seed + (run + 1) * GOLDEN) & MASK64)


def voterank(indptr, targets, weights, outdeg, r: int, delta: float, threads: int = 1):
    n = indptr.shape[0] - 1
    sources = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    wf = np.asarray(weights, dtype=np.float64)
    ability = np.ones(n, dtype=np.float64)
    excluded = np.zeros(n, dtype=bool)
    elected = np.empty(r, dtype=np.int64)
    scores = np.empty(r, dtype=np.float64)
    for step in range(r):
        # bincount accumulates per bin in input order, matching the C loop
        s = np.bincount(sources, weights=wf * ability[targets], minlength=n)
        s[excluded] = -1.0
        best = s.max()
        cand = np.flatnonzero(s == best)
        if cand.size > 1:
            deg = outdeg[cand]
            cand = cand[deg == deg.max()]
        u = int(cand[0])
        elected[step] = u
        scores[step] = best
        excluded[u] = True
        ability[u] = 0.0
        for v in targets[indptr[u]:indptr[u + 1]]:
            a = ability[v] - delta
            ability[v] = a if a > 0.0 else 0.0
    return elected, scores


def ic_spreads(indptr, targets, prob, seeds, runs: int, master_seed: int, threads: int = 1):
    n = indptr.shape[0] - 1
    ptr = indptr.tolist()
    tgt = targets.tolist()
    pr = prob.tolist()
    seed_list = list(dict.fromkeys(int(s) for s in seeds))
    out = np.empty(runs, dtype=np.int64)
    master_seed &= MASK64
    for k in range(runs):
        state = stream_state(master_seed, k)
        active = bytearray(n)
        queue = list(seed_list)
        for s in seed_list:
            active[s] = 1
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for e in range(ptr[u], ptr[u + 1]):
                v = tgt[e]
                if active[v]:
                    continue
                state = (state + GOLDEN) & MASK64
                if (mix64(state) >> 11) * INV_2_53 < pr[e]:
                    active[v] = 1
                    queue.append(v)
        out[k] = len(queue)
    return out


def betweenness(indptr, targets, threads: int = 1):
    n = indptr.shape[0] - 1
    ptr = indptr.tolist()
    tgt = targets.tolist()
    bc = [0.0] * n
    for s in range(n):
        sigma = [0.0] * n
        dist = [-1] * n
        delta = [0.0] * n
        sigma[s] = 1.0
        dist[s] = 0
        order = [s]
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            dv = dist[v]
            for e in range(ptr[v], ptr[v + 1]):
                w = tgt[e]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    order.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        # accumulate over successors on shortest paths, farthest nodes first
        for v in reversed(order):
            dv = dist[v]
            acc = delta[v]
            for e in range(ptr[v], ptr[v + 1]):
                w = tgt[e]
                if dist[w] == dv + 1:
                    acc += sigma[v] / sigma[w] * (1.0 + delta[w])
            delta[v] = acc
            if v != s:
                bc[v] += acc
    return np.array(bc, dtype=np.float64)


def harmonic_closeness(indptr, targets, threads: int = 1):
    n = indptr.shape[0] - 1
    ptr = indptr.tolist()
    tgt = targets.tolist()
    out = np.zeros(n, dtype=np.float64)
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        queue = [s]
        head = 0
        total = 0.0
        while head < len(queue):
            v = queue[head]
            head += 1
            if v != s:
                total += 1.0 / dist[v]
            for e in range(ptr[v], ptr[v + 1]):
                w = tgt[e]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        out[s] = total
    return out
