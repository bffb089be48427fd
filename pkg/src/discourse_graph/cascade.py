"""Independent-cascade spread estimation for spreader sets.

An edge ``u -> v`` of weight ``w`` fires with probability ``1 - (1 - p)**w``,
i.e. each of the ``w`` retweets is an independent chance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from ._csvio import write_csv
from .errors import DataError
from .graph import SimpleDigraph
from .influence import degree_rank, vote_rank

__all__ = [
    "CascadeConfig",
    "CascadeResult",
    "MAX_EXACT_EDGES",
    "edge_probabilities",
    "simulate_ic",
    "exact_spread_small",
    "compare_strategies",
    "write_cascade_report",
]

MAX_EXACT_EDGES = 20


@dataclass(frozen=True)
class CascadeConfig:
    p: float = 0.1
    runs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")


@dataclass
class CascadeResult:
    mean: float
    std: float
    runs: int
    tag: str = ""
    seeds: list = field(default_factory=list)
    seed: int = 0

    @property
    def stderr(self) -> float:
        return self.std / math.sqrt(self.runs)


def edge_probabilities(g: SimpleDigraph, p: float) -> np.ndarray:
    return 1.0 - np.power(1.0 - p, g.weights.astype(np.float64))


def _seed_indices(g: SimpleDigraph, seeds: Iterable[str]) -> list:
    out = []
    for s in seeds:
        if s not in g.index:
            raise DataError(f"seed {s!r} is not a node of the graph")
        out.append(g.index[s])
    return list(dict.fromkeys(out))


def _summarize(spreads: np.ndarray) -> tuple:
    # integer moments make mean/std independent of run order
    xs = spreads.tolist()
    n = len(xs)
    s1 = sum(xs)
    s2 = sum(x * x for x in xs)
    mean = s1 / n
    var = (n * s2 - s1 * s1) / (n * (n - 1)) if n > 1 else 0.0
    return mean, math.sqrt(var)


def _spreads(g: SimpleDigraph, seed_idx: list, cfg: CascadeConfig, backend=None) -> np.ndarray:
    impl = backend or kernels.impl
    return impl.ic_spreads(
        g.indptr, g.targets, edge_probabilities(g, cfg.p), np.asarray(seed_idx, dtype=np.int64),
        cfg.runs, cfg.seed, kernels.thread_count(),
    )


def simulate_ic(
    g: SimpleDigraph, seeds: Iterable[str], cfg: CascadeConfig, tag: str = "", backend=None
) -> CascadeResult:
    """Monte Carlo independent cascade from ``seeds``.

    Run ``k`` draws from its own stream derived from ``(cfg.seed, k)``, so the
    result is reproducible for any thread count.
    """
    seeds = list(seeds)
    idx = _seed_indices(g, seeds)
    mean, std = _summarize(_spreads(g, idx, cfg, backend))
    return CascadeResult(mean, std, cfg.runs, tag, seeds, cfg.seed)


def exact_spread_small(g: SimpleDigraph, seeds: Iterable[str], p):
    """Exact expected spread by live-edge enumeration.

    Every live/dead assignment of the edges that can matter (those leaving
    a node reachable from the seeds) is weighted by its probability. ``p``
    may be a :class:`fractions.Fraction` for exact rational arithmetic.
    """
    if g.n_edges > MAX_EXACT_EDGES:
        raise DataError(f"exact enumeration supports at most {MAX_EXACT_EDGES} edges, got {g.n_edges}")
    seed_idx = _seed_indices(g, seeds)
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    ptr = g.indptr.tolist()
    tgt = g.targets.tolist()

    reach = set(seed_idx)
    stack = list(seed_idx)
    while stack:
        u = stack.pop()
        for e in range(ptr[u], ptr[u + 1]):
            if tgt[e] not in reach:
                reach.add(tgt[e])
                stack.append(tgt[e])
    edges = [(u, tgt[e], int(g.weights[e])) for u in sorted(reach) for e in range(ptr[u], ptr[u + 1])]
    if not edges:
        return one * len(seed_idx)
    probs = [one - (one - p) ** w for _, _, w in edges]

    def spread(live: list) -> int:
        adj: dict = {}
        for (u, v, _), alive in zip(edges, live):
            if alive:
                adj.setdefault(u, []).append(v)
        seen = set(seed_idx)
        todo = list(seed_idx)
        while todo:
            u = todo.pop()
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return len(seen)

    live = [False] * len(edges)
    total = one * 0

    def walk(i: int, weight):
        nonlocal total
        if i == len(edges):
            total += weight * spread(live)
            return
        q = probs[i]
        if q != 0:
            live[i] = True
            walk(i + 1, weight * q)
        if q != one:
            live[i] = False
            walk(i + 1, weight * (one - q))

    walk(0, one)
    return total


def compare_strategies(
    g: SimpleDigraph,
    r: int,
    cfg: CascadeConfig,
    random_draws: int = 20,
    delta: Optional[float] = None,
) -> list:
    """Spread of the top-``r`` seeds of VoteRank, out-degree and random picks.

    All strategies use the same cascade configuration. The random strategy
    pools ``random_draws`` independent seed sets; its ``runs`` is the pooled
    sample size.
    """
    if r < 1 or r > g.n_nodes:
        raise DataError(f"r must be in 1..{g.n_nodes}, got {r}")
    results = []
    vr = vote_rank(g, r, delta=delta).nodes
    results.append(simulate_ic(g, vr, cfg, tag="voterank"))
    deg = degree_rank(g, "out", weighted=True, r=r).nodes
    results.append(simulate_ic(g, deg, cfg, tag="degree"))
    rng = np.random.default_rng(cfg.seed)
    pooled = []
    for _ in range(random_draws):
        pick = sorted(rng.choice(g.n_nodes, size=r, replace=False).tolist())
        pooled.append(_spreads(g, pick, cfg))
    mean, std = _summarize(np.concatenate(pooled))
    results.append(CascadeResult(mean, std, cfg.runs * random_draws, "random", [], cfg.seed))
    return results


def write_cascade_report(path, results: Sequence[CascadeResult], r: int) -> int:
    rows = ((res.tag, r, res.mean, res.std, res.runs, res.seed) for res in results)
    return write_csv(path, ["strategy", "r", "mean_spread", "std", "runs", "seed"], rows)
