"""Spreader ranking: VoteRank, degree baseline, centralities, hashtag activity.

Tie-breaking is the same everywhere a graph is involved: higher unweighted
out-degree first, then the lexicographically smallest node id.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import kernels
from ._csvio import write_csv
from .errors import DataError
from .graph import SimpleDigraph, graph_stats
from .ingest import TweetRecord

__all__ = [
    "Ranking",
    "VoteRankState",
    "default_delta",
    "vote_rank",
    "degree_rank",
    "betweenness",
    "closeness",
    "centrality_rank",
    "rank_active_users",
    "write_ranking",
]


@dataclass
class Ranking:
    method: str
    entries: list = field(default_factory=list)  # [(node, score), ...]

    @property
    def nodes(self) -> list:
        return [node for node, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def rows(self):
        for k, (node, score) in enumerate(self.entries, start=1):
            yield k, node, score, self.method


def default_delta(g: SimpleDigraph) -> float:
    """Suppression step ``1 / <k>``, with ``<k>`` the mean out-degree."""
    k = graph_stats(g).mean_out_degree
    return 1.0 / k if k > 0 else 1.0


def _check_r(g: SimpleDigraph, r: int) -> None:
    if g.n_nodes == 0:
        raise DataError("cannot rank nodes of an empty graph")
    if r < 1 or r > g.n_nodes:
        raise DataError(f"r must be in 1..{g.n_nodes}, got {r}")


class VoteRankState:
    """Step-by-step VoteRank election on a :class:`SimpleDigraph`.

    Every node starts with voting ability 1. In each round a candidate's
    score is the sum, over its out-edges ``u -> v``, of ``w(u, v)`` times
    the ability of the retweeter ``v``. The best candidate is elected, its
    own ability drops to 0 and each of its retweeters loses ``delta``
    (floored at 0). Elected nodes never stand again.

    ``vote_rank`` runs the same rounds through the kernel backend; this
    class exposes the intermediate state for inspection.
    """

    def __init__(self, g: SimpleDigraph, delta: Optional[float] = None):
        self.graph = g
        self.delta = default_delta(g) if delta is None else float(delta)
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        self.ability = np.ones(g.n_nodes, dtype=np.float64)
        self.excluded = np.zeros(g.n_nodes, dtype=bool)
        self.elected: list = []
        self._outdeg = g.out_degree()
        self._wf = g.weights.astype(np.float64)

    def scores(self) -> np.ndarray:
        g = self.graph
        s = np.bincount(g.sources, weights=self._wf * self.ability[g.targets], minlength=g.n_nodes)
        s[self.excluded] = -1.0
        return s

    def step(self) -> tuple:
        if self.excluded.all():
            raise DataError("every node has already been elected")
        s = self.scores()
        best = s.max()
        cand = np.flatnonzero(s == best)
        if cand.size > 1:
            deg = self._outdeg[cand]
            cand = cand[deg == deg.max()]
        u = int(cand[0])
        g = self.graph
        self.excluded[u] = True
        self.ability[u] = 0.0
        for v in g.targets[g.indptr[u]:g.indptr[u + 1]]:
            self.ability[v] = max(0.0, self.ability[v] - self.delta)
        pick = (g.nodes[u], float(best))
        self.elected.append(pick)
        return pick


def vote_rank(g: SimpleDigraph, r: int, delta: Optional[float] = None, backend=None) -> Ranking:
    """Elect ``r`` spreaders with VoteRank.

    Parameters
    ----------
    g : SimpleDigraph
        Aggregated retweet graph, edges author -> retweeter.
    r : int
        Number of spreaders, ``1 <= r <= g.n_nodes``.
    delta : float, optional
        Ability decrement applied to the retweeters of an elected node.
        Defaults to the reciprocal mean out-degree.
    backend : module, optional
        Kernel module override (see :mod:`discourse_graph.kernels`).

    Returns
    -------
    Ranking
        Elected nodes in election order with their winning scores.
    """
    _check_r(g, r)
    d = default_delta(g) if delta is None else float(delta)
    if d < 0:
        raise ValueError("delta must be non-negative")
    impl = backend or kernels.impl
    elected, scores = impl.voterank(
        g.indptr, g.targets, g.weights.astype(np.float64), g.out_degree(), r, d, kernels.thread_count()
    )
    return Ranking("voterank", [(g.nodes[u], float(s)) for u, s in zip(elected.tolist(), scores.tolist())])


def _rank_array(g: SimpleDigraph, scores: np.ndarray, r: Optional[int], method: str) -> Ranking:
    n = g.n_nodes
    r = n if r is None else min(r, n)
    order = np.lexsort((np.arange(n), -g.out_degree(), -scores))[:r]
    vals = scores[order].tolist()
    return Ranking(method, [(g.nodes[u], v) for u, v in zip(order.tolist(), vals)])


def degree_rank(g: SimpleDigraph, mode: str = "out", weighted: bool = False, r: Optional[int] = None) -> Ranking:
    """Top-``r`` nodes by (weighted) in- or out-degree."""
    if mode not in ("in", "out"):
        raise ValueError(f"mode must be 'in' or 'out', got {mode!r}")
    deg = g.out_degree(weighted) if mode == "out" else g.in_degree(weighted)
    tag = f"degree-{mode}" + ("-weighted" if weighted else "")
    return _rank_array(g, deg.astype(np.int64), r, tag)


def betweenness(g: SimpleDigraph, backend=None) -> dict:
    """Unnormalized directed betweenness on the unweighted skeleton."""
    impl = backend or kernels.impl
    bc = impl.betweenness(g.indptr, g.targets, kernels.thread_count())
    return dict(zip(g.nodes, bc.tolist()))


def closeness(g: SimpleDigraph, backend=None) -> dict:
    """Harmonic closeness ``sum(1 / d(u, v))`` over out-reachable ``v``."""
    impl = backend or kernels.impl
    c = impl.harmonic_closeness(g.indptr, g.targets, kernels.thread_count())
    return dict(zip(g.nodes, c.tolist()))


def centrality_rank(g: SimpleDigraph, method: str, r: Optional[int] = None) -> Ranking:
    if method == "betweenness":
        values = betweenness(g)
    elif method == "closeness":
        values = closeness(g)
    else:
        raise ValueError(f"unknown centrality {method!r}")
    return _rank_array(g, np.array([values[v] for v in g.nodes], dtype=np.float64), r, method)


def rank_active_users(records: Iterable[TweetRecord], n: int) -> Ranking:
    """Users by total hashtags authored; ties by user id."""
    counts: Counter = Counter()
    for rec in records:
        counts[rec.user_id] += len(rec.hashtags)
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return Ranking("active", ordered[:n])


def write_ranking(path, ranking: Ranking) -> int:
    return write_csv(path, ["rank", "node", "score", "method"], ranking.rows())
