"""Directed, weighted, multi-layer retweet network.

Edges point from the retweeted author ``i`` to the retweeter ``j``; the
weight ``W_ij`` counts how many of ``i``'s posts ``j`` retweeted. Layers are
discourse labels and each layer is further split by episode.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ._csvio import read_csv, write_csv
from .errors import DataError
from .ingest import TweetRecord
from .lexicon import Lexicon, classify_post
from .profiles import EpisodeSchedule, assign_episode

__all__ = [
    "SimpleDigraph",
    "LayeredGraph",
    "GraphStats",
    "build_layered_graph",
    "aggregate",
    "graph_stats",
    "write_layered_csv",
    "read_layered_csv",
    "write_aggregated_csv",
]


class SimpleDigraph:
    """Weighted digraph in compressed sparse row form.

    Nodes are string ids held in sorted order, so node index order is the
    lexicographic order used for tie-breaking. Out-edges of node ``u`` are
    ``targets[indptr[u]:indptr[u+1]]`` (ascending) with matching ``weights``.
    """

    def __init__(self, nodes: Sequence[str], src: np.ndarray, dst: np.ndarray, weight: np.ndarray):
        self.nodes = tuple(nodes)
        self.index = {v: k for k, v in enumerate(self.nodes)}
        n = len(self.nodes)
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        weight = np.asarray(weight, dtype=np.int64)
        if not (src.shape == dst.shape == weight.shape):
            raise ValueError("src, dst and weight must have the same length")
        if src.size:
            if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
                raise DataError("edge endpoint outside the node set")
            if np.any(src == dst):
                raise DataError("self-loops are not allowed")
            if np.any(weight < 1):
                raise DataError("edge weights must be positive integers")
        order = np.lexsort((dst, src))
        src, dst, weight = src[order], dst[order], weight[order]
        if src.size > 1:
            # merge repeated (src, dst) pairs
            new = np.ones(src.size, dtype=bool)
            new[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
            if not new.all():
                starts = np.flatnonzero(new)
                weight = np.add.reduceat(weight, starts)
                src, dst = src[starts], dst[starts]
        self.sources = src
        self.targets = dst
        self.weights = weight
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=self.indptr[1:])

    @classmethod
    def from_edges(cls, edges, nodes: Optional[Iterable[str]] = None) -> "SimpleDigraph":
        """Build from ``{(i, j): w}`` or an iterable of ``(i, j, w)`` triples."""
        items = edges.items() if isinstance(edges, Mapping) else (((i, j), w) for i, j, w in edges)
        pairs = list(items)
        node_set = set(nodes) if nodes is not None else set()
        for (i, j), _ in pairs:
            node_set.add(i)
            node_set.add(j)
        ordered = sorted(node_set)
        idx = {v: k for k, v in enumerate(ordered)}
        src = np.fromiter((idx[i] for (i, _), _ in pairs), dtype=np.int64, count=len(pairs))
        dst = np.fromiter((idx[j] for (_, j), _ in pairs), dtype=np.int64, count=len(pairs))
        w = np.fromiter((w for _, w in pairs), dtype=np.int64, count=len(pairs))
        return cls(ordered, src, dst, w)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return int(self.targets.size)

    @property
    def total_weight(self) -> int:
        return int(self.weights.sum())

    def out_degree(self, weighted: bool = False) -> np.ndarray:
        if weighted:
            return np.bincount(self.sources, weights=self.weights, minlength=self.n_nodes).astype(np.int64)
        return np.diff(self.indptr)

    def in_degree(self, weighted: bool = False) -> np.ndarray:
        w = self.weights if weighted else None
        return np.bincount(self.targets, weights=w, minlength=self.n_nodes).astype(np.int64)

    def successors(self, node: str) -> list[str]:
        u = self.index[node]
        return [self.nodes[v] for v in self.targets[self.indptr[u]:self.indptr[u + 1]]]

    def edges(self):
        """Yield ``(i, j, w)`` in source-then-target order."""
        nodes = self.nodes
        for u, v, w in zip(self.sources.tolist(), self.targets.tolist(), self.weights.tolist()):
            yield nodes[u], nodes[v], w

    def edge_dict(self) -> dict:
        return {(i, j): w for i, j, w in self.edges()}

    def with_weights(self, weights: np.ndarray) -> "SimpleDigraph":
        """Same topology, new per-edge weights (in CSR edge order)."""
        return SimpleDigraph(self.nodes, self.sources, self.targets, weights)

    def __repr__(self) -> str:
        return f"SimpleDigraph(nodes={self.n_nodes}, edges={self.n_edges}, weight={self.total_weight})"


@dataclass
class LayeredGraph:
    """Edge counts keyed by ``(layer, episode, author, retweeter)``.

    ``dropped`` counts records that did not become an edge increment:
    posts without retweet provenance, retweets outside the schedule, and
    self-retweets.
    """

    nodes: set = field(default_factory=set)
    edges: Counter = field(default_factory=Counter)
    dropped: dict = field(default_factory=lambda: {"no_retweet": 0, "out_of_schedule": 0, "self_retweet": 0})

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())

    def layers(self) -> list[str]:
        return sorted({k[0] for k in self.edges})


def build_layered_graph(
    records: Iterable[TweetRecord],
    lexicons: Sequence[Lexicon],
    schedule: EpisodeSchedule,
) -> LayeredGraph:
    """Count retweets into the layered network.

    Each retweet adds 1 to edge ``(classify_post(rec), episode, author,
    retweeter)``. The result does not depend on record order.
    """
    g = LayeredGraph()
    edges = g.edges
    dropped = g.dropped
    for rec in records:
        author = rec.retweet_of_user
        if author is None:
            dropped["no_retweet"] += 1
            continue
        k = assign_episode(rec.timestamp, schedule)
        if k is None:
            dropped["out_of_schedule"] += 1
            continue
        if author == rec.user_id:
            dropped["self_retweet"] += 1
            continue
        edges[(classify_post(rec, lexicons), k, author, rec.user_id)] += 1
    for _, _, i, j in edges:
        g.nodes.add(i)
        g.nodes.add(j)
    return g


def aggregate(
    graph: LayeredGraph,
    layers: Optional[Iterable[str]] = None,
    episodes: Optional[Iterable[int]] = None,
) -> SimpleDigraph:
    """Sum weights over the (layer, episode) slices passing the filters.

    All nodes of ``graph`` are kept, including ones left isolated.
    """
    layer_set = None if layers is None else set(layers)
    episode_set = None if episodes is None else set(episodes)
    nodes = sorted(graph.nodes)
    idx = {v: k for k, v in enumerate(nodes)}
    src, dst, w = [], [], []
    for (layer, ep, i, j), weight in graph.edges.items():
        if layer_set is not None and layer not in layer_set:
            continue
        if episode_set is not None and ep not in episode_set:
            continue
        src.append(idx[i])
        dst.append(idx[j])
        w.append(weight)
    return SimpleDigraph(nodes, np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64), np.array(w, dtype=np.int64))


@dataclass(frozen=True)
class GraphStats:
    nodes: int
    edges: int
    total_weight: int
    mean_out_degree: float

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "edges": self.edges,
            "total_weight": self.total_weight,
            "mean_out_degree": self.mean_out_degree,
        }


def graph_stats(g: SimpleDigraph) -> GraphStats:
    """Node/edge counts, total weight and mean unweighted out-degree."""
    n = g.n_nodes
    m = g.n_edges
    return GraphStats(n, m, g.total_weight, m / n if n else 0.0)


def write_layered_csv(path, graph: LayeredGraph) -> int:
    rows = ((layer, ep, i, j, w) for (layer, ep, i, j), w in sorted(graph.edges.items()))
    return write_csv(path, ["layer", "episode", "author", "retweeter", "weight"], rows)


def read_layered_csv(path) -> LayeredGraph:
    header, rows = read_csv(path)
    if header != ["layer", "episode", "author", "retweeter", "weight"]:
        raise DataError(f"{path}: unexpected header {header}")
    g = LayeredGraph()
    for lineno, row in enumerate(rows, start=2):
        if len(row) != 5:
            raise DataError(f"{path}:{lineno}: expected 5 columns")
        layer, ep, i, j, w = row
        try:
            ep_i, w_i = int(ep), int(w)
        except ValueError:
            raise DataError(f"{path}:{lineno}: episode and weight must be integers") from None
        if w_i < 1 or i == j:
            raise DataError(f"{path}:{lineno}: invalid edge")
        g.edges[(layer, ep_i, i, j)] += w_i
        g.nodes.update((i, j))
    return g


def write_aggregated_csv(path, g: SimpleDigraph) -> int:
    return write_csv(path, ["author", "retweeter", "weight"], g.edges())
