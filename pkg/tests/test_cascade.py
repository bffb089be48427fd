from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from discourse_graph import kernels
from discourse_graph.cascade import (
    CascadeConfig,
    compare_strategies,
    edge_probabilities,
    exact_spread_small,
    simulate_ic,
    write_cascade_report,
)
from discourse_graph.errors import DataError
from discourse_graph.graph import SimpleDigraph
from discourse_graph.synthetic import random_digraph_edges


def triangle():
    return SimpleDigraph.from_edges({("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 1})


def test_edge_probabilities():
    g = SimpleDigraph.from_edges({("a", "b"): 1, ("a", "c"): 3})
    assert edge_probabilities(g, 0.5).tolist() == [0.5, 0.875]


@pytest.mark.parametrize("bad", [dict(p=-0.1), dict(p=1.5), dict(runs=0)])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        CascadeConfig(**bad)


def test_p_zero_and_one(backend):
    g = triangle()
    r0 = simulate_ic(g, ["a"], CascadeConfig(p=0.0, runs=200), backend=backend)
    r1 = simulate_ic(g, ["a"], CascadeConfig(p=1.0, runs=200), backend=backend)
    assert (r0.mean, r0.std) == (1.0, 0.0)
    assert (r1.mean, r1.std) == (3.0, 0.0)


def test_exact_triangle():
    assert exact_spread_small(triangle(), ["a"], 0.5) == 2.125
    assert exact_spread_small(triangle(), ["a"], Fraction(1, 2)) == Fraction(17, 8)


def test_exact_limits():
    ids, edges = random_digraph_edges(12, 0.3, seed=0)
    g = SimpleDigraph.from_edges(edges, nodes=ids)
    assert g.n_edges > 20
    with pytest.raises(DataError):
        exact_spread_small(g, ids[:1], 0.1)
    with pytest.raises(DataError):
        exact_spread_small(triangle(), ["zz"], 0.1)


@pytest.mark.parametrize("seed", range(8))
def test_exact_matches_live_edge_oracle(seed):
    ids, edges = random_digraph_edges(6, 0.3, seed=seed, max_weight=3)
    g = SimpleDigraph.from_edges(edges, nodes=ids)
    p = Fraction(1, 3)
    seeds = ids[:2]
    assert exact_spread_small(g, seeds, p) == oracles.live_edge_spread(ids, edges, seeds, p)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 1000), st.fractions(0, 1, max_denominator=10), st.fractions(0, 1, max_denominator=10))
def test_exact_monotone(seed, p, q):
    ids, edges = random_digraph_edges(6, 0.3, seed=seed, max_weight=2)
    g = SimpleDigraph.from_edges(edges, nodes=ids)
    lo, hi = sorted((p, q))
    assert exact_spread_small(g, ids[:1], lo) <= exact_spread_small(g, ids[:1], hi)
    assert exact_spread_small(g, ids[:1], hi) <= exact_spread_small(g, ids[:2], hi)


def test_reproducible_across_threads_and_backends(monkeypatch):
    ids, edges = random_digraph_edges(60, 0.06, seed=9, max_weight=2)
    g = SimpleDigraph.from_edges(edges, nodes=ids)
    cfg = CascadeConfig(p=0.2, runs=500, seed=42)
    results = []
    for threads in ("1", "3"):
        monkeypatch.setenv("DISCOURSE_GRAPH_THREADS", threads)
        for impl in kernels.backends().values():
            r = simulate_ic(g, ids[:3], cfg, backend=impl)
            results.append((r.mean, r.std))
    assert len(set(results)) == 1
    other = simulate_ic(g, ids[:3], CascadeConfig(p=0.2, runs=500, seed=43))
    assert (other.mean, other.std) != results[0]


def test_compare_strategies_and_report(tmp_path):
    ids, edges = random_digraph_edges(80, 0.05, seed=5)
    g = SimpleDigraph.from_edges(edges, nodes=ids)
    res = compare_strategies(g, 5, CascadeConfig(p=0.1, runs=200, seed=1), random_draws=4)
    assert [r.tag for r in res] == ["voterank", "degree", "random"]
    assert res[2].runs == 800
    assert all(r.mean >= 5 for r in res)
    assert write_cascade_report(tmp_path / "c.csv", res, 5) == 3
    assert (tmp_path / "c.csv").read_text().splitlines()[0] == "strategy,r,mean_spread,std,runs,seed"


def test_stderr():
    r = simulate_ic(triangle(), ["a"], CascadeConfig(p=0.5, runs=400, seed=3))
    assert r.stderr == pytest.approx(r.std / 20)
    assert np.isfinite(r.mean)
