from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from discourse_graph.errors import DataError
from discourse_graph.graph import (
    LayeredGraph,
    SimpleDigraph,
    aggregate,
    build_layered_graph,
    graph_stats,
    read_layered_csv,
    write_aggregated_csv,
    write_layered_csv,
)
from discourse_graph.ingest import TweetRecord
from discourse_graph.lexicon import Lexicon
from discourse_graph.profiles import EpisodeSchedule

edge_lists = st.lists(
    st.tuples(st.sampled_from("abcdef"), st.sampled_from("abcdef"), st.integers(1, 5)).filter(lambda e: e[0] != e[1]),
    max_size=25,
)


@given(edge_lists)
def test_simple_digraph_merges_duplicates(triples):
    g = SimpleDigraph.from_edges(triples, nodes="abcdef")
    expected = Counter()
    for i, j, w in triples:
        expected[(i, j)] += w
    assert g.edge_dict() == dict(expected)
    assert g.total_weight == sum(w for *_, w in triples)
    assert list(g.nodes) == sorted("abcdef")
    for u in range(g.n_nodes):
        row = g.targets[g.indptr[u]:g.indptr[u + 1]]
        assert np.all(np.diff(row) > 0)


def test_simple_digraph_rejects_bad_edges():
    with pytest.raises(DataError):
        SimpleDigraph.from_edges([("a", "a", 1)])
    with pytest.raises(DataError):
        SimpleDigraph.from_edges([("a", "b", 0)])


def test_degrees():
    g = SimpleDigraph.from_edges({("a", "b"): 3, ("a", "c"): 1, ("b", "c"): 2})
    assert g.out_degree().tolist() == [2, 1, 0]
    assert g.out_degree(weighted=True).tolist() == [4, 2, 0]
    assert g.in_degree().tolist() == [0, 1, 2]
    assert g.in_degree(weighted=True).tolist() == [0, 3, 3]
    assert g.successors("a") == ["b", "c"]


def test_star_stats():
    g = SimpleDigraph.from_edges({("h", x): 1 for x in "abc"})
    s = graph_stats(g)
    assert (s.nodes, s.edges, s.total_weight) == (4, 3, 3)
    assert s.mean_out_degree == 0.75


def _schedule():
    return EpisodeSchedule((0, 100, 200, 300))


def test_drop_counters_and_order():
    lex = [Lexicon("g", frozenset({"x"})), Lexicon("c", frozenset({"y"}))]
    recs = [
        TweetRecord("1", "b", 50, "x", (), "a", "o1"),
        TweetRecord("2", "b", 60, "x", (), "a", "o2"),
        TweetRecord("3", "c", 150, "y", (), "a", "o3"),
        TweetRecord("4", "c", 150, "plain"),
        TweetRecord("5", "a", 400, "x", (), "a", "o5"),
        TweetRecord("6", "a", 250, "x", (), "a", "o6"),
        TweetRecord("7", "d", 250, "x y", (), "a", "o7"),
    ]
    g = build_layered_graph(recs, lex, _schedule())
    assert g.edges == Counter({("g", 0, "a", "b"): 2, ("c", 1, "a", "c"): 1, ("none", 2, "a", "d"): 1})
    # out-of-schedule is checked before self-retweet
    assert g.dropped == {"no_retweet": 1, "out_of_schedule": 1, "self_retweet": 1}
    assert g.nodes == {"a", "b", "c", "d"}
    assert g.total_weight + sum(g.dropped.values()) == len(recs)
    agg = aggregate(g)
    assert agg.edge_dict() == {("a", "b"): 2, ("a", "c"): 1, ("a", "d"): 1}
    assert aggregate(g, layers=["g"]).edge_dict() == {("a", "b"): 2}
    only_ep1 = aggregate(g, episodes=[1])
    assert only_ep1.edge_dict() == {("a", "c"): 1}
    assert only_ep1.n_nodes == 4


def test_layered_graph_group_by_oracle(demo_records, demo_config):
    from discourse_graph.lexicon import load_lexicon

    lex = [load_lexicon(demo_config.path(p), n) for n, p in demo_config.lexicons.items()]
    sched = EpisodeSchedule.load(demo_config.path(demo_config.schedule))
    g = build_layered_graph(demo_records, lex, sched)
    entries = {x.name: x.entries for x in lex}
    brute = Counter()
    for rec in demo_records:
        k = oracles.episode_of(rec.timestamp, sched.boundaries)
        if rec.retweet_of_user is None or k is None or rec.retweet_of_user == rec.user_id:
            continue
        label = oracles.discourse_label(oracles.count_lexicons(oracles.split_tokens(rec.text), entries))
        brute[(label, k, rec.retweet_of_user, rec.user_id)] += 1
    assert g.edges == brute
    shuffled = list(demo_records)
    np.random.default_rng(1).shuffle(shuffled)
    assert build_layered_graph(shuffled, lex, sched).edges == g.edges


def test_csv_round_trip(tmp_path):
    g = LayeredGraph()
    g.edges.update({("g", 0, "a", "b"): 2, ("none", 3, "b", "c"): 5})
    g.nodes.update("abc")
    assert write_layered_csv(tmp_path / "l.csv", g) == 2
    back = read_layered_csv(tmp_path / "l.csv")
    assert back.edges == g.edges and back.nodes == g.nodes
    assert write_aggregated_csv(tmp_path / "a.csv", aggregate(g)) == 2
    assert (tmp_path / "a.csv").read_text().splitlines()[0] == "author,retweeter,weight"


def test_read_layered_csv_rejects(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("layer,episode,author,retweeter,weight\ng,0,a,a,1\n")
    with pytest.raises(DataError):
        read_layered_csv(path)
    path.write_text("a,b\n")
    with pytest.raises(DataError):
        read_layered_csv(path)
