"""Seeded synthetic corpora for tests, benchmarks and demos.

The real crawl is not redistributable, so the pipeline is exercised on
generated Persian-script posts whose ground truth is known.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .ingest import format_timestamp
from .profiles import EpisodeSchedule

__all__ = [
    "Vocabulary",
    "make_vocabulary",
    "corpus_lines",
    "write_demo_corpus",
    "scale_lines",
    "random_digraph_edges",
]

_LETTERS = "ابپتثجچحخدذرزژسشصضطظعغفقکگلمنوهی"
# Arabic variants that normalization folds back to Persian
_ARABIC_VARIANT = {"ی": "ي", "ک": "ك"}


@dataclass
class Vocabulary:
    government: list
    community: list
    positive: list
    negative: list
    stopwords: list
    filler: list


def _words(rng: np.random.Generator, count: int, taken: set) -> list:
    out = []
    while len(out) < count:
        n = int(rng.integers(3, 7))
        w = "".join(_LETTERS[i] for i in rng.integers(0, len(_LETTERS), n))
        if w not in taken:
            taken.add(w)
            out.append(w)
    return out


def make_vocabulary(seed: int = 0, size: int = 100) -> Vocabulary:
    """Disjoint word lists; two discourse dictionaries of ``size`` words."""
    rng = np.random.default_rng([seed, 1])
    taken: set = set()
    return Vocabulary(
        government=_words(rng, size, taken),
        community=_words(rng, size, taken),
        positive=_words(rng, 40, taken),
        negative=_words(rng, 40, taken),
        stopwords=_words(rng, 20, taken),
        filler=_words(rng, 300, taken),
    )


def _arabicize(word: str, rng: np.random.Generator) -> str:
    if rng.random() < 0.3:
        return "".join(_ARABIC_VARIANT.get(ch, ch) for ch in word)
    return word


def corpus_lines(
    n_records: int,
    n_users: int = 400,
    seed: int = 0,
    vocab: Vocabulary | None = None,
    schedule: EpisodeSchedule | None = None,
    retweet_fraction: float = 0.6,
) -> list:
    """JSON lines of a mixed post/retweet stream.

    About 3% of posts fall outside the schedule and some retweets are
    self-retweets, so drop counters are exercised.
    """
    rng = np.random.default_rng([seed, 2])
    vocab = vocab or make_vocabulary(seed)
    schedule = schedule or EpisodeSchedule.default()
    b0, b1 = schedule.boundaries[0], schedule.boundaries[-1]
    span = b1 - b0
    users = [f"u{i:05d}" for i in range(n_users)]
    # heavy-tailed popularity for retweeted authors
    pop = rng.pareto(1.5, n_users) + 1.0
    pop /= pop.sum()
    # per-user leaning towards the first discourse
    lean = rng.beta(2.0, 2.0, n_users)
    pools = [vocab.government, vocab.community, vocab.positive, vocab.negative, vocab.stopwords, vocab.filler]
    lines = []
    for k in range(n_records):
        uid = int(rng.integers(n_users))
        if rng.random() < 0.03:
            ts = int(b0 - rng.integers(1, 86400 * 5)) if rng.random() < 0.5 else int(b1 + rng.integers(0, 86400 * 5))
        else:
            ts = int(b0 + rng.integers(0, span))
        words = []
        for _ in range(int(rng.integers(3, 12))):
            r = rng.random()
            if r < 0.25:
                pool = pools[0] if rng.random() < lean[uid] else pools[1]
            elif r < 0.35:
                pool = pools[2]
            elif r < 0.45:
                pool = pools[3]
            elif r < 0.6:
                pool = pools[4]
            else:
                pool = pools[5]
            words.append(_arabicize(pool[int(rng.integers(len(pool)))], rng))
        for _ in range(int(rng.integers(0, 3))):
            a, b = vocab.filler[int(rng.integers(len(vocab.filler)))], vocab.government[int(rng.integers(100))]
            words.append("#" + (a + "_" + b if rng.random() < 0.5 else b))
        if rng.random() < 0.2:
            words.append(rng.choice(["،", "!", "؟", "..."]))
        obj = {
            "tweet_id": f"t{seed}-{k}",
            "user_id": users[uid],
            "created_at": format_timestamp(ts),
            "text": " ".join(words),
        }
        if rng.random() < retweet_fraction:
            author = users[int(rng.choice(n_users, p=pop))] if rng.random() > 0.02 else users[uid]
            obj["retweeted_user_id"] = author
            obj["retweeted_tweet_id"] = f"orig-{int(rng.integers(10**9))}"
        lines.append(json.dumps(obj, ensure_ascii=False))
    return lines


def write_demo_corpus(directory, n_records: int = 10_000, seed: int = 0, n_users: int = 400) -> str:
    """Write a corpus, lexicons, schedule and pipeline config; return the config path."""
    os.makedirs(directory, exist_ok=True)
    vocab = make_vocabulary(seed)
    schedule = EpisodeSchedule.default()

    def dump(name, lines):
        with open(os.path.join(directory, name), "w", encoding="utf-8", newline="\n") as fh:
            for line in lines:
                fh.write(line + "\n")

    dump("tweets.jsonl", corpus_lines(n_records, n_users, seed, vocab, schedule))
    dump("government.txt", ["% government-based discourse", *vocab.government])
    dump("community.txt", ["% community-based discourse", *vocab.community])
    dump("polarity.tsv", [f"{w}\tpos" for w in vocab.positive] + [f"{w}\tneg" for w in vocab.negative])
    dump("stopwords.txt", vocab.stopwords)
    with open(os.path.join(directory, "schedule.json"), "w", encoding="utf-8") as fh:
        json.dump(schedule.to_json(), fh, indent=2)
        fh.write("\n")
    config = {
        "input": "tweets.jsonl",
        "lexicons": {"government": "government.txt", "community": "community.txt"},
        "polarity": "polarity.tsv",
        "stopwords": "stopwords.txt",
        "schedule": "schedule.json",
        "voterank_r": 50,
        "active_n": 50,
        "cohort": "voterank",
        "cascade": {"p": 0.05, "runs": 500},
        "gmm": {"k_min": 1, "k_max": 4, "restarts": 2},
        "transform": "log1p",
        "normalize": False,
        "out": "out",
        "seed": seed,
    }
    path = os.path.join(directory, "config.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2)
        fh.write("\n")
    return path


def scale_lines(n_nodes: int, n_edges: int, seed: int = 0, schedule: EpisodeSchedule | None = None):
    """Retweet stream with exactly ``n_edges`` distinct author->retweeter pairs.

    Returns ``(lines, truth)`` where ``truth`` holds the node and edge counts
    and the total weight the aggregated graph must reproduce.
    """
    rng = np.random.default_rng([seed, 3])
    schedule = schedule or EpisodeSchedule.default()
    b0, b1 = schedule.boundaries[0], schedule.boundaries[-1]
    weights = rng.pareto(1.2, n_nodes) + 1.0
    weights /= weights.sum()
    pairs = np.empty(0, dtype=np.int64)
    while pairs.size < n_edges:
        m = int((n_edges - pairs.size) * 1.2) + 1000
        a = rng.choice(n_nodes, size=m, p=weights)
        b = rng.integers(0, n_nodes, m)
        keep = a != b
        codes = a[keep] * n_nodes + b[keep]
        pairs = np.unique(np.concatenate([pairs, codes]))
    pairs = rng.permutation(pairs)[:n_edges]
    authors, retweeters = np.divmod(pairs, n_nodes)
    ts = rng.integers(b0, b1, n_edges)
    ids = [f"n{i}" for i in range(n_nodes)]
    lines = [
        '{"tweet_id":"s%d","user_id":"%s","created_at":"%s","text":"rt","retweeted_user_id":"%s","retweeted_tweet_id":"o%d"}'
        % (k, ids[j], format_timestamp(int(t)), ids[i], k)
        for k, (i, j, t) in enumerate(zip(authors.tolist(), retweeters.tolist(), ts.tolist()))
    ]
    truth = {
        "nodes": int(np.unique(np.concatenate([authors, retweeters])).size),
        "edges": int(n_edges),
        "total_weight": int(n_edges),
    }
    return lines, truth


def random_digraph_edges(n: int, p_edge: float, seed: int, max_weight: int = 1) -> tuple:
    """Erdos-Renyi digraph on ``n`` nodes; returns ``(node_ids, {(i, j): w})``."""
    rng = np.random.default_rng(seed)
    A = rng.random((n, n)) < p_edge
    np.fill_diagonal(A, False)
    src, dst = np.nonzero(A)
    w = rng.integers(1, max_weight + 1, src.size)
    ids = [f"v{i:03d}" for i in range(n)]
    return ids, {(ids[i], ids[j]): int(x) for i, j, x in zip(src.tolist(), dst.tolist(), w.tolist())}
