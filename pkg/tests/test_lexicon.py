from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from discourse_graph.errors import ConfigError, DataError
from discourse_graph.ingest import ZWNJ, TweetRecord, canonical_token, is_bare_punctuation, tokenize
from discourse_graph.lexicon import (
    Lexicon,
    PolarityLexicon,
    Tonality,
    classify_post,
    classify_tokens,
    label_from_counts,
    load_lexicon,
    load_polarity,
    polarity_score,
    word_frequencies,
    write_frequencies,
)
from discourse_graph._csvio import read_csv
from discourse_graph.synthetic import make_vocabulary


@pytest.fixture
def vocab():
    return make_vocabulary(seed=7)


def test_load_lexicon_100_words(tmp_path, vocab):
    path = tmp_path / "gov.txt"
    path.write_text("% header\n\n" + "\n".join(vocab.government) + "\n" + vocab.government[0] + "\n", encoding="utf-8")
    lex = load_lexicon(path, "government")
    assert len(lex) == 100
    assert lex.entries == frozenset(vocab.government)


def test_load_lexicon_normalizes_entries(tmp_path):
    path = tmp_path / "x.txt"
    path.write_text("كتاب\n#Stay_Home\nCovid\n", encoding="utf-8")
    assert load_lexicon(path, "x").entries == {"کتاب", "stay" + ZWNJ + "home", "covid"}


def test_load_lexicon_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_lexicon(tmp_path / "missing.txt", "x")
    (tmp_path / "two.txt").write_text("two words\n", encoding="utf-8")
    with pytest.raises(DataError):
        load_lexicon(tmp_path / "two.txt", "x")
    (tmp_path / "empty.txt").write_text("% only a comment\n", encoding="utf-8")
    with pytest.raises(DataError):
        load_lexicon(tmp_path / "empty.txt", "x")


def test_load_polarity(tmp_path):
    path = tmp_path / "p.tsv"
    path.write_text("خوب\tpos\nبد\tneg\n", encoding="utf-8")
    pol = load_polarity(path)
    assert pol.positive == {"خوب"} and pol.negative == {"بد"}
    path.write_text("خوب\tpos\nخوب\tneg\n", encoding="utf-8")
    with pytest.raises(DataError):
        load_polarity(path)
    path.write_text("خوب pos\n", encoding="utf-8")
    with pytest.raises(DataError):
        load_polarity(path)


@pytest.mark.parametrize(
    "counts, label",
    [
        ({"a": 0, "b": 0}, "none"),
        ({"a": 2, "b": 2}, "none"),
        ({"a": 3, "b": 1}, "a"),
        ({"a": 0, "b": 1}, "b"),
        ({"a": 1, "b": 3, "c": 3}, "none"),
        ({}, "none"),
    ],
)
def test_label_from_counts(counts, label):
    assert label_from_counts(counts) == label


words = st.sampled_from(["a", "b", "c", "d", "#a", "#c_d", "e", "!"])


@given(st.lists(words, max_size=30))
def test_classify_tokens_matches_oracle(tokens):
    lexicons = [Lexicon("g", frozenset({"a", "b"})), Lexicon("c", frozenset({"c" + ZWNJ + "d", "e", "a"}))]
    got = classify_tokens(tokens, lexicons)
    assert got == oracles.count_lexicons(tokens, {"g": {"a", "b"}, "c": {"c" + ZWNJ + "d", "e", "a"}})
    assert label_from_counts(got) == oracles.discourse_label(got)


@given(st.lists(words, max_size=30))
def test_polarity_partition(tokens):
    pol = PolarityLexicon(frozenset({"a", "c" + ZWNJ + "d"}), frozenset({"b"}))
    tone = polarity_score(tokens, pol)
    assert tone.positive_count + tone.negative_count + tone.neutral_count == len(tokens)
    assert min(tone.positive_count, tone.negative_count, tone.neutral_count) >= 0
    assert (tone.positive_count, tone.negative_count, tone.neutral_count) == oracles.polarity_counts(
        tokens, pol.positive, pol.negative
    )
    assert tone.label == oracles.tonality_label(tone.positive_count, tone.negative_count)


@pytest.mark.parametrize("pos, neg, label", [(2, 1, "positive"), (1, 2, "negative"), (1, 1, "neutral"), (0, 0, "neutral")])
def test_tonality_label(pos, neg, label):
    assert Tonality(pos, neg, 0).label == label


def test_classify_post_uses_hashtags_in_text():
    lex = [Lexicon("g", frozenset({"x"})), Lexicon("c", frozenset({"y"}))]
    rec = TweetRecord("1", "u", 0, "#x y #x", ("x", "x"))
    assert classify_post(rec, lex) == "g"
    assert classify_post(TweetRecord("2", "u", 0, "x y"), lex) == "none"


def test_word_frequencies_matches_counter(demo_records):
    stop = frozenset(make_vocabulary(seed=0).stopwords)
    freqs = word_frequencies(demo_records[:2000], stop)
    brute = Counter()
    for rec in demo_records[:2000]:
        for tok in oracles.split_tokens(rec.text):
            form = oracles.canonical(tok)
            if form and form not in stop and not is_bare_punctuation(form):
                brute[form] += 1
    assert dict(freqs) == dict(brute)
    keys = [(-n, t) for t, n in freqs]
    assert keys == sorted(keys)
    assert not any(t in stop for t, _ in freqs)


def test_write_frequencies(tmp_path):
    n = write_frequencies(tmp_path / "f.csv", [("a", 3), ("b", 1)])
    assert n == 2
    assert read_csv(tmp_path / "f.csv") == (["token", "count"], [["a", "3"], ["b", "1"]])


def test_hashtag_and_plain_word_share_a_count():
    lex = [Lexicon("g", frozenset({canonical_token("#stay_home")}))]
    assert classify_tokens(tokenize("#stay_home stay" + ZWNJ + "home"), lex) == {"g": 2}
