from __future__ import annotations

import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from discourse_graph.errors import DataError, RecordError
from discourse_graph.ingest import (
    ZWNJ,
    TweetRecord,
    canonical_form,
    canonical_token,
    extract_hashtags,
    format_timestamp,
    is_bare_punctuation,
    normalize_text,
    parse_records,
    parse_timestamp,
    serialize_record,
    tokenize,
    write_records,
)
from discourse_graph.synthetic import corpus_lines

persian_text = st.text(
    alphabet=st.sampled_from(list("ابپتکگیيكـًٌٍَُِّ #_،!؟.() ‌abcXYZ019\t\n-«»")),
    max_size=60,
)


@given(persian_text)
def test_normalize_idempotent(raw):
    once = normalize_text(raw)
    assert normalize_text(once) == once


@given(persian_text)
def test_normalize_matches_oracle(raw):
    assert normalize_text(raw) == oracles.normalize(raw)


def test_normalize_folds_arabic_letters():
    assert normalize_text("كتاب عربي") == "کتاب عربی"
    assert normalize_text("سـلام") == "سلام"
    assert normalize_text("كَتَبَ") == "کتب"


def test_normalize_keeps_zwnj():
    word = "می" + ZWNJ + "خواهم"
    assert normalize_text(word) == word
    assert tokenize(word) == [word]


@settings(max_examples=300)
@given(st.text(max_size=40))
def test_tokenize_matches_character_oracle(text):
    assert tokenize(text) == oracles.split_tokens(text)


@pytest.mark.parametrize(
    "text, tokens",
    [
        ("#Covid_19 in Iran!", ["#covid_19", "in", "iran"]),
        ("a#b", ["a", "#b"]),
        ("# alone", ["#", "alone"]),
        ("کرونا،ایران", ["کرونا", "ایران"]),
        ("«خانه»", ["خانه"]),
        ("", []),
    ],
)
def test_tokenize_cases(text, tokens):
    assert tokenize(text) == tokens


def test_canonical_forms():
    assert canonical_token("#stay_home") == "stay" + ZWNJ + "home"
    assert canonical_token("word") == "word"
    assert canonical_form("  #Stay_Home ") == "stay" + ZWNJ + "home"
    assert canonical_form("كتاب") == "کتاب"


def test_extract_hashtags_skips_bare_hash():
    assert extract_hashtags(["#", "#a_b", "x", "#a_b"]) == ["a" + ZWNJ + "b"] * 2


@pytest.mark.parametrize("token, bare", [("!!", True), ("...", True), ("a!", False), ("۱۲", False), ("+", True)])
def test_is_bare_punctuation(token, bare):
    assert is_bare_punctuation(token) is bare


@pytest.mark.parametrize(
    "value, expected",
    [
        ("2020-01-25T00:00:00Z", 1579910400),
        ("2020-01-25T03:30:00+03:30", 1579910400),
        ("2020-01-24T20:00:00-04:00", 1579910400),
        ("2020-01-25T00:00:00.999Z", 1579910400),
    ],
)
def test_parse_timestamp(value, expected):
    assert parse_timestamp(value) == expected


@pytest.mark.parametrize("value", ["2020-01-25", "2020-13-01T00:00:00Z", "yesterday", "2020-01-25T00:00:00"])
def test_parse_timestamp_rejects(value):
    with pytest.raises(ValueError):
        parse_timestamp(value)


@given(st.integers(min_value=0, max_value=4_102_444_800))
def test_timestamp_round_trip(ts):
    assert parse_timestamp(format_timestamp(ts)) == ts


record_strategy = st.builds(
    lambda tid, uid, ts, text, rt: TweetRecord(
        tid, uid, ts, normalize_text(text), tuple(extract_hashtags(tokenize(normalize_text(text)))),
        rt, None if rt is None else "o" + tid,
    ),
    st.text("abc0123", min_size=1, max_size=8),
    st.text("uvw9", min_size=1, max_size=5),
    st.integers(0, 2_000_000_000),
    persian_text,
    st.one_of(st.none(), st.text("xyz", min_size=1, max_size=4)),
)


@given(record_strategy)
def test_serialize_round_trip(rec):
    back = parse_records([serialize_record(rec)], strict=True)
    assert back == [rec]


def test_write_records_round_trip(demo_records):
    buf = io.StringIO()
    write_records(demo_records[:200], buf)
    assert parse_records(buf.getvalue().splitlines(), strict=True) == demo_records[:200]


def test_parse_matches_oracle_on_synthetic_stream():
    lines = corpus_lines(1000, n_users=50, seed=3)
    records = parse_records(lines, strict=True)
    assert len(records) == 1000
    for line, rec in zip(lines, records):
        obj = json.loads(line)
        text = oracles.normalize(obj["text"])
        assert rec.tweet_id == obj["tweet_id"]
        assert rec.user_id == obj["user_id"]
        assert rec.text == text
        assert list(rec.hashtags) == oracles.scan_hashtags(oracles.split_tokens(text))
        assert rec.retweet_of_user == obj.get("retweeted_user_id")
        assert rec.retweet_of_tweet == obj.get("retweeted_tweet_id")
        assert format_timestamp(rec.timestamp) == obj["created_at"]


def _line(**kw):
    obj = {"tweet_id": "1", "user_id": "u", "created_at": "2020-02-01T00:00:00Z", "text": "سلام"}
    obj.update(kw)
    return json.dumps({k: v for k, v in obj.items() if v is not ...}, ensure_ascii=False)


@pytest.mark.parametrize(
    "line",
    [
        "{not json",
        "[1, 2]",
        _line(tweet_id=...),
        _line(user_id=""),
        _line(created_at="soon"),
        _line(text=5),
        _line(retweeted_user_id="a"),
        _line(hashtags="x"),
        _line(hashtags=["#"]),
    ],
)
def test_malformed_lines(line):
    errors = []
    assert parse_records([line], errors=errors) == []
    assert len(errors) == 1 and errors[0].lineno == 1
    with pytest.raises(RecordError):
        parse_records([line], strict=True)


def test_skip_and_collect_keeps_good_lines():
    lines = [_line(tweet_id="1"), "garbage", "", _line(tweet_id="2")]
    errors = []
    recs = parse_records(lines, errors=errors)
    assert [r.tweet_id for r in recs] == ["1", "2"]
    assert [e.lineno for e in errors] == [2]


def test_duplicate_tweet_id_is_fatal():
    with pytest.raises(DataError):
        parse_records([_line(), _line()])


def test_explicit_hashtags_are_canonical():
    (rec,) = parse_records([_line(text="x", hashtags=["#Stay_Home", "ماندن"])], strict=True)
    assert rec.hashtags == ("stay" + ZWNJ + "home", "ماندن")


def test_bytes_input():
    (rec,) = parse_records([_line(text="كتاب").encode("utf-8")], strict=True)
    assert rec.text == "کتاب"
