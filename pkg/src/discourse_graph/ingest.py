"""Tweet stream parsing, Persian text normalization and tokenization.

Input is JSON Lines, one post event per line::

    {"tweet_id": "1", "user_id": "u1", "created_at": "2020-02-01T10:00:00Z",
     "text": "...", "hashtags": ["..."],
     "retweeted_user_id": "u7", "retweeted_tweet_id": "99"}

``hashtags``, ``retweeted_user_id`` and ``retweeted_tweet_id`` are optional,
but the two retweet fields must appear together.
"""

from __future__ import annotations

import calendar
import functools
import json
import re
import sys
import time
import unicodedata
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Union

from .errors import DataError, RecordError

__all__ = [
    "ZWNJ",
    "TweetRecord",
    "TokenStream",
    "normalize_text",
    "tokenize",
    "extract_hashtags",
    "canonical_token",
    "canonical_hashtag",
    "canonical_form",
    "is_bare_punctuation",
    "parse_records",
    "parse_timestamp",
    "format_timestamp",
    "serialize_record",
    "read_records",
    "write_records",
]

ZWNJ = "\u200c"

# Arabic code points folded into their Persian forms; None deletes.
_NORMALIZE_TABLE = {
    0x064A: 0x06CC,  # ARABIC LETTER YEH -> FARSI YEH
    0x0643: 0x06A9,  # ARABIC LETTER KAF -> KEHEH
    0x0640: None,  # TATWEEL
    **{cp: None for cp in range(0x064B, 0x0653)},  # FATHATAN .. SUKUN
}

TokenStream = list  # list[str]; alias kept for signatures


@dataclass(frozen=True, slots=True)
class TweetRecord:
    """One normalized post event.

    ``timestamp`` is UTC seconds since the epoch. ``retweet_of_user`` and
    ``retweet_of_tweet`` are both set for retweets and both ``None`` otherwise.
    """

    tweet_id: str
    user_id: str
    timestamp: int
    text: str
    hashtags: tuple[str, ...] = ()
    retweet_of_user: Optional[str] = None
    retweet_of_tweet: Optional[str] = None

    @property
    def is_retweet(self) -> bool:
        return self.retweet_of_user is not None


def normalize_text(raw: str) -> str:
    """Fold Arabic letter variants to Persian, strip tatweel and harakat, NFC.

    ZWNJ is preserved. The function is idempotent.
    """
    return unicodedata.normalize("NFC", raw.translate(_NORMALIZE_TABLE))


@functools.lru_cache(maxsize=None)
def _punctuation_class() -> str:
    # Built from unicodedata so the tokenizer agrees with the interpreter's
    # Unicode tables rather than a third-party snapshot.
    ranges = []
    start = prev = None
    for cp in range(sys.maxunicode + 1):
        ch = chr(cp)
        is_p = unicodedata.category(ch).startswith("P") and ch not in "#_"
        if is_p:
            if start is None:
                start = cp
            prev = cp
        elif start is not None:
            ranges.append((start, prev))
            start = None
    if start is not None:
        ranges.append((start, prev))
    parts = []
    for lo, hi in ranges:
        parts.append(re.escape(chr(lo)) if lo == hi else f"{re.escape(chr(lo))}-{re.escape(chr(hi))}")
    return "".join(parts)


@functools.lru_cache(maxsize=None)
def _token_re() -> re.Pattern:
    body = rf"[^\s#{_punctuation_class()}]"
    # A '#' only binds as a token prefix; elsewhere it opens a new token.
    return re.compile(rf"#?{body}+|#")


def _lower_latin(token: str) -> str:
    if token.isascii():
        return token.lower()
    out = []
    for ch in token:
        if ch.isupper() and unicodedata.name(ch, "").startswith("LATIN"):
            out.append(ch.lower())
        else:
            out.append(ch)
    return "".join(out)


def tokenize(text: str) -> list[str]:
    """Split normalized text into tokens.

    Separators are Unicode whitespace and punctuation other than ``#`` and
    ``_``. ZWNJ joins word parts and stays inside tokens. Latin letters are
    lowercased.

    >>> tokenize("#Covid_19 in Iran!")
    ['#covid_19', 'in', 'iran']
    """
    return [_lower_latin(t) for t in _token_re().findall(text)]


def canonical_hashtag(tag: str) -> str:
    """Canonical hashtag form: no leading ``#``, ``_`` replaced by ZWNJ."""
    return tag.lstrip("#").replace("_", ZWNJ)


def canonical_token(token: str) -> str:
    """Form used for lexicon matching; hashtags lose '#' and map '_' to ZWNJ."""
    if token.startswith("#"):
        return canonical_hashtag(token)
    return token


def canonical_form(raw: str) -> str:
    """Normalize, lowercase Latin, and canonicalize a free-standing word."""
    return canonical_token(_lower_latin(normalize_text(raw.strip())))


def extract_hashtags(tokens: Iterable[str]) -> list[str]:
    """Return hashtags (canonical form) in token order, duplicates kept."""
    out = []
    for tok in tokens:
        if tok.startswith("#") and len(tok) > 1:
            out.append(canonical_hashtag(tok))
    return out


def is_bare_punctuation(token: str) -> bool:
    """True when the token carries no letter, mark or digit."""
    for ch in token:
        cat = unicodedata.category(ch)
        if cat[0] in "LMN":
            return False
    return True


_RFC3339 = re.compile(
    r"(\d{4})-(\d{2})-(\d{2})[Tt ](\d{2}):(\d{2}):(\d{2})(?:\.\d+)?([Zz]|[+-]\d{2}:\d{2})"
)


def parse_timestamp(value: str) -> int:
    """Parse an RFC 3339 instant to UTC epoch seconds (fraction truncated)."""
    m = _RFC3339.fullmatch(value)
    if m is None:
        raise ValueError(f"not an RFC 3339 timestamp: {value!r}")
    y, mo, d, h, mi, s = (int(g) for g in m.groups()[:6])
    if not (1 <= mo <= 12 and 1 <= d <= 31 and h < 24 and mi < 60 and s <= 60):
        raise ValueError(f"out-of-range field in timestamp: {value!r}")
    tz = m.group(7)
    offset = 0
    if tz not in ("Z", "z"):
        sign = 1 if tz[0] == "+" else -1
        offset = sign * (int(tz[1:3]) * 3600 + int(tz[4:6]) * 60)
    return calendar.timegm((y, mo, d, h, mi, s, 0, 0, 0)) - offset


def format_timestamp(ts: int) -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(ts))


def _require_str(obj: dict, key: str, lineno: int, required: bool = True) -> Optional[str]:
    value = obj.get(key)
    if value is None:
        if required:
            raise RecordError(lineno, f"missing field {key!r}")
        return None
    if not isinstance(value, str):
        raise RecordError(lineno, f"field {key!r} must be a string")
    return value


def _explicit_hashtag(raw: str, lineno: int) -> str:
    tag = canonical_hashtag(_lower_latin(normalize_text(raw)))
    if not tag or "#" in tag or any(ch.isspace() for ch in tag):
        raise RecordError(lineno, f"invalid hashtag {raw!r}")
    return tag


def _parse_line(line: Union[bytes, str], lineno: int) -> Optional[TweetRecord]:
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise RecordError(lineno, f"invalid UTF-8: {exc}") from None
    if not line.strip():
        return None
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(lineno, f"invalid JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise RecordError(lineno, "expected a JSON object")

    tweet_id = _require_str(obj, "tweet_id", lineno)
    user_id = _require_str(obj, "user_id", lineno)
    if not tweet_id:
        raise RecordError(lineno, "empty tweet_id")
    if not user_id:
        raise RecordError(lineno, "empty user_id")
    created = _require_str(obj, "created_at", lineno)
    try:
        ts = parse_timestamp(created)
    except ValueError as exc:
        raise RecordError(lineno, str(exc)) from None
    text = normalize_text(_require_str(obj, "text", lineno))

    rt_user = _require_str(obj, "retweeted_user_id", lineno, required=False)
    rt_tweet = _require_str(obj, "retweeted_tweet_id", lineno, required=False)
    if (rt_user is None) != (rt_tweet is None):
        raise RecordError(lineno, "retweeted_user_id and retweeted_tweet_id must appear together")
    if rt_user == "" or rt_tweet == "":
        raise RecordError(lineno, "empty retweet provenance")

    raw_tags = obj.get("hashtags")
    if raw_tags is None:
        hashtags = tuple(extract_hashtags(tokenize(text)))
    else:
        if not isinstance(raw_tags, list) or not all(isinstance(t, str) for t in raw_tags):
            raise RecordError(lineno, "hashtags must be an array of strings")
        hashtags = tuple(_explicit_hashtag(t, lineno) for t in raw_tags)

    return TweetRecord(tweet_id, user_id, ts, text, hashtags, rt_user, rt_tweet)


def parse_records(
    stream: Iterable[Union[bytes, str]],
    *,
    strict: bool = False,
    errors: Optional[list] = None,
) -> list[TweetRecord]:
    """Parse a JSON Lines tweet stream into records, in stream order.

    Parameters
    ----------
    stream : iterable of bytes or str
        Lines of the input, e.g. a file opened in binary mode.
    strict : bool
        Raise the first :class:`RecordError` instead of skipping the line.
    errors : list, optional
        Receives a :class:`RecordError` for every skipped line.

    Raises
    ------
    RecordError
        Malformed line when ``strict`` is set.
    DataError
        Duplicate ``tweet_id`` (always fatal).
    """
    records = []
    seen = set()
    for lineno, line in enumerate(stream, start=1):
        try:
            rec = _parse_line(line, lineno)
        except RecordError as exc:
            if strict:
                raise
            if errors is not None:
                errors.append(exc)
            continue
        if rec is None:
            continue
        if rec.tweet_id in seen:
            raise DataError(f"line {lineno}: duplicate tweet_id {rec.tweet_id!r}")
        seen.add(rec.tweet_id)
        records.append(rec)
    return records


def read_records(path, *, strict: bool = False, errors: Optional[list] = None) -> list[TweetRecord]:
    with open(path, "rb") as fh:
        return parse_records(fh, strict=strict, errors=errors)


def serialize_record(rec: TweetRecord) -> str:
    """One JSON line (no trailing newline) that parses back to ``rec``."""
    obj = {
        "tweet_id": rec.tweet_id,
        "user_id": rec.user_id,
        "created_at": format_timestamp(rec.timestamp),
        "text": rec.text,
        "hashtags": list(rec.hashtags),
    }
    if rec.retweet_of_user is not None:
        obj["retweeted_user_id"] = rec.retweet_of_user
        obj["retweeted_tweet_id"] = rec.retweet_of_tweet
    return json.dumps(obj, ensure_ascii=False)


def write_records(records: Iterable[TweetRecord], fh: IO[str]) -> None:
    for rec in records:
        fh.write(serialize_record(rec))
        fh.write("\n")
