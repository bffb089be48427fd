"""Episode schedule and per-user discourse/polarity profiles.

Reports produced here are plot-ready tables: the per-episode discourse
evolution of a cohort and the per-user activity scatter.
"""

from __future__ import annotations

import bisect
import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ._csvio import write_csv
from .errors import ConfigError, DataError
from .ingest import TweetRecord, format_timestamp, parse_timestamp, tokenize
from .lexicon import Lexicon, PolarityLexicon, Tonality, classify_tokens, polarity_score

__all__ = [
    "EpisodeSchedule",
    "UserEpisodeProfile",
    "Evolution",
    "ScatterPoint",
    "DEFAULT_START",
    "DEFAULT_END",
    "assign_episode",
    "build_profiles",
    "discourse_evolution",
    "activity_scatter",
    "write_profiles",
    "write_evolution",
    "write_scatter",
]

DEFAULT_START = "2020-01-25T00:00:00Z"
DEFAULT_END = "2020-05-15T00:00:00Z"
AGGREGATE_USER = "*"


@dataclass(frozen=True)
class EpisodeSchedule:
    """Half-open intervals ``[b[k], b[k+1])`` over UTC epoch seconds."""

    boundaries: tuple[int, ...]

    def __post_init__(self):
        b = self.boundaries
        if len(b) < 2:
            raise ConfigError("an episode schedule needs at least two boundaries")
        if any(b[i] >= b[i + 1] for i in range(len(b) - 1)):
            raise ConfigError("episode boundaries must be strictly increasing")

    @property
    def n_episodes(self) -> int:
        return len(self.boundaries) - 1

    @classmethod
    def equal(cls, start: int, end: int, n: int = 8) -> "EpisodeSchedule":
        if n < 1 or end <= start:
            raise ConfigError("invalid equal-interval schedule")
        span = end - start
        return cls(tuple(start + (span * k) // n for k in range(n + 1)))

    @classmethod
    def default(cls) -> "EpisodeSchedule":
        """Eight equal episodes, late January to mid May 2020."""
        return cls.equal(parse_timestamp(DEFAULT_START), parse_timestamp(DEFAULT_END), 8)

    @classmethod
    def load(cls, path) -> "EpisodeSchedule":
        if not os.path.isfile(path):
            raise ConfigError(f"schedule file not found: {path}")
        with open(path, encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON: {exc.msg}") from None
        if not isinstance(raw, list) or not all(isinstance(v, str) for v in raw):
            raise ConfigError(f"{path}: expected a JSON array of RFC 3339 strings")
        try:
            return cls(tuple(parse_timestamp(v) for v in raw))
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None

    def to_json(self) -> list[str]:
        return [format_timestamp(b) for b in self.boundaries]


def assign_episode(t: int, schedule: EpisodeSchedule) -> Optional[int]:
    """Index ``k`` with ``b[k] <= t < b[k+1]``, or ``None`` outside the schedule."""
    b = schedule.boundaries
    if t < b[0] or t >= b[-1]:
        return None
    return bisect.bisect_right(b, t) - 1


@dataclass
class UserEpisodeProfile:
    user: str
    episode: int
    counts: dict
    tonality: Tonality
    posts: int
    hashtags: int


def build_profiles(
    records: Iterable[TweetRecord],
    lexicons: Sequence[Lexicon],
    polarity: PolarityLexicon,
    schedule: EpisodeSchedule,
) -> list[UserEpisodeProfile]:
    """One profile per (user, episode) with at least one post.

    Discourse counts are summed over the user's posts in the episode; the
    tonality is scored on all their tokens of that episode together. Rows
    are sorted by (user, episode).
    """
    names = [lex.name for lex in lexicons]
    acc: dict = {}
    for rec in records:
        k = assign_episode(rec.timestamp, schedule)
        if k is None:
            continue
        key = (rec.user_id, k)
        slot = acc.get(key)
        if slot is None:
            slot = acc[key] = [dict.fromkeys(names, 0), 0, 0, 0, 0, 0]
        tokens = tokenize(rec.text)
        for name, n in classify_tokens(tokens, lexicons).items():
            slot[0][name] += n
        tone = polarity_score(tokens, polarity)
        slot[1] += tone.positive_count
        slot[2] += tone.negative_count
        slot[3] += tone.neutral_count
        slot[4] += 1
        slot[5] += len(rec.hashtags)
    out = []
    for (user, k) in sorted(acc):
        counts, pos, neg, neu, posts, tags = acc[(user, k)]
        out.append(UserEpisodeProfile(user, k, counts, Tonality(pos, neg, neu), posts, tags))
    return out


@dataclass
class Evolution:
    """Per-episode discourse totals for a cohort.

    ``total[k][name]`` sums the cohort; ``per_user[u][k][name]`` holds each
    member. Values are raw counts, or counts per post when normalized.
    """

    lexicons: list
    n_episodes: int
    users: list
    total: list = field(default_factory=list)
    per_user: dict = field(default_factory=dict)
    normalized: bool = False

    def rows(self):
        """``(episode, user, lexicon, value)`` rows, cohort aggregate as user ``*``."""
        for k in range(self.n_episodes):
            for name in self.lexicons:
                yield k, AGGREGATE_USER, name, self.total[k][name]
            for u in self.users:
                for name in self.lexicons:
                    yield k, u, name, self.per_user[u][k][name]


def discourse_evolution(
    profiles: Iterable[UserEpisodeProfile],
    users: Sequence[str],
    lexicon_names: Sequence[str],
    n_episodes: int,
    normalize: bool = False,
) -> Evolution:
    """Discourse intensity per episode for the selected users.

    With ``normalize`` each value is divided by the posts behind it (zero
    when there are none); otherwise values are raw dictionary-word counts.
    """
    if not users:
        raise DataError("discourse_evolution needs at least one user")
    names = list(lexicon_names)
    wanted = dict.fromkeys(users)
    per_user = {u: [dict.fromkeys(names, 0) for _ in range(n_episodes)] for u in wanted}
    posts = {u: [0] * n_episodes for u in wanted}
    for p in profiles:
        if p.user not in wanted:
            continue
        row = per_user[p.user][p.episode]
        for name in names:
            row[name] += p.counts.get(name, 0)
        posts[p.user][p.episode] += p.posts
    total = [dict.fromkeys(names, 0) for _ in range(n_episodes)]
    total_posts = [0] * n_episodes
    for u in wanted:
        for k in range(n_episodes):
            total_posts[k] += posts[u][k]
            for name in names:
                total[k][name] += per_user[u][k][name]
    if normalize:
        def scale(row, n):
            return {name: (v / n if n else 0.0) for name, v in row.items()}

        total = [scale(total[k], total_posts[k]) for k in range(n_episodes)]
        per_user = {u: [scale(rows[k], posts[u][k]) for k in range(n_episodes)] for u, rows in per_user.items()}
    return Evolution(names, n_episodes, list(wanted), total, per_user, normalize)


@dataclass(frozen=True)
class ScatterPoint:
    user: str
    first: int
    second: int
    tonality: str


def activity_scatter(
    profiles: Iterable[UserEpisodeProfile],
    users: Sequence[str],
    lexicon_names: Sequence[str],
) -> list[ScatterPoint]:
    """Whole-period totals of the two discourses plus tonality, per user."""
    names = list(lexicon_names)
    if len(names) != 2:
        raise DataError(f"activity scatter needs exactly two lexicons, got {len(names)}")
    wanted = dict.fromkeys(users)
    tot = {u: [0, 0, 0, 0, 0] for u in wanted}
    for p in profiles:
        t = tot.get(p.user)
        if t is None:
            continue
        t[0] += p.counts.get(names[0], 0)
        t[1] += p.counts.get(names[1], 0)
        t[2] += p.tonality.positive_count
        t[3] += p.tonality.negative_count
        t[4] += p.tonality.neutral_count
    return [ScatterPoint(u, t[0], t[1], Tonality(t[2], t[3], t[4]).label) for u, t in tot.items()]


def write_profiles(path, profiles: Sequence[UserEpisodeProfile], lexicon_names: Sequence[str]) -> int:
    names = list(lexicon_names)
    header = ["user", "episode", *names, "positive", "negative", "neutral", "tonality", "posts", "hashtags"]
    rows = (
        [p.user, p.episode, *(p.counts[n] for n in names), p.tonality.positive_count,
         p.tonality.negative_count, p.tonality.neutral_count, p.tonality.label, p.posts, p.hashtags]
        for p in profiles
    )
    return write_csv(path, header, rows)


def write_evolution(path, evolution: Evolution) -> int:
    return write_csv(path, ["episode", "user", "lexicon", "count"], evolution.rows())


def write_scatter(path, points: Iterable[ScatterPoint]) -> int:
    # Column names are fixed; they carry the first and second configured lexicon.
    return write_csv(
        path,
        ["user", "gov_count", "community_count", "tonality"],
        ((p.user, p.first, p.second, p.tonality) for p in points),
    )
