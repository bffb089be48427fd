"""Discourse dynamics on retweet networks.

Build a weighted multi-layer retweet graph from a tweet stream, elect
influential spreaders with VoteRank, profile users against discourse and
polarity lexicons per episode, and cluster them with BIC-selected Gaussian
mixtures.
"""

__version__ = "0.1.0"

from .cascade import CascadeConfig, CascadeResult, compare_strategies, exact_spread_small, simulate_ic
from .cluster import (
    BicReport,
    FeatureMatrix,
    GmmConfig,
    GmmModel,
    assign_clusters,
    bic,
    build_feature_matrix,
    fit_gmm,
    select_model,
)
from .errors import ConfigError, DataError, DiscourseGraphError, RecordError
from .graph import LayeredGraph, SimpleDigraph, aggregate, build_layered_graph, graph_stats
from .influence import Ranking, VoteRankState, betweenness, closeness, degree_rank, rank_active_users, vote_rank
from .ingest import TweetRecord, extract_hashtags, normalize_text, parse_records, tokenize
from .kernels import BACKEND
from .lexicon import (
    Lexicon,
    PolarityLexicon,
    Tonality,
    classify_post,
    classify_tokens,
    load_lexicon,
    load_polarity,
    polarity_score,
    word_frequencies,
)
from .profiles import (
    EpisodeSchedule,
    UserEpisodeProfile,
    activity_scatter,
    assign_episode,
    build_profiles,
    discourse_evolution,
)

__all__ = [
    "activity_scatter",
    "aggregate",
    "assign_clusters",
    "assign_episode",
    "BACKEND",
    "betweenness",
    "bic",
    "BicReport",
    "build_feature_matrix",
    "build_layered_graph",
    "build_profiles",
    "CascadeConfig",
    "CascadeResult",
    "classify_post",
    "classify_tokens",
    "closeness",
    "compare_strategies",
    "ConfigError",
    "DataError",
    "degree_rank",
    "discourse_evolution",
    "DiscourseGraphError",
    "EpisodeSchedule",
    "exact_spread_small",
    "extract_hashtags",
    "FeatureMatrix",
    "fit_gmm",
    "GmmConfig",
    "GmmModel",
    "graph_stats",
    "LayeredGraph",
    "Lexicon",
    "load_lexicon",
    "load_polarity",
    "normalize_text",
    "parse_records",
    "polarity_score",
    "PolarityLexicon",
    "rank_active_users",
    "Ranking",
    "RecordError",
    "select_model",
    "SimpleDigraph",
    "simulate_ic",
    "tokenize",
    "Tonality",
    "TweetRecord",
    "UserEpisodeProfile",
    "vote_rank",
    "VoteRankState",
    "word_frequencies",
]
