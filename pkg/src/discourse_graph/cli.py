"""Command-line driver: ``discourse-graph <subcommand> --config <path>``.

Exit status is 0 on success, 2 for configuration problems and 3 for data
problems; diagnostics go to standard error. Every run writes its reports
plus a ``manifest-<subcommand>.json`` into the output directory.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import __version__, kernels
from ._csvio import write_csv, write_json
from .cascade import CascadeConfig, compare_strategies, write_cascade_report
from .cluster import STRUCTURES, TRANSFORMS, GmmConfig, assign_clusters, build_feature_matrix, select_model
from .cluster import write_bic_grid, write_labels, write_model
from .errors import ConfigError, DataError, DiscourseGraphError
from .graph import aggregate, build_layered_graph, graph_stats, write_aggregated_csv, write_layered_csv
from .influence import centrality_rank, degree_rank, rank_active_users, vote_rank, write_ranking
from .ingest import format_timestamp, read_records
from .lexicon import load_lexicon, load_polarity, word_frequencies, write_frequencies
from .profiles import EpisodeSchedule, activity_scatter, build_profiles, discourse_evolution
from .profiles import write_evolution, write_profiles, write_scatter

log = logging.getLogger("discourse_graph")

COMMANDS = ("ingest", "graph", "rank", "cascade", "profiles", "cluster")
RANK_METHODS = ("voterank", "degree", "betweenness", "closeness", "active")
EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 2, 3


@dataclass
class PipelineConfig:
    base_dir: str
    input: Optional[str] = None
    lexicons: dict = field(default_factory=dict)
    polarity: Optional[str] = None
    stopwords: Optional[str] = None
    schedule: Optional[str] = None
    voterank_r: int = 50
    active_n: int = 50
    delta: Optional[float] = None
    cascade: CascadeConfig = field(default_factory=CascadeConfig)
    gmm: GmmConfig = field(default_factory=GmmConfig)
    k_range: tuple = (1, 6)
    structures: tuple = STRUCTURES
    transform: str = "log1p"
    normalize: bool = False
    cohort: object = "voterank"
    layers: Optional[list] = None
    strict: bool = False
    out: str = "out"
    seed: int = 0

    def path(self, rel: Optional[str]) -> Optional[str]:
        if rel is None:
            return None
        return rel if os.path.isabs(rel) else os.path.join(self.base_dir, rel)

    def input_files(self) -> dict:
        files = {"input": self.input, "polarity": self.polarity, "stopwords": self.stopwords, "schedule": self.schedule}
        files.update({f"lexicon:{k}": v for k, v in self.lexicons.items()})
        if isinstance(self.cohort, dict):
            files["cohort"] = self.cohort.get("file")
        return {k: v for k, v in files.items() if v is not None}


def _int(raw: dict, key: str, default: int, minimum: int = 1) -> int:
    value = raw.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ConfigError(f"{key} must be an integer >= {minimum}")
    return value


def load_config(path: str, seed: Optional[int] = None) -> PipelineConfig:
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    cfg = PipelineConfig(base_dir=os.path.dirname(os.path.abspath(path)))
    for key in ("input", "polarity", "stopwords", "schedule", "out"):
        if key in raw:
            if not isinstance(raw[key], str):
                raise ConfigError(f"{key} must be a path string")
            setattr(cfg, key, raw[key])
    lex = raw.get("lexicons", {})
    if not isinstance(lex, dict) or not all(isinstance(v, str) for v in lex.values()):
        raise ConfigError("lexicons must map names to file paths")
    if "none" in lex:
        raise ConfigError("'none' is reserved for unclassified posts")
    cfg.lexicons = dict(lex)
    cfg.voterank_r = _int(raw, "voterank_r", cfg.voterank_r)
    cfg.active_n = _int(raw, "active_n", cfg.active_n)
    cfg.seed = _int(raw, "seed", 0, minimum=0) if seed is None else seed
    if raw.get("delta") is not None:
        if not isinstance(raw["delta"], (int, float)) or raw["delta"] < 0:
            raise ConfigError("delta must be a non-negative number")
        cfg.delta = float(raw["delta"])
    casc = raw.get("cascade", {})
    gmm = raw.get("gmm", {})
    if not isinstance(casc, dict) or not isinstance(gmm, dict):
        raise ConfigError("cascade and gmm must be objects")
    try:
        cfg.cascade = CascadeConfig(
            p=float(casc.get("p", 0.1)), runs=_int(casc, "runs", 1000), seed=int(casc.get("seed", cfg.seed))
        )
        cfg.gmm = GmmConfig(
            max_iter=_int(gmm, "max_iter", 200),
            tol=float(gmm.get("tol", 1e-6)),
            reg=float(gmm.get("reg", 1e-6)),
            seed=int(gmm.get("seed", cfg.seed)),
            restarts=_int(gmm, "restarts", 5),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    if seed is not None:
        cfg.cascade = CascadeConfig(cfg.cascade.p, cfg.cascade.runs, seed)
        cfg.gmm.seed = seed
    k_min, k_max = _int(gmm, "k_min", 1), _int(gmm, "k_max", 6)
    if k_max < k_min:
        raise ConfigError("gmm.k_max must be >= gmm.k_min")
    cfg.k_range = (k_min, k_max)
    structures = tuple(gmm.get("structures", STRUCTURES))
    if not structures or any(s not in STRUCTURES for s in structures):
        raise ConfigError(f"gmm.structures must be a subset of {STRUCTURES}")
    cfg.structures = structures
    cfg.transform = raw.get("transform", cfg.transform)
    if cfg.transform not in TRANSFORMS:
        raise ConfigError(f"transform must be one of {TRANSFORMS}")
    cfg.normalize = bool(raw.get("normalize", False))
    cfg.strict = bool(raw.get("strict", False))
    cohort = raw.get("cohort", "voterank")
    if cohort not in ("voterank", "active") and not (isinstance(cohort, dict) and isinstance(cohort.get("file"), str)):
        raise ConfigError("cohort must be 'voterank', 'active' or {\"file\": path}")
    cfg.cohort = cohort
    layers = raw.get("layers")
    if layers is not None and (not isinstance(layers, list) or not all(isinstance(x, str) for x in layers)):
        raise ConfigError("layers must be a list of layer names")
    cfg.layers = layers
    return cfg


_REQUIRED = {
    "ingest": ("input",),
    "graph": ("input", "lexicons"),
    "rank": ("input",),
    "cascade": ("input", "lexicons"),
    "profiles": ("input", "lexicons", "polarity", "stopwords"),
    "cluster": ("input", "lexicons", "polarity"),
}


def validate(cfg: PipelineConfig, command: str) -> None:
    for key in _REQUIRED[command]:
        if key == "lexicons":
            if not cfg.lexicons:
                raise ConfigError("at least one lexicon must be configured")
        elif getattr(cfg, key) is None:
            raise ConfigError(f"config is missing {key!r} required by '{command}'")
    for name, rel in cfg.input_files().items():
        if not os.path.isfile(cfg.path(rel)):
            raise ConfigError(f"{name} file not found: {cfg.path(rel)}")


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class Run:
    """State shared by the subcommands of one invocation."""

    def __init__(self, command: str, cfg: PipelineConfig, out_dir: str):
        self.command = command
        self.cfg = cfg
        self.out_dir = out_dir
        self.outputs: dict = {}
        self.counters: dict = {}
        self.parameters: dict = {}
        self._records = None
        self._lexicons = None
        self._graph = None
        self._layered = None

    def emit(self, name: str, rows: int) -> None:
        self.outputs[name] = rows

    def target(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    @property
    def records(self):
        if self._records is None:
            errors: list = []
            self._records = read_records(self.cfg.path(self.cfg.input), strict=self.cfg.strict, errors=errors)
            self.parse_errors = errors
            self.counters["records"] = len(self._records)
            self.counters["parse_errors"] = len(errors)
            for err in errors[:20]:
                log.warning("skipped %s", err)
        return self._records

    @property
    def lexicons(self):
        if self._lexicons is None:
            self._lexicons = [load_lexicon(self.cfg.path(p), name) for name, p in self.cfg.lexicons.items()]
        return self._lexicons

    @property
    def schedule(self) -> EpisodeSchedule:
        if self.cfg.schedule is None:
            return EpisodeSchedule.default()
        return EpisodeSchedule.load(self.cfg.path(self.cfg.schedule))

    @property
    def layered(self):
        if self._layered is None:
            self._layered = build_layered_graph(self.records, self.lexicons, self.schedule)
            self.counters["dropped"] = dict(self._layered.dropped)
            self.counters["graph_total_weight"] = self._layered.total_weight
        return self._layered

    @property
    def graph(self):
        if self._graph is None:
            self._graph = aggregate(self.layered, layers=self.cfg.layers)
        return self._graph

    def manifest(self) -> dict:
        cfg = self.cfg
        inputs = {
            name: {"path": rel, "sha256": _sha256(cfg.path(rel))} for name, rel in sorted(cfg.input_files().items())
        }
        return {
            "command": self.command,
            "version": __version__,
            "inputs": inputs,
            "parameters": self.parameters,
            "seed": cfg.seed,
            "counters": self.counters,
            "outputs": dict(sorted(self.outputs.items())),
        }


def cohort_select(run: Run) -> list:
    """Users whose profiles are reported: VoteRank spreaders, active users or a file."""
    cfg = run.cfg
    if isinstance(cfg.cohort, dict):
        with open(cfg.path(cfg.cohort["file"]), encoding="utf-8") as fh:
            users = list(dict.fromkeys(line.strip() for line in fh if line.strip()))
        source = "file"
    elif cfg.cohort == "active":
        users = rank_active_users(run.records, cfg.active_n).nodes
        source = "active"
    else:
        g = run.graph
        if g.n_nodes == 0:
            raise DataError("retweet graph is empty; cannot elect a VoteRank cohort")
        users = vote_rank(g, min(cfg.voterank_r, g.n_nodes), delta=cfg.delta).nodes
        source = "voterank"
    if not users:
        raise DataError("cohort is empty")
    run.parameters["cohort"] = source
    run.counters["cohort_size"] = len(users)
    return users


def cmd_ingest(run: Run, args) -> None:
    recs = run.records
    users = {r.user_id for r in recs}
    stats = {
        "records": len(recs),
        "users": len(users),
        "retweets": sum(1 for r in recs if r.is_retweet),
        "hashtags": sum(len(r.hashtags) for r in recs),
        "parse_errors": len(run.parse_errors),
        "first_timestamp": format_timestamp(min(r.timestamp for r in recs)) if recs else None,
        "last_timestamp": format_timestamp(max(r.timestamp for r in recs)) if recs else None,
    }
    write_json(run.target("ingest_stats.json"), stats)
    run.emit("ingest_stats.json", 1)
    rows = ((e.lineno, e.message) for e in run.parse_errors)
    run.emit("parse_errors.csv", write_csv(run.target("parse_errors.csv"), ["line", "error"], rows))


def cmd_graph(run: Run, args) -> None:
    run.emit("layered_graph.csv", write_layered_csv(run.target("layered_graph.csv"), run.layered))
    run.emit("aggregated_graph.csv", write_aggregated_csv(run.target("aggregated_graph.csv"), run.graph))
    stats = graph_stats(run.graph).as_dict()
    stats["layers"] = run.layered.layers()
    stats["dropped"] = dict(run.layered.dropped)
    write_json(run.target("graph_stats.json"), stats)
    run.emit("graph_stats.json", 1)


def cmd_rank(run: Run, args) -> None:
    cfg = run.cfg
    method = args.method
    if method == "active":
        r = args.r or cfg.active_n
        ranking = rank_active_users(run.records, r)
    else:
        g = run.graph
        r = args.r or cfg.voterank_r
        if method == "voterank":
            ranking = vote_rank(g, min(r, g.n_nodes) if args.r is None else r, delta=cfg.delta)
        elif method == "degree":
            ranking = degree_rank(g, args.mode, args.weighted, r)
        else:
            ranking = centrality_rank(g, method, r)
    run.parameters.update({"method": method, "r": r, "mode": args.mode, "weighted": args.weighted})
    name = f"ranking_{method}.csv"
    run.emit(name, write_ranking(run.target(name), ranking))


def cmd_cascade(run: Run, args) -> None:
    cfg = run.cfg
    g = run.graph
    r = args.r or min(cfg.voterank_r, g.n_nodes)
    results = compare_strategies(g, r, cfg.cascade, delta=cfg.delta)
    run.parameters.update({"r": r, "p": cfg.cascade.p, "runs": cfg.cascade.runs, "seed": cfg.cascade.seed})
    run.emit("cascade_report.csv", write_cascade_report(run.target("cascade_report.csv"), results, r))


def _profiles(run: Run):
    polarity = load_polarity(run.cfg.path(run.cfg.polarity))
    return build_profiles(run.records, run.lexicons, polarity, run.schedule)


def cmd_profiles(run: Run, args) -> None:
    cfg = run.cfg
    names = [lex.name for lex in run.lexicons]
    profiles = _profiles(run)
    users = cohort_select(run)
    sched = run.schedule
    run.emit("cohort.csv", write_csv(run.target("cohort.csv"), ["rank", "user"], enumerate(users, start=1)))
    run.emit("profiles.csv", write_profiles(run.target("profiles.csv"), profiles, names))
    evo = discourse_evolution(profiles, users, names, sched.n_episodes, normalize=cfg.normalize)
    run.emit("evolution.csv", write_evolution(run.target("evolution.csv"), evo))
    if len(names) == 2:
        points = activity_scatter(profiles, users, names)
        run.emit("scatter.csv", write_scatter(run.target("scatter.csv"), points))
    else:
        log.warning("scatter report skipped: it needs exactly two lexicons, %d configured", len(names))
    stop = load_lexicon(cfg.path(cfg.stopwords), "stopwords")
    members = set(users)
    freqs = word_frequencies((r for r in run.records if r.user_id in members), stop)
    run.emit("word_frequencies.csv", write_frequencies(run.target("word_frequencies.csv"), freqs))
    run.parameters.update({"normalize": cfg.normalize, "episodes": sched.to_json()})


def cmd_cluster(run: Run, args) -> None:
    cfg = run.cfg
    names = [lex.name for lex in run.lexicons]
    profiles = _profiles(run)
    users = cohort_select(run)
    fm = build_feature_matrix(profiles, users, names, cfg.transform)
    k_lo, k_hi = cfg.k_range
    k_hi = min(k_hi, fm.X.shape[0])
    if k_hi < k_lo:
        raise DataError(f"cohort of {fm.X.shape[0]} users is too small for K >= {k_lo}")
    model, report = select_model(fm, range(k_lo, k_hi + 1), cfg.structures, cfg.gmm)
    labels, resp = assign_clusters(model, fm)
    run.emit("bic_grid.csv", write_bic_grid(run.target("bic_grid.csv"), report))
    write_model(run.target("model.json"), model, report.grid[report.selected])
    run.emit("model.json", 1)
    run.emit("labels.csv", write_labels(run.target("labels.csv"), fm.users, labels, resp))
    run.parameters.update({
        "transform": cfg.transform,
        "k_range": [k_lo, k_hi],
        "structures": list(cfg.structures),
        "selected": list(report.selected),
        "gmm": {"max_iter": cfg.gmm.max_iter, "tol": cfg.gmm.tol, "reg": cfg.gmm.reg,
                "restarts": cfg.gmm.restarts, "seed": cfg.gmm.seed},
    })


HANDLERS = {
    "ingest": cmd_ingest,
    "graph": cmd_graph,
    "rank": cmd_rank,
    "cascade": cmd_cascade,
    "profiles": cmd_profiles,
    "cluster": cmd_cluster,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discourse-graph", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="pipeline config (JSON)")
        p.add_argument("--out", help="output directory (overrides the config)")
        p.add_argument("--seed", type=int, help="master seed (overrides the config)")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "rank":
            p.add_argument("--method", choices=RANK_METHODS, default="voterank")
            p.add_argument("--r", type=int, help="number of ranked nodes")
            p.add_argument("--mode", choices=("in", "out"), default="out", help="degree direction")
            p.add_argument("--weighted", action="store_true", help="weighted degree")
        if name == "cascade":
            p.add_argument("--r", type=int, help="seed-set size")
    synth = sub.add_parser("synth", help="write a synthetic demo corpus and config")
    synth.add_argument("--dir", required=True)
    synth.add_argument("--records", type=int, default=10_000)
    synth.add_argument("--users", type=int, default=400)
    synth.add_argument("--seed", type=int, default=0)
    return parser


def run(command: str, args) -> int:
    if command == "synth":
        from .synthetic import write_demo_corpus

        path = write_demo_corpus(args.dir, args.records, args.seed, args.users)
        print(path)
        return EXIT_OK
    if args.seed is not None and not 0 <= args.seed < 2**64:
        raise ConfigError("--seed must be an unsigned 64-bit integer")
    cfg = load_config(args.config, seed=args.seed)
    validate(cfg, command)
    if getattr(args, "r", None) is not None and args.r < 1:
        raise ConfigError("--r must be >= 1")
    out_dir = args.out if args.out else cfg.path(cfg.out)
    os.makedirs(out_dir, exist_ok=True)
    state = Run(command, cfg, out_dir)
    HANDLERS[command](state, args)
    write_json(os.path.join(out_dir, f"manifest-{command}.json"), state.manifest())
    return EXIT_OK


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    log.info("kernel backend: %s", kernels.BACKEND)
    try:
        return run(args.command, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DiscourseGraphError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
