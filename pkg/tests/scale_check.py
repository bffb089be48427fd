"""Scale run: ingest a large retweet stream, aggregate it, elect 50 spreaders.

Usage: ``python3 scale_check.py generate PATH`` writes the stream and its
ground truth; ``python3 scale_check.py run PATH`` times the pipeline and
prints a JSON summary including peak resident memory.
"""

from __future__ import annotations

import json
import resource
import sys
import time

N_NODES = 160_000
N_EDGES = 1_000_000


def generate(path: str) -> None:
    from discourse_graph.synthetic import scale_lines

    lines, truth = scale_lines(N_NODES, N_EDGES, seed=0)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")
    with open(path + ".truth.json", "w") as fh:
        json.dump(truth, fh)


def run(path: str) -> dict:
    from discourse_graph.graph import aggregate, build_layered_graph, graph_stats
    from discourse_graph.influence import vote_rank
    from discourse_graph.ingest import read_records
    from discourse_graph.lexicon import Lexicon
    from discourse_graph.profiles import EpisodeSchedule

    t0 = time.perf_counter()
    records = read_records(path)
    t1 = time.perf_counter()
    layered = build_layered_graph(records, [Lexicon("g", frozenset({"x"}))], EpisodeSchedule.default())
    del records
    g = aggregate(layered)
    t2 = time.perf_counter()
    ranking = vote_rank(g, 50)
    t3 = time.perf_counter()
    stats = graph_stats(g)
    return {
        "parse_s": t1 - t0,
        "graph_s": t2 - t1,
        "voterank_s": t3 - t2,
        "total_s": t3 - t0,
        "nodes": stats.nodes,
        "edges": stats.edges,
        "total_weight": stats.total_weight,
        "elected": len(ranking),
        "peak_rss_mb": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0,
    }


if __name__ == "__main__":
    mode, target = sys.argv[1], sys.argv[2]
    if mode == "generate":
        generate(target)
    else:
        print(json.dumps(run(target)))
