from __future__ import annotations

import os
import sys

import pytest

from discourse_graph import kernels
from discourse_graph.cli import load_config
from discourse_graph.ingest import read_records
from discourse_graph.synthetic import write_demo_corpus

sys.path.insert(0, os.path.dirname(__file__))

BACKENDS = sorted(kernels.backends())


@pytest.fixture(scope="session")
def demo_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("demo")
    write_demo_corpus(d, n_records=10_000, seed=0)
    return d


@pytest.fixture(scope="session")
def demo_config(demo_dir):
    return load_config(str(demo_dir / "config.json"))


@pytest.fixture(scope="session")
def demo_records(demo_dir):
    return read_records(demo_dir / "tweets.jsonl")


@pytest.fixture(params=BACKENDS)
def backend(request):
    return kernels.backends()[request.param]


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
