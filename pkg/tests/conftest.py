import os
import time
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from spine.cli import bundled_path
from spine.graph import Graph, load_edge_list

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA_DIR = Path(os.environ.get("SPINE_DATA_DIR", bundled_path("karate.edges").parent))


@pytest.fixture(scope="session")
def karate():
    return load_edge_list(bundled_path("karate.edges"))


@pytest.fixture(scope="session")
def lesmis():
    return load_edge_list(bundled_path("lesmis.edges"))


def make_graph(n, edges):
    return Graph.from_edges([str(i) for i in range(n)], edges)


def complete(n, w=1.0):
    return make_graph(n, [(i, j, w) for i in range(n) for j in range(i + 1, n)])


def path(n, w=1.0):
    return make_graph(n, [(i, i + 1, w) for i in range(n - 1)])


def random_graph(rng, n_max=10, p=None, int_weights=True):
    n = int(rng.integers(2, n_max + 1))
    p = rng.uniform(0.2, 0.8) if p is None else p
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                w = int(rng.integers(1, 10)) if int_weights else float(rng.uniform(0.1, 5))
                edges.append((i, j, w))
    if not edges:
        edges.append((0, 1, 1))
    return make_graph(n, edges)


@st.composite
def graphs(draw, min_nodes=2, max_nodes=10, min_edges=1):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=min_edges, max_size=len(pairs), unique=True))
    weights = draw(st.lists(st.integers(1, 20), min_size=len(chosen), max_size=len(chosen)))
    return make_graph(n, [(u, v, w) for (u, v), w in zip(chosen, weights)])


@st.composite
def graphs_with_partition(draw, **kw):
    g = draw(graphs(**kw))
    k = draw(st.integers(1, g.n_nodes))
    tags = draw(st.lists(st.integers(0, k - 1), min_size=g.n_nodes, max_size=g.n_nodes))
    from spine.community import Partition

    return g, Partition.from_labels(tags)


SUITE_LIMIT_S = 60.0


def pytest_sessionstart(session):
    session.config._spine_t0 = time.perf_counter()


def pytest_terminal_summary(terminalreporter, config):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in rep.nodeid and rep.when == "call":
                lines.append((rep.nodeid.split("::")[-1], outcome))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(lines):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
    elapsed = time.perf_counter() - config._spine_t0
    verdict = "PASS" if elapsed < SUITE_LIMIT_S else "FAIL"
    terminalreporter.write_line(f"{verdict}  suite_runtime ({elapsed:.1f} s, limit {SUITE_LIMIT_S:.0f} s)")
