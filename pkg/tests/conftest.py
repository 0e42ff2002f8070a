"""
Test fixtures and factories for graphsift tests.

Provides graph factories (hand-built and seeded random), small synthetic
databases, labeled networkx copies for cross-checks and the --runslow
switch for desk-scale acceptance runs.
"""

import random

import networkx as nx
import pytest
from networkx.algorithms import isomorphism

from src.core.generator import gen_synthetic
from src.core.graph import Graph


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run desk-scale acceptance tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale run, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def _label(token):
    """Single characters stand for labels ('A', 'x'); ints are used as is."""
    return ord(token) if isinstance(token, str) else token


def make_graph(vertex_labels, edges=(), gid=0) -> Graph:
    return Graph(
        gid,
        tuple(_label(t) for t in vertex_labels),
        tuple((u, v, _label(t)) for u, v, t in edges),
    )


def random_graph(rng: random.Random, n_vertices: int, n_vlabels: int = 3,
                 n_elabels: int = 2, p_edge: float = 0.4, gid: int = 0) -> Graph:
    labels = tuple(rng.randrange(n_vlabels) for _ in range(n_vertices))
    edges = tuple(
        (u, v, rng.randrange(n_elabels))
        for u in range(n_vertices) for v in range(u + 1, n_vertices)
        if rng.random() < p_edge
    )
    return Graph(gid, labels, edges)


def random_pairs(count: int, seed: int, max_vertices: int = 7, **kwargs):
    """Seeded pairs of random graphs with 0..max_vertices vertices each."""
    rng = random.Random(seed)
    pairs = []
    for _ in range(count):
        g1 = random_graph(rng, rng.randint(0, max_vertices), gid=0, **kwargs)
        g2 = random_graph(rng, rng.randint(0, max_vertices), gid=1, **kwargs)
        pairs.append((g1, g2))
    return pairs


def to_networkx(g: Graph) -> nx.Graph:
    """Labeled networkx copy of g; blank vertices keep the blank label."""
    nxg = nx.Graph()
    nxg.add_nodes_from((v, {'label': g.label(v)}) for v in range(g.num_vertices))
    nxg.add_edges_from((u, v, {'label': lbl}) for u, v, lbl in g.edge_list)
    return nxg


NODE_MATCH = isomorphism.categorical_node_match('label', None)
EDGE_MATCH = isomorphism.categorical_edge_match('label', None)


@pytest.fixture
def graph_factory():
    """
    Factory fixture building a Graph from label tokens and edge triples.

    Example: graph_factory("AB", [(0, 1, "x")])
    """
    return make_graph


@pytest.fixture
def small_db():
    """Six bases with three clones each, four to six vertices per graph."""
    return gen_synthetic({
        'count': 6, 'avg_edges': 5, 'density': 0.6,
        'n_vertex_labels': 3, 'n_edge_labels': 2,
        'clones': 3, 'mutation_choices': [1, 2, 3], 'rng_seed': 7,
    })


@pytest.fixture
def db_text():
    return (
        "t # 0\n"
        "v 0 C\n"
        "v 1 O\n"
        "v 2 C\n"
        "e 0 1 2\n"
        "e 1 2 1\n"
        "\n"
        "t # 1\n"
        "v 0 C\n"
        "v 1 N\n"
        "e 0 1 1\n"
        "t # -1\n"
    )
