"""
Synthetic graph corpus generator.

Base graphs are sized by edge count and density (2|E| / (|V|(|V|-1))); each
base is followed by mutated clones, where every mutation is one edit
operation drawn uniformly from the six kinds: insert isolated vertex, delete
isolated vertex, relabel vertex, insert edge, delete edge, relabel edge.
"""

import math
import random
from typing import Any, Dict, List, Tuple, Union

from pydantic import ValidationError

from src.core.domain import GeneratorConfig
from src.core.graph import GraphDatabase, build_database
from src.utils.logger import logger


class GeneratorConfigError(Exception):
    """Invalid or impossible generator configuration."""
    pass


MUTATION_KINDS = (
    'insert_vertex', 'delete_vertex', 'relabel_vertex',
    'insert_edge', 'delete_edge', 'relabel_edge',
)


def vertex_token(i: int) -> str:
    return chr(ord('A') + i) if i < 26 else f"L{i}"


def edge_token(i: int) -> str:
    return str(i + 1)


def vertices_for(edges: int, density: float) -> int:
    """
    Vertex count closest to the density equation for `edges` edges,
    raised until the edges fit into a simple graph.
    """
    n = round((1 + math.sqrt(1 + 8 * edges / density)) / 2)
    n = max(n, 1)
    while n * (n - 1) // 2 < edges:
        n += 1
    return n


class _MutableGraph:
    """Working copy used while generating and mutating one graph."""

    def __init__(self, labels: List[int], edges: Dict[Tuple[int, int], int]):
        self.labels = labels
        self.edges = edges

    def copy(self) -> '_MutableGraph':
        return _MutableGraph(list(self.labels), dict(self.edges))

    def isolated(self) -> List[int]:
        touched = {u for pair in self.edges for u in pair}
        return [v for v in range(len(self.labels)) if v not in touched]

    def absent_pairs(self) -> List[Tuple[int, int]]:
        n = len(self.labels)
        return [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in self.edges]

    def apply(self, kind: str, rng: random.Random, n_vlabels: int, n_elabels: int) -> bool:
        """Apply one edit of `kind`; False when it is not applicable."""
        if kind == 'insert_vertex':
            self.labels.append(rng.randrange(n_vlabels))
            return True

        if kind == 'delete_vertex':
            candidates = self.isolated()
            if not candidates:
                return False
            victim = rng.choice(candidates)
            del self.labels[victim]
            self.edges = {
                (u - (u > victim), v - (v > victim)): lbl for (u, v), lbl in self.edges.items()
            }
            return True

        if kind == 'relabel_vertex':
            if not self.labels or n_vlabels < 2:
                return False
            v = rng.randrange(len(self.labels))
            self.labels[v] = rng.choice([lbl for lbl in range(n_vlabels) if lbl != self.labels[v]])
            return True

        if kind == 'insert_edge':
            pairs = self.absent_pairs()
            if not pairs:
                return False
            self.edges[rng.choice(pairs)] = rng.randrange(n_elabels)
            return True

        if kind == 'delete_edge':
            if not self.edges:
                return False
            del self.edges[rng.choice(sorted(self.edges))]
            return True

        if kind == 'relabel_edge':
            if not self.edges or n_elabels < 2:
                return False
            pair = rng.choice(sorted(self.edges))
            self.edges[pair] = rng.choice([lbl for lbl in range(n_elabels) if lbl != self.edges[pair]])
            return True

        raise ValueError(f"unknown mutation kind {kind!r}")

    def tokens(self) -> Tuple[List[str], List[Tuple[int, int, str]]]:
        return (
            [vertex_token(lbl) for lbl in self.labels],
            [(u, v, edge_token(lbl)) for (u, v), lbl in self.edges.items()],
        )


def _coerce(config: Union[GeneratorConfig, Dict[str, Any]]) -> GeneratorConfig:
    if isinstance(config, GeneratorConfig):
        return config
    try:
        return GeneratorConfig(**config)
    except ValidationError as e:
        raise GeneratorConfigError(f"invalid generator configuration: {e}") from e


def _base_graph(cfg: GeneratorConfig, rng: random.Random) -> _MutableGraph:
    target = max(1, round(cfg.avg_edges * rng.uniform(0.8, 1.2)))
    n = vertices_for(target, cfg.density)
    labels = [rng.randrange(cfg.n_vertex_labels) for _ in range(n)]
    all_pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = rng.sample(all_pairs, target)
    edges = {pair: rng.randrange(cfg.n_edge_labels) for pair in chosen}
    return _MutableGraph(labels, edges)


def mutate(graph: _MutableGraph, edits: int, rng: random.Random,
           n_vlabels: int, n_elabels: int) -> _MutableGraph:
    """Clone `graph` and apply `edits` edit operations, redrawing inapplicable kinds."""
    clone = graph.copy()
    applied = 0
    while applied < edits:
        kind = rng.choice(MUTATION_KINDS)
        if clone.apply(kind, rng, n_vlabels, n_elabels):
            applied += 1
    return clone


def gen_synthetic(config: Union[GeneratorConfig, Dict[str, Any]]) -> GraphDatabase:
    """
    Generate a deterministic synthetic database.

    Emits `count` base graphs, each followed by its `clones` mutated copies.

    Raises:
        GeneratorConfigError: when the configuration is invalid.
    """
    cfg = _coerce(config)
    rng = random.Random(cfg.rng_seed)

    raw = []
    for _ in range(cfg.count):
        base = _base_graph(cfg, rng)
        raw.append(base.tokens())
        for _ in range(cfg.clones):
            edits = (rng.choice(cfg.mutation_choices) if cfg.mutation_choices
                     else cfg.mutations_per_clone)
            clone = mutate(base, edits, rng, cfg.n_vertex_labels, cfg.n_edge_labels)
            raw.append(clone.tokens())

    db = build_database(raw)
    logger.info(f"Generated {len(db)} graphs ({cfg.count} bases, {cfg.clones} clones each)")
    return db


def sample_queries(db: GraphDatabase, k: int, seed: int = 0,
                   remove: bool = True) -> Tuple[GraphDatabase, GraphDatabase]:
    """
    Draw k query graphs from db.

    Returns (data, queries). With `remove`, sampled graphs are taken out of
    the data so no query is answered by its own copy; both parts are
    renumbered densely and share the label tables of db.
    """
    if not 0 <= k <= len(db):
        raise GeneratorConfigError(f"cannot sample {k} queries from {len(db)} graphs")
    rng = random.Random(seed)
    picked = sorted(rng.sample(range(len(db)), k))
    picked_set = set(picked)

    queries = [db[gid].renumbered(i) for i, gid in enumerate(picked)]
    kept = [g for g in db if not (remove and g.gid in picked_set)]
    data = [g.renumbered(i) for i, g in enumerate(kept)]
    return GraphDatabase(data, db.labels), GraphDatabase(queries, db.labels)
