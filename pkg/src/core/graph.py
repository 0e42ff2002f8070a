"""
Graph model for graphsift.

Labeled undirected simple graphs with interned labels, label multisets and
the line-oriented graph database text format:

    t # <id>            starts a graph
    v <vid> <label>     declares vertex vid (dense, in order)
    e <u> <v> <label>   declares an undirected edge

Blank lines are ignored and ``t # -1`` ends the input.
"""

from collections import Counter
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple

# Label of blank vertices and of absent edges. Never interned, never counted.
LAMBDA = -1

Edge = Tuple[int, int, int]


class GraphError(Exception):
    """Invalid graph construction."""
    pass


class GraphParseError(GraphError):
    """Malformed graph database input."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class LabelInterner:
    """Bijection between label tokens and small integer ids, first-seen order."""

    def __init__(self, tokens: Iterable[str] = ()):
        self._ids: Dict[str, int] = {}
        self._tokens: List[str] = []
        for token in tokens:
            self.intern(token)

    def intern(self, token: str) -> int:
        label = self._ids.get(token)
        if label is None:
            label = len(self._tokens)
            self._ids[token] = label
            self._tokens.append(token)
        return label

    def lookup(self, token: str) -> Optional[int]:
        return self._ids.get(token)

    def token(self, label: int) -> str:
        if label == LAMBDA:
            raise KeyError("the blank label has no token")
        return self._tokens[label]

    @property
    def tokens(self) -> Tuple[str, ...]:
        return tuple(self._tokens)

    def __len__(self) -> int:
        return len(self._tokens)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LabelInterner) and self._tokens == other._tokens


@dataclass
class LabelTables:
    """Separate interners for vertex and edge labels of one database."""
    vertex: LabelInterner = field(default_factory=LabelInterner)
    edge: LabelInterner = field(default_factory=LabelInterner)


@dataclass(frozen=True)
class Graph:
    """
    Immutable labeled undirected simple graph.

    Vertices are 0..n-1. Edges keep their insertion order so that a database
    written back to text reproduces its source. A vertex labeled LAMBDA is a
    blank vertex and must have no incident edges.
    """
    gid: int
    vertex_labels: Tuple[int, ...]
    edge_list: Tuple[Edge, ...] = ()
    adjacency: Tuple[Dict[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.vertex_labels)
        adjacency: List[Dict[int, int]] = [{} for _ in range(n)]
        for u, v, label in self.edge_list:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"graph {self.gid}: edge ({u}, {v}) references a missing vertex")
            if u == v:
                raise GraphError(f"graph {self.gid}: self-loop on vertex {u}")
            if v in adjacency[u]:
                raise GraphError(f"graph {self.gid}: duplicate edge ({u}, {v})")
            if label == LAMBDA or self.vertex_labels[u] == LAMBDA or self.vertex_labels[v] == LAMBDA:
                raise GraphError(f"graph {self.gid}: blank label on edge ({u}, {v})")
            adjacency[u][v] = label
            adjacency[v][u] = label
        object.__setattr__(self, 'adjacency', tuple(adjacency))

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_labels)

    @property
    def num_edges(self) -> int:
        return len(self.edge_list)

    def label(self, u: int) -> int:
        return self.vertex_labels[u]

    def edge_label(self, u: int, v: int) -> int:
        """Label of edge (u, v), LAMBDA when absent."""
        return self.adjacency[u].get(v, LAMBDA)

    def neighbors(self, u: int) -> Dict[int, int]:
        return self.adjacency[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    @cached_property
    def vertex_multiset(self) -> Counter:
        return Counter(lbl for lbl in self.vertex_labels if lbl != LAMBDA)

    @cached_property
    def edge_multiset(self) -> Counter:
        return Counter(lbl for _, _, lbl in self.edge_list)

    @cached_property
    def incident_labels(self) -> Tuple[Counter, ...]:
        """Per vertex, the multiset of incident edge labels."""
        return tuple(Counter(adj.values()) for adj in self.adjacency)

    @cached_property
    def vertices_by_label(self) -> Dict[int, Tuple[int, ...]]:
        groups: Dict[int, List[int]] = {}
        for v, lbl in enumerate(self.vertex_labels):
            groups.setdefault(lbl, []).append(v)
        return {lbl: tuple(vs) for lbl, vs in groups.items()}

    @property
    def real_vertices(self) -> Tuple[int, ...]:
        return tuple(v for v, lbl in enumerate(self.vertex_labels) if lbl != LAMBDA)

    def induced(self, vertices: Sequence[int]) -> 'Graph':
        """Induced subgraph on `vertices`, renumbered in the given order."""
        position = {v: i for i, v in enumerate(vertices)}
        edges = []
        for u, v, lbl in self.edge_list:
            if u in position and v in position:
                edges.append((position[u], position[v], lbl))
        return Graph(self.gid, tuple(self.vertex_labels[v] for v in vertices), tuple(edges))

    def with_blanks(self, k: int) -> 'Graph':
        """Copy extended by k blank vertices."""
        if k <= 0:
            return self
        return Graph(self.gid, self.vertex_labels + (LAMBDA,) * k, self.edge_list)

    def renumbered(self, gid: int) -> 'Graph':
        return replace(self, gid=gid)


@dataclass
class GraphDatabase:
    """Ordered graphs with dense ids plus the label tables they were built with."""
    graphs: List[Graph] = field(default_factory=list)
    labels: LabelTables = field(default_factory=LabelTables)

    def __len__(self) -> int:
        return len(self.graphs)

    def __getitem__(self, gid: int) -> Graph:
        return self.graphs[gid]

    def __iter__(self) -> Iterator[Graph]:
        return iter(self.graphs)


def gamma(a: Counter, b: Counter) -> int:
    """max(|a|, |b|) minus the size of the multiset intersection."""
    size_a = sum(a.values())
    size_b = sum(b.values())
    common = sum((a & b).values())
    return max(size_a, size_b) - common


def lb_label(r: Graph, s: Graph) -> int:
    """Label-multiset lower bound on ged(r, s)."""
    return gamma(r.vertex_multiset, s.vertex_multiset) + gamma(r.edge_multiset, s.edge_multiset)


def build_database(raw: Iterable[Tuple[Sequence[str], Sequence[Tuple[int, int, str]]]],
                   labels: Optional[LabelTables] = None) -> GraphDatabase:
    """Build a database from token-labeled graphs, interning in reading order."""
    labels = labels or LabelTables()
    graphs = []
    for gid, (vertex_tokens, edges) in enumerate(raw):
        vertex_labels = tuple(labels.vertex.intern(t) for t in vertex_tokens)
        edge_list = tuple((u, v, labels.edge.intern(t)) for u, v, t in edges)
        graphs.append(Graph(gid, vertex_labels, edge_list))
    return GraphDatabase(graphs, labels)


class _GraphBuilder:
    def __init__(self, gid: int):
        self.gid = gid
        self.vertex_labels: List[int] = []
        self.edges: List[Edge] = []
        self.seen_pairs = set()

    def build(self) -> Graph:
        return Graph(self.gid, tuple(self.vertex_labels), tuple(self.edges))


def _parse_int(token: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(line_no, f"expected an integer, got {token!r}")


def parse_db(stream: Iterable[str], labels: Optional[LabelTables] = None) -> GraphDatabase:
    """
    Parse a graph database from text lines.

    Graph ids are assigned densely in file order; the id written after
    ``t #`` is not trusted. Passing the label tables of an existing database
    makes labels of the parsed graphs comparable with it.

    Raises:
        GraphParseError: malformed line, self-loop, duplicate edge or
            reference to an undeclared vertex.
    """
    labels = labels if labels is not None else LabelTables()
    graphs: List[Graph] = []
    current: Optional[_GraphBuilder] = None

    for line_no, raw_line in enumerate(stream, start=1):
        parts = raw_line.split()
        if not parts:
            continue
        kind = parts[0]

        if kind == 't':
            if len(parts) != 3 or parts[1] != '#':
                raise GraphParseError(line_no, "expected 't # <id>'")
            if current is not None:
                graphs.append(current.build())
                current = None
            if parts[2] == '-1':
                break
            _parse_int(parts[2], line_no)
            current = _GraphBuilder(len(graphs))
            continue

        if current is None:
            raise GraphParseError(line_no, f"'{kind}' line before the first 't #' header")

        if kind == 'v':
            if len(parts) != 3:
                raise GraphParseError(line_no, "expected 'v <vid> <label>'")
            vid = _parse_int(parts[1], line_no)
            if vid != len(current.vertex_labels):
                raise GraphParseError(
                    line_no, f"vertex id {vid} out of order, expected {len(current.vertex_labels)}")
            current.vertex_labels.append(labels.vertex.intern(parts[2]))
        elif kind == 'e':
            if len(parts) != 4:
                raise GraphParseError(line_no, "expected 'e <u> <v> <label>'")
            u = _parse_int(parts[1], line_no)
            v = _parse_int(parts[2], line_no)
            n = len(current.vertex_labels)
            if u == v:
                raise GraphParseError(line_no, f"self-loop on vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphParseError(line_no, f"edge ({u}, {v}) references an undeclared vertex")
            pair = (min(u, v), max(u, v))
            if pair in current.seen_pairs:
                raise GraphParseError(line_no, f"duplicate edge ({u}, {v})")
            current.seen_pairs.add(pair)
            current.edges.append((u, v, labels.edge.intern(parts[3])))
        else:
            raise GraphParseError(line_no, f"unknown line type {kind!r}")

    if current is not None:
        graphs.append(current.build())

    return GraphDatabase(graphs, labels)


def write_db(db: GraphDatabase, stream: TextIO) -> None:
    """Write a database in the text format read by parse_db."""
    vertex_token = db.labels.vertex.token
    edge_token = db.labels.edge.token
    for g in db.graphs:
        stream.write(f"t # {g.gid}\n")
        for v, lbl in enumerate(g.vertex_labels):
            stream.write(f"v {v} {vertex_token(lbl)}\n")
        for u, v, lbl in g.edge_list:
            stream.write(f"e {u} {v} {edge_token(lbl)}\n")


def load_db(path: str, labels: Optional[LabelTables] = None) -> GraphDatabase:
    with open(path, 'r', encoding='utf-8') as f:
        return parse_db(f, labels)


def save_db(db: GraphDatabase, path: str) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        write_db(db, f)
