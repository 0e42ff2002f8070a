"""
Unmapped-subgraph bookkeeping for the GED search.

For one side of a partial mapping, a SideState holds the label multisets of
the unmapped subgraph (the subgraph induced by unmapped vertices), its branch
multiset and, for every mapped vertex, the labels of its bridges (edges into
the unmapped part). States are immutable; extend() derives the state of a
one-vertex-larger mapping without rescanning the graph.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Sequence, Tuple

from src.core.graph import LAMBDA, Graph, gamma

Branch = Tuple[int, Tuple[int, ...]]

BLANK_BRANCH: Branch = (LAMBDA, ())


def _dec(counter: Counter, key) -> None:
    remaining = counter[key] - 1
    if remaining:
        counter[key] = remaining
    else:
        del counter[key]


@dataclass(frozen=True)
class SideState:
    graph: Graph
    unmapped: FrozenSet[int]
    vertex_labels: Counter
    edge_labels: Counter
    incident: Dict[int, Tuple[int, ...]]
    branches: Counter
    bridges: Dict[int, Counter]

    @classmethod
    def from_scratch(cls, graph: Graph, mapped: Iterable[int]) -> 'SideState':
        mapped = frozenset(mapped)
        unmapped = frozenset(range(graph.num_vertices)) - mapped

        vertex_labels = Counter(graph.label(v) for v in unmapped if graph.label(v) != LAMBDA)
        edge_labels = Counter(lbl for u, v, lbl in graph.edge_list if u in unmapped and v in unmapped)

        incident = {}
        branches: Counter = Counter()
        for v in unmapped:
            es = tuple(sorted(lbl for w, lbl in graph.neighbors(v).items() if w in unmapped))
            incident[v] = es
            branches[(graph.label(v), es)] += 1

        bridges = {
            v: Counter(lbl for w, lbl in graph.neighbors(v).items() if w in unmapped)
            for v in mapped
        }
        return cls(graph, unmapped, vertex_labels, edge_labels, incident, branches, bridges)

    def extend(self, w: int) -> 'SideState':
        """
        State after additionally mapping vertex w.

        Only entries touched by w and its neighbors are rebuilt; untouched
        incident tuples and bridge counters are shared with this state.
        """
        g = self.graph
        unmapped = self.unmapped - {w}
        label_w = g.label(w)
        inner = [(x, lbl) for x, lbl in g.neighbors(w).items() if x in unmapped]

        vertex_labels = self.vertex_labels
        if label_w != LAMBDA:
            vertex_labels = Counter(vertex_labels)
            _dec(vertex_labels, label_w)
        edge_labels = self.edge_labels
        if inner:
            edge_labels = Counter(edge_labels)
            for _, lbl in inner:
                _dec(edge_labels, lbl)

        incident = dict(self.incident)
        branches = Counter(self.branches)
        _dec(branches, (label_w, incident.pop(w)))
        new_bridges: Counter = Counter()
        for x, lbl in inner:
            new_bridges[lbl] += 1
            old = incident[x]
            i = old.index(lbl)
            updated = old[:i] + old[i + 1:]
            incident[x] = updated
            _dec(branches, (g.label(x), old))
            branches[(g.label(x), updated)] += 1

        bridges = dict(self.bridges)
        for x, lbl in g.neighbors(w).items():
            if x in bridges:
                shrunk = Counter(bridges[x])
                _dec(shrunk, lbl)
                bridges[x] = shrunk
        bridges[w] = new_bridges

        return SideState(g, unmapped, vertex_labels, edge_labels, incident, branches, bridges)

    @property
    def size(self) -> int:
        """Number of unmapped vertices, blanks included."""
        return len(self.unmapped)

    @property
    def blank_count(self) -> int:
        return self.size - sum(self.vertex_labels.values())

    def residual_graph(self) -> Graph:
        """Unmapped subgraph over its real vertices, in ascending id order."""
        keep = sorted(v for v in self.unmapped if self.graph.label(v) != LAMBDA)
        return self.graph.induced(keep)

    def same_as(self, other: 'SideState') -> bool:
        """Content equality, ignoring zero-count bookkeeping."""
        def clean(c: Counter) -> Counter:
            return Counter({k: n for k, n in c.items() if n})
        return (
            self.unmapped == other.unmapped
            and clean(self.vertex_labels) == clean(other.vertex_labels)
            and clean(self.edge_labels) == clean(other.edge_labels)
            and self.incident == other.incident
            and clean(self.branches) == clean(other.branches)
            and self.bridges.keys() == other.bridges.keys()
            and all(clean(self.bridges[v]) == clean(other.bridges[v]) for v in self.bridges)
        )


@dataclass(frozen=True)
class UnmappedState:
    """Both sides of a partial mapping."""
    side1: SideState
    side2: SideState

    def residual_graphs(self) -> Tuple[Graph, Graph]:
        return self.side1.residual_graph(), self.side2.residual_graph()


def bridge_cost(pairs: Sequence[int], state: UnmappedState, order: Sequence[int]) -> int:
    """Sum of bridge-label gammas over the mapped pairs (pairs[k] -> order[k])."""
    b1 = state.side1.bridges
    b2 = state.side2.bridges
    return sum(gamma(b1[u], b2[order[k]]) for k, u in enumerate(pairs))


def label_lb(state: UnmappedState) -> int:
    s1, s2 = state.side1, state.side2
    return gamma(s1.vertex_labels, s2.vertex_labels) + gamma(s1.edge_labels, s2.edge_labels)


def compact_branch_lb(state: UnmappedState) -> int:
    """
    Compact branch bound in half units.

    The optimal branch assignment matches as many identical branches as
    possible (cost 0) and then as many same-label branches as possible
    (cost 1/2); everything else costs 1. With n branches per side, X
    identical matches and L same-label matches the total is (2n - L - X) / 2.
    Blank vertices are blank branches.
    """
    s1, s2 = state.side1, state.side2
    n = max(s1.size, s2.size)
    same_label = sum((s1.vertex_labels & s2.vertex_labels).values())
    same_label += min(s1.blank_count + n - s1.size, s2.blank_count + n - s2.size)
    if s1.size == s2.size:
        identical = sum((s1.branches & s2.branches).values())
    else:
        padded1 = s1.branches + Counter({BLANK_BRANCH: n - s1.size})
        padded2 = s2.branches + Counter({BLANK_BRANCH: n - s2.size})
        identical = sum((padded1 & padded2).values())
    return 2 * n - same_label - identical


def half_units_to_bound(half: int) -> int:
    return (half + 1) // 2
