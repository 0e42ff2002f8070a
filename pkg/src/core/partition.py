"""
Partition filter.

A graph is cut greedily into small connected fragments; every fragment that
does not occur (as a subgraph) in the other graph needs at least one edit of
its own, so the number of such fragments bounds the edit distance from below.
Partitioning can stop once the bound is high enough and resume later.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from src.core.graph import LAMBDA, Graph

# Largest fragment size.
ALPHA = 6


@dataclass(frozen=True)
class Partition:
    vertices: Tuple[int, ...]
    pattern: Graph = field(repr=False)
    isomorphic: bool


@dataclass(frozen=True)
class PartitionState:
    """Progress of one partitioning run; resumable via partition_graph."""
    partitions: Tuple[Partition, ...] = ()
    consumed: FrozenSet[int] = frozenset()
    count: int = 0
    stop_at: int = -1
    exhausted: bool = False


def _match_order(p: Graph) -> List[int]:
    """Pattern vertices ordered so each one touches as many earlier ones as possible."""
    remaining = set(range(p.num_vertices))
    order: List[int] = []
    placed = set()
    while remaining:
        best = max(
            remaining,
            key=lambda v: (sum(1 for w in p.neighbors(v) if w in placed), p.degree(v), -v),
        )
        order.append(best)
        placed.add(best)
        remaining.remove(best)
    return order


def subgraph_iso(p: Graph, g: Graph) -> bool:
    """
    True when p embeds into g: injective, vertex labels equal, every edge
    of p mapped onto an edge of g with the same label. Non-edges of p are
    unconstrained.
    """
    if p.num_vertices == 0:
        return True
    if p.num_vertices > g.num_vertices or p.num_edges > g.num_edges:
        return False
    for lbl, n in p.vertex_multiset.items():
        if len(g.vertices_by_label.get(lbl, ())) < n:
            return False

    order = _match_order(p)
    p_incident = p.incident_labels
    g_incident = g.incident_labels
    assignment: Dict[int, int] = {}
    used = set()

    def feasible(x: int, c: int) -> bool:
        if c in used or g.label(c) != p.label(x) or g.degree(c) < p.degree(x):
            return False
        have = g_incident[c]
        if any(have[lbl] < n for lbl, n in p_incident[x].items()):
            return False
        for y, lbl in p.neighbors(x).items():
            if y in assignment and g.edge_label(c, assignment[y]) != lbl:
                return False
        return True

    def candidates(x: int):
        for y in p.neighbors(x):
            if y in assignment:
                return g.neighbors(assignment[y]).keys()
        return g.vertices_by_label.get(p.label(x), ())

    def extend(depth: int) -> bool:
        if depth == len(order):
            return True
        x = order[depth]
        for c in sorted(candidates(x)):
            if feasible(x, c):
                assignment[x] = c
                used.add(c)
                if extend(depth + 1):
                    return True
                del assignment[x]
                used.discard(c)
        return False

    return extend(0)


def partition_graph(g2_res: Graph, g1_res: Graph, stop_at: int,
                    resume: Optional[PartitionState] = None,
                    alpha: int = ALPHA) -> PartitionState:
    """
    Partition g2_res and count fragments that do not embed into g1_res.

    Each fragment starts at the lowest unconsumed vertex and grows by the
    lowest-id unconsumed vertex adjacent to it. A fragment is closed as
    soon as it stops embedding, when it reaches `alpha` vertices or when
    it has no unconsumed neighbor left. Blank vertices are never
    partitioned. Stops before opening a new fragment once the count
    exceeds stop_at.
    """
    state = resume or PartitionState()
    partitions = list(state.partitions)
    consumed = set(state.consumed)
    count = state.count

    pending = [v for v in range(g2_res.num_vertices)
               if v not in consumed and g2_res.label(v) != LAMBDA]
    pending_pos = 0

    while count < stop_at + 1:
        while pending_pos < len(pending) and pending[pending_pos] in consumed:
            pending_pos += 1
        if pending_pos == len(pending):
            break

        members = [pending[pending_pos]]
        consumed.add(members[0])
        while True:
            pattern = g2_res.induced(members)
            embeds = subgraph_iso(pattern, g1_res)
            if not embeds or len(members) >= alpha:
                break
            frontier = [
                w for v in members for w in g2_res.neighbors(v)
                if w not in consumed and g2_res.label(w) != LAMBDA
            ]
            if not frontier:
                break
            nxt = min(frontier)
            members.append(nxt)
            consumed.add(nxt)

        partitions.append(Partition(tuple(members), pattern, embeds))
        if not embeds:
            count += 1

    exhausted = all(v in consumed for v in pending)
    return PartitionState(tuple(partitions), frozenset(consumed), count,
                          max(stop_at, state.stop_at), exhausted)


def partition_lb(state: PartitionState) -> int:
    return state.count


def derive_vertex_order(g2: Graph, host: Optional[Graph] = None,
                        alpha: int = ALPHA) -> Tuple[int, ...]:
    """
    Search order of g2's vertices: fragments in emission order, vertices in
    growth order, blank vertices last. Fragments are cut against `host`
    (g2 itself when omitted).
    """
    host = host if host is not None else g2
    state = partition_graph(g2, host, stop_at=g2.num_vertices, alpha=alpha)
    order = [v for p in state.partitions for v in p.vertices]
    blanks = [v for v in range(g2.num_vertices) if g2.label(v) == LAMBDA]
    return tuple(order + blanks)

