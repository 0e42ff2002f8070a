"""
Threshold graph edit distance.

Best-first search over partial vertex mappings. Level i of the search tree
maps the i-th vertex of a fixed g2 order onto a g1 vertex (or a blank). A
node is queued only while its lower bound

    ec(m) + B(m) + f_lb(unmapped g1, unmapped g2)

stays within tau, where f_lb walks the cascade label -> branch -> partition
and is cached per unmapped-subgraph pair, keyed by the mapped g1 vertices.
"""

import heapq
import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from src.core.domain import CASCADE, BoundFilter, SearchOptions
from src.core.graph import LAMBDA, Graph
from src.core.partition import PartitionState, derive_vertex_order, partition_graph
from src.core.state import (
    SideState, UnmappedState, bridge_cost, compact_branch_lb, half_units_to_bound, label_lb,
)

CacheKey = Tuple[int, int]


def pad_graphs(g1: Graph, g2: Graph) -> Tuple[Graph, Graph]:
    """Append blank vertices to the smaller graph so both have equal order."""
    n = max(g1.num_vertices, g2.num_vertices)
    return g1.with_blanks(n - g1.num_vertices), g2.with_blanks(n - g2.num_vertices)


@dataclass(slots=True)
class MappingNode:
    """
    Search-tree node. pairs[k] is the g1 vertex mapped onto order[k];
    bitmap has a bit per real g1 vertex in use, n_eps counts used blanks.
    state is the unmapped-subgraph state of both sides, derived from the
    parent's when the node is created.
    """
    pairs: Tuple[int, ...]
    ec: int
    bitmap: int
    n_eps: int
    lb: int
    state: Optional[UnmappedState] = field(default=None, compare=False, repr=False)

    @property
    def depth(self) -> int:
        return len(self.pairs)

    @property
    def key(self) -> CacheKey:
        return (self.bitmap, self.n_eps)


def extend_edit_cost(parent: MappingNode, u: int, v: int, g1: Graph, g2: Graph,
                     order: Tuple[int, ...]) -> int:
    """Edit cost of parent's mapping plus u -> v."""
    cost = parent.ec + (g1.label(u) != g2.label(v))
    for k, mapped in enumerate(parent.pairs):
        if g1.edge_label(u, mapped) != g2.edge_label(v, order[k]):
            cost += 1
    return cost


@dataclass
class BoundCacheEntry:
    """Best known bound for one unmapped-subgraph pair; index is the next cascade step."""
    lb: int = 0
    index: int = 0
    partition: Optional[PartitionState] = None

    def raise_to(self, value: int) -> None:
        if value > self.lb:
            self.lb = value


class SearchControl:
    """
    Cross-thread handle of a running search.

    The search publishes its queue size after every expansion; a governor
    reads it and may request an abort, after which the search stops at its
    next pop and reports its smallest queued bound as an inexact result.
    """

    def __init__(self, on_publish: Optional[Callable[['SearchControl'], None]] = None):
        self._abort = threading.Event()
        self.queue_size = 0
        self.active = False
        self.on_publish = on_publish

    def request_abort(self) -> None:
        self._abort.set()

    @property
    def abort_requested(self) -> bool:
        return self._abort.is_set()

    def reset(self) -> None:
        self._abort.clear()
        self.queue_size = 0

    def publish(self, queue_size: int) -> None:
        self.queue_size = queue_size
        if self.on_publish is not None:
            self.on_publish(self)


@dataclass
class SearchStats:
    nodes_pushed: int = 0
    nodes_popped: int = 0
    cascade_calls: Dict[str, int] = field(
        default_factory=lambda: {bound.value: 0 for bound in CASCADE})
    cache_hits: int = 0
    root_survived: bool = False


@dataclass
class GedResult:
    """distance is the GED when <= tau, otherwise tau + 1; a lower bound when not exact."""
    distance: int
    exact: bool = True
    stats: SearchStats = field(default_factory=SearchStats)


class GedSearch:
    """One threshold GED computation between g1 and g2."""

    def __init__(self, g1: Graph, g2: Graph, tau: int,
                 options: Optional[SearchOptions] = None,
                 control: Optional[SearchControl] = None,
                 trace: Optional[List[Tuple[CacheKey, int, int]]] = None):
        if tau < 0:
            raise ValueError(f"tau must be non-negative, got {tau}")
        self.g1, self.g2 = pad_graphs(g1, g2)
        self.tau = tau
        self.options = options or SearchOptions()
        self.control = control
        self.trace = trace
        self.n = self.g1.num_vertices
        self.blanks1 = tuple(v for v in range(self.n) if self.g1.label(v) == LAMBDA)
        self.reals1 = tuple(v for v in range(self.n) if self.g1.label(v) != LAMBDA)
        self.order = derive_vertex_order(self.g2, host=self.g1, alpha=self.options.partition_size)
        self.cache: Dict[CacheKey, BoundCacheEntry] = {}
        self.stats = SearchStats()

    # -- bounds -------------------------------------------------------------

    def lower_bound(self, ec: int, bridges: int, key: CacheKey, state: UnmappedState) -> int:
        """Cascaded bound of a node: stops as soon as it exceeds tau."""
        tau = self.tau
        if ec > tau:
            return ec
        dist = ec + bridges
        if dist > tau:
            return dist

        entry = self.cache.get(key)
        if entry is None:
            entry = self.cache[key] = BoundCacheEntry()
        else:
            self.stats.cache_hits += 1
        if dist + entry.lb > tau:
            return dist + entry.lb

        slack = tau - dist
        while entry.index < len(CASCADE):
            bound = CASCADE[entry.index]
            if self.options.uses(bound):
                entry.raise_to(self._apply(bound, entry, state, slack))
            entry.index += 1
            self._record(key, entry)
            if dist + entry.lb > tau:
                return dist + entry.lb

        partial = entry.partition
        if partial is not None and not partial.exhausted and partial.stop_at < slack:
            entry.raise_to(self._apply(BoundFilter.PARTITION, entry, state, slack))
            self._record(key, entry)

        return dist + entry.lb

    def _apply(self, bound: BoundFilter, entry: BoundCacheEntry,
               state: UnmappedState, slack: int) -> int:
        self.stats.cascade_calls[bound.value] += 1
        if bound is BoundFilter.LABEL:
            return label_lb(state)
        if bound is BoundFilter.BRANCH:
            return half_units_to_bound(compact_branch_lb(state))
        res1, res2 = state.residual_graphs()
        entry.partition = partition_graph(res2, res1, stop_at=slack, resume=entry.partition,
                                          alpha=self.options.partition_size)
        return entry.partition.count

    def _record(self, key: CacheKey, entry: BoundCacheEntry) -> None:
        if self.trace is not None:
            self.trace.append((key, entry.index, entry.lb))

    # -- search -------------------------------------------------------------

    def _children(self, node: MappingNode):
        """Unused real g1 vertices, then at most one blank (the lowest unused)."""
        for u in self.reals1:
            if not node.bitmap >> u & 1:
                yield u
        if node.n_eps < len(self.blanks1):
            yield self.blanks1[node.n_eps]

    def run(self) -> GedResult:
        tau = self.tau
        stats = self.stats
        seq = itertools.count()

        root_state = UnmappedState(SideState.from_scratch(self.g1, ()),
                                   SideState.from_scratch(self.g2, ()))
        root = MappingNode((), 0, 0, 0, 0, root_state)
        root.lb = self.lower_bound(0, 0, root.key, root_state)
        if root.lb > tau:
            return GedResult(tau + 1, True, stats)
        stats.root_survived = True

        heap: List[Tuple[int, int, int, MappingNode]] = [(root.lb, 0, next(seq), root)]
        stats.nodes_pushed += 1

        while heap:
            if self.control is not None and self.control.abort_requested:
                return GedResult(heap[0][0], False, stats)

            _, _, _, node = heapq.heappop(heap)
            stats.nodes_popped += 1
            if node.depth == self.n:
                return GedResult(node.ec, True, stats)

            side1 = node.state.side1
            v = self.order[node.depth]
            child_side2 = node.state.side2.extend(v)
            # children hold their own states from here on
            node.state = None
            for u in self._children(node):
                ec = extend_edit_cost(node, u, v, self.g1, self.g2, self.order)
                if ec > tau:
                    continue
                pairs = node.pairs + (u,)
                state = UnmappedState(side1.extend(u), child_side2)
                if self.g1.label(u) == LAMBDA:
                    child = MappingNode(pairs, ec, node.bitmap, node.n_eps + 1, 0, state)
                else:
                    child = MappingNode(pairs, ec, node.bitmap | (1 << u), node.n_eps, 0, state)
                child.lb = self.lower_bound(ec, bridge_cost(pairs, state, self.order),
                                            child.key, state)
                if child.lb <= tau:
                    heapq.heappush(heap, (child.lb, -child.depth, next(seq), child))
                    stats.nodes_pushed += 1

            if self.control is not None:
                self.control.publish(len(heap))

        return GedResult(tau + 1, True, stats)


def threshold_ged(g1: Graph, g2: Graph, tau: int,
                  options: Optional[SearchOptions] = None) -> int:
    """ged(g1, g2) when it is at most tau, otherwise tau + 1."""
    return GedSearch(g1, g2, tau, options).run().distance


def cache_equivalence_count(node: MappingNode) -> int:
    """Number of tree nodes sharing this node's unmapped subgraphs."""
    if node.depth > 20:
        raise ValueError("cache_equivalence_count is limited to mappings of at most 20 pairs")
    return math.factorial(node.depth) // math.factorial(node.n_eps)
