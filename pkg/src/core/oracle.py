"""
Exhaustive reference computations for small graphs.

Used to cross-check the search engine; exponential in the vertex count.
"""

from typing import Sequence

from src.core.ged import pad_graphs
from src.core.graph import Graph

MAX_ORACLE_VERTICES = 8


class OracleSizeError(ValueError):
    """Input too large for exhaustive enumeration."""
    pass


def mapping_cost(g1: Graph, g2: Graph, images: Sequence[int], order: Sequence[int]) -> int:
    """
    Edit cost of the partial mapping images[k] -> order[k], recomputed from
    scratch: relabel cost of every pair plus one per mismatching vertex pair
    edge (an absent edge counts as its own label).
    """
    cost = 0
    for k, u in enumerate(images):
        v = order[k]
        cost += g1.label(u) != g2.label(v)
        for j in range(k):
            cost += g1.edge_label(u, images[j]) != g2.edge_label(v, order[j])
    return cost


def brute_force_ged(g1: Graph, g2: Graph, max_vertices: int = MAX_ORACLE_VERTICES) -> int:
    """Exact GED by enumerating every bijection of the padded vertex sets."""
    p1, p2 = pad_graphs(g1, g2)
    n = p1.num_vertices
    if n > max_vertices:
        raise OracleSizeError(f"{n} vertices after padding exceeds the oracle limit of {max_vertices}")

    # deleting everything and inserting everything is always a valid script
    best = [g1.num_vertices + g1.num_edges + g2.num_vertices + g2.num_edges]
    images = [0] * n
    used = [False] * n

    def assign(level: int, cost: int) -> None:
        if cost >= best[0]:
            return
        if level == n:
            best[0] = cost
            return
        for u in range(n):
            if used[u]:
                continue
            step = p1.label(u) != p2.label(level)
            for j in range(level):
                step += p1.edge_label(u, images[j]) != p2.edge_label(level, j)
            used[u] = True
            images[level] = u
            assign(level + 1, cost + step)
            used[u] = False

    assign(0, 0)
    return best[0]
