"""
Threshold similarity search.

Candidates passing the label filter are verified in ascending bound order.
Every verified result r at distance d lets the index answer for r's close
neighborhood: graphs stored exactly within tau - d of r are results without
verification, and only unverified candidates stored within tau + d of r can
still be results. The remaining candidate set is replaced by that
intersection whenever tau + d fits into the index.
"""

import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from src.core.domain import QueryResult, QueryStats, SearchOptions
from src.core.ged import GedResult, GedSearch
from src.core.graph import Graph, GraphDatabase, lb_label
from src.core.index import GedIndex
from src.utils.logger import logger

Verifier = Callable[[Graph, Graph, int], GedResult]


@dataclass(frozen=True)
class Query:
    graph: Graph
    tau: int
    qid: int = 0

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError(f"tau must be non-negative, got {self.tau}")


def initial_candidates(db: GraphDatabase, query: Query) -> List[Tuple[int, int]]:
    """(graph id, label bound) of graphs passing the label filter, by bound then id."""
    scored = []
    for g in db:
        lb = lb_label(query.graph, g)
        if lb <= query.tau:
            scored.append((g.gid, lb))
    scored.sort(key=lambda item: (item[1], item[0]))
    return scored


def default_verifier(options: Optional[SearchOptions] = None) -> Verifier:
    def verify(q: Graph, g: Graph, tau: int) -> GedResult:
        return GedSearch(q, g, tau, options).run()
    return verify


def _account(stats: QueryStats, result: GedResult) -> None:
    stats.graphs_verified += 1
    if result.stats.root_survived:
        stats.candidates_verified += 1
    stats.mappings_pushed += result.stats.nodes_pushed


def similarity_search(db: GraphDatabase, index: Optional[GedIndex], query: Query,
                      verifier: Optional[Verifier] = None,
                      candidates: Optional[List[int]] = None,
                      options: Optional[SearchOptions] = None,
                      trace: Optional[List[tuple]] = None) -> QueryResult:
    """
    All graphs within GED tau of the query.

    `candidates` overrides the label-filtered initial set (ids in
    verification order). `trace` receives ('verify', gid, distance) and
    ('regenerate', gid, remaining ids) events.
    """
    started = time.perf_counter()
    verify = verifier or default_verifier(options)
    tau = query.tau
    stats = QueryStats()

    remaining = list(candidates) if candidates is not None else [
        gid for gid, _ in initial_candidates(db, query)]
    stats.initial_candidates = len(remaining)

    results: Dict[int, Optional[int]] = {}
    verified = set()
    pos = 0
    while pos < len(remaining):
        gid = remaining[pos]
        pos += 1

        outcome = verify(query.graph, db[gid], tau)
        verified.add(gid)
        _account(stats, outcome)
        if trace is not None:
            trace.append(('verify', gid, outcome.distance))
        if outcome.distance > tau:
            continue

        delta = outcome.distance
        if gid not in results:
            results[gid] = delta
            stats.results_verified += 1

        if index is None or tau + delta > index.tau_index:
            continue

        collected = index.neighbors(gid, tau - delta, exact_only=True)
        for other in collected:
            if other not in results:
                results[other] = None
                stats.results_from_index += 1

        reachable = index.neighbors(gid, tau + delta, exact_only=False)
        remaining = [c for c in remaining[pos:]
                     if c not in verified and c in reachable and c not in collected]
        pos = 0
        stats.regenerations += 1
        if trace is not None:
            trace.append(('regenerate', gid, tuple(remaining)))

    elapsed_us = int((time.perf_counter() - started) * 1_000_000)
    logger.debug(f"Query {query.qid} tau={tau}: {len(results)} results, "
                 f"{stats.graphs_verified} verified, {stats.regenerations} regenerations")
    return QueryResult(
        query_id=query.qid,
        tau=tau,
        results=sorted(results),
        distances={gid: d for gid, d in results.items() if d is not None},
        stats=stats,
        elapsed_us=elapsed_us,
    )


def linear_scan(db: GraphDatabase, query: Query,
                options: Optional[SearchOptions] = None,
                verifier: Optional[Verifier] = None) -> QueryResult:
    """Verify every label-filtered candidate; no index."""
    return similarity_search(db, None, query, verifier=verifier, options=options)
