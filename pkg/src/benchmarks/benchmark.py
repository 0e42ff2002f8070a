"""
Workload benchmarking for graphsift.

Runs a query workload at one or more thresholds, with and without the
pairwise index, and compares GED verification cost with the full bound
cascade against the label bound alone.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from src.core.domain import QueryResult, QueryRow, RunReport, SearchOptions
from src.core.ged import GedSearch
from src.core.graph import Graph, GraphDatabase
from src.core.index import GedIndex
from src.core.search import Query, linear_scan, similarity_search
from src.utils.logger import logger
from src.utils.metrics import reduction_ratio, summarize


def run_workload(db: GraphDatabase, index: Optional[GedIndex], queries: Iterable[Graph],
                 tau: int, options: Optional[SearchOptions] = None
                 ) -> Tuple[List[QueryResult], RunReport]:
    """Answer every query at `tau`; linear scan when index is None."""
    results = []
    for q in queries:
        query = Query(q, tau, q.gid)
        if index is None:
            results.append(linear_scan(db, query, options))
        else:
            results.append(similarity_search(db, index, query, options=options))
    report = RunReport(tau=tau, mode='scan' if index is None else 'index',
                       rows=[QueryRow.from_result(r) for r in results])
    return results, report


def benchmark_range(db: GraphDatabase, index: GedIndex, queries: Sequence[Graph],
                    taus: Iterable[int], options: Optional[SearchOptions] = None
                    ) -> List[RunReport]:
    """One report per tau; rows carry the linear-scan baseline columns."""
    reports = []
    for tau in taus:
        _, indexed = run_workload(db, index, queries, tau, options)
        _, scanned = run_workload(db, None, queries, tau, options)
        rows = []
        for row, base in zip(indexed.rows, scanned.rows):
            rows.append(row.model_copy(update={
                'baseline_candidates_verified': base.candidates_verified,
                'baseline_mappings_pushed': base.mappings_pushed,
                'baseline_elapsed_us': base.elapsed_us,
            }))
        report = RunReport(tau=tau, mode='bench', rows=rows)
        aggregates = report.aggregates()
        logger.info(f"tau={tau}: mean verified {aggregates['mean_candidates_verified']} "
                    f"(no index {aggregates['mean_baseline_candidates_verified']})")
        reports.append(report)
    return reports


@dataclass
class PipelineEffect:
    median_full: float
    median_label_only: float

    @property
    def ratio(self) -> Optional[float]:
        return reduction_ratio(self.median_label_only, self.median_full)


def pipeline_effect(pairs: Iterable[Tuple[Graph, Graph]], tau: int,
                    partition_size: int = 6) -> PipelineEffect:
    """Median search nodes pushed with the whole cascade versus the label bound only."""
    full = SearchOptions(partition_size=partition_size)
    label_only = SearchOptions.label_only().model_copy(update={'partition_size': partition_size})
    pushed_full, pushed_label = [], []
    for g1, g2 in pairs:
        pushed_full.append(GedSearch(g1, g2, tau, full).run().stats.nodes_pushed)
        pushed_label.append(GedSearch(g1, g2, tau, label_only).run().stats.nodes_pushed)
    full_stats, label_stats = summarize(pushed_full), summarize(pushed_label)
    if not full_stats['count']:
        return PipelineEffect(0.0, 0.0)
    return PipelineEffect(float(full_stats['median']), float(label_stats['median']))
