"""
Domain models for graphsift.
Implements strictly typed Pydantic models for configuration and reporting.
"""

from enum import Enum
from statistics import fmean
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class BoundFilter(str, Enum):
    """Members of the lower-bound cascade, in cascade order."""
    LABEL = "label"
    BRANCH = "branch"
    PARTITION = "partition"


CASCADE = (BoundFilter.LABEL, BoundFilter.BRANCH, BoundFilter.PARTITION)


class SearchOptions(BaseModel):
    """Tuning knobs of a single GED search."""
    filters: List[BoundFilter] = Field(default_factory=lambda: list(CASCADE))
    partition_size: int = Field(default=6, ge=1, le=16)

    model_config = ConfigDict(extra='ignore', frozen=True)

    def uses(self, bound: BoundFilter) -> bool:
        return bound in self.filters

    @classmethod
    def label_only(cls) -> 'SearchOptions':
        return cls(filters=[BoundFilter.LABEL])


class BuildConfig(BaseModel):
    """
    Parameters of a pairwise index build.

    node_budget caps the number of live search-tree nodes summed over all
    workers; None means unlimited.
    """
    tau_index: int = Field(ge=1, le=127)
    n_workers: int = Field(default=1, ge=1)
    node_budget: Optional[int] = Field(default=None, gt=0)
    poll_interval: float = Field(default=0.001, gt=0)
    search: SearchOptions = Field(default_factory=SearchOptions)

    model_config = ConfigDict(extra='ignore')


class GeneratorConfig(BaseModel):
    """Synthetic corpus parameters (edge-count sized graphs with clones)."""
    count: int = Field(ge=1)
    avg_edges: float = Field(gt=0)
    density: float = Field(gt=0, le=1)
    n_vertex_labels: int = Field(default=5, ge=1)
    n_edge_labels: int = Field(default=2, ge=1)
    mutations_per_clone: int = Field(default=0, ge=0)
    clones: int = Field(default=0, ge=0)
    rng_seed: int = 0
    mutation_choices: Optional[List[int]] = None

    model_config = ConfigDict(extra='ignore')

    @field_validator('mutation_choices')
    @classmethod
    def check_choices(cls, v: Optional[List[int]]) -> Optional[List[int]]:
        if v is None:
            return v
        if not v:
            raise ValueError("mutation_choices must not be empty")
        if any(m < 0 for m in v):
            raise ValueError("mutation_choices must be non-negative")
        return v


class QueryStats(BaseModel):
    """
    Counters collected while answering one query.

    graphs_verified counts every call into the GED search; candidates_verified
    only those whose root node survived the bound pipeline.
    """
    initial_candidates: int = 0
    graphs_verified: int = 0
    candidates_verified: int = 0
    regenerations: int = 0
    mappings_pushed: int = 0
    results_from_index: int = 0
    results_verified: int = 0

    model_config = ConfigDict(extra='ignore')

    @property
    def result_count(self) -> int:
        return self.results_from_index + self.results_verified


class QueryResult(BaseModel):
    """Answer set of one query plus the distances known for it."""
    query_id: int
    tau: int
    results: List[int] = Field(default_factory=list)
    distances: Dict[int, int] = Field(default_factory=dict)
    stats: QueryStats = Field(default_factory=QueryStats)
    elapsed_us: int = 0

    model_config = ConfigDict(extra='ignore')


class QueryRow(BaseModel):
    """One report line; the baseline_* columns are filled by benchmark runs."""
    query_id: int
    tau: int
    result_count: int
    candidates_verified: int
    mappings_pushed: int
    elapsed_us: int
    regenerations: int = 0
    results_from_index: int = 0
    baseline_candidates_verified: Optional[int] = None
    baseline_mappings_pushed: Optional[int] = None
    baseline_elapsed_us: Optional[int] = None

    model_config = ConfigDict(extra='ignore')

    @classmethod
    def from_result(cls, result: QueryResult) -> 'QueryRow':
        return cls(
            query_id=result.query_id,
            tau=result.tau,
            result_count=len(result.results),
            candidates_verified=result.stats.candidates_verified,
            mappings_pushed=result.stats.mappings_pushed,
            elapsed_us=result.elapsed_us,
            regenerations=result.stats.regenerations,
            results_from_index=result.stats.results_from_index,
        )


_AGGREGATED = (
    'result_count', 'candidates_verified', 'mappings_pushed', 'elapsed_us',
    'regenerations', 'results_from_index', 'baseline_candidates_verified',
    'baseline_mappings_pushed', 'baseline_elapsed_us',
)


class RunReport(BaseModel):
    """Per-query rows of a workload run at one threshold."""
    tau: Optional[int] = None
    mode: str = "index"
    rows: List[QueryRow] = Field(default_factory=list)

    model_config = ConfigDict(extra='ignore')

    def aggregates(self) -> Dict[str, Optional[float]]:
        """Means over rows; None for a column no row carries."""
        out: Dict[str, Optional[float]] = {'queries': float(len(self.rows))}
        for name in _AGGREGATED:
            values = [getattr(r, name) for r in self.rows if getattr(r, name) is not None]
            out[f'mean_{name}'] = fmean(values) if values else None
        return out
