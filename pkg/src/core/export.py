"""
Export module for graphsift - query results and run statistics.

Results are tab-separated rows (query id, result id and optionally the
verified distance); statistics are line-delimited JSON records.
"""

import csv
import json
from pathlib import Path
from typing import Iterable, List, Optional, TextIO

from src.core.domain import QueryResult, RunReport

# Default output directory for all exports
OUTPUT_DIR = Path(__file__).parent.parent.parent / 'output'


class ResultWriter:
    """Write query answers as TSV rows sorted by query id then result id."""

    def __init__(self, stream: TextIO, with_distances: bool = False):
        self.writer = csv.writer(stream, delimiter='\t', lineterminator='\n')
        self.with_distances = with_distances

    @staticmethod
    def rows(result: QueryResult, with_distances: bool = False) -> List[List[str]]:
        out = []
        for gid in result.results:
            row = [str(result.query_id), str(gid)]
            if with_distances:
                distance = result.distances.get(gid)
                row.append('' if distance is None else str(distance))
            out.append(row)
        return out

    def write(self, results: Iterable[QueryResult]) -> int:
        written = 0
        for result in sorted(results, key=lambda r: r.query_id):
            for row in self.rows(result, self.with_distances):
                self.writer.writerow(row)
                written += 1
        return written


class StatsExporter:
    """Export run reports to line-delimited JSON."""

    def __init__(self, output_path: Optional[str] = None):
        """
        Args:
            output_path: Path to write to. If None, defaults to 'output/graphsift-stats.jsonl'
        """
        if output_path:
            self.output_path = output_path
        else:
            OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
            self.output_path = str(OUTPUT_DIR / 'graphsift-stats.jsonl')

    @staticmethod
    def lines(report: RunReport) -> List[str]:
        out = []
        for row in report.rows:
            record = {'kind': 'row', 'mode': report.mode, **row.model_dump()}
            out.append(json.dumps(record, sort_keys=True))
        aggregate = {'kind': 'aggregate', 'mode': report.mode, 'tau': report.tau,
                     **report.aggregates()}
        out.append(json.dumps(aggregate, sort_keys=True))
        return out

    def export(self, reports: Iterable[RunReport]) -> str:
        """
        Write every report, one JSON object per line.

        Returns:
            Path to the generated file
        """
        with open(self.output_path, 'w', encoding='utf-8') as f:
            for report in reports:
                for line in self.lines(report):
                    f.write(line + '\n')
        return self.output_path


def read_stats(path: str) -> List[dict]:
    with open(path, 'r', encoding='utf-8') as f:
        return [json.loads(line) for line in f if line.strip()]
