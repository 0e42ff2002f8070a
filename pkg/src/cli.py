#!/usr/bin/env python3
"""
graphsift - exact graph similarity search under graph edit distance

Commands:
    build   pairwise GED index over a graph database
    query   threshold queries, with or without the index
    ged     threshold GED of one pair of database graphs
    gen     synthetic graph database
    bench   query workload over a range of thresholds
    init    example .graphsift.yaml
"""

import re
import sys

import click
from pydantic import ValidationError

from src.benchmarks.benchmark import benchmark_range, run_workload
from src.core.config import ConfigError, ConfigLoader
from src.core.domain import BoundFilter, BuildConfig, GeneratorConfig, SearchOptions
from src.core.export import ResultWriter, StatsExporter
from src.core.ged import GedSearch
from src.core.generator import GeneratorConfigError, gen_synthetic, sample_queries
from src.core.graph import GraphError, load_db, save_db
from src.core.index import IndexFormatError, build_index, load_index, save_index
from src.core.oracle import OracleSizeError, brute_force_ged
from src.core.search import Query, linear_scan
from src.core.tracking import create_tracker
from src.utils.logger import logger, set_level

EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def _fail(message: str, code: int = EXIT_USAGE) -> None:
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def _load_config(config_path):
    loader = ConfigLoader(config_path)
    loader.load()
    set_level(loader.get('logging.level', 'INFO'))
    return loader


def _search_options(loader: ConfigLoader, filters_flag=None) -> SearchOptions:
    names = loader.enabled_filters()
    if filters_flag is not None:
        names = [name.strip() for name in filters_flag.split(',') if name.strip()]
    return SearchOptions(filters=[BoundFilter(name) for name in names],
                         partition_size=loader.get('ged.partition_size', 6))


def _int_list(text):
    return [int(part) for part in text.split(',') if part.strip()]


def _report_tracking(usage):
    click.echo(f"Elapsed: {usage['duration_seconds']:.3f}s", err=True)
    if usage['tracking_enabled']:
        click.echo(f"Memory: {usage['memory']:.1f} MB (start {usage['start_memory']:.1f} MB), "
                   f"CPU: {usage['cpu']:.1f}%", err=True)


@click.group()
def cli():
    """graphsift - exact GED similarity search"""
    pass


@cli.command()
@click.option('--db', 'db_path', required=True, type=click.Path(exists=True, dir_okay=False), help='Graph database file')
@click.option('--out', 'out_path', required=True, type=click.Path(dir_okay=False), help='Index file to write')
@click.option('--tau-index', type=int, default=None, help='Indexing threshold (default: tau-max + slack)')
@click.option('--tau-max', type=int, default=None, help='Largest query threshold to support')
@click.option('--slack', type=int, default=None, help='Added to tau-max to obtain the indexing threshold')
@click.option('--threads', type=int, default=None, help='Worker threads')
@click.option('--node-budget', type=int, default=None, help='Live search-node limit over all workers')
@click.option('--verify', is_flag=True, help='Cross-check every pair against exhaustive GED')
@click.option('--config', type=click.Path(exists=True), default=None, help='Path to .graphsift.yaml config file')
@click.option('--profile', is_flag=True, help='Report memory and CPU usage')
def build(db_path, out_path, tau_index, tau_max, slack, threads, node_budget, verify, config, profile):
    """Build the pairwise GED index of a graph database"""
    try:
        loader = _load_config(config)
        if tau_index is None:
            if tau_max is not None or slack is not None:
                tau_index = ((tau_max if tau_max is not None else loader.get('index.tau_max'))
                             + (slack if slack is not None else loader.get('index.slack')))
            else:
                tau_index = loader.tau_index()
        cfg = BuildConfig(
            tau_index=tau_index,
            n_workers=threads if threads is not None else loader.get('index.threads', 1),
            node_budget=node_budget if node_budget is not None else loader.get('index.node_budget'),
            poll_interval=loader.get('index.governor_interval_ms', 1) / 1000,
            search=_search_options(loader),
        )
        db = load_db(db_path)
    except (ConfigError, ValidationError, GraphError, ValueError, OSError) as e:
        _fail(str(e))

    tracker = create_tracker(profile)
    tracker.start()
    index = build_index(db, cfg)
    usage = tracker.stop()

    try:
        save_index(index, out_path)
    except OSError as e:
        _fail(f"cannot write index {out_path}: {e}")

    click.echo(f"Graphs: {len(db)}")
    click.echo(f"Entries: {index.entry_count}")
    click.echo(f"Inexact: {index.inexact_percentage:.2f}%")
    click.echo(f"Compact size: {index.compact_size_bits() // 8} bytes")
    _report_tracking(usage)

    if verify:
        try:
            problems = verify_index(db, index)
        except OracleSizeError as e:
            _fail(f"cannot verify: {e}")
        for problem in problems:
            click.echo(f"Mismatch: {problem}", err=True)
        if problems:
            sys.exit(EXIT_VERIFY_FAILED)
        click.echo("[OK] Index verified against exhaustive GED")


def verify_index(db, index):
    """Pairs whose stored entry disagrees with exhaustive GED."""
    problems = []
    for i in range(len(db)):
        for j in range(i + 1, len(db)):
            truth = brute_force_ged(db[i], db[j])
            entry = index.lookup(i, j)
            if entry is None:
                if truth <= index.tau_index:
                    problems.append(f"({i}, {j}) missing, ged {truth}")
            elif entry.exact and entry.distance != truth:
                problems.append(f"({i}, {j}) stored {entry.distance}, ged {truth}")
            elif not entry.exact and entry.distance > truth:
                problems.append(f"({i}, {j}) inexact {entry.distance} exceeds ged {truth}")
    return problems


@cli.command()
@click.option('--db', 'db_path', required=True, type=click.Path(exists=True, dir_okay=False), help='Graph database file')
@click.option('--index', 'index_path', default=None, type=click.Path(exists=True, dir_okay=False), help='Index file from build')
@click.option('--queries', 'queries_path', required=True, type=click.Path(exists=True, dir_okay=False), help='Query graphs (database format)')
@click.option('--tau', type=click.IntRange(min=0), required=True, help='GED threshold')
@click.option('--no-index', is_flag=True, help='Verify every candidate (linear scan)')
@click.option('--stats', 'stats_path', default=None, type=click.Path(dir_okay=False), help='Write run statistics (JSON lines)')
@click.option('--distances', is_flag=True, help='Append the verified distance to each row')
@click.option('--verify', is_flag=True, help='Cross-check every answer against a linear scan')
@click.option('--filters', default=None, help='Bound cascade, e.g. label,branch,partition')
@click.option('--config', type=click.Path(exists=True), default=None, help='Path to .graphsift.yaml config file')
def query(db_path, index_path, queries_path, tau, no_index, stats_path, distances, verify, filters, config):
    """Answer threshold similarity queries"""
    try:
        loader = _load_config(config)
        options = _search_options(loader, filters)
        db = load_db(db_path)
        queries = load_db(queries_path, labels=db.labels)
        index = None
        if not no_index:
            if index_path is None:
                _fail("--index is required unless --no-index is given")
            index = load_index(index_path)
            if len(index) != len(db):
                _fail(f"index covers {len(index)} graphs, database has {len(db)}")
    except (ConfigError, ValidationError, GraphError, IndexFormatError, ValueError, OSError) as e:
        _fail(str(e))

    results, report = run_workload(db, index, queries, tau, options)
    ResultWriter(sys.stdout, with_distances=distances).write(results)

    if stats_path:
        try:
            StatsExporter(stats_path).export([report])
        except OSError as e:
            _fail(f"cannot write stats {stats_path}: {e}")

    if verify and index is not None:
        failures = 0
        for q, result in zip(queries, results):
            expected = linear_scan(db, Query(q, tau, q.gid), options).results
            if expected != result.results:
                failures += 1
                click.echo(f"Mismatch on query {q.gid}: index {result.results}, scan {expected}", err=True)
        if failures:
            sys.exit(EXIT_VERIFY_FAILED)
        click.echo(f"[OK] {len(results)} queries match the linear scan", err=True)


@cli.command()
@click.option('--db', 'db_path', required=True, type=click.Path(exists=True, dir_okay=False), help='Graph database file')
@click.option('--g1', type=int, required=True, help='Id of the first graph')
@click.option('--g2', type=int, required=True, help='Id of the second graph')
@click.option('--tau', type=click.IntRange(min=0), required=True, help='GED threshold')
@click.option('--filters', default=None, help='Bound cascade, e.g. label,branch,partition')
@click.option('--config', type=click.Path(exists=True), default=None, help='Path to .graphsift.yaml config file')
def ged(db_path, g1, g2, tau, filters, config):
    """Threshold GED of two database graphs (tau + 1 means "greater than tau")"""
    try:
        loader = _load_config(config)
        options = _search_options(loader, filters)
        db = load_db(db_path)
    except (ConfigError, ValidationError, GraphError, ValueError, OSError) as e:
        _fail(str(e))
    for gid in (g1, g2):
        if not 0 <= gid < len(db):
            _fail(f"graph id {gid} out of range 0..{len(db) - 1}")

    result = GedSearch(db[g1], db[g2], tau, options).run()
    click.echo(f"ged: {result.distance}")
    click.echo(f"mappings_pushed: {result.stats.nodes_pushed}")


@cli.command()
@click.option('--out', 'out_path', required=True, type=click.Path(dir_okay=False), help='Graph database file to write')
@click.option('--count', type=int, default=10, help='Number of base graphs')
@click.option('--avg-edges', type=float, default=40.0, help='Average edges per base graph')
@click.option('--density', type=float, default=0.2, help='Edge density 2|E|/(|V|(|V|-1))')
@click.option('--vlabels', type=int, default=5, help='Number of vertex labels')
@click.option('--elabels', type=int, default=2, help='Number of edge labels')
@click.option('--clones', type=int, default=0, help='Mutated copies per base graph')
@click.option('--mutations', type=int, default=0, help='Edit operations per clone')
@click.option('--mutation-choices', default=None, help='Draw edits per clone from this list, e.g. 2,4,6,8,10')
@click.option('--seed', type=int, default=0, help='Random seed')
@click.option('--queries-out', default=None, type=click.Path(dir_okay=False), help='Also sample queries into this file')
@click.option('--query-count', type=int, default=10, help='Number of sampled queries')
def gen(out_path, count, avg_edges, density, vlabels, elabels, clones, mutations, mutation_choices,
        seed, queries_out, query_count):
    """Generate a synthetic graph database"""
    try:
        cfg = GeneratorConfig(
            count=count, avg_edges=avg_edges, density=density,
            n_vertex_labels=vlabels, n_edge_labels=elabels,
            mutations_per_clone=mutations, clones=clones, rng_seed=seed,
            mutation_choices=_int_list(mutation_choices) if mutation_choices else None,
        )
        db = gen_synthetic(cfg)
        queries = None
        if queries_out:
            db, queries = sample_queries(db, query_count, seed)
    except (ValidationError, GeneratorConfigError, ValueError) as e:
        _fail(str(e))

    try:
        save_db(db, out_path)
        if queries is not None:
            save_db(queries, queries_out)
    except OSError as e:
        _fail(f"cannot write output: {e}")

    click.echo(f"Wrote {len(db)} graphs to {out_path}")
    if queries is not None:
        click.echo(f"Wrote {len(queries)} queries to {queries_out}")


def parse_tau_range(text: str) -> range:
    match = re.fullmatch(r'\s*(\d+)\s*\.\.\s*(\d+)\s*', text)
    if not match:
        raise click.BadParameter(f"expected A..B, got {text!r}")
    low, high = int(match.group(1)), int(match.group(2))
    if low > high:
        raise click.BadParameter(f"empty range {text!r}")
    return range(low, high + 1)


@cli.command()
@click.option('--db', 'db_path', required=True, type=click.Path(exists=True, dir_okay=False), help='Graph database file')
@click.option('--index', 'index_path', required=True, type=click.Path(exists=True, dir_okay=False), help='Index file from build')
@click.option('--queries', 'queries_path', required=True, type=click.Path(exists=True, dir_okay=False), help='Query graphs (database format)')
@click.option('--tau-range', 'tau_range', required=True, help='Thresholds to run, e.g. 1..6')
@click.option('--stats', 'stats_path', default=None, type=click.Path(dir_okay=False), help='Write run statistics (JSON lines)')
@click.option('--config', type=click.Path(exists=True), default=None, help='Path to .graphsift.yaml config file')
@click.option('--profile', is_flag=True, help='Report memory and CPU usage')
def bench(db_path, index_path, queries_path, tau_range, stats_path, config, profile):
    """Run a query workload at every threshold of a range"""
    try:
        taus = parse_tau_range(tau_range)
    except click.BadParameter as e:
        _fail(str(e))
    try:
        loader = _load_config(config)
        options = _search_options(loader)
        db = load_db(db_path)
        queries = load_db(queries_path, labels=db.labels)
        index = load_index(index_path)
        if len(index) != len(db):
            _fail(f"index covers {len(index)} graphs, database has {len(db)}")
    except (ConfigError, ValidationError, GraphError, IndexFormatError, ValueError, OSError) as e:
        _fail(str(e))

    tracker = create_tracker(profile)
    tracker.start()
    reports = benchmark_range(db, index, list(queries), taus, options)
    usage = tracker.stop()

    for report in reports:
        agg = report.aggregates()
        click.echo(
            f"tau={report.tau}\tqueries={len(report.rows)}"
            f"\tverified={_fmt(agg['mean_candidates_verified'])}"
            f"\tverified_no_index={_fmt(agg['mean_baseline_candidates_verified'])}"
            f"\tmappings={_fmt(agg['mean_mappings_pushed'])}"
            f"\tmappings_no_index={_fmt(agg['mean_baseline_mappings_pushed'])}"
        )
    _report_tracking(usage)

    if stats_path:
        try:
            StatsExporter(stats_path).export(reports)
        except OSError as e:
            _fail(f"cannot write stats {stats_path}: {e}")
    logger.info(f"Benchmark finished over {len(reports)} thresholds")


def _fmt(value):
    return '-' if value is None else f"{value:.2f}"


@cli.command('init')
@click.option('--out', 'out_path', default='.graphsift.yaml', type=click.Path(dir_okay=False), help='Where to write the example config')
def init(out_path):
    """Write an example .graphsift.yaml"""
    try:
        ConfigLoader(out_path).export_example_yaml(out_path)
    except (ConfigError, OSError) as e:
        _fail(str(e))
    click.echo(f"Example configuration written to: {out_path}")


if __name__ == '__main__':
    cli()
