"""
Tests for the graphsift command line.
Runs gen, build, query, ged, bench and init end to end on tiny databases.
"""

import unittest

from click.testing import CliRunner

from src.cli import cli, parse_tau_range
from src.core.export import read_stats
from src.core.index import load_index

GEN_ARGS = [
    'gen', '--out', 'db.txt', '--count', '4', '--avg-edges', '4', '--density', '0.8',
    '--vlabels', '3', '--elabels', '2', '--clones', '2', '--mutations', '1', '--seed', '1',
    '--queries-out', 'queries.txt', '--query-count', '2',
]


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.runner = CliRunner()

    def invoke(self, args):
        return self.runner.invoke(cli, args, catch_exceptions=False)

    def make_workspace(self, tau_index='3'):
        """Generate a database with queries and index it."""
        result = self.invoke(GEN_ARGS)
        self.assertEqual(result.exit_code, 0, result.output)
        result = self.invoke(['build', '--db', 'db.txt', '--out', 'db.idx',
                              '--tau-index', tau_index, '--threads', '2'])
        self.assertEqual(result.exit_code, 0, result.output)
        return result


class TestGenCommand(CliTestCase):
    """Test synthetic database generation"""

    def test_gen_writes_database_and_queries(self):
        """Test that gen writes the database and the sampled queries."""
        with self.runner.isolated_filesystem():
            result = self.invoke(GEN_ARGS)
            assert result.exit_code == 0
            assert 'Wrote 10 graphs to db.txt' in result.output
            assert 'Wrote 2 queries to queries.txt' in result.output
            with open('db.txt') as f:
                assert f.read().count('t #') == 10

    def test_gen_is_deterministic(self):
        """Test that gen output depends only on the seed."""
        with self.runner.isolated_filesystem():
            self.invoke(['gen', '--out', 'a.txt', '--count', '3', '--avg-edges', '5', '--density', '0.5'])
            self.invoke(['gen', '--out', 'b.txt', '--count', '3', '--avg-edges', '5', '--density', '0.5'])
            with open('a.txt') as a, open('b.txt') as b:
                assert a.read() == b.read()

    def test_gen_rejects_bad_density(self):
        """Test that an out-of-range density exits with code 2."""
        with self.runner.isolated_filesystem():
            result = self.invoke(['gen', '--out', 'db.txt', '--density', '1.5'])
            assert result.exit_code == 2
            assert 'Error' in result.output

    def test_gen_rejects_bad_mutation_choices(self):
        """Test that a malformed mutation list exits with code 2."""
        with self.runner.isolated_filesystem():
            result = self.invoke(['gen', '--out', 'db.txt', '--mutation-choices', '2,x'])
            assert result.exit_code == 2


class TestBuildCommand(CliTestCase):
    """Test index construction"""

    def test_build_reports_summary(self):
        """Test the summary printed by build."""
        with self.runner.isolated_filesystem():
            result = self.make_workspace()
            assert 'Graphs: 10' in result.output
            assert 'Entries:' in result.output
            assert 'Inexact: 0.00%' in result.output
            index = load_index('db.idx')
            assert len(index) == 10
            assert index.tau_index == 3

    def test_build_tau_from_max_and_slack(self):
        """Test that build derives tau_index from tau-max and slack."""
        with self.runner.isolated_filesystem():
            self.invoke(GEN_ARGS)
            result = self.invoke(['build', '--db', 'db.txt', '--out', 'db.idx',
                                  '--tau-max', '1', '--slack', '1'])
            assert result.exit_code == 0
            assert load_index('db.idx').tau_index == 2

    def test_build_verify(self):
        """Test build with the exhaustive cross-check."""
        with self.runner.isolated_filesystem():
            self.invoke(GEN_ARGS)
            result = self.invoke(['build', '--db', 'db.txt', '--out', 'db.idx',
                                  '--tau-index', '2', '--verify'])
            assert result.exit_code == 0
            assert '[OK] Index verified against exhaustive GED' in result.output

    def test_build_rejects_malformed_database(self):
        """Test that a parse error exits with code 2."""
        with self.runner.isolated_filesystem():
            with open('bad.txt', 'w') as f:
                f.write("t # 0\nv 0 A\ne 0 0 x\n")
            result = self.invoke(['build', '--db', 'bad.txt', '--out', 'db.idx', '--tau-index', '2'])
            assert result.exit_code == 2
            assert 'line 3' in result.output

    def test_build_uses_config_file(self):
        """Test that build reads .graphsift.yaml from the working directory."""
        with self.runner.isolated_filesystem():
            self.invoke(GEN_ARGS)
            with open('.graphsift.yaml', 'w') as f:
                f.write("index:\n  tau_max: 1\n  slack: 0\n  threads: 1\n")
            result = self.invoke(['build', '--db', 'db.txt', '--out', 'db.idx',
                                  '--config', '.graphsift.yaml'])
            assert result.exit_code == 0
            assert load_index('db.idx').tau_index == 1

    def test_build_rejects_invalid_config(self):
        """Test that an unknown filter in the config exits with code 2."""
        with self.runner.isolated_filesystem():
            self.invoke(GEN_ARGS)
            with open('bad.yaml', 'w') as f:
                f.write("ged:\n  filters: [label, magic]\n")
            result = self.invoke(['build', '--db', 'db.txt', '--out', 'db.idx', '--config', 'bad.yaml'])
            assert result.exit_code == 2
            assert 'unknown filter' in result.output


class TestQueryCommand(CliTestCase):
    """Test threshold queries"""

    def test_index_and_scan_print_identical_rows(self):
        """Test that indexed and --no-index runs print the same rows."""
        with self.runner.isolated_filesystem():
            self.make_workspace()
            indexed = self.invoke(['query', '--db', 'db.txt', '--index', 'db.idx',
                                   '--queries', 'queries.txt', '--tau', '2'])
            scanned = self.invoke(['query', '--db', 'db.txt', '--queries', 'queries.txt',
                                   '--tau', '2', '--no-index'])
            assert indexed.exit_code == 0
            assert scanned.exit_code == 0
            assert indexed.stdout == scanned.stdout
            for line in indexed.stdout.splitlines():
                assert len(line.split('\t')) == 2

    def test_distances_column(self):
        """Test the optional distance column."""
        with self.runner.isolated_filesystem():
            self.make_workspace()
            result = self.invoke(['query', '--db', 'db.txt', '--queries', 'queries.txt',
                                  '--tau', '2', '--no-index', '--distances'])
            assert result.exit_code == 0
            for line in result.stdout.splitlines():
                qid, gid, distance = line.split('\t')
                assert 0 <= int(distance) <= 2

    def test_stats_file(self):
        """Test that query writes JSON-lines statistics."""
        with self.runner.isolated_filesystem():
            self.make_workspace()
            result = self.invoke(['query', '--db', 'db.txt', '--index', 'db.idx',
                                  '--queries', 'queries.txt', '--tau', '1', '--stats', 'stats.jsonl'])
            assert result.exit_code == 0
            records = read_stats('stats.jsonl')
            assert [r['kind'] for r in records] == ['row', 'row', 'aggregate']
            assert records[-1]['queries'] == 2
            assert records[-1]['tau'] == 1

    def test_verify_against_scan(self):
        """Test query --verify on a consistent index."""
        with self.runner.isolated_filesystem():
            self.make_workspace()
            result = self.invoke(['query', '--db', 'db.txt', '--index', 'db.idx',
                                  '--queries', 'queries.txt', '--tau', '2', '--verify'])
            assert result.exit_code == 0

    def test_missing_index_flag(self):
        """Test that query without --index or --no-index exits with code 2."""
        with self.runner.isolated_filesystem():
            self.invoke(GEN_ARGS)
            result = self.invoke(['query', '--db', 'db.txt', '--queries', 'queries.txt', '--tau', '1'])
            assert result.exit_code == 2
            assert '--index is required' in result.output

    def test_missing_index_file(self):
        """Test that a missing index file exits with code 2."""
        with self.runner.isolated_filesystem():
            self.invoke(GEN_ARGS)
            result = self.invoke(['query', '--db', 'db.txt', '--index', 'nope.idx',
                                  '--queries', 'queries.txt', '--tau', '1'])
            assert result.exit_code == 2

    def test_corrupt_index(self):
        """Test that a corrupt index file exits with code 2."""
        with self.runner.isolated_filesystem():
            self.invoke(GEN_ARGS)
            with open('db.idx', 'wb') as f:
                f.write(b"not an index at all")
            result = self.invoke(['query', '--db', 'db.txt', '--index', 'db.idx',
                                  '--queries', 'queries.txt', '--tau', '1'])
            assert result.exit_code == 2
            assert 'magic' in result.output

    def test_tau_beyond_index_range_still_answers(self):
        """Test that tau above tau_index still gives the scan answers."""
        with self.runner.isolated_filesystem():
            self.make_workspace(tau_index='1')
            indexed = self.invoke(['query', '--db', 'db.txt', '--index', 'db.idx',
                                   '--queries', 'queries.txt', '--tau', '3'])
            scanned = self.invoke(['query', '--db', 'db.txt', '--queries', 'queries.txt',
                                   '--tau', '3', '--no-index'])
            assert indexed.exit_code == 0
            assert indexed.stdout == scanned.stdout


class TestGedCommand(CliTestCase):
    """Test single-pair GED"""

    def test_ged_of_graph_with_itself(self):
        """Test the distance of a graph to itself."""
        with self.runner.isolated_filesystem():
            self.invoke(GEN_ARGS)
            result = self.invoke(['ged', '--db', 'db.txt', '--g1', '0', '--g2', '0', '--tau', '2'])
            assert result.exit_code == 0
            assert 'ged: 0' in result.output
            assert 'mappings_pushed:' in result.output

    def test_ged_out_of_range_id(self):
        """Test that an unknown graph id exits with code 2."""
        with self.runner.isolated_filesystem():
            self.invoke(GEN_ARGS)
            result = self.invoke(['ged', '--db', 'db.txt', '--g1', '0', '--g2', '99', '--tau', '2'])
            assert result.exit_code == 2
            assert 'out of range' in result.output

    def test_ged_rejects_unknown_filter(self):
        """Test that an unknown filter name exits with code 2."""
        with self.runner.isolated_filesystem():
            self.invoke(GEN_ARGS)
            result = self.invoke(['ged', '--db', 'db.txt', '--g1', '0', '--g2', '1', '--tau', '2',
                                  '--filters', 'label,nope'])
            assert result.exit_code == 2


class TestBenchCommand(CliTestCase):
    """Test threshold sweeps"""

    def test_bench_prints_one_line_per_tau(self):
        """Test that bench prints one line per threshold."""
        with self.runner.isolated_filesystem():
            self.make_workspace()
            result = self.invoke(['bench', '--db', 'db.txt', '--index', 'db.idx',
                                  '--queries', 'queries.txt', '--tau-range', '0..2',
                                  '--stats', 'bench.jsonl'])
            assert result.exit_code == 0
            lines = [l for l in result.stdout.splitlines() if l.startswith('tau=')]
            assert [l.split('\t')[0] for l in lines] == ['tau=0', 'tau=1', 'tau=2']
            aggregates = [r for r in read_stats('bench.jsonl') if r['kind'] == 'aggregate']
            assert [a['tau'] for a in aggregates] == [0, 1, 2]
            assert all(a['mode'] == 'bench' for a in aggregates)

    def test_bench_with_no_queries(self):
        """Test bench with an empty query file."""
        with self.runner.isolated_filesystem():
            self.make_workspace()
            open('empty.txt', 'w').close()
            result = self.invoke(['bench', '--db', 'db.txt', '--index', 'db.idx',
                                  '--queries', 'empty.txt', '--tau-range', '1..1'])
            assert result.exit_code == 0
            assert 'queries=0' in result.output

    def test_bench_rejects_bad_range(self):
        """Test that an empty tau range exits with code 2."""
        with self.runner.isolated_filesystem():
            self.make_workspace()
            result = self.invoke(['bench', '--db', 'db.txt', '--index', 'db.idx',
                                  '--queries', 'queries.txt', '--tau-range', '3..1'])
            assert result.exit_code == 2

    def test_parse_tau_range(self):
        """Test parsing of A..B ranges."""
        assert list(parse_tau_range('1..3')) == [1, 2, 3]
        assert list(parse_tau_range(' 2 .. 2 ')) == [2]


class TestInitCommand(CliTestCase):
    """Test example config export"""

    def test_init_writes_loadable_config(self):
        """Test that init writes a config the other commands accept."""
        with self.runner.isolated_filesystem():
            result = self.invoke(['init', '--out', 'example.yaml'])
            assert result.exit_code == 0
            result = self.invoke(GEN_ARGS)
            result = self.invoke(['build', '--db', 'db.txt', '--out', 'db.idx',
                                  '--config', 'example.yaml', '--tau-index', '2'])
            assert result.exit_code == 0


if __name__ == '__main__':
    unittest.main()
