"""
Unit tests for the command line driver.
"""

from ffcorr import (cli, parallel)
import io
import json
import os
import shutil
import tempfile
import unittest
import unittest.mock


class Commands(unittest.TestCase):
    """Tests running complete commands with output files."""
    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.output = os.path.join(self.directory, 'report.json')
        self.csv = os.path.join(self.directory, 'table.csv')

    def tearDown(self):
        shutil.rmtree(self.directory)

    def read_report(self):
        with open(self.output, encoding='UTF-8') as f:
            return json.load(f)

    def write_config(self, text):
        path = os.path.join(self.directory, 'run.cfg')
        with open(path, 'w', encoding='UTF-8') as f:
            f.write(text)
        return path

    def test_fourier(self):
        """Confirm one coefficient per partition of 6 in both outputs."""
        status = cli.main(['fourier', '--alpha', 'd3', '--n', '6', '--output', self.output,
                           '--csv', self.csv])
        self.assertEqual(status, cli.EXIT_OK)
        data = self.read_report()
        self.assertEqual(data['command'], 'fourier')
        self.assertEqual(len(data['rows']), 11)
        with open(self.csv, encoding='UTF-8') as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], 'partition,re,im')
        self.assertEqual(len(lines), 12)

    def test_means_suite(self):
        """Confirm the means suite passes."""
        status = cli.main(['verify', '--suite', 'means', '--q', '3,4', '--n', '3',
                           '--output', self.output])
        self.assertEqual(status, cli.EXIT_OK)
        data = self.read_report()
        self.assertTrue(data['passed'])
        self.assertEqual(data['schema_version'], 1)

    def test_identities_suite(self):
        """Confirm the identities suite passes on a small field."""
        status = cli.main(['verify', '--suite', 'identities', '--q', '3', '--n', '3',
                           '--alpha', 'Lambda', '--beta', 'mu', '--output', self.output])
        self.assertEqual(status, cli.EXIT_OK)

    def test_cov_gap(self):
        """Confirm the gap domain compares cov_gap with its main term."""
        status = cli.main(['cov', '--domain', 'gap', '--alpha', 'Lambda', '--beta', 'Lambda',
                           '--n', '2', '--delta', '1', '--h', '0', '--q', '3,5',
                           '--output', self.output])
        self.assertEqual(status, cli.EXIT_OK)
        rows = self.read_report()['rows']
        self.assertEqual([row['reference'] for row in rows[:2]], [1, 1])
        self.assertEqual([row['value'] for row in rows[:2]], ['2/3', '4/5'])
        self.assertIsNone(rows[2]['passed'])
        self.assertTrue(rows[2]['outside_hypothesis'])

    def test_cov_gap_needs_h(self):
        """Ensure the gap domain requires h."""
        with unittest.mock.patch('sys.stderr', new_callable=io.StringIO):
            status = cli.main(['cov', '--domain', 'gap', '--n', '2', '--q', '3',
                               '--output', self.output])
        self.assertEqual(status, cli.EXIT_USAGE)

    def test_chars_suite(self):
        """Confirm the chars suite reports the Schur pairing."""
        status = cli.main(['verify', '--suite', 'chars', '--q', '3', '--ell', '0',
                           '--modulus-m', 'T^2 + 1', '--output', self.output])
        self.assertEqual(status, cli.EXIT_OK)
        anchors = [row['anchor'] for row in self.read_report()['rows']]
        self.assertTrue(any('Fourier pairing' in anchor for anchor in anchors))

    def test_chars(self):
        """Confirm the character table lists every character."""
        status = cli.main(['chars', '--q', '3', '--ell', '2', '--output', self.output,
                           '--csv', self.csv])
        self.assertEqual(status, cli.EXIT_OK)
        with open(self.csv, encoding='UTF-8') as f:
            self.assertEqual(len(f.read().splitlines()), 10)

    def test_config_file(self):
        """Confirm flags override file settings."""
        path = self.write_config(u'q = 5\nD = 4\ndelta = T\n')
        status = cli.main(['hl', '--config', path, '--D', '6', '--output', self.output])
        self.assertEqual(status, cli.EXIT_OK)
        row = self.read_report()['rows'][0]
        self.assertEqual(row['D'], 6)
        self.assertEqual(row['delta'], 'T')

    def test_config_hash(self):
        """Confirm equal settings give equal report hashes."""
        cli.main(['fourier', '--alpha', 'mu', '--n', '3', '--output', self.output])
        first = self.read_report()['config_hash']
        cli.main(['fourier', '--n', '3', '--alpha', 'mu', '--output', self.output])
        self.assertEqual(self.read_report()['config_hash'], first)

    def test_stdout(self):
        """Confirm the report goes to stdout without --output."""
        with unittest.mock.patch('sys.stdout', new_callable=io.StringIO) as out:
            status = cli.main(['fourier', '--alpha', 'mu', '--n', '2'])
        self.assertEqual(status, cli.EXIT_OK)
        self.assertEqual(json.loads(out.getvalue())['command'], 'fourier')


class ExitStatus(unittest.TestCase):
    """Tests for the mapping of errors to exit codes."""
    def run_quietly(self, argv):
        with unittest.mock.patch('sys.stderr', new_callable=io.StringIO):
            with unittest.mock.patch('sys.stdout', new_callable=io.StringIO):
                return cli.main(argv)

    def test_bad_config(self):
        """Confirm an unknown setting exits with the usage status."""
        directory = tempfile.mkdtemp()
        try:
            path = os.path.join(directory, 'bad.cfg')
            with open(path, 'w', encoding='UTF-8') as f:
                f.write(u'colour = blue\n')
            self.assertEqual(self.run_quietly(['fourier', '--config', path]), cli.EXIT_USAGE)
        finally:
            shutil.rmtree(directory)

    def test_domain_error(self):
        """Confirm a domain error exits with the usage status."""
        self.assertEqual(self.run_quietly(['hl', '--q', '2', '--delta', 'T']), cli.EXIT_USAGE)

    def test_missing_setting(self):
        """Confirm a missing required setting exits with the usage status."""
        self.assertEqual(self.run_quietly(['fourier', '--alpha', 'mu']), cli.EXIT_USAGE)

    def test_resource(self):
        """Confirm an exceeded cap exits with the resource status."""
        directory = tempfile.mkdtemp()
        try:
            path = os.path.join(directory, 'cap.cfg')
            with open(path, 'w', encoding='UTF-8') as f:
                f.write(u'group_cap = 10\n')
            status = self.run_quietly(['chars', '--config', path, '--q', '3', '--ell', '3'])
            self.assertEqual(status, cli.EXIT_RESOURCE)
        finally:
            shutil.rmtree(directory)

    def test_failed_row(self):
        """Confirm a failed verification row exits with status 1."""
        def failing(config, report):
            report.add('broken', residual=1.0, tolerance=1e-8)

        with unittest.mock.patch.dict(cli.COMMANDS, {'fourier': failing}):
            self.assertEqual(self.run_quietly(['fourier']), cli.EXIT_FAILED)

    def test_usage(self):
        """Confirm argparse rejects unknown commands."""
        with self.assertRaises(SystemExit) as cm:
            self.run_quietly(['nope'])
        self.assertEqual(cm.exception.code, 2)


class Parallel(unittest.TestCase):
    """Tests for the chunked parallel helpers."""
    def test_chunks(self):
        """Confirm chunk bounds cover the range in order."""
        self.assertEqual(parallel.chunk_bounds(5, 2), [(0, 2), (2, 4), (4, 5)])
        self.assertEqual(parallel.chunk_bounds(0, 2), [])

    def test_thread_independent(self):
        """Confirm results do not depend on the thread count."""
        single = parallel.map_chunks(lambda a, b: sum(range(a, b)), 1000, 1, chunk=64)
        many = parallel.map_chunks(lambda a, b: sum(range(a, b)), 1000, 4, chunk=64)
        self.assertEqual(single, many)
        self.assertEqual(parallel.map_items(str, [1, 2, 3], threads=3), ['1', '2', '3'])
