import io
import json
import os
from os.path import dirname, abspath
import shutil
import sys
import tempfile
import unittest

from nijenhuis import __version__
from nijenhuis.cli import main
from nijenhuis import conf
from nijenhuis.report import (CheckResult, Report, emit_report,
                              render_value)
from nijenhuis.verdicts import Verdict

SCENARIO_DIR = os.path.join(dirname(dirname(dirname(abspath(__file__)))),
                            'example_scenarios')


def sample_report():
    clause = CheckResult('(a) forward-dirac mu1', Verdict.GENERIC_PASS,
                         locus='det = x')
    return Report('demo', 0, 4, [
        CheckResult('nijenhuis_torsion(K)=0', Verdict.PASS),
        CheckResult('nijenhuis_torsion(N)=0', Verdict.FAIL,
                    witness='N(∂x, ∂y) = (-x + y)*∂x, expected 0'),
        CheckResult('check_dirac_morita(B)', Verdict.GENERIC_PASS,
                    locus='det = x', flags={'nijenhuis': True},
                    clauses=[clause]),
    ])


class TestReport(unittest.TestCase):

    def test_json_round_trip(self):
        "Reports survive JSON"
        report = sample_report()
        self.assertEqual(Report.from_json(report.to_json()), report)

    def test_json_fields(self):
        "The JSON document has fixed fields"
        data = json.loads(sample_report().to_json())
        self.assertEqual(data['exit'], 1)
        self.assertEqual(sorted(data['results'][0]),
                         ['check', 'clauses', 'flags', 'locus', 'millis',
                          'value', 'verdict', 'witness'])
        self.assertEqual(data['results'][2]['verdict'], 'generic-pass')

    def test_text(self):
        "One line per check, details indented below"
        lines = sample_report().to_text().splitlines()
        self.assertEqual(lines[0], 'scenario demo: 3 checks (seed 0, 4 samples)')
        self.assertEqual(lines[1].split(), ['PASS', 'nijenhuis_torsion(K)=0'])
        self.assertEqual(lines[3].strip(),
                         'witness: N(∂x, ∂y) = (-x + y)*∂x, expected 0')
        self.assertIn('  - GENERIC-PASS  (a) forward-dirac mu1', lines)
        self.assertEqual(lines[-1],
                         '3 checks: 1 pass, 1 fail, 1 generic-pass; exit 1')

    def test_exit_codes(self):
        "Any error gives 2, any failure 1"
        self.assertEqual(Report('r', 0, 0, []).exit_code, 0)
        self.assertEqual(Report('r', 0, 0, [
            CheckResult('a', Verdict.ASSUMED)]).exit_code, 0)
        self.assertEqual(Report('r', 0, 0, [
            CheckResult('a', Verdict.FAIL),
            CheckResult('b', Verdict.ERROR)]).exit_code, 2)

    def test_unknown_format(self):
        "Only text and json are known"
        self.assertRaises(ValueError, emit_report, sample_report(), 'xml')

    def test_render_value(self):
        "Dictionaries print sorted, lists comma separated"
        self.assertEqual(render_value({'b': 1, 'a': [1, 2]}), 'a: 1, 2; b: 1')
        self.assertEqual(render_value(None), '')


class TestCommandLine(unittest.TestCase):

    def setUp(self):
        self.stdout = io.StringIO()
        self.stderr = io.StringIO()
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def run_cli(self, *argv):
        return main(list(argv), stdout=self.stdout, stderr=self.stderr)

    def example(self, name):
        return os.path.join(SCENARIO_DIR, name + '.scn')

    def write(self, text):
        path = os.path.join(self.tmpdir, 'broken.scn')
        with io.open(path, 'w', encoding='utf-8') as handle:
            handle.write(text)
        return path

    def test_failing_scenario(self):
        "A failing check exits 1"
        code = self.run_cli('check', self.example('torsion'),
                            '--sample', '2')
        self.assertEqual(code, 1)
        output = self.stdout.getvalue()
        self.assertIn('nijenhuis_torsion(N)=0', output)
        self.assertTrue(output.endswith('exit 1\n'))

    def test_json_output(self):
        "--format json prints one document"
        code = self.run_cli('check', self.example('torsion'), '--format',
                            'json', '--seed', '3')
        data = json.loads(self.stdout.getvalue())
        self.assertEqual(code, 1)
        self.assertEqual(data['scenario'], 'torsion')
        self.assertEqual(data['seed'], 3)
        self.assertEqual([r['millis'] for r in data['results']], [0, 0])

    def test_reproducible(self):
        "Reruns of a scenario with one seed are byte-identical"
        args = ('check', self.example('torsion'), '--format', 'json')
        self.run_cli(*args)
        first = self.stdout.getvalue()
        self.stdout = io.StringIO()
        self.run_cli(*(args + ('--jobs', '2')))
        self.assertEqual(first, self.stdout.getvalue())

    def test_timings(self):
        "--timings records wall time per check"
        self.run_cli('check', self.example('torsion'), '--format', 'json',
                     '--timings', '--sample', '0')
        data = json.loads(self.stdout.getvalue())
        for result in data['results']:
            self.assertTrue(isinstance(result['millis'], int))
            self.assertTrue(result['millis'] >= 0)

    def test_passing_scenario(self):
        "A scenario of passing checks exits 0"
        self.assertEqual(self.run_cli('check', self.example('modular'),
                                      '--sample', '2'), 0)

    def test_missing_file(self):
        "An unreadable file exits 2"
        code = self.run_cli('check', os.path.join(self.tmpdir, 'none.scn'))
        self.assertEqual(code, 2)
        self.assertIn('cannot read scenario', self.stderr.getvalue())

    def test_invalid_scenario(self):
        "Scenario errors exit 2 with line and column"
        path = self.write('[chart M]\ncoords = x, y\n\n[check]\n'
                          'nijenhuis_torsion(N7)\n')
        self.assertEqual(self.run_cli('check', path), 2)
        self.assertIn("line 5, column 19: undefined reference 'N7'",
                      self.stderr.getvalue())

    def test_degree_cap(self):
        "--max-degree turns large expressions into scenario errors"
        path = self.write('[chart M]\ncoords = x, y\n\n[scalar f]\n'
                          'chart = M\nexpr = x^5\n')
        self.assertEqual(self.run_cli('check', path, '--max-degree', '4'), 2)
        self.assertIn('exceeds the cap of 4', self.stderr.getvalue())
        self.assertEqual(conf.max_degree(), 64)

    def test_no_command(self):
        "Without a command the usage is printed"
        self.assertEqual(self.run_cli(), 2)
        self.assertIn('usage', self.stderr.getvalue())

    def test_version(self):
        "--version prints the package version"
        stdout = io.StringIO()
        saved = sys.stdout
        sys.stdout = stdout
        try:
            with self.assertRaises(SystemExit):
                main(['--version'])
        finally:
            sys.stdout = saved
        self.assertIn(__version__, stdout.getvalue())
