import os
from os.path import dirname, abspath
import unittest

from nijenhuis.checks import run_scenario
from nijenhuis.exceptions import ScenarioError
from nijenhuis.morita import InfBibundle
from nijenhuis.report import EXIT_ERROR, EXIT_FAIL, EXIT_OK
from nijenhuis.scenario import load_scenario, parse_scenario
from nijenhuis.tensors import OneOneTensor
from nijenhuis.verdicts import Verdict

SCENARIO_DIR = os.path.join(dirname(dirname(dirname(abspath(__file__)))),
                            'example_scenarios')

HEADER = """\
[chart M]
coords = x, y

"""

TENSOR = HEADER + """\
[tensor N]
chart = M
matrix = %s

[check]
%s
"""


class ScenarioTestCase(unittest.TestCase):

    def load(self, text):
        return parse_scenario(text, 'test')

    def tensor_scenario(self, matrix='y, 0; 0, x', check='nijenhuis_torsion(N)'):
        return TENSOR % (matrix, check)

    def assert_error(self, text, line, column=None, fragment=''):
        with self.assertRaises(ScenarioError) as caught:
            self.load(text)
        error = caught.exception
        self.assertEqual(error.line, line)
        if column is not None:
            self.assertEqual(error.column, column)
        self.assertIn(fragment, str(error))
        return error

    def run_file(self, name, **options):
        options.setdefault('sample', 2)
        options.setdefault('seed', 0)
        options.setdefault('timings', False)
        scenario = load_scenario(os.path.join(SCENARIO_DIR, name + '.scn'))
        return run_scenario(scenario, **options)


class TestLoading(ScenarioTestCase):

    def test_minimal_scenario(self):
        "A chart, a tensor and one check"
        scenario = self.load(self.tensor_scenario())
        self.assertEqual(len(scenario.checks), 1)
        self.assertIn('N', scenario)
        self.assertEqual(scenario['N'].matrix[0][0], scenario['M'].coord('y'))

    def test_comments_and_blank_lines(self):
        "Comments and blank lines are ignored"
        text = '# leading comment\n\n' + self.tensor_scenario().replace(
            'coords = x, y', 'coords = x, y  # the plane')
        self.assertEqual(self.load(text)['M'].coords, ('x', 'y'))

    def test_derived_declaration(self):
        "from = operation(args) derives a declaration"
        scenario = self.load(HEADER + '[tensor K]\nfrom = diag(M, "x", "y")\n')
        self.assertEqual(scenario['K'],
                         OneOneTensor.diag(scenario['M'], ['x', 'y']))

    def test_bibundle_extras(self):
        "A derived standard pair registers its parts"
        scenario = load_scenario(os.path.join(SCENARIO_DIR,
                                              'symplectic_self_morita.scn'))
        self.assertIsInstance(scenario['B'], InfBibundle)
        self.assertIn('B.first', scenario)
        self.assertEqual(scenario.name, 'symplectic_self_morita')
        self.assertEqual(len(scenario.checks), 6)

    def test_no_checks(self):
        "A scenario may declare without checking"
        self.assertEqual(len(self.load(HEADER).checks), 0)


class TestDiagnostics(ScenarioTestCase):

    def test_undefined_reference(self):
        "Undefined names are reported where they appear"
        self.assert_error(self.tensor_scenario(check='nijenhuis_torsion(N7)'),
                          9, 19, "undefined reference 'N7'")

    def test_expression_syntax(self):
        "Expression errors point into the value"
        self.assert_error(self.tensor_scenario(matrix='x +, 0; 0, 1'), 6, 13)

    def test_unknown_identifier(self):
        "Names outside the chart are reported at their column"
        self.assert_error(self.tensor_scenario(matrix='1, 0; 0, z'), 6, 19,
                          "unknown identifier 'z'")

    def test_dimension_mismatch(self):
        "A 2x3 matrix on a 2-dimensional chart"
        self.assert_error(self.tensor_scenario(matrix='1, 2, 3; 4, 5, 6'), 6,
                          fragment='dimension mismatch')

    def test_row_count(self):
        "Too few rows"
        self.assert_error(self.tensor_scenario(matrix='1, 0'), 6,
                          fragment='dimension mismatch')

    def test_duplicate_name(self):
        "Names are declared once"
        text = HEADER + '[tensor N]\nfrom = identity(M)\n\n[tensor N]\n' \
            'from = identity(M)\n'
        self.assert_error(text, 7, fragment="duplicate name 'N'")

    def test_duplicate_key(self):
        "Keys appear once per section"
        self.assert_error('[chart M]\ncoords = x, y\ncoords = u, v\n', 3,
                          fragment="duplicate key 'coords'")

    def test_unknown_check(self):
        "Checks must name a known operation"
        self.assert_error(self.tensor_scenario(check='is_torsion_free(N)'), 9,
                          1, "unknown check 'is_torsion_free'")

    def test_bad_arguments(self):
        "Arguments are bound against the operation"
        self.assert_error(self.tensor_scenario(
            check='nijenhuis_torsion(N, N)'), 9, fragment='bad arguments')

    def test_unknown_kind(self):
        "Section kinds are fixed"
        self.assert_error('[widget W]\n', 1, fragment="unknown section kind")

    def test_wrong_kind(self):
        "References are type checked"
        text = HEADER + '[scalar f]\nchart = M\nexpr = x\n\n' \
            '[tensor T]\nchart = f\nmatrix = 1, 0; 0, 1\n'
        self.assert_error(text, 9, 9, 'expected a chart')

    def test_unexpected_key(self):
        "Unknown keys are rejected"
        self.assert_error('[chart M]\ncoords = x, y\ncolour = red\n', 3,
                          fragment="unexpected key 'colour'")

    def test_missing_header(self):
        "Content before any section"
        self.assert_error('coords = x, y\n', 1, 1, 'expected a section header')


class TestRunner(ScenarioTestCase):

    def test_torsion(self):
        "diag(x, y) passes and diag(y, x) fails with a witness"
        report = self.run_file('torsion')
        first, second = report.results
        self.assertEqual(first.check, 'nijenhuis_torsion(K)=0')
        self.assertEqual(first.verdict, Verdict.PASS)
        self.assertEqual(second.verdict, Verdict.FAIL)
        self.assertEqual(second.witness,
                         "N(∂x, ∂y) = (-x + y)*∂x + (-x + y)*∂y, expected 0")
        self.assertEqual(report.exit_code, EXIT_FAIL)

    def test_degeneracy_locus(self):
        "A rank claim reports generic-pass with its locus"
        result = self.run_file('hierarchy_locus').results[0]
        self.assertEqual(result.verdict, Verdict.GENERIC_PASS)
        self.assertEqual(result.locus, 'det = x')

    def test_error_verdict(self):
        "Failed preconditions become error verdicts"
        text = HEADER + '[multivector pi]\nchart = M\nx^y = 1\n\n' \
            '[tensor r]\nchart = M\nmatrix = 1, 0; 0, 2\n\n' \
            '[check]\nmagri_morosi(pi, r)\n'
        report = run_scenario(self.load(text), sample=0, timings=False)
        self.assertEqual(report.results[0].verdict, Verdict.ERROR)
        self.assertIn('non-tensorial', report.results[0].witness)
        self.assertEqual(report.exit_code, EXIT_ERROR)

    def test_values(self):
        "Constructions report their value"
        text = HEADER + '[multivector pi]\nchart = M\nx^y = x\n\n' \
            '[density nu]\nchart = M\ndensity = 1\n\n' \
            '[check]\nmodular_field(pi, nu)\n'
        result = run_scenario(self.load(text), sample=0,
                              timings=False).results[0]
        self.assertEqual(result.verdict, Verdict.PASS)
        self.assertEqual(result.value, 'X: -∂y; opposite convention: ∂y')

    def test_empty(self):
        "No checks, exit 0"
        report = run_scenario(self.load(HEADER), sample=0, timings=False)
        self.assertEqual(report.results, [])
        self.assertEqual(report.exit_code, EXIT_OK)

    def test_deterministic(self):
        "Equal seeds give byte-identical reports, whatever the job count"
        first = self.run_file('torsion', seed=5).to_json()
        self.assertEqual(first, self.run_file('torsion', seed=5).to_json())
        self.assertEqual(first, self.run_file('torsion', seed=5,
                                              jobs=2).to_json())

    def test_example_scenarios(self):
        "The shipped scenarios give their documented exit codes"
        expected = {
            'symplectic_self_morita': EXIT_OK,
            'perturbed_sign': EXIT_FAIL,
            'torsion': EXIT_FAIL,
            'hierarchy_locus': EXIT_OK,
            'scaled_hierarchy': EXIT_OK,
            'modular': EXIT_OK,
        }
        for name, code in sorted(expected.items()):
            self.assertEqual(self.run_file(name).exit_code, code, name)
