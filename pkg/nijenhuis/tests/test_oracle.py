import random
import unittest

from nijenhuis import oracle
from nijenhuis.calculus import is_nijenhuis
from nijenhuis.fixtures import j0, plane
from nijenhuis.verdicts import (Clause, MoritaReport, Outcome, Verdict,
                                aggregate, assumed, combine)


class TestVerdicts(unittest.TestCase):

    def outcome(self, verdict):
        return Outcome('c', verdict)

    def test_aggregate_order(self):
        "error beats fail beats generic-pass beats pass"
        order = [Verdict.PASS, Verdict.GENERIC_PASS, Verdict.FAIL,
                 Verdict.ERROR]
        for index, verdict in enumerate(order):
            clauses = [self.outcome(v) for v in order[:index + 1]]
            self.assertEqual(aggregate(clauses), verdict)

    def test_assumed_is_neutral(self):
        "Assumed clauses never change the aggregate"
        self.assertEqual(aggregate([self.outcome(Verdict.PASS),
                                    assumed('x', 'note')]), Verdict.PASS)
        self.assertEqual(aggregate([assumed('x', 'note')]), Verdict.PASS)

    def test_first_nonzero_residual_is_witness(self):
        "A clause keeps the first failing identity"
        M = plane()
        clause = Clause('demo')
        clause.zero('a', M.zero)
        clause.zero('b', M.coord('x'))
        clause.zero('c', M.coord('y'))
        outcome = clause.outcome()
        self.assertEqual(outcome.verdict, Verdict.FAIL)
        self.assertEqual(outcome.witness, 'b = x, expected 0')
        self.assertEqual(len(outcome.residuals), 3)

    def test_combine_names_failing_clause(self):
        "The combined witness is prefixed by the clause name"
        failing = Outcome('second', Verdict.FAIL, witness='w')
        combined = combine('both', [self.outcome(Verdict.PASS), failing])
        self.assertEqual(combined.witness, 'second: w')

    def test_duplicate_clauses(self):
        "A report lists each clause once"
        self.assertRaises(ValueError, MoritaReport, 'r',
                          [self.outcome(Verdict.PASS),
                           self.outcome(Verdict.PASS)])


class TestOracle(unittest.TestCase):

    def setUp(self):
        self.M = plane()

    def test_random_point(self):
        "Points are rational and bounded"
        point = oracle.random_point(self.M, random.Random(1))
        self.assertEqual(len(point.values), 2)
        self.assertTrue(all(abs(value) <= 10 for value in point.values))

    def test_confirms_true_pass(self):
        "A correct pass stays a pass"
        outcome = oracle.confirm(is_nijenhuis(j0(self.M)), random.Random(0), 8)
        self.assertEqual(outcome.verdict, Verdict.PASS)

    def test_downgrades_false_pass(self):
        "A pass with a nonzero residual is an engine error"
        bogus = Outcome('bogus', Verdict.PASS,
                        residuals=[('x', self.M.coord('x'))])
        outcome = oracle.confirm(bogus, random.Random(0), 4)
        self.assertEqual(outcome.verdict, Verdict.ERROR)
        self.assertTrue(outcome.witness.startswith('oracle: x evaluates to'))

    def test_downgrades_rank_claim(self):
        "A generic rank exceeded at a sample is an engine error"
        rows = [[self.M.coord('x'), self.M.zero],
                [self.M.zero, self.M.one]]
        bogus = Outcome('bogus', Verdict.GENERIC_PASS, ranks=[('r', rows, 1)])
        outcome = oracle.confirm(bogus, random.Random(0), 4)
        self.assertEqual(outcome.verdict, Verdict.ERROR)

    def test_failures_are_left_alone(self):
        "Only passing verdicts are re-checked"
        failed = Outcome('f', Verdict.FAIL, witness='w',
                         residuals=[('x', self.M.coord('x'))])
        self.assertEqual(oracle.confirm(failed, random.Random(0), 4).verdict,
                         Verdict.FAIL)

    def test_clause_error_propagates(self):
        "A downgraded clause makes the whole outcome an error"
        bogus = Outcome('inner', Verdict.PASS,
                        residuals=[('x', self.M.coord('x'))])
        outer = combine('outer', [bogus])
        oracle.confirm(outer, random.Random(0), 4)
        self.assertEqual(outer.verdict, Verdict.ERROR)
        self.assertTrue(outer.witness.startswith('inner: oracle:'))
