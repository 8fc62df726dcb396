from fractions import Fraction
import unittest

from nijenhuis import morita
from nijenhuis.calculus import pullback_form
from nijenhuis.derivations import OneDerivation, tensor_of_derivation
from nijenhuis.exceptions import InvariantViolation, PreconditionFailed
from nijenhuis.fixtures import plane, poisson_pair, standard_pair
from nijenhuis.tensors import DiffForm, OneOneTensor, VectorField
from nijenhuis.verdicts import Verdict


class MoritaTestCase(unittest.TestCase):

    def setUp(self):
        self.pair = standard_pair()
        self.B = self.pair.bibundle

    def identities(self):
        return (OneOneTensor.identity(self.B.mu1.target),
                OneOneTensor.identity(self.B.mu2.target))

    def constant_derivations(self, endo=None, base=None):
        return (OneDerivation.constant(self.B.left.algebroid.bundle, endo,
                                       base),
                OneDerivation.constant(self.B.right.algebroid.bundle, endo,
                                       base))

    def perturbed_form(self):
        "pr1* w + pr2* w instead of the difference"
        B = self.B
        omega1 = DiffForm(B.mu1.target, 2, {(0, 1): 1})
        omega2 = DiffForm(B.mu2.target, 2, {(0, 1): 1})
        return pullback_form(B.mu1, omega1) + pullback_form(B.mu2, omega2)


class TestStandardPair(MoritaTestCase):

    def test_shape(self):
        "The standard pair lives on M x M' with both projections"
        self.assertEqual(self.B.P.coords, ('x', 'y', 'u', 'v'))
        self.assertEqual(self.B.mu2.target.name, "M'")
        self.assertEqual(self.B.form[(0, 1)], 1)
        self.assertEqual(self.B.form[(2, 3)], -1)

    def test_actions(self):
        "The left action moves x and y, the right action u and v"
        left = [str(field) for field in self.B.left.table]
        right = [str(field) for field in self.B.right.table]
        self.assertEqual(left, ['∂x', '∂y'])
        self.assertEqual(right, ['-∂u', '-∂v'])

    def test_apply_section(self):
        "Actions extend linearly over functions on the base"
        M = self.B.mu1.target
        field = self.B.left.apply([M.coord('x'), M.one])
        self.assertEqual(field, VectorField(self.B.P, ['x', 1, 0, 0]))

    def test_sum_of_actions(self):
        "The two actions combine into one action of the product"
        action = morita.sum_of_actions(self.B)
        self.assertEqual(len(action.table), 4)
        self.assertEqual(action.algebroid.bundle.rank, 4)

    def test_algebroid_morita(self):
        "The standard pair is an infinitesimal Morita bibundle"
        outcome = morita.check_algebroid_morita(self.B)
        self.assertEqual(outcome.verdict, Verdict.GENERIC_PASS)
        self.assertEqual(outcome.locus, '')
        self.assertEqual(outcome.clause('commuting').verdict, Verdict.PASS)
        self.assertEqual(outcome.clause('complete-actions').verdict,
                         Verdict.ASSUMED)

    def test_rejects_nonconstant_form(self):
        "The standard pair needs a constant form"
        M = plane()
        self.assertRaises(InvariantViolation, morita.self_morita_bibundle,
                          DiffForm(M, 2, {(0, 1): 'x'}))

    def test_rejects_degenerate_form(self):
        "The standard pair needs a nondegenerate form"
        self.assertRaises(InvariantViolation, morita.self_morita_bibundle,
                          DiffForm(plane(), 2, {(0, 1): 0}))


class TestDiracMorita(MoritaTestCase):

    def test_standard_pair(self):
        "graph(w) is Dirac Morita equivalent to itself"
        outcome = morita.check_dirac_morita(self.B, self.pair.first,
                                            self.pair.second, self.pair.form)
        self.assertTrue(outcome)
        self.assertEqual(outcome.clause('(a) forward-dirac mu1').verdict,
                         Verdict.GENERIC_PASS)
        self.assertEqual(outcome.clause('(b) complete-actions').verdict,
                         Verdict.ASSUMED)
        self.assertEqual(outcome.clause('induced-actions').verdict,
                         Verdict.PASS)

    def test_perturbed_sign(self):
        "Adding instead of subtracting breaks the forward image along mu2"
        outcome = morita.check_dirac_morita(self.B, self.pair.first,
                                            self.pair.second,
                                            self.perturbed_form())
        self.assertEqual(outcome.verdict, Verdict.FAIL)
        self.assertTrue(outcome.clause('(a) forward-dirac mu1'))
        self.assertEqual(outcome.clause('(a) forward-dirac mu2').verdict,
                         Verdict.FAIL)
        self.assertTrue(outcome.witness.startswith('(a) forward-dirac mu2'))

    def test_dirac_nijenhuis(self):
        "The identity tensors make the standard pair Dirac-Nijenhuis Morita"
        r1, r2 = self.identities()
        outcome = morita.check_dirac_nijenhuis_morita(
            self.B, (self.pair.first, r1), (self.pair.second, r2),
            self.pair.form, self.B.tensor)
        self.assertTrue(outcome)
        self.assertEqual(outcome.clause('im-tensor-morita').verdict,
                         Verdict.PASS)


class TestDerivationMorita(MoritaTestCase):

    def test_trivial_derivations(self):
        "The trivial derivations are Morita equivalent along the identity"
        D1, D2 = self.constant_derivations()
        self.assertTrue(morita.check_derivation_morita(self.B, D1, D2,
                                                       self.B.tensor))

    def test_base_mismatch(self):
        "J = 2 id is not related to the identity"
        D1, D2 = self.constant_derivations()
        J = OneOneTensor.scalar(self.B.P, 2)
        outcome = morita.check_derivation_morita(self.B, D1, D2, J)
        self.assertEqual(outcome.clause('(i) base').verdict, Verdict.FAIL)

    def test_linear_tensors(self):
        "Linear tensors of the trivial derivations pass and are Nijenhuis"
        D1, D2 = self.constant_derivations()
        outcome = morita.check_im_tensor_morita(
            self.B, tensor_of_derivation(D1), tensor_of_derivation(D2),
            self.B.tensor)
        self.assertTrue(outcome)
        self.assertTrue(outcome.flags['nijenhuis'])
        self.assertEqual(outcome.check, 'im-tensor-morita')

    def test_holomorphic_needs_complex_J(self):
        "The identity on P is not a complex structure"
        D1, D2 = self.constant_derivations()
        outcome = morita.check_holomorphic_morita(self.B, D1, D2,
                                                  self.B.tensor)
        self.assertEqual(outcome.clause('complex-J').verdict, Verdict.FAIL)

    def test_requires_morita_bibundle(self):
        "Derivation checks refuse a right action moving the left base"
        P = self.B.P
        right = morita.InfAction(self.B.right.algebroid, self.B.mu2,
                                 [VectorField(P, [1, 0, -1, 0]),
                                  VectorField(P, [0, 0, 0, -1])])
        B = morita.InfBibundle(self.B.left, right)
        self.assertEqual(morita.check_algebroid_morita(B).clause(
            'right-image').verdict, Verdict.FAIL)
        D1, D2 = self.constant_derivations()
        self.assertRaises(PreconditionFailed, morita.check_derivation_morita,
                          B, D1, D2, self.B.tensor)


class TestPoissonNijenhuisMorita(unittest.TestCase):

    def setUp(self):
        self.pair = poisson_pair()
        self.B = self.pair.bibundle

    def pn(self, c):
        return ((self.pair.first, OneOneTensor.scalar(self.B.mu1.target, c)),
                (self.pair.second, OneOneTensor.scalar(self.B.mu2.target, c)))

    def test_poisson_pair(self):
        "The cotangent actions make a PN Morita equivalence"
        first, second = self.pn(1)
        outcome = morita.check_pn_morita(self.B, first, second,
                                         self.pair.form, self.B.tensor)
        self.assertTrue(outcome)
        self.assertEqual(outcome.clause('actions').verdict, Verdict.PASS)
        self.assertEqual(outcome.clause('nondegenerate').verdict,
                         Verdict.GENERIC_PASS)

    def test_scaled_hierarchy(self):
        "With J = 2 id the n-th form is 2^-n w and pi_n is 2^n pi"
        B = self.B.with_structures(tensor=OneOneTensor.scalar(self.B.P, 2))
        first, second = self.pn(2)
        for n in (1, 2, 3):
            hierarchy = morita.hierarchy_bibundle(B, n, 'pn', first, second)
            self.assertEqual(hierarchy.form,
                             self.pair.form.scale(Fraction(1, 2 ** n)))
            self.assertEqual(hierarchy.first.pi,
                             self.pair.first.scale(2 ** n))
            self.assertTrue(hierarchy.report)
            self.assertEqual(
                hierarchy.report.clause('deformed-actions-complete').verdict,
                Verdict.ASSUMED)

    def test_singular_J(self):
        "PN hierarchies need an invertible J"
        B = self.B.with_structures(
            tensor=OneOneTensor.diag(self.B.P, [1, 1, 1, 0]))
        first, second = self.pn(1)
        self.assertRaises(PreconditionFailed, morita.hierarchy_bibundle, B, 1,
                          'pn', first, second)


class TestCotangentHierarchy(MoritaTestCase):

    def test_scaled_form(self):
        "With J = c id the n-th form is c^n w"
        B = self.B.with_structures(tensor=OneOneTensor.scalar(self.B.P, 3))
        r1 = OneOneTensor.scalar(B.mu1.target, 3)
        r2 = OneOneTensor.scalar(B.mu2.target, 3)
        hierarchy = morita.hierarchy_bibundle(
            B, 2, 'cotangent', (self.pair.first, r1), (self.pair.second, r2))
        self.assertEqual(hierarchy.form, self.pair.form.scale(9))
        self.assertTrue(hierarchy.report)

    def test_needs_structures(self):
        "Hierarchies need a bibundle carrying a form and a tensor"
        bare = morita.InfBibundle(self.B.left, self.B.right)
        r1, r2 = self.identities()
        self.assertRaises(PreconditionFailed, morita.hierarchy_bibundle, bare,
                          1, 'cotangent', (self.pair.first, r1),
                          (self.pair.second, r2))

    def test_unknown_mode(self):
        "The mode is cotangent or pn"
        r1, r2 = self.identities()
        self.assertRaises(InvariantViolation, morita.hierarchy_bibundle,
                          self.B, 1, 'tangent', (self.pair.first, r1),
                          (self.pair.second, r2))
