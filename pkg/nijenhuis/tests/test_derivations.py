import unittest

from nijenhuis import derivations
from nijenhuis.calculus import tangent_lift
from nijenhuis.derivations import (BundleMap, LieAlgebroidData,
                                   OneDerivation, TrivialBundle)
from nijenhuis.exceptions import (InvariantViolation, NotLinear,
                                  PreconditionFailed)
from nijenhuis.fixtures import (holomorphic_derivation, j0, n_diag, plane,
                                random_derivation, rng)
from nijenhuis.tensors import OneOneTensor, SmoothMap, VectorField
from nijenhuis.verdicts import Verdict


class TestBundles(unittest.TestCase):

    def setUp(self):
        self.M = plane()

    def test_default_frame(self):
        "Frames and fibre coordinates avoid the base coordinates"
        E = TrivialBundle(self.M, 2)
        self.assertEqual(E.frame, ('e1', 'e2'))
        self.assertEqual(E.total_space().coords, ('x', 'y', 'y1', 'y2'))

    def test_rank_zero(self):
        "The zero bundle is allowed"
        self.assertEqual(TrivialBundle(self.M, 0).zero_section(), [])

    def test_negative_rank(self):
        "Ranks are non-negative"
        self.assertRaises(InvariantViolation, TrivialBundle, self.M, -1)

    def test_tangent_algebroid(self):
        "The tangent algebroid brackets frames to zero"
        A = LieAlgebroidData.tangent(self.M)
        self.assertEqual(A.bracket(A.bundle.frame_section(0),
                                   A.bundle.frame_section(1)),
                         [self.M.zero, self.M.zero])

    def test_opposite_algebroid(self):
        "The opposite negates the anchor"
        A = LieAlgebroidData.tangent(self.M)
        self.assertEqual(A.opposite().anchor[0],
                         -VectorField.coordinate(self.M, 0))
        self.assertEqual(A.opposite().opposite(), A)


class TestConnections(unittest.TestCase):

    def setUp(self):
        self.M = plane()
        self.E = TrivialBundle(self.M, 2)
        self.d_x = VectorField.coordinate(self.M, 0)

    def apply(self, D, coefficients):
        return derivations.connection_apply(D, self.d_x,
                                            self.E.section(coefficients))

    def test_leibniz_rule(self):
        "nabla_v(f e) picks up v(f) l(e) - (r v)(f) e"
        D = OneDerivation.constant(self.E,
                                   base=OneOneTensor.scalar(self.M, 2))
        self.assertEqual(self.apply(D, ['x', 0]),
                         [self.M.const(-1), self.M.zero])

    def test_trivial_derivation(self):
        "(0, id, id) annihilates every section"
        D = OneDerivation.constant(self.E)
        self.assertEqual(self.apply(D, ['x*y', 'x^2']),
                         [self.M.zero, self.M.zero])

    def test_shape_checks(self):
        "Connection coefficients must match the bundle"
        self.assertRaises(InvariantViolation, OneDerivation, self.E,
                          [[[0, 0]]], [[1, 0], [0, 1]],
                          OneOneTensor.identity(self.M))

    def test_format_section(self):
        "Sections print in the bundle frame"
        section = self.E.section(['x + 1', 1])
        self.assertEqual(derivations.format_section(self.E, section),
                         '(x + 1)*e1 + e2')
        self.assertEqual(derivations.format_section(
            self.E, self.E.zero_section()), '0')

    def test_second_covariant_antisymmetric(self):
        "The curvature term changes sign with its arguments"
        D = random_derivation(self.M, rng(9), degree=1)
        u = VectorField(self.M, ['y', 'x^2'])
        v = VectorField(self.M, [1, 'x*y'])
        s = self.E.section(['x', 'y + 1'])
        self.assertEqual(derivations.second_covariant(D, u, v, s),
                         [-c for c in derivations.second_covariant(D, v, u,
                                                                  s)])

    def test_second_covariant_is_tensorial(self):
        "For a Nijenhuis derivation the curvature term vanishes on all fields"
        D = holomorphic_derivation(self.M)
        u = VectorField(self.M, ['x*y', 'y^2 - 1'])
        v = VectorField(self.M, ['1/(1 + x^2)', 'x'])
        s = self.E.section(['x^2', 'x*y'])
        self.assertTrue(all(c.is_zero()
                            for c in derivations.second_covariant(D, u, v,
                                                                  s)))


class TestEquations(unittest.TestCase):

    def setUp(self):
        self.M = plane()

    def test_trivial_is_nijenhuis(self):
        "The trivial derivation solves the Nijenhuis equations"
        D = OneDerivation.constant(TrivialBundle(self.M, 2))
        outcome = derivations.check_nijenhuis_equations(D)
        self.assertEqual(outcome.verdict, Verdict.PASS)
        self.assertEqual([c.check for c in outcome.clauses],
                         ['torsion', 'endomorphism', 'curvature'])

    def test_base_torsion_fails(self):
        "A base tensor with torsion fails the first equation"
        D = derivations.tangent_lift_derivation(n_diag(self.M))
        outcome = derivations.check_nijenhuis_equations(D)
        self.assertEqual(outcome.clause('torsion').verdict, Verdict.FAIL)

    def test_tangent_lift_of_constant(self):
        "The tangent lift of a constant tensor is an IM derivation"
        D = derivations.tangent_lift_derivation(j0(self.M))
        self.assertTrue(derivations.check_im_equations(
            D, LieAlgebroidData.tangent(self.M)))

    def test_im_anchor(self):
        "l must intertwine the anchor with r"
        M = self.M
        D = OneDerivation.constant(TrivialBundle.tangent(M),
                                   base=OneOneTensor.scalar(M, 2))
        outcome = derivations.check_im_equations(
            D, LieAlgebroidData.tangent(M))
        self.assertEqual(outcome.clause('im-base').verdict, Verdict.FAIL)

    def test_bundle_mismatch(self):
        "The derivation and the algebroid share a bundle"
        D = OneDerivation.constant(TrivialBundle(self.M, 2))
        self.assertRaises(InvariantViolation, derivations.check_im_equations,
                          D, LieAlgebroidData.tangent(self.M))

    def test_holomorphic(self):
        "The holomorphic fixture passes every clause"
        outcome = derivations.check_holomorphic(holomorphic_derivation(self.M))
        self.assertEqual(outcome.verdict, Verdict.PASS)

    def test_not_complex(self):
        "The identity is not a complex structure"
        outcome = derivations.check_holomorphic(
            OneDerivation.constant(TrivialBundle(self.M, 2)))
        self.assertEqual(outcome.clause('complex-base').verdict, Verdict.FAIL)

    def test_odd_rank(self):
        "Odd ranks have no complex structure"
        outcome = derivations.check_holomorphic(
            OneDerivation.constant(TrivialBundle(self.M, 1)))
        self.assertEqual(outcome.verdict, Verdict.FAIL)
        self.assertIn('rank 1', outcome.witness)


class TestLinearTensors(unittest.TestCase):

    def setUp(self):
        self.M = plane()
        self.TM = TrivialBundle.tangent(self.M)

    def test_tangent_lift(self):
        "The tangent lift corresponds to the tangent lift derivation"
        r = n_diag(self.M)
        self.assertEqual(derivations.derivation_of_tensor(tangent_lift(r),
                                                          self.TM),
                         derivations.tangent_lift_derivation(r))

    def test_tensor_of_derivation(self):
        "Linear tensors and 1-derivations correspond"
        D = random_derivation(self.M, rng(7))
        R = derivations.tensor_of_derivation(D)
        self.assertEqual(derivations.derivation_of_tensor(R, D.bundle), D)

    def test_fibre_to_base(self):
        "A fibre-to-base entry is not linear"
        lifted = tangent_lift(n_diag(self.M))
        matrix = [list(row) for row in lifted.matrix]
        matrix[0][2] = lifted.chart.one
        self.assertRaises(NotLinear, derivations.derivation_of_tensor,
                          OneOneTensor(lifted.chart, matrix), self.TM)

    def test_affine_entry(self):
        "Base-to-fibre entries have no part constant along the fibres"
        lifted = tangent_lift(n_diag(self.M))
        matrix = [list(row) for row in lifted.matrix]
        matrix[2][0] = matrix[2][0] + lifted.chart.coord('x')
        self.assertRaises(NotLinear, derivations.derivation_of_tensor,
                          OneOneTensor(lifted.chart, matrix), self.TM)

    def test_wrong_chart(self):
        "Linear tensors live on the total space"
        self.assertRaises(NotLinear, derivations.derivation_of_tensor,
                          n_diag(self.M), self.TM)

    def test_cotangent_lift(self):
        "The cotangent lift uses the transpose and d r on T*M"
        M = self.M
        r = OneOneTensor(M, [[1, 'x'], [0, 3]])
        D = derivations.cotangent_lift_derivation(r)
        self.assertEqual(D.bundle, TrivialBundle.cotangent(M))
        self.assertEqual(D.endo[0][1], M.zero)
        self.assertEqual(D.endo[1][0], M.coord('x'))
        self.assertEqual(D.conn[0][0], (M.zero, M.one))
        self.assertEqual(D.conn[1][0], (-M.one, M.zero))


class TestPullbacks(unittest.TestCase):

    def setUp(self):
        self.M = plane()
        self.P = self.M.product(plane('N'), name='P')
        self.mu = SmoothMap.projection(self.P, self.M)
        self.E = TrivialBundle(self.M, 2)

    def test_pullback_derivation(self):
        "Pulling back keeps l and uses J as base"
        D = holomorphic_derivation(self.M)
        J = OneOneTensor(self.P, [[0, -1, 0, 0], [1, 0, 0, 0],
                                  [0, 0, 0, -1], [0, 0, 1, 0]])
        pulled = derivations.pullback_derivation(self.mu, D, J)
        self.assertEqual(pulled.bundle.base, self.P)
        self.assertEqual(pulled.base, J)
        self.assertEqual(pulled.endo[0][1], self.P.const(-1))
        self.assertEqual(pulled.conn[0][0][1], self.P.const(2))
        self.assertTrue(all(c.is_zero() for c in pulled.conn[2][0]))

    def test_unrelated_base(self):
        "J must be mu-related to r"
        D = OneDerivation.constant(self.E)
        J = OneOneTensor.scalar(self.P, 2)
        self.assertRaises(PreconditionFailed, derivations.pullback_derivation,
                          self.mu, D, J)

    def test_related_derivations(self):
        "A constant map intertwining l relates two derivations"
        D = OneDerivation.constant(self.E)
        phi = BundleMap(self.E, self.E, [[0, 1], [1, 0]])
        self.assertTrue(derivations.are_related_derivations(phi, D, D))

    def test_unrelated_derivations(self):
        "A map not commuting with l fails"
        D1 = OneDerivation.constant(self.E)
        D2 = OneDerivation.constant(self.E, endo=[[2, 0], [0, 1]])
        phi = BundleMap(self.E, self.E, [[1, 0], [0, 1]])
        outcome = derivations.are_related_derivations(phi, D1, D2)
        self.assertEqual(outcome.clause('endomorphism').verdict, Verdict.FAIL)

    def test_pullback_tensor(self):
        "The pullback tensor is the linear tensor of the pullback derivation"
        D = holomorphic_derivation(self.M)
        J = OneOneTensor(self.P, [[0, -1, 0, 0], [1, 0, 0, 0],
                                  [0, 0, 0, -1], [0, 0, 1, 0]])
        R = derivations.tensor_of_derivation(D)
        tensor = derivations.pullback_tensor(self.mu, R, J, D.bundle)
        bundle = derivations.pullback_bundle(self.mu, D.bundle)
        self.assertEqual(derivations.derivation_of_tensor(tensor, bundle),
                         derivations.pullback_derivation(self.mu, D, J))
