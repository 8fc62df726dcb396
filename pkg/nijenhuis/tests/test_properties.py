"""
Identities checked on seeded random fixtures. Every generator draws from
``fixtures.rng(seed)`` so a failure names a reproducible case.
"""
import unittest

from nijenhuis import calculus, derivations, dirac, oracle
from nijenhuis.calculus import include, nijenhuis_torsion, tangent_lift
from nijenhuis.derivations import (LieAlgebroidData, OneDerivation,
                                   TrivialBundle)
from nijenhuis.expr import canonical, derive_partial, parse_tree
from nijenhuis.fixtures import (j0, n_diag, pi_std, plane, random_derivation,
                                random_scalar, random_tensor,
                                random_two_form, rng, space)
from nijenhuis.tensors import (DiffForm, Multivector, OneOneTensor,
                               SmoothMap, VectorField, VolumeDensity)
from nijenhuis.verdicts import Verdict


def nonzero_scalars(chart, seed, count, degree=3):
    generator = rng(seed)
    found = []
    while len(found) < count:
        f = random_scalar(chart, generator, degree)
        if not f.is_zero():
            found.append(f)
    return found


def coordinate_modular_field(pi):
    """X^i = sum_j d_j pi^{ij} for the coordinate volume."""
    chart = pi.chart
    matrix = pi.matrix()
    return VectorField(chart, [
        sum((derive_partial(matrix[i][j], chart.coords[j])
             for j in range(chart.dim)), chart.zero)
        for i in range(chart.dim)])


class TestTorsionProperties(unittest.TestCase):

    def setUp(self):
        self.M = plane()

    def test_standard_tensors(self):
        "Id and J0 have no torsion"
        for N in (OneOneTensor.identity(self.M), j0(self.M)):
            self.assertTrue(nijenhuis_torsion(N).is_zero())

    def test_scalar_multiples(self):
        "f Id is Nijenhuis for random rational f"
        numerators = nonzero_scalars(self.M, 11, 20)
        denominators = nonzero_scalars(self.M, 12, 20, degree=1)
        for p, q in zip(numerators, denominators):
            N = OneOneTensor.scalar(self.M, p / q)
            self.assertTrue(nijenhuis_torsion(N).is_zero(), N)

    def test_diagonal_value(self):
        "diag(y, x) has torsion (y - x)(d/dx + d/dy)"
        torsion = nijenhuis_torsion(n_diag(self.M))
        self.assertEqual(torsion[(0, 1)],
                         VectorField(self.M, ['y - x', 'y - x']))
        self.assertEqual(torsion[(1, 0)], -torsion[(0, 1)])

    def test_naturality(self):
        "Projection-related tensors have related torsions"
        E = space('E')
        phi = SmoothMap.projection(E, self.M)
        generator = rng(21)
        for _ in range(10):
            base = random_tensor(self.M, generator, degree=1)
            matrix = [[include(base.matrix[a][b], E) for b in range(2)]
                      + [E.zero] for a in range(2)]
            matrix.append([random_scalar(E, generator, 1) for _ in range(3)])
            N = OneOneTensor(E, matrix)
            self.assertTrue(calculus.is_related(phi, N, base))
            upstairs = nijenhuis_torsion(N)[(0, 1)]
            downstairs = nijenhuis_torsion(base)[(0, 1)]
            self.assertEqual(phi.push(upstairs),
                             phi.pullback_vector(downstairs))


class TestDerivationProperties(unittest.TestCase):

    def setUp(self):
        self.M = plane()
        self.TM = TrivialBundle.tangent(self.M)

    def fixtures(self):
        generator = rng(31)
        cases = [random_derivation(self.M, generator, degree=1)
                 for _ in range(10)]
        cases.append(OneDerivation.constant(TrivialBundle(self.M, 2)))
        cases.append(derivations.tangent_lift_derivation(j0(self.M)))
        return cases

    def test_round_trip(self):
        "Derivation to tensor and back is the identity"
        for D in self.fixtures():
            R = derivations.tensor_of_derivation(D)
            self.assertEqual(derivations.derivation_of_tensor(R, D.bundle), D)

    def test_tangent_lifts(self):
        "The tangent lift of r is the linear tensor of (nabla^r, r, r)"
        generator = rng(32)
        for _ in range(10):
            r = random_tensor(self.M, generator, degree=2)
            self.assertEqual(
                derivations.derivation_of_tensor(tangent_lift(r), self.TM),
                derivations.tangent_lift_derivation(r))

    def test_nijenhuis_equations_match_torsion(self):
        "The Nijenhuis equations hold exactly when the linear tensor is Nijenhuis"
        for D in self.fixtures():
            equations = bool(derivations.check_nijenhuis_equations(D))
            torsion = calculus.is_nijenhuis(
                derivations.tensor_of_derivation(D))
            self.assertEqual(equations, bool(torsion), D)

    def test_tangent_lifts_are_im(self):
        "Tangent lift derivations are IM for the tangent algebroid"
        generator = rng(33)
        algebroid = LieAlgebroidData.tangent(self.M)
        for _ in range(10):
            r = random_tensor(self.M, generator, degree=2)
            outcome = derivations.check_im_equations(
                derivations.tangent_lift_derivation(r), algebroid)
            self.assertEqual(outcome.verdict, Verdict.PASS, outcome.witness)

    def test_corrupted_connection(self):
        "Changing one connection coefficient breaks the anchor equation"
        D = derivations.tangent_lift_derivation(j0(self.M))
        conn = [[list(section) for section in row] for row in D.conn]
        conn[0][0][0] = conn[0][0][0] + self.M.coord(0)
        corrupted = OneDerivation(D.bundle, conn, D.endo, D.base)
        outcome = derivations.check_im_equations(
            corrupted, LieAlgebroidData.tangent(self.M))
        self.assertEqual(outcome.verdict, Verdict.FAIL)
        self.assertEqual(outcome.clause('im-anchor').verdict, Verdict.FAIL)


class TestDiracProperties(unittest.TestCase):

    def test_twisted_graphs(self):
        "graph(w) with twist eta is involutive exactly when d(w) = eta"
        E = space()
        volume = DiffForm(E, 3, {(0, 1, 2): 1})
        generator = rng(41)
        for _ in range(10):
            omega = random_two_form(E, generator)
            d_omega = calculus.exterior_derivative(omega)
            self.assertTrue(dirac.is_involutive(
                dirac.graph_of_two_form(omega, twist=d_omega)))
            self.assertFalse(dirac.is_involutive(
                dirac.graph_of_two_form(omega, twist=d_omega + volume)))

    def test_plane_bivectors(self):
        "Every bivector on a plane has an involutive graph"
        M = plane()
        for f in nonzero_scalars(M, 42, 10):
            L = dirac.graph_of_bivector(Multivector(M, 2, {(0, 1): f}))
            self.assertTrue(dirac.is_involutive(L))

    def test_lagrangian(self):
        "Generators of constructed structures pair to zero"
        E = space()
        generator = rng(43)
        structures = [dirac.graph_of_two_form(random_two_form(E, generator))
                      for _ in range(5)]
        structures.append(dirac.graph_of_bivector(pi_std(E)))
        for L in structures:
            for s in L.generators:
                for t in L.generators:
                    self.assertTrue(s.pairing(t).is_zero())


class TestPoissonNijenhuisProperties(unittest.TestCase):

    def setUp(self):
        self.M = plane()
        self.pi = pi_std(self.M)

    def test_x_identity(self):
        "(pi_std, x Id) is Poisson-Nijenhuis with vanishing concomitant"
        r = OneOneTensor.scalar(self.M, 'x')
        self.assertTrue(dirac.is_poisson_nijenhuis(self.pi, r))
        for value in dirac.magri_morosi(self.pi, r).values():
            self.assertTrue(value.is_zero())

    def test_diagonal(self):
        "(pi_std, diag(y, x)) fails on the torsion"
        outcome = dirac.is_poisson_nijenhuis(self.pi, n_diag(self.M))
        self.assertFalse(outcome)
        self.assertEqual(outcome.clause('nijenhuis').verdict, Verdict.FAIL)

    def test_hierarchy_is_poisson(self):
        "The first hierarchy bivectors are Poisson"
        r = OneOneTensor.scalar(self.M, 'x')
        for n in range(4):
            pi_n = dirac.poisson_hierarchy(self.pi, r, n)
            self.assertTrue(pi_n.validated)
            self.assertTrue(dirac.is_involutive(dirac.graph_of_bivector(pi_n)))


class TestModularProperties(unittest.TestCase):

    def setUp(self):
        self.M = plane()
        self.nu = VolumeDensity(self.M, 1)

    def test_against_coordinate_divergence(self):
        "The modular field agrees with the coordinate divergence of pi"
        for f in nonzero_scalars(self.M, 51, 5):
            pi = Multivector(self.M, 2, {(0, 1): f})
            self.assertEqual(dirac.modular_field(pi, self.nu),
                             coordinate_modular_field(pi))

    def test_x_pi_std(self):
        "x d/dx ^ d/dy has modular field -d/dy, and pi_std has none"
        pi = Multivector(self.M, 2, {(0, 1): 'x'})
        self.assertEqual(dirac.modular_field(pi, self.nu),
                         VectorField(self.M, [0, -1]))
        self.assertTrue(dirac.modular_field(pi_std(self.M), self.nu).is_zero())

    def test_pn_modular_field(self):
        "The PN modular field of (pi_std, x Id) is -d/dy"
        X = dirac.pn_modular_field(pi_std(self.M),
                                   OneOneTensor.scalar(self.M, 'x'), self.nu)
        self.assertEqual(X, VectorField(self.M, [0, -1]))

    def test_gauge(self):
        "Rescaling by g shifts the field by -pi#(dg)/g"
        pi = Multivector(self.M, 2, {(0, 1): 'x*y + 1'})
        for q in nonzero_scalars(self.M, 52, 5, degree=2):
            g = self.M.one + q * q
            self.assertEqual(dirac.gauge_clause(pi, self.nu, g).verdict,
                             Verdict.PASS)


class TestOracleAgreement(unittest.TestCase):

    def test_symbolic_passes_are_confirmed(self):
        "Sampling never contradicts an exact pass"
        M, E = plane(), space()
        generator = rng(61)
        omega = random_two_form(E, generator)
        outcomes = [
            calculus.is_nijenhuis(OneOneTensor.scalar(
                M, random_scalar(M, generator))),
            calculus.is_nijenhuis(j0(M)),
            dirac.is_involutive(dirac.graph_of_two_form(omega)),
            dirac.is_poisson_nijenhuis(pi_std(M),
                                       OneOneTensor.scalar(M, 'x')),
            derivations.check_im_equations(
                derivations.tangent_lift_derivation(
                    random_tensor(M, generator)),
                LieAlgebroidData.tangent(M)),
        ]
        for outcome in outcomes:
            self.assertEqual(outcome.verdict, Verdict.PASS)
            confirmed = oracle.confirm(outcome, rng(0), 16)
            self.assertEqual(confirmed.verdict, Verdict.PASS,
                             confirmed.witness)


class TestCanonicalForm(unittest.TestCase):

    SOURCES = [
        '(x + 1/2)^3 - x*(y - 2)/(y^2 + 3)',
        '-(x - y)^2 + 2*x*y/(1 + x^2)',
        '((x*y + 1)/(x^2 + 1) - y)^2 * (y^2 + 1)',
        '3/4*x - -y + (x + y)*(x - y)',
    ]

    def test_trees_agree_with_canonical_form(self):
        "Canonicalisation does not change values at random points"
        M = plane()
        generator = rng(71)
        for src in self.SOURCES:
            tree = parse_tree(src, M)
            value = M.parse(src)
            self.assertEqual(canonical(tree, M), value)
            for _ in range(8):
                point = oracle.random_point(M, generator)
                self.assertEqual(tree.evaluate(dict(zip(M.coords,
                                                        point.values))),
                                 value.evaluate(point.values), src)
