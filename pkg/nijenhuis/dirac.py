"""
Twisted Dirac structures in TM + T*M, the eta-Courant bracket, forward
Dirac maps, Poisson-Nijenhuis conditions, hierarchies and modular fields.

A Dirac structure is stored by n = dim generators that are independent over
the function field. Span membership for a Lagrangian L is decided by the
pairing: s lies in L exactly when <s, g> = 0 for every generator g.
"""
from itertools import combinations, combinations_with_replacement, product
import logging

from nijenhuis import linalg
from nijenhuis.calculus import (exterior_derivative, lie_bracket,
                                lie_derivative_form, lie_derivative_tensor,
                                nabla_r, nabla_r_star, torsion_clause)
from nijenhuis.derivations import (LieAlgebroidData, OneDerivation,
                                   TrivialBundle)
from nijenhuis.exceptions import (InvariantViolation, PreconditionFailed)
from nijenhuis.tensors import (DiffForm, Multivector, OneOneTensor,
                               VectorField, as_scalar)
from nijenhuis.verdicts import Clause, combine, relabel

logger = logging.getLogger(__name__)


class CourantSection(object):
    """A section (v, alpha) of TM + T*M."""

    def __init__(self, v, alpha):
        v.chart.check(alpha)
        if alpha.degree != 1:
            raise InvariantViolation("Courant section needs a 1-form, got "
                                     "degree %d" % alpha.degree)
        self.chart = v.chart
        self.v = v
        self.alpha = alpha

    def components(self):
        return list(self.v.components) + self.alpha.as_covector()

    def pairing(self, other):
        """<(u, a), (v, b)> = a(v) + b(u)."""
        self.chart.check(other)
        return self.alpha.evaluate(other.v) + other.alpha.evaluate(self.v)

    def __add__(self, other):
        return CourantSection(self.v + other.v, self.alpha + other.alpha)

    def __sub__(self, other):
        return CourantSection(self.v - other.v, self.alpha - other.alpha)

    def __neg__(self):
        return CourantSection(-self.v, -self.alpha)

    def scale(self, f):
        f = as_scalar(self.chart, f)
        return CourantSection(self.v.scale(f), self.alpha.scale(f))

    def is_zero(self):
        return self.v.is_zero() and self.alpha.is_zero()

    def __eq__(self, other):
        return (isinstance(other, CourantSection) and self.v == other.v
                and self.alpha == other.alpha)

    def __ne__(self, other):
        return not self == other

    def __str__(self):
        return '(%s, %s)' % (self.v, self.alpha)

    __repr__ = __str__


def _is_closed_twist(eta):
    if eta.degree > eta.chart.dim:
        return True
    return exterior_derivative(eta).is_zero()


def _check_twist(eta, chart):
    if eta is None:
        return None
    chart.check(eta)
    if eta.degree != 3:
        raise InvariantViolation("twist must be a 3-form, got degree %d"
                                 % eta.degree)
    if not _is_closed_twist(eta):
        raise InvariantViolation("twist is not closed: d(eta) = %s"
                                 % exterior_derivative(eta))
    return eta


class DiracStructure(object):
    """
    L in TM + T*M spanned by ``generators``, twisted by a closed 3-form.
    Rank and the Lagrangian pairing are checked exactly; ``locus`` holds the
    printed degeneracy locus of the generator matrix.
    """

    def __init__(self, chart, generators, twist=None, name=None):
        generators = [g if isinstance(g, CourantSection)
                      else CourantSection(*g) for g in generators]
        chart.check(*generators)
        n = chart.dim
        if len(generators) != n:
            raise InvariantViolation("Dirac structure on %s needs %d "
                                     "generators, got %d"
                                     % (chart.name, n, len(generators)))
        self.chart = chart
        self.generators = tuple(generators)
        self.name = name or 'L'
        rows = self.matrix()
        actual = linalg.rank(rows, chart)
        if actual != n:
            raise InvariantViolation("generators of %s have rank %d, "
                                     "expected %d" % (self.name, actual, n))
        for i, j in combinations_with_replacement(range(n), 2):
            value = generators[i].pairing(generators[j])
            if not value.is_zero():
                raise InvariantViolation(
                    "%s is not Lagrangian: <s%d, s%d> = %s"
                    % (self.name, i + 1, j + 1, value))
        self.twist = _check_twist(twist, chart)
        self.locus = linalg.degeneracy_locus(rows, chart, n)

    def matrix(self):
        return [g.components() for g in self.generators]

    def contains(self, section):
        return all(g.pairing(section).is_zero() for g in self.generators)

    def combination(self, section):
        """Coefficients of ``section`` in the generator frame, or None."""
        return linalg.combination(self.matrix(), section.components(),
                                  self.chart)

    def opposite(self):
        """{(v, -alpha)}, twisted by -eta."""
        twist = -self.twist if self.twist is not None else None
        return DiracStructure(self.chart, [CourantSection(g.v, -g.alpha)
                                           for g in self.generators],
                              twist, name='%s^op' % self.name)

    def transform(self, a, b, name=None):
        """(a v, b* alpha) on every generator."""
        self.chart.check(a, b)
        return DiracStructure(self.chart, [
            CourantSection(a(g.v), b.transpose_apply(g.alpha))
            for g in self.generators], self.twist, name=name or self.name)

    def __eq__(self, other):
        """Same subbundle and twist, whatever the generators."""
        if not isinstance(other, DiracStructure) or other.chart != self.chart:
            return False
        if not all(self.contains(g) for g in other.generators):
            return False
        mine, theirs = self.twist, other.twist
        if mine is None or theirs is None:
            return all(t is None or t.is_zero() for t in (mine, theirs))
        return mine == theirs

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'DiracStructure(%s: %s)' % (
            self.name, ', '.join(str(g) for g in self.generators))


class PNStructure(object):
    """A bivector and a (1,1)-tensor; ``check()`` runs is_poisson_nijenhuis."""

    def __init__(self, pi, r):
        pi.chart.check(r)
        self.chart = pi.chart
        self.pi = pi
        self.r = r

    def check(self):
        return is_poisson_nijenhuis(self.pi, self.r)

    def __repr__(self):
        return 'PNStructure(pi=%s, r=%s)' % (self.pi, self.r)


def graph_of_bivector(pi, name=None):
    chart = pi.chart
    generators = []
    for i in range(chart.dim):
        dx = DiffForm.coordinate(chart, i)
        generators.append(CourantSection(pi.sharp(dx), dx))
    return DiracStructure(chart, generators, name=name or 'graph(π)')


def graph_of_two_form(omega, twist=None, name=None):
    """Generators (d_i, i_{d_i} omega); the twist defaults to d(omega)."""
    chart = omega.chart
    if twist is None and omega.degree < chart.dim:
        twist = exterior_derivative(omega)
    generators = [CourantSection(VectorField.coordinate(chart, i),
                                 omega.interior(VectorField.coordinate(chart,
                                                                       i)))
                  for i in range(chart.dim)]
    return DiracStructure(chart, generators, twist,
                          name=name or 'graph(ω)')


def courant_bracket(s1, s2, eta=None):
    """([u, v], L_u b - i_v da + i_u i_v eta); graph(omega) closes iff d(omega) = eta."""
    s1.chart.check(s2)
    u, alpha = s1.v, s1.alpha
    v, beta = s2.v, s2.alpha
    form = lie_derivative_form(u, beta) - exterior_derivative(alpha).interior(v)
    if eta is not None:
        s1.chart.check(eta)
        if not _is_closed_twist(eta):
            raise InvariantViolation("twist is not closed: d(eta) = %s"
                                     % exterior_derivative(eta))
        form = form + eta.interior(v).interior(u)
    return CourantSection(lie_bracket(u, v), form)


def _brackets(L):
    for i, j in combinations(range(len(L.generators)), 2):
        yield i, j, courant_bracket(L.generators[i], L.generators[j],
                                    L.twist)


def is_involutive(L):
    clause = Clause('involutive')
    for i, j, bracket in _brackets(L):
        for k, g in enumerate(L.generators):
            clause.zero('<[[s%d, s%d]], s%d>' % (i + 1, j + 1, k + 1),
                        bracket.pairing(g))
    return clause.outcome()


def is_forward_dirac(phi, L_P, L_M):
    """
    Decides L_M = {(dphi v, a) : (v, phi* a) in L_P} at the generic point.
    The twists are not compared.
    """
    phi.source.check(L_P)
    phi.target.check(L_M)
    base = phi.projection_indices()
    if base is None:
        raise PreconditionFailed("%r is not a coordinate projection" % phi)
    P, M = phi.source, phi.target
    fibre = phi.fiber_indices()
    clause = Clause('forward-dirac')
    generators = L_P.generators
    # Combinations of generators whose form part vanishes on the fibres.
    constraints = [[g.alpha[(f,)] for g in generators] for f in fibre]
    if constraints:
        kernel = linalg.nullspace(constraints, P)
    else:
        kernel = [[P.one if k == c else P.zero for k in range(len(generators))]
                  for c in range(len(generators))]
    images = []
    for c in kernel:
        vector = [sum((c[k] * generators[k].v[a] for k in range(len(c))),
                      P.zero) for a in base]
        covector = [sum((c[k] * generators[k].alpha[(a,)]
                         for k in range(len(c))), P.zero) for a in base]
        images.append(vector + covector)
    pulled = [[phi.pullback(e) for e in g.components()]
              for g in L_M.generators]
    m = M.dim
    for index, image in enumerate(images):
        for k, target in enumerate(pulled):
            value = sum((image[a] * target[m + a] + image[m + a] * target[a]
                         for a in range(m)), P.zero)
            clause.zero('<image %d, %s s%d>' % (index + 1, L_M.name, k + 1),
                        value)
    if images:
        clause.rank('image of %s' % L_P.name, images, P, m)
    elif m:
        clause.fail('no element of %s has a form part pulled back from %s'
                    % (L_P.name, M.name))
    return clause.outcome()


def is_compatible_tensor(L, r):
    """(r, r*) preserves L and D^r_{d_i} = (nabla^r, nabla^{r,*}) maps L into L."""
    L.chart.check(r)
    chart = L.chart
    preserves = Clause('preserves')
    derivation = Clause('derivation')
    for a, g in enumerate(L.generators):
        moved = CourantSection(r(g.v), r.transpose_apply(g.alpha))
        for k, h in enumerate(L.generators):
            preserves.zero('<(r, r*) s%d, s%d>' % (a + 1, k + 1),
                           moved.pairing(h))
    for i, (a, g) in product(range(chart.dim), enumerate(L.generators)):
        moved = dirac_operator(r, VectorField.coordinate(chart, i), g)
        for k, h in enumerate(L.generators):
            derivation.zero('<D^r_∂%s s%d, s%d>' % (chart.coords[i], a + 1,
                                                    k + 1),
                            moved.pairing(h))
    return combine('compatible-tensor', [preserves.outcome(),
                                         derivation.outcome()])


def dirac_operator(r, v, section):
    """D^r_v(u, a) = (nabla^r_v u, nabla^{r,*}_v a)."""
    return CourantSection(nabla_r(r, v, section.v),
                          nabla_r_star(r, v, section.alpha))


# Poisson-Nijenhuis

def _pn1_clause(pi, r):
    clause = Clause('pn-compatible')
    chart = pi.chart
    for j in range(chart.dim):
        dx = DiffForm.coordinate(chart, j)
        residual = pi.sharp(r.transpose_apply(dx)) - r(pi.sharp(dx))
        clause.zeros('π♯(r* d%s) - r(π♯ d%s)' % (chart.coords[j],
                                                  chart.coords[j]),
                     residual.components, residual)
    return clause


def magri_morosi(pi, r):
    """
    R(v, a) = pi#(L_v r*a - L_{r v} a) - (L_{pi# a} r)(v) on coordinate
    fields and differentials, keyed by (i, j).
    """
    pi.chart.check(r)
    pn1 = _pn1_clause(pi, r).outcome()
    if not pn1:
        raise PreconditionFailed("non-tensorial: %s" % pn1.witness)
    chart = pi.chart
    table = {}
    for i, j in product(range(chart.dim), repeat=2):
        v = VectorField.coordinate(chart, i)
        alpha = DiffForm.coordinate(chart, j)
        inner = (lie_derivative_form(v, r.transpose_apply(alpha))
                 - lie_derivative_form(r(v), alpha))
        table[(i, j)] = (pi.sharp(inner)
                         - lie_derivative_tensor(pi.sharp(alpha), r)(v))
    return table


def is_poisson_nijenhuis(pi, r):
    pi.chart.check(r)
    chart = pi.chart
    poisson = relabel(is_involutive(graph_of_bivector(pi)), 'poisson')
    clauses = [poisson, torsion_clause(r, 'nijenhuis', 'N_r').outcome()]
    pn1 = _pn1_clause(pi, r).outcome()
    clauses.append(pn1)
    if pn1:
        concomitant = Clause('magri-morosi')
        for (i, j), value in sorted(magri_morosi(pi, r).items()):
            concomitant.zeros('R(∂%s, d%s)' % (chart.coords[i],
                                               chart.coords[j]),
                              value.components, value)
        clauses.append(concomitant.outcome())
    return combine('poisson-nijenhuis', clauses)


def poisson_hierarchy(pi, r, n):
    """The bivector with sharp map r^n o pi#; ``validated`` records the PN check."""
    if n < 0:
        raise InvariantViolation("hierarchy index must be non-negative, "
                                 "got %d" % n)
    pi.chart.check(r)
    power = [list(row) for row in r.power(n).matrix]
    matrix = linalg.matmul(pi.matrix(), linalg.transpose(power))
    result = Multivector.from_matrix(pi.chart, matrix)
    result.validated = bool(is_poisson_nijenhuis(pi, r))
    if not result.validated:
        logger.warning("hierarchy of %s under %s is not validated: the pair "
                       "is not Poisson-Nijenhuis", pi, r)
    return result


def dirac_hierarchy(L, r, n, side='tangent'):
    """(r^n, id) L on the tangent side, (id, (r*)^n) L on the cotangent side."""
    if n < 0:
        raise InvariantViolation("hierarchy index must be non-negative, "
                                 "got %d" % n)
    L.chart.check(r)
    identity = OneOneTensor.identity(L.chart)
    power = r.power(n)
    if side == 'tangent':
        a, b, label = power, identity, '(r^%d, id)' % n
    elif side == 'cotangent':
        a, b, label = identity, power, '(id, r*^%d)' % n
    else:
        raise InvariantViolation("hierarchy side must be 'tangent' or "
                                 "'cotangent', got %r" % side)
    rows = [CourantSection(a(g.v), b.transpose_apply(g.alpha)).components()
            for g in L.generators]
    actual = linalg.rank(rows, L.chart)
    if actual != L.chart.dim:
        raise PreconditionFailed(
            "ker %s restricted to %s is nonzero: image has rank %d, expected"
            " %d" % (label, L.name, actual, L.chart.dim))
    return L.transform(a, b, name='%s %s' % (label, L.name))


# Modular vector fields

def divergence(v, nu):
    """div_nu(v) with L_v nu = div_nu(v) nu, for nu = rho dx^1^...^dx^n."""
    nu.chart.check(v)
    rho = nu.density
    total = nu.chart.zero
    for coord, component in zip(nu.chart.coords, v):
        total = total + (rho * component).diff(coord)
    return total / rho


def modular_field(pi, nu, opposite=False):
    """X(x^i) = div_nu(pi#(dx^i)); ``opposite`` gives the other sign convention."""
    pi.chart.check(nu)
    chart = pi.chart
    field = VectorField(chart, [
        divergence(pi.sharp(DiffForm.coordinate(chart, i)), nu)
        for i in range(chart.dim)])
    return -field if opposite else field


def gauge_difference(pi, nu, g):
    """X^{g nu} - X^nu."""
    g = as_scalar(pi.chart, g)
    return modular_field(pi, nu.scale(g)) - modular_field(pi, nu)


def gauge_clause(pi, nu, g):
    """Outcome of X^{g nu} - X^nu = -pi#(dg)/g."""
    g = as_scalar(pi.chart, g)
    clause = Clause('gauge')
    expected = pi.sharp(DiffForm.differential(g)).scale(-1 / g)
    residual = gauge_difference(pi, nu, g) - expected
    clause.zeros('X^{gν} - X^ν + π♯(dg)/g', residual.components, residual)
    return clause.outcome()


def pn_modular_field(pi, r, nu):
    """X_r = X^nu of the first hierarchy bivector minus r(X^nu_pi)."""
    outcome = is_poisson_nijenhuis(pi, r)
    if not outcome:
        raise PreconditionFailed("not Poisson-Nijenhuis: %s" % outcome.witness)
    first = poisson_hierarchy(pi, r, 1)
    return modular_field(first, nu) - r(modular_field(pi, nu))


# Algebroids and derivations of Dirac structures

def _expand(L, section, what):
    coefficients = L.combination(section)
    if coefficients is None:
        raise InvariantViolation("%s does not lie in %s: %s"
                                 % (what, L.name, section))
    return coefficients


def algebroid_of_dirac(L):
    """Frame s1..sn = generators, anchor = tangent parts, bracket = Courant."""
    bundle = TrivialBundle(L.chart, L.chart.dim, name=L.name,
                           frame=tuple('s%d' % (a + 1)
                                       for a in range(L.chart.dim)))
    structure = {}
    for i, j, bracket in _brackets(L):
        structure[(i, j)] = _expand(L, bracket, '[[s%d, s%d]]'
                                    % (i + 1, j + 1))
    return LieAlgebroidData(bundle, [g.v for g in L.generators], structure,
                            name=L.name)


def cotangent_algebroid(pi):
    """T*M with [dx^a, dx^b] = d(pi^{ab}) and anchor pi#."""
    chart = pi.chart
    bundle = TrivialBundle.cotangent(chart)
    anchor = [pi.sharp(DiffForm.coordinate(chart, a))
              for a in range(chart.dim)]
    structure = {}
    for a, b in combinations(range(chart.dim), 2):
        structure[(a, b)] = DiffForm.differential(pi[(a, b)]).as_covector()
    return LieAlgebroidData(bundle, anchor, structure,
                            name='T*%s' % chart.name)


def dirac_derivation(L, r):
    """The IM 1-derivation (D^r, (r, r*), r) on L in the generator frame."""
    compatible = is_compatible_tensor(L, r)
    if not compatible:
        raise PreconditionFailed("r is not compatible with %s: %s"
                                 % (L.name, compatible.witness))
    algebroid = algebroid_of_dirac(L)
    chart = L.chart
    n = chart.dim
    endo_columns = []
    for a, g in enumerate(L.generators):
        moved = CourantSection(r(g.v), r.transpose_apply(g.alpha))
        endo_columns.append(_expand(L, moved, '(r, r*) s%d' % (a + 1)))
    endo = linalg.transpose(endo_columns)
    conn = []
    for i in range(n):
        v = VectorField.coordinate(chart, i)
        conn.append([_expand(L, dirac_operator(r, v, g),
                             'D^r_∂%s s%d' % (chart.coords[i], a + 1))
                     for a, g in enumerate(L.generators)])
    return OneDerivation(algebroid.bundle, conn, endo, r)
