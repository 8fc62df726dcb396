"""
1-derivations (nabla, l, r) on globally trivialized vector bundles and Lie
algebroids.

Sections are lists of ScalarExpr on the base chart, one coefficient per
frame element. Connection data is stored as ``conn[i][a][b]``, the
b-component of nabla_{d_i}(e_a); endomorphisms follow the OneOneTensor
convention, ``endo[b][a]`` being the b-component of l(e_a).

On the total space with coordinates (x, y) a linear (1,1)-tensor R has base
block r, fibre block l, base-to-fibre entries sum_a Gamma^b_{ia} y^a and a
vanishing fibre-to-base block.
"""
from itertools import combinations, product
import logging

from nijenhuis import linalg
from nijenhuis.calculus import (deformed_bracket, include, lie_bracket,
                                nabla_r, relatedness_clause, torsion_clause)
from nijenhuis.exceptions import (InvariantViolation, NotLinear,
                                  PreconditionFailed)
from nijenhuis.expr import Chart, describe_chart
from nijenhuis.tensors import OneOneTensor, VectorField, as_scalar
from nijenhuis.verdicts import Clause, Outcome, Verdict, combine

logger = logging.getLogger(__name__)


def _free_names(taken, wanted):
    out = []
    taken = set(taken)
    for name in wanted:
        while name in taken:
            name = name + '_'
        taken.add(name)
        out.append(name)
    return tuple(out)


def format_section(bundle, coefficients):
    terms = []
    for name, c in zip(bundle.frame, coefficients):
        if c.is_zero():
            continue
        terms.append(name if c == 1 else '(%s)*%s' % (c, name))
    return ' + '.join(terms) or '0'


class TrivialBundle(object):
    """E = M x R^k with a named global frame."""

    def __init__(self, base, rank, name='E', frame=None, fiber_coords=None,
                 total_name=None):
        if rank < 0:
            raise InvariantViolation("bundle rank must be non-negative")
        frame = tuple(frame or ('e%d' % (a + 1) for a in range(rank)))
        if fiber_coords is None:
            fiber_coords = _free_names(base.coords,
                                       ('y%d' % (a + 1) for a in range(rank)))
        fiber_coords = tuple(fiber_coords)
        if len(frame) != rank or len(fiber_coords) != rank:
            raise InvariantViolation("bundle %s of rank %d needs %d frame "
                                     "and fibre names" % (name, rank, rank))
        self.base = base
        self.rank = rank
        self.name = name
        self.frame = frame
        self.fiber_coords = fiber_coords
        self.total_name = total_name or '%s(%s)' % (name, base.name)

    @classmethod
    def tangent(cls, base):
        return cls(base, base.dim, 'T%s' % base.name,
                   frame=tuple('∂%s' % c for c in base.coords),
                   fiber_coords=tuple('%s_dot' % c for c in base.coords),
                   total_name='T%s' % base.name)

    @classmethod
    def cotangent(cls, base):
        return cls(base, base.dim, 'T*%s' % base.name,
                   frame=tuple('d%s' % c for c in base.coords),
                   fiber_coords=tuple('p_%s' % c for c in base.coords),
                   total_name='T*%s' % base.name)

    def total_space(self):
        return Chart(self.total_name, self.base.coords + self.fiber_coords)

    def zero_section(self):
        return [self.base.zero] * self.rank

    def frame_section(self, a):
        return [self.base.one if b == a else self.base.zero
                for b in range(self.rank)]

    def section(self, coefficients):
        out = [as_scalar(self.base, c) for c in coefficients]
        if len(out) != self.rank:
            raise InvariantViolation("section of %s needs %d coefficients"
                                     % (self.name, self.rank))
        return out

    def restrict(self, f):
        """A fibre-independent function on the total space, read on the base."""
        base = self.base
        return f.substitute([base.coord(i) for i in range(base.dim)]
                            + [base.zero] * self.rank)

    def __eq__(self, other):
        return (isinstance(other, TrivialBundle) and self.base == other.base
                and self.rank == other.rank and self.frame == other.frame
                and self.fiber_coords == other.fiber_coords)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.base, self.rank, self.frame))

    def __repr__(self):
        return 'TrivialBundle(%s -> %s, rank %d)' % (
            self.name, describe_chart(self.base), self.rank)


def _check_bundle(bundle, other):
    if bundle != other:
        raise InvariantViolation("%r does not match %r" % (other, bundle))


def _add(left, right):
    return [a + b for a, b in zip(left, right)]


def _scale(f, section):
    return [f * c for c in section]


class LieAlgebroidData(object):
    """
    Anchor rho(e_a) and structure functions [e_a, e_b] = sum_c c^c_{ab} e_c.
    Antisymmetry, the anchor morphism property and Jacobi are verified on
    frame sections at construction.
    """

    def __init__(self, bundle, anchor, structure=None, name=None):
        base = bundle.base
        k = bundle.rank
        anchor = [a if isinstance(a, VectorField) else VectorField(base, a)
                  for a in anchor]
        if len(anchor) != k:
            raise InvariantViolation("anchor needs %d vector fields, got %d"
                                     % (k, len(anchor)))
        table = {}
        for a in range(k):
            for b in range(k):
                if structure is None:
                    entry = [base.zero] * k
                elif isinstance(structure, dict):
                    entry = structure.get((a, b))
                    if entry is None and (b, a) in structure:
                        entry = [-c for c in bundle.section(structure[(b, a)])]
                    entry = entry or [base.zero] * k
                else:
                    entry = structure[a][b]
                table[(a, b)] = tuple(bundle.section(entry))
        self.bundle = bundle
        self.anchor = tuple(anchor)
        self.structure = table
        self.name = name or bundle.name
        self._validate()

    def _validate(self):
        frame = self.bundle.frame
        for a, b in product(range(self.bundle.rank), repeat=2):
            total = _add(self.structure[(a, b)], self.structure[(b, a)])
            if any(not c.is_zero() for c in total):
                raise InvariantViolation("structure functions are not "
                                         "antisymmetric at (%s, %s)"
                                         % (frame[a], frame[b]))
        for a, b in combinations(range(self.bundle.rank), 2):
            left = self.anchor_of(self.structure[(a, b)])
            right = lie_bracket(self.anchor[a], self.anchor[b])
            if left != right:
                raise InvariantViolation(
                    "anchor is not a bracket morphism on (%s, %s): "
                    "rho([%s, %s]) - [rho %s, rho %s] = %s"
                    % (frame[a], frame[b], frame[a], frame[b], frame[a],
                       frame[b], left - right))
        for a, b, c in combinations(range(self.bundle.rank), 3):
            sections = [self.bundle.frame_section(i) for i in (a, b, c)]
            total = self.bundle.zero_section()
            for i in range(3):
                s, t, u = sections[i], sections[(i + 1) % 3], \
                    sections[(i + 2) % 3]
                total = _add(total, self.bracket(self.bracket(s, t), u))
            if any(not x.is_zero() for x in total):
                raise InvariantViolation(
                    "Jacobi identity fails on (%s, %s, %s): %s"
                    % (frame[a], frame[b], frame[c],
                       format_section(self.bundle, total)))

    @classmethod
    def tangent(cls, chart):
        bundle = TrivialBundle.tangent(chart)
        return cls(bundle, [VectorField.coordinate(chart, i)
                            for i in range(chart.dim)], name=bundle.name)

    def opposite(self):
        """Bracket and anchor negated."""
        structure = dict((key, [-c for c in value])
                         for key, value in self.structure.items())
        return LieAlgebroidData(self.bundle, [-v for v in self.anchor],
                                structure, name='%s^op' % self.name)

    def anchor_of(self, section):
        out = VectorField.zero(self.bundle.base)
        for c, v in zip(section, self.anchor):
            if not c.is_zero():
                out = out + v.scale(c)
        return out

    def bracket(self, s, t):
        """[s, t] for arbitrary sections, by the Leibniz rule."""
        k = self.bundle.rank
        out = self.bundle.zero_section()
        for a, b in product(range(k), repeat=2):
            if s[a].is_zero() or t[b].is_zero():
                continue
            out = _add(out, _scale(s[a] * t[b], self.structure[(a, b)]))
        rho_s, rho_t = self.anchor_of(s), self.anchor_of(t)
        for a in range(k):
            out[a] = out[a] + rho_s(t[a]) - rho_t(s[a])
        return out

    def product(self, other, name=None):
        """The product algebroid over the product of the base charts."""
        base = self.bundle.base.product(other.bundle.base)
        n1 = self.bundle.base.dim
        k1, k2 = self.bundle.rank, other.bundle.rank
        frame = self.bundle.frame + _free_names(self.bundle.frame,
                                                other.bundle.frame)
        bundle = TrivialBundle(base, k1 + k2, name or '%sx%s' % (
            self.bundle.name, other.bundle.name), frame=frame)
        right_coords = [base.coord(n1 + i)
                        for i in range(other.bundle.base.dim)]

        def left(f):
            return include(f, base)

        def right(f):
            return f.substitute(right_coords)

        anchor = []
        for v in self.anchor:
            anchor.append([left(c) for c in v]
                          + [base.zero] * other.bundle.base.dim)
        for v in other.anchor:
            anchor.append([base.zero] * n1 + [right(c) for c in v])
        structure = {}
        for (a, b), value in self.structure.items():
            structure[(a, b)] = [left(c) for c in value] + [base.zero] * k2
        for (a, b), value in other.structure.items():
            structure[(k1 + a, k1 + b)] = ([base.zero] * k1
                                           + [right(c) for c in value])
        return LieAlgebroidData(bundle, anchor, structure,
                                name=bundle.name)

    def __eq__(self, other):
        return (isinstance(other, LieAlgebroidData)
                and self.bundle == other.bundle
                and self.anchor == other.anchor
                and self.structure == other.structure)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'LieAlgebroidData(%s over %s)' % (self.name,
                                                 self.bundle.base.name)


class OneDerivation(object):

    def __init__(self, bundle, conn, endo, base):
        chart = bundle.base
        k = bundle.rank
        if len(conn) != chart.dim or any(len(row) != k for row in conn):
            raise InvariantViolation("connection needs %d x %d coefficient "
                                     "lists" % (chart.dim, k))
        self.conn = tuple(tuple(tuple(bundle.section(entry)) for entry in row)
                          for row in conn)
        if len(endo) != k or any(len(row) != k for row in endo):
            raise InvariantViolation("endomorphism of a rank %d bundle needs "
                                     "a %dx%d matrix" % (k, k, k))
        self.endo = tuple(tuple(as_scalar(chart, e) for e in row)
                          for row in endo)
        chart.check(base)
        self.bundle = bundle
        self.base = base

    @classmethod
    def constant(cls, bundle, endo=None, base=None):
        """Vanishing connection coefficients; l and r default to identity."""
        chart = bundle.base
        k = bundle.rank
        if endo is None:
            endo = [[chart.one if a == b else chart.zero for a in range(k)]
                    for b in range(k)]
        if base is None:
            base = OneOneTensor.identity(chart)
        conn = [[[chart.zero] * k for _ in range(k)]
                for _ in range(chart.dim)]
        return cls(bundle, conn, endo, base)

    def endo_apply(self, section):
        k = self.bundle.rank
        return [sum((self.endo[b][a] * section[a] for a in range(k)),
                    self.bundle.base.zero) for b in range(k)]

    def covariant(self, v, a):
        """nabla_v(e_a), C-infinity linear in v."""
        out = self.bundle.zero_section()
        for i in range(self.bundle.base.dim):
            if not v[i].is_zero():
                out = _add(out, _scale(v[i], self.conn[i][a]))
        return out

    def __eq__(self, other):
        return (isinstance(other, OneDerivation)
                and self.bundle == other.bundle and self.conn == other.conn
                and self.endo == other.endo and self.base == other.base)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'OneDerivation(%s, r=%s)' % (self.bundle.name, self.base)


class BundleMap(object):
    """Phi: E1 -> E2 covering the identity; ``matrix[b][a]`` is Phi(e_a)^b."""

    def __init__(self, source, target, matrix):
        if source.base != target.base:
            raise InvariantViolation("bundle map must cover the identity")
        if len(matrix) != target.rank or any(len(row) != source.rank
                                             for row in matrix):
            raise InvariantViolation("bundle map needs a %dx%d matrix"
                                     % (target.rank, source.rank))
        self.source = source
        self.target = target
        self.matrix = tuple(tuple(as_scalar(source.base, e) for e in row)
                            for row in matrix)

    def __call__(self, section):
        return [sum((row[a] * section[a] for a in range(self.source.rank)),
                    self.source.base.zero) for row in self.matrix]


def connection_apply(D, v, section):
    """
    nabla_v(sum f_a e_a) = sum f_a nabla_v(e_a) + v(f_a) l(e_a)
    - (r v)(f_a) e_a.
    """
    D.bundle.base.check(v)
    rv = D.base(v)
    out = D.bundle.zero_section()
    for a, f in enumerate(section):
        if f.is_zero():
            continue
        out = _add(out, _scale(f, D.covariant(v, a)))
        vf = v(f)
        if not vf.is_zero():
            out = _add(out, _scale(vf, [row[a] for row in D.endo]))
        rf = rv(f)
        if not rf.is_zero():
            out[a] = out[a] - rf
    return out


def _fields(chart):
    return [VectorField.coordinate(chart, i) for i in range(chart.dim)]


def second_covariant(D, u, v, section):
    """l(nabla_[u,v] s) - [nabla_u, nabla_v] s - nabla_{[u,v]_r} s."""
    bracket = lie_bracket(u, v)
    out = D.endo_apply(connection_apply(D, bracket, section))
    out = _add(out, [-c for c in connection_apply(
        D, u, connection_apply(D, v, section))])
    out = _add(out, connection_apply(D, v, connection_apply(D, u, section)))
    twisted = connection_apply(D, deformed_bracket(D.base, u, v), section)
    return _add(out, [-c for c in twisted])


def _section_zero(clause, label, bundle, section):
    return clause.zeros(label, section, format_section(bundle, section))


def check_nijenhuis_equations(D):
    chart = D.bundle.base
    frame = D.bundle.frame
    torsion = torsion_clause(D.base, 'torsion', 'N_r')
    endomorphism = Clause('endomorphism')
    curvature = Clause('curvature')
    fields = _fields(chart)
    for i, a in product(range(chart.dim), range(D.bundle.rank)):
        e = D.bundle.frame_section(a)
        residual = _add(D.endo_apply(connection_apply(D, fields[i], e)),
                        [-c for c in connection_apply(D, fields[i],
                                                      D.endo_apply(e))])
        _section_zero(endomorphism, 'l(∇_∂%s %s) - ∇_∂%s(l %s)'
                      % (chart.coords[i], frame[a], chart.coords[i], frame[a]),
                      D.bundle, residual)
    for (i, j), a in product(combinations(range(chart.dim), 2),
                             range(D.bundle.rank)):
        residual = second_covariant(D, fields[i], fields[j],
                                    D.bundle.frame_section(a))
        _section_zero(curvature, '∇²(∂%s, ∂%s) %s'
                      % (chart.coords[i], chart.coords[j], frame[a]),
                      D.bundle, residual)
    return combine('nijenhuis-equations', [torsion.outcome(),
                                           endomorphism.outcome(),
                                           curvature.outcome()])


def check_im_equations(D, A):
    """
    The four IM identities on coordinate fields and frame sections:

    * nabla_v[s, t] = [s, nabla_v t] - [t, nabla_v s]
      + nabla_{[rho t, v]} s - nabla_{[rho s, v]} t
    * l[s, t] = [s, l t] - nabla_{rho t} s
    * rho(nabla_v s) = nabla^r_v(rho s)
    * r o rho = rho o l
    """
    _check_bundle(A.bundle, D.bundle)
    bundle = D.bundle
    chart = bundle.base
    frame = bundle.frame
    k = bundle.rank
    fields = _fields(chart)
    sections = [bundle.frame_section(a) for a in range(k)]

    bracket = Clause('im-bracket')
    for i, (a, b) in product(range(chart.dim), combinations(range(k), 2)):
        v, s, t = fields[i], sections[a], sections[b]
        left = connection_apply(D, v, A.bracket(s, t))
        right = _add(A.bracket(s, connection_apply(D, v, t)),
                     [-c for c in A.bracket(t, connection_apply(D, v, s))])
        right = _add(right, connection_apply(
            D, lie_bracket(A.anchor[b], v), s))
        right = _add(right, [-c for c in connection_apply(
            D, lie_bracket(A.anchor[a], v), t)])
        _section_zero(bracket, '∇_∂%s[%s, %s] - rhs'
                      % (chart.coords[i], frame[a], frame[b]), bundle,
                      _add(left, [-c for c in right]))

    endomorphism = Clause('im-endomorphism')
    for a, b in product(range(k), repeat=2):
        s, t = sections[a], sections[b]
        residual = _add(D.endo_apply(A.bracket(s, t)),
                        [-c for c in A.bracket(s, D.endo_apply(t))])
        residual = _add(residual, connection_apply(D, A.anchor[b], s))
        _section_zero(endomorphism, 'l[%s, %s] - [%s, l %s] + ∇_ρ%s %s'
                      % (frame[a], frame[b], frame[a], frame[b], frame[b],
                         frame[a]), bundle, residual)

    anchor = Clause('im-anchor')
    for i, a in product(range(chart.dim), range(k)):
        left = A.anchor_of(connection_apply(D, fields[i], sections[a]))
        residual = left - nabla_r(D.base, fields[i], A.anchor[a])
        anchor.zeros('ρ(∇_∂%s %s) - ∇^r_∂%s(ρ %s)'
                     % (chart.coords[i], frame[a], chart.coords[i], frame[a]),
                     residual.components, residual)

    base = Clause('im-base')
    for a in range(k):
        residual = D.base(A.anchor[a]) - A.anchor_of(
            D.endo_apply(sections[a]))
        base.zeros('r(ρ %s) - ρ(l %s)' % (frame[a], frame[a]),
                   residual.components, residual)

    return combine('im-equations', [bracket.outcome(), endomorphism.outcome(),
                                    anchor.outcome(), base.outcome()])


def _matrix_power_plus_identity(matrix, chart):
    square = linalg.matmul(matrix, matrix)
    return [[square[i][j] + (chart.one if i == j else chart.zero)
             for j in range(len(matrix))] for i in range(len(matrix))]


def check_holomorphic(D):
    """r^2 = -id, l^2 = -id, l(nabla_v u) + nabla_{r v} u = 0 and the Nijenhuis equations."""
    chart = D.bundle.base
    if chart.dim % 2 or D.bundle.rank % 2:
        witness = ("odd %s: r^2 = -id and l^2 = -id have no solution"
                   % ('base dimension %d' % chart.dim if chart.dim % 2
                      else 'rank %d' % D.bundle.rank))
        return Outcome('holomorphic', Verdict.FAIL, witness=witness)
    complex_base = Clause('complex-base')
    square = _matrix_power_plus_identity([list(r) for r in D.base.matrix],
                                         chart)
    for i, j in product(range(chart.dim), repeat=2):
        complex_base.zero('(r² + id)[%s][%s]'
                          % (chart.coords[i], chart.coords[j]), square[i][j])
    complex_fibre = Clause('complex-fibre')
    square = _matrix_power_plus_identity([list(r) for r in D.endo], chart)
    frame = D.bundle.frame
    for a, b in product(range(D.bundle.rank), repeat=2):
        complex_fibre.zero('(l² + id)[%s][%s]' % (frame[a], frame[b]),
                           square[a][b])
    connection = Clause('holomorphic-connection')
    for i, a in product(range(chart.dim), range(D.bundle.rank)):
        v = VectorField.coordinate(chart, i)
        e = D.bundle.frame_section(a)
        residual = _add(D.endo_apply(connection_apply(D, v, e)),
                        connection_apply(D, D.base(v), e))
        _section_zero(connection, 'l(∇_∂%s %s) + ∇_r∂%s %s'
                      % (chart.coords[i], frame[a], chart.coords[i], frame[a]),
                      D.bundle, residual)
    return combine('holomorphic', [complex_base.outcome(),
                                   complex_fibre.outcome(),
                                   connection.outcome(),
                                   check_nijenhuis_equations(D)])


# Linear tensors

def _require_linear(R, bundle):
    chart = bundle.total_space()
    if R.chart != chart:
        raise NotLinear("tensor lives on %s, not on the total space %s"
                        % (describe_chart(R.chart), describe_chart(chart)))
    n, k = bundle.base.dim, bundle.rank
    fibres = bundle.fiber_coords
    coords = chart.coords
    for i, a in product(range(n), range(k)):
        entry = R.matrix[i][n + a]
        if not entry.is_zero():
            raise NotLinear("fibre-to-base block: R(∂%s) has ∂%s-component "
                            "%s" % (fibres[a], coords[i], entry))
    for i, j in product(range(n), repeat=2):
        for y in fibres:
            if R.matrix[i][j].depends_on(y):
                raise NotLinear("base block: entry [%s][%s] = %s depends on "
                                "fibre coordinate %s"
                                % (coords[i], coords[j], R.matrix[i][j], y))
    for a, b in product(range(k), repeat=2):
        for y in fibres:
            if R.matrix[n + a][n + b].depends_on(y):
                raise NotLinear("fibre block: entry [%s][%s] = %s depends on "
                                "fibre coordinate %s"
                                % (fibres[a], fibres[b],
                                   R.matrix[n + a][n + b], y))
    for b, i in product(range(k), range(n)):
        entry = R.matrix[n + b][i]
        linear = chart.zero
        for a, y in enumerate(fibres):
            slope = entry.diff(y)
            for z in fibres:
                if slope.depends_on(z):
                    raise NotLinear("base-to-fibre block: entry [%s][%s] = %s"
                                    " is not linear in the fibre coordinates"
                                    % (fibres[b], coords[i], entry))
            linear = linear + slope * chart.coord(y)
        if linear != entry:
            raise NotLinear("base-to-fibre block: entry [%s][%s] = %s has a "
                            "part constant along the fibres"
                            % (fibres[b], coords[i], entry))


def derivation_of_tensor(R, bundle):
    """The 1-derivation of a linear (1,1)-tensor on the total space of ``bundle``."""
    _require_linear(R, bundle)
    n, k = bundle.base.dim, bundle.rank
    fibres = bundle.fiber_coords
    restrict = bundle.restrict
    base = OneOneTensor(bundle.base, [[restrict(R.matrix[i][j])
                                       for j in range(n)] for i in range(n)])
    endo = [[restrict(R.matrix[n + b][n + a]) for a in range(k)]
            for b in range(k)]
    conn = [[[restrict(R.matrix[n + b][i].diff(fibres[a]))
              for b in range(k)] for a in range(k)] for i in range(n)]
    return OneDerivation(bundle, conn, endo, base)


def tensor_of_derivation(D):
    bundle = D.bundle
    chart = bundle.total_space()
    n, k = bundle.base.dim, bundle.rank
    fibres = [chart.coord(n + a) for a in range(k)]
    matrix = [[chart.zero] * (n + k) for _ in range(n + k)]
    for i, j in product(range(n), repeat=2):
        matrix[i][j] = include(D.base.matrix[i][j], chart)
    for a, b in product(range(k), repeat=2):
        matrix[n + b][n + a] = include(D.endo[b][a], chart)
    for i, b in product(range(n), range(k)):
        matrix[n + b][i] = sum((include(D.conn[i][a][b], chart) * fibres[a]
                                for a in range(k)), chart.zero)
    return OneOneTensor(chart, matrix)


# Standard derivations

def tangent_lift_derivation(r):
    """(nabla^r, r, r) on TM, with nabla^r_{d_i}(d_a) = d_a r(d_i)."""
    chart = r.chart
    bundle = TrivialBundle.tangent(chart)
    n = chart.dim
    conn = [[[r.matrix[b][i].diff(chart.coords[a]) for b in range(n)]
             for a in range(n)] for i in range(n)]
    return OneDerivation(bundle, conn, [list(row) for row in r.matrix], r)


def cotangent_lift_derivation(r):
    """(nabla^{r,*}, r*, r) on T*M."""
    chart = r.chart
    bundle = TrivialBundle.cotangent(chart)
    n = chart.dim
    coords = chart.coords
    conn = [[[r.matrix[a][b].diff(coords[i]) - r.matrix[a][i].diff(coords[b])
              for b in range(n)] for a in range(n)] for i in range(n)]
    endo = [[r.matrix[a][b] for a in range(n)] for b in range(n)]
    return OneDerivation(bundle, conn, endo, r)


# Pullbacks and relatedness

def pullback_bundle(mu, bundle):
    return TrivialBundle(mu.source, bundle.rank, name='%s*%s' % (
        mu.source.name, bundle.name), frame=bundle.frame,
        fiber_coords=_free_names(mu.source.coords, bundle.fiber_coords))


def _require_related(mu, J, r):
    if not mu.is_coordinate_projection():
        raise PreconditionFailed("%r is not a coordinate projection" % mu)
    related = relatedness_clause(mu, J, r, label='dmu', base='r').outcome()
    if not related:
        raise PreconditionFailed("J is not related to r: %s"
                                 % related.witness)


def pullback_derivation(mu, D, J):
    """(mu*nabla, mu*l, J) over the source of ``mu``."""
    _require_related(mu, J, D.base)
    bundle = pullback_bundle(mu, D.bundle)
    P = mu.source
    k = bundle.rank
    jacobian = mu.jacobian()
    pulled = [[[mu.pullback(c) for c in entry] for entry in row]
              for row in D.conn]
    conn = []
    for i in range(P.dim):
        row = []
        for a in range(k):
            entry = [P.zero] * k
            for m in range(mu.target.dim):
                if not jacobian[m][i].is_zero():
                    entry = _add(entry, _scale(jacobian[m][i], pulled[m][a]))
            row.append(entry)
        conn.append(row)
    endo = [[mu.pullback(e) for e in row] for row in D.endo]
    return OneDerivation(bundle, conn, endo, J)


def pullback_tensor(mu, R, J, bundle):
    """The tensor (v, X) -> (J v, R X) on the total space of mu*E."""
    _require_linear(R, bundle)
    D = derivation_of_tensor(R, bundle)
    _require_related(mu, J, D.base)
    pulled = pullback_bundle(mu, bundle)
    chart = pulled.total_space()
    P = mu.source
    n, m, k = P.dim, mu.target.dim, bundle.rank
    fibres = [chart.coord(n + a) for a in range(k)]
    lifted = [include(f, chart) for f in mu.formulas] + fibres
    jacobian = [[include(e, chart) for e in row] for row in mu.jacobian()]
    matrix = [[chart.zero] * (n + k) for _ in range(n + k)]
    for i, j in product(range(n), repeat=2):
        matrix[i][j] = include(J.matrix[i][j], chart)
    for a, b in product(range(k), repeat=2):
        matrix[n + b][n + a] = R.matrix[m + b][m + a].substitute(lifted)
    for b, i in product(range(k), range(n)):
        total = chart.zero
        for c in range(m):
            if not jacobian[c][i].is_zero():
                total = total + (R.matrix[m + b][c].substitute(lifted)
                                 * jacobian[c][i])
        matrix[n + b][i] = total
    return OneOneTensor(chart, matrix)


def are_related_derivations(phi, D1, D2):
    _check_bundle(phi.source, D1.bundle)
    _check_bundle(phi.target, D2.bundle)
    chart = D1.bundle.base
    connection = Clause('connection')
    for i, a in product(range(chart.dim), range(D1.bundle.rank)):
        v = VectorField.coordinate(chart, i)
        e = D1.bundle.frame_section(a)
        residual = _add(phi(connection_apply(D1, v, e)),
                        [-c for c in connection_apply(D2, v, phi(e))])
        _section_zero(connection, 'Φ(∇¹_∂%s %s) - ∇²_∂%s(Φ %s)'
                      % (chart.coords[i], D1.bundle.frame[a],
                         chart.coords[i], D1.bundle.frame[a]),
                      D2.bundle, residual)
    endomorphism = Clause('endomorphism')
    for a in range(D1.bundle.rank):
        e = D1.bundle.frame_section(a)
        residual = _add(phi(D1.endo_apply(e)),
                        [-c for c in D2.endo_apply(phi(e))])
        _section_zero(endomorphism, 'Φ(l₁ %s) - l₂(Φ %s)'
                      % (D1.bundle.frame[a], D1.bundle.frame[a]),
                      D2.bundle, residual)
    base = Clause('base')
    for i, j in product(range(chart.dim), repeat=2):
        base.equal('(r₁ - r₂)[%s][%s]' % (chart.coords[i], chart.coords[j]),
                   D1.base.matrix[i][j], D2.base.matrix[i][j])
    return combine('related-derivations', [connection.outcome(),
                                           endomorphism.outcome(),
                                           base.outcome()])
