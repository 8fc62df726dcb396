"""
Exterior and tensor calculus on charts: brackets, d, torsion, the operators
attached to a (1,1)-tensor, tangent and cotangent lifts, relatedness and
projection along coordinate projections, and compatible pairs.
"""
from collections import namedtuple
from itertools import combinations, product
import logging
import threading

from nijenhuis import linalg
from nijenhuis.exceptions import (DegreeOverflow, InvariantViolation,
                                  PreconditionFailed)
from nijenhuis.expr import Chart
from nijenhuis.tensors import (CovariantTensor, DiffForm, Multivector,
                               OneOneTensor, OneTwoTensor, SmoothMap,
                               VectorField, small_det)
from nijenhuis.verdicts import Clause, combine

logger = logging.getLogger(__name__)


def include(f, chart):
    """Read a function of the first coordinates of ``chart`` on ``chart``."""
    return f.substitute([chart.coord(i) for i in range(f.chart.dim)])


def lie_bracket(u, v):
    u.chart.check(v)
    return VectorField(u.chart, [u(b) - v(a) for a, b in zip(u, v)])


def exterior_derivative(alpha):
    chart = alpha.chart
    if alpha.degree > chart.dim:
        raise DegreeOverflow("cannot differentiate a %d-form on %d-dimensional"
                             " chart %s" % (alpha.degree, chart.dim, chart.name))
    out = {}
    for key, value in alpha.items():
        for i, coord in enumerate(chart.coords):
            if i in key:
                continue
            out[(i,) + key] = value.diff(coord)
    return DiffForm(chart, alpha.degree + 1, out)


def is_closed(alpha):
    return exterior_derivative(alpha).is_zero()


def contract_form_with_tensor(alpha, K):
    """
    alpha_K(u1, ..., up) = alpha(K u1, u2, ..., up). A DiffForm when the
    result is antisymmetric, otherwise the CovariantTensor.
    """
    alpha.chart.check(K)
    chart = alpha.chart
    if alpha.degree < 1:
        raise InvariantViolation("cannot contract a function with a tensor")
    n = chart.dim
    components = {}
    for key in product(range(n), repeat=alpha.degree):
        total = chart.zero
        for m in range(n):
            entry = K.matrix[m][key[0]]
            if not entry.is_zero():
                total = total + entry * alpha[(m,) + key[1:]]
        components[key] = total
    tensor = CovariantTensor(chart, alpha.degree, components)
    if tensor.antisymmetric:
        return tensor.as_form()
    return tensor


def _as_tensor(value):
    return value.as_tensor() if isinstance(value, DiffForm) else value


def torsion_on(N, u, v):
    """[Nu, Nv] - N([Nu, v] + [u, Nv] - N[u, v])."""
    Nu, Nv = N(u), N(v)
    inner = lie_bracket(Nu, v) + lie_bracket(u, Nv) - N(lie_bracket(u, v))
    return lie_bracket(Nu, Nv) - N(inner)


def nijenhuis_torsion(N):
    chart = N.chart
    components = {}
    for i, j in combinations(range(chart.dim), 2):
        value = torsion_on(N, VectorField.coordinate(chart, i),
                           VectorField.coordinate(chart, j))
        components[(i, j)] = value
        components[(j, i)] = -value
    return OneTwoTensor(chart, components)


def torsion_clause(N, name='nijenhuis', label='N'):
    clause = Clause(name)
    coords = N.chart.coords
    torsion = nijenhuis_torsion(N)
    for i, j in combinations(range(N.chart.dim), 2):
        value = torsion[(i, j)]
        clause.zeros('%s(∂%s, ∂%s)' % (label, coords[i], coords[j]),
                     value.components, value)
    return clause


def is_nijenhuis(N):
    """Outcome of the torsion check; the witness is the first nonzero component."""
    return torsion_clause(N).outcome()


def deformed_bracket(r, u, v):
    r.chart.check(u, v)
    return lie_bracket(r(u), v) + lie_bracket(u, r(v)) - r(lie_bracket(u, v))


def nabla_r(r, v, u):
    """[u, r(v)] - r([u, v])."""
    r.chart.check(u, v)
    return lie_bracket(u, r(v)) - r(lie_bracket(u, v))


def nabla_r_star(r, v, alpha):
    """i_v d(r* alpha) - i_{r(v)} d alpha."""
    r.chart.check(v, alpha)
    first = exterior_derivative(r.transpose_apply(alpha)).interior(v)
    second = exterior_derivative(alpha).interior(r(v))
    return first - second


def lie_derivative_form(v, alpha):
    """Cartan's formula; on functions this is v(f)."""
    v.chart.check(alpha)
    if alpha.degree == 0:
        return DiffForm.function(v(alpha[()]))
    out = exterior_derivative(alpha).interior(v)
    return out + exterior_derivative(alpha.interior(v))


def lie_derivative_tensor(w, r):
    """(L_w r)(u) = [w, r u] - r[w, u], column by column."""
    w.chart.check(r)
    columns = []
    for j in range(r.chart.dim):
        u = VectorField.coordinate(r.chart, j)
        columns.append(lie_bracket(w, r(u)) - r(lie_bracket(w, u)))
    return OneOneTensor.from_columns(r.chart, columns)


def pullback_form(phi, alpha):
    phi.target.check(alpha)
    source = phi.source
    jacobian = phi.jacobian()
    coefficients = [(key, phi.pullback(value)) for key, value in alpha.items()]
    out = {}
    for columns in combinations(range(source.dim), alpha.degree):
        total = source.zero
        for key, value in coefficients:
            minor = [[jacobian[row][col] for col in columns] for row in key]
            total = total + value * small_det(minor, source)
        out[columns] = total
    return DiffForm(source, alpha.degree, out)


def sharp_of_form(omega, alpha):
    """The vector field v with i_v omega = alpha."""
    omega.chart.check(alpha)
    solution = linalg.solve(omega.flat_matrix(), alpha.as_covector(),
                            omega.chart)
    if solution is None or linalg.rank(omega.flat_matrix(),
                                       omega.chart) < omega.chart.dim:
        raise InvariantViolation("2-form is degenerate; sharp is undefined")
    return VectorField(omega.chart, solution)


def poisson_of_symplectic(omega):
    """The bivector whose sharp map inverts omega-flat."""
    inverse = linalg.inverse(omega.flat_matrix(), omega.chart)
    return Multivector.from_matrix(omega.chart, linalg.transpose(inverse))


def form_of_matrix(chart, matrix):
    """The 2-form whose flat matrix is ``matrix`` (column j is i_{d_j} omega)."""
    n = chart.dim
    for i in range(n):
        for j in range(n):
            if not (matrix[i][j] + matrix[j][i]).is_zero():
                raise InvariantViolation(
                    "flat matrix is not antisymmetric at (%s, %s)"
                    % (chart.coords[i], chart.coords[j]))
    return DiffForm(chart, 2, dict(((i, j), matrix[j][i])
                                   for i, j in combinations(range(n), 2)))


# Tangent lift

def _coordinate_tangent_lift(J):
    P = J.chart
    n = P.dim
    TP = P.tangent()
    velocities = [TP.coord(n + k) for k in range(n)]
    entries = [[include(J.matrix[i][j], TP) for j in range(n)]
               for i in range(n)]
    matrix = [[TP.zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            matrix[i][j] = entries[i][j]
            matrix[n + i][n + j] = entries[i][j]
            total = TP.zero
            for k in range(n):
                total = total + velocities[k] * entries[i][j].diff(TP.coords[k])
            matrix[n + i][j] = total
    return OneOneTensor(TP, matrix)


def _compose(outer, inner):
    return [f.substitute(inner) for f in outer]


def derive_tangent_lift(J):
    """
    The tangent lift computed as kappa o dJ o kappa on T(TP), where J is
    read as the fibrewise linear map TP -> TP and kappa swaps the two
    tangent directions.
    """
    P = J.chart
    n = P.dim
    TP = P.tangent()
    TTP = Chart('T%s' % TP.name, TP.coords + tuple('d_%s' % c
                                                   for c in TP.coords))
    m = 2 * n
    q = [TTP.coord(a) for a in range(m)]
    dq = [TTP.coord(m + a) for a in range(m)]

    xs = [TP.coord(i) for i in range(n)]
    dots = [TP.coord(n + i) for i in range(n)]
    as_map = xs + [sum((include(J.matrix[i][j], TP) * dots[j]
                        for j in range(n)), TP.zero) for i in range(n)]

    base = [f.substitute(q) for f in as_map]
    fibre = [sum((f.diff(TP.coords[b]).substitute(q) * dq[b]
                  for b in range(m)), TTP.zero) for f in as_map]
    differential = base + fibre

    # (x, x_dot, dx, dx_dot) -> (x, dx, x_dot, dx_dot)
    swap = q[:n] + dq[:n] + q[n:] + dq[n:]

    total = _compose(swap, _compose(differential, swap))
    for a in range(m):
        if total[a] != q[a]:
            raise InvariantViolation("conjugated differential moves the base "
                                     "point in slot %d" % a)
    on_base = [TP.coord(a) for a in range(m)] + [TP.zero] * m
    matrix = [[total[m + a].diff(TTP.coords[m + b]).substitute(on_base)
               for b in range(m)] for a in range(m)]
    return OneOneTensor(TP, matrix)


_self_test_lock = threading.Lock()
_self_tested = []


def _tangent_lift_self_test():
    with _self_test_lock:
        if _self_tested:
            return
        chart = Chart('S', ('a', 'b'))
        J = OneOneTensor(chart, [['a*b', 'a^2 + b'], ['b^2 - 1', 'a - b^3']])
        if derive_tangent_lift(J) != _coordinate_tangent_lift(J):
            raise AssertionError("coordinate tangent lift disagrees with "
                                 "the conjugated differential")
        logger.debug("tangent lift coordinate formula confirmed")
        _self_tested.append(True)


def tangent_lift(J):
    _tangent_lift_self_test()
    return _coordinate_tangent_lift(J)


# Cotangent lift

def canonical_symplectic(cotangent):
    n = cotangent.dim // 2
    return DiffForm(cotangent, 2, dict(((i, n + i), cotangent.one)
                                       for i in range(n)))


def cotangent_flow_map(r):
    """phi_r: T*M -> T*M, (x, p) -> (x, r* p)."""
    M = r.chart
    n = M.dim
    TM = M.cotangent()
    momenta = [TM.coord(n + i) for i in range(n)]
    formulas = [TM.coord(i) for i in range(n)]
    for j in range(n):
        formulas.append(sum((momenta[i] * include(r.matrix[i][j], TM)
                             for i in range(n)), TM.zero))
    return SmoothMap(TM, TM, formulas)


def cotangent_lift(r):
    """The tensor R on T*M with i_{R v} omega_can = i_v (phi_r* omega_can)."""
    TM = r.chart.cotangent()
    omega = canonical_symplectic(TM)
    pulled = pullback_form(cotangent_flow_map(r), omega)
    inverse = linalg.inverse(omega.flat_matrix(), TM)
    return OneOneTensor(TM, linalg.matmul(inverse, pulled.flat_matrix()))


def cotangent_lift_residual(r, lifted):
    """Outcome of the defining relation of the cotangent lift, per coordinate field."""
    TM = lifted.chart
    omega = canonical_symplectic(TM)
    pulled = pullback_form(cotangent_flow_map(r), omega)
    clause = Clause('cotangent-lift')
    for j, coord in enumerate(TM.coords):
        v = VectorField.coordinate(TM, j)
        residual = omega.interior(lifted(v)) - pulled.interior(v)
        clause.zeros('i_R(∂%s) w - i_∂%s phi*w' % (coord, coord),
                     residual.as_covector(), residual)
    return clause.outcome()


# Relatedness and projection

def relatedness_clause(phi, N, N_B, clause=None, label='dphi', base='N_B'):
    """Record dphi(N v) - N_B(dphi v) on every coordinate field into ``clause``."""
    phi.source.check(N)
    phi.target.check(N_B)
    if clause is None:
        clause = Clause('related')
    jacobian = phi.jacobian()
    pulled = [[phi.pullback(e) for e in row] for row in N_B.matrix]
    target = phi.target
    for j, coord in enumerate(phi.source.coords):
        left = phi.push(N.column(j))
        right = [sum((pulled[a][b] * jacobian[b][j]
                      for b in range(target.dim)), phi.source.zero)
                 for a in range(target.dim)]
        residual = [x - y for x, y in zip(left, right)]
        shown = ' + '.join('(%s)*∂%s' % (e, c)
                           for e, c in zip(residual, target.coords)
                           if not e.is_zero())
        name = '%s(N ∂%s) - %s(%s ∂%s)' % (label, coord, base, label, coord)
        clause.zeros(name, residual, shown)
    return clause


def relatedness(phi, N, N_B):
    return relatedness_clause(phi, N, N_B).outcome()


def is_related(phi, N, N_B):
    return bool(relatedness(phi, N, N_B))


class Projection(namedtuple('Projection', 'tensor witness')):

    def __bool__(self):
        return self.tensor is not None

    __nonzero__ = __bool__


def project_tensor(phi, N):
    phi.source.check(N)
    base = phi.projection_indices()
    if base is None:
        raise PreconditionFailed("%r is not a coordinate projection" % phi)
    source = phi.source
    fibre = phi.fiber_indices()
    for f in fibre:
        for a in base:
            entry = N.matrix[a][f]
            if not entry.is_zero():
                return Projection(None, "N(∂%s) has ∂%s-component %s, so N "
                                  "does not preserve the fibres"
                                  % (source.coords[f], source.coords[a], entry))
    on_target = [phi.target.zero] * source.dim
    for a, index in enumerate(base):
        on_target[index] = phi.target.coord(a)
    matrix = []
    for a in base:
        row = []
        for b in base:
            entry = N.matrix[a][b]
            for f in fibre:
                if entry.depends_on(source.coords[f]):
                    return Projection(None, "candidate component N[%s][%s] = "
                                      "%s depends on fibre coordinate %s"
                                      % (source.coords[a], source.coords[b],
                                         entry, source.coords[f]))
            row.append(entry.substitute(on_target))
        matrix.append(row)
    return Projection(OneOneTensor(phi.target, matrix), '')


# Compatible pairs

def compatible_pair(omega, K):
    """
    Checks omega-flat o K = K* o omega-flat, then d(omega_K) = (d omega)_K.
    The second condition is only formed once the first holds, since omega_K
    is antisymmetric exactly then.
    """
    omega.chart.check(K)
    chart = omega.chart
    flat = omega.flat_matrix()
    matrix = [list(row) for row in K.matrix]
    left = linalg.matmul(flat, matrix)
    right = linalg.matmul(linalg.transpose(matrix), flat)
    first = Clause('flat-commutes')
    for i, j in product(range(chart.dim), repeat=2):
        first.equal('(w♭K - K*w♭)[%s][%s]' % (chart.coords[i], chart.coords[j]),
                    left[i][j], right[i][j])
    clauses = [first.outcome()]
    if clauses[0]:
        second = Clause('closed-contraction')
        d_contracted = _as_tensor(exterior_derivative(
            contract_form_with_tensor(omega, K)))
        contracted_d = _as_tensor(contract_form_with_tensor(
            exterior_derivative(omega), K))
        for key in sorted(d_contracted.components):
            names = ', '.join('∂%s' % chart.coords[k] for k in key)
            second.equal('(d(w_K) - (dw)_K)(%s)' % names,
                         d_contracted[key], contracted_d[key])
        clauses.append(second.outcome())
    return combine('compatible-pair', clauses)
