"""
Infinitesimal Morita bibundles and the Morita checks built on them.

A bibundle is a chart P with two coordinate projections mu1: P -> M1 and
mu2: P -> M2, a left action of A1 along mu1 and a left action of the
opposite algebroid A2^op along mu2. Each check returns a MoritaReport with
one verdict per clause; global conditions (completeness of the actions,
connectedness of the fibres) are reported as assumed.
"""
from collections import namedtuple
from itertools import combinations, product
import logging

from nijenhuis import linalg
from nijenhuis.calculus import (compatible_pair, exterior_derivative,
                                form_of_matrix, is_nijenhuis, lie_bracket,
                                nabla_r, nabla_r_star, poisson_of_symplectic,
                                pullback_form, relatedness_clause)
from nijenhuis.derivations import (check_holomorphic,
                                   check_nijenhuis_equations,
                                   derivation_of_tensor)
from nijenhuis.dirac import (PNStructure, algebroid_of_dirac,
                             cotangent_algebroid, dirac_derivation,
                             dirac_hierarchy, graph_of_bivector,
                             graph_of_two_form, is_compatible_tensor,
                             is_forward_dirac, poisson_hierarchy)
from nijenhuis.exceptions import (InvariantViolation, NijenhuisError,
                                  PreconditionFailed)
from nijenhuis.expr import Chart
from nijenhuis.tensors import (DiffForm, OneOneTensor, SmoothMap,
                               VectorField)
from nijenhuis.verdicts import (Clause, MoritaReport, Outcome, Verdict,
                                assumed, combine, relabel)

logger = logging.getLogger(__name__)

COMPLETE = "completeness of the actions is assumed, not verified"
FIBRES = ("connectedness and simple-connectedness of the fibres of mu1 and "
          "mu2 are assumed, not verified")


class InfAction(object):
    """
    a: Gamma(A) -> X(P) along the moment map mu: P -> M, given on the frame
    by ``table``. Anchor compatibility and the bracket morphism property are
    verified at construction.
    """

    def __init__(self, algebroid, moment, table, name=None):
        algebroid.bundle.base.check(moment.target)
        P = moment.source
        table = [t if isinstance(t, VectorField) else VectorField(P, t)
                 for t in table]
        if len(table) != algebroid.bundle.rank:
            raise InvariantViolation("action of %s needs %d vector fields, "
                                     "got %d" % (algebroid.name,
                                                 algebroid.bundle.rank,
                                                 len(table)))
        P.check(*table)
        self.algebroid = algebroid
        self.moment = moment
        self.table = tuple(table)
        self.name = name or 'a(%s)' % algebroid.name
        outcome = self.validation()
        if not outcome:
            raise InvariantViolation("%s is not an action: %s"
                                     % (self.name, outcome.witness))

    @property
    def P(self):
        return self.moment.source

    def validation(self):
        A = self.algebroid
        frame = A.bundle.frame
        anchor = Clause('anchor')
        for a, field in enumerate(self.table):
            residual = [x - y for x, y in zip(
                self.moment.push(field),
                self.moment.pullback_vector(A.anchor[a]))]
            anchor.zeros('dmu(a(%s)) - mu*ρ(%s)' % (frame[a], frame[a]),
                         residual, ', '.join(str(r) for r in residual))
        bracket = Clause('bracket')
        for a, b in combinations(range(A.bundle.rank), 2):
            residual = (self.apply(A.structure[(a, b)])
                        - lie_bracket(self.table[a], self.table[b]))
            bracket.zeros('a[%s, %s] - [a %s, a %s]'
                          % (frame[a], frame[b], frame[a], frame[b]),
                          residual.components, residual)
        return combine('action', [anchor.outcome(), bracket.outcome()])

    def apply(self, section):
        """a(sum f_a e_a) = sum (mu* f_a) a(e_a)."""
        return self.apply_along([self.moment.pullback(f) for f in section])

    def apply_along(self, coefficients):
        """sum c_a a(e_a) for coefficients already on P."""
        out = VectorField.zero(self.P)
        for c, field in zip(coefficients, self.table):
            if not c.is_zero():
                out = out + field.scale(c)
        return out

    def matrix(self):
        return [list(field.components) for field in self.table]

    def __repr__(self):
        return 'InfAction(%s along %s)' % (self.algebroid.name,
                                           self.moment.target.name)


class InfBibundle(object):
    """Left action of A1 along mu1 and left action of A2^op along mu2."""

    def __init__(self, left, right, form=None, tensor=None, name=None):
        left.P.check(right.P)
        for side, action in (('left', left), ('right', right)):
            if not action.moment.is_coordinate_projection():
                raise InvariantViolation("%s moment map %r is not a "
                                         "coordinate projection"
                                         % (side, action.moment))
        if form is not None:
            left.P.check(form)
        if tensor is not None:
            left.P.check(tensor)
        self.left = left
        self.right = right
        self.form = form
        self.tensor = tensor
        self.name = name or left.P.name

    @property
    def P(self):
        return self.left.P

    @property
    def mu1(self):
        return self.left.moment

    @property
    def mu2(self):
        return self.right.moment

    def with_structures(self, form=None, tensor=None):
        return InfBibundle(self.left, self.right,
                           form if form is not None else self.form,
                           tensor if tensor is not None else self.tensor,
                           self.name)

    def __repr__(self):
        return 'InfBibundle(%s: %s <- %s -> %s)' % (
            self.name, self.mu1.target.name, self.P.name, self.mu2.target.name)


def sum_of_actions(B):
    """(xi1, xi2) -> a1(xi1) + a2(xi2) along (mu1, mu2)."""
    algebroid = B.left.algebroid.product(B.right.algebroid)
    moment = SmoothMap(B.P, algebroid.bundle.base,
                       B.mu1.formulas + B.mu2.formulas)
    return InfAction(algebroid, moment, B.left.table + B.right.table,
                     name='%s + %s' % (B.left.name, B.right.name))


def _kernel_rank(action, other):
    """Rank claim for im(action) = ker d(other)."""
    return action.P.dim - other.target.dim


def check_algebroid_morita(B):
    commuting = Clause('commuting')
    A1, A2 = B.left.algebroid, B.right.algebroid
    for (a, u), (b, w) in product(enumerate(B.left.table),
                                  enumerate(B.right.table)):
        residual = lie_bracket(u, w)
        commuting.zeros('[a1(%s), a2(%s)]' % (A1.bundle.frame[a],
                                              A2.bundle.frame[b]),
                        residual.components, residual)
    clauses = [commuting.outcome()]
    for side, action in (('left', B.left), ('right', B.right)):
        clause = Clause('%s-injective' % side)
        clause.rank('a(%s)' % action.algebroid.name, action.matrix(), B.P,
                    action.algebroid.bundle.rank)
        clauses.append(clause.outcome())
    for side, action, other in (('left', B.left, B.mu2),
                                ('right', B.right, B.mu1)):
        clause = Clause('%s-image' % side)
        indices = other.projection_indices()
        for a, field in enumerate(action.table):
            clause.zeros('d%s(a(%s))' % (other.target.name,
                                         action.algebroid.bundle.frame[a]),
                         [field[i] for i in indices],
                         ', '.join(str(field[i]) for i in indices))
        clause.rank('a(%s) against ker d%s' % (action.algebroid.name,
                                               other.target.name),
                    action.matrix(), B.P, _kernel_rank(action, other))
        clauses.append(clause.outcome())
    clauses.append(assumed('complete-actions', COMPLETE))
    clauses.append(assumed('connected-fibres', FIBRES))
    return MoritaReport('algebroid-morita', clauses)


def _require_algebroid_morita(B):
    outcome = check_algebroid_morita(B)
    if not outcome:
        raise PreconditionFailed("%r is not an infinitesimal Morita "
                                 "bibundle: %s" % (B, outcome.witness))


def _base_clause(B, J, r1, r2, name):
    clause = Clause(name)
    relatedness_clause(B.mu1, J, r1, clause, label='dmu1', base='r1')
    relatedness_clause(B.mu2, J, r2, clause, label='dmu2', base='r2')
    return clause.outcome()


def _connection_along(action, D, w, a):
    """Coefficients on P of nabla_w(e_a) for w given along mu."""
    P = action.P
    mu = action.moment
    k = D.bundle.rank
    out = [P.zero] * k
    for i in range(mu.target.dim):
        if w[i].is_zero():
            continue
        for b in range(k):
            out[b] = out[b] + w[i] * mu.pullback(D.conn[i][a][b])
    return out


def derivation_clauses(B, D1, D2, J):
    """Clauses (i)-(iii) of the 1-derivation Morita conditions."""
    P = B.P
    P.check(J)
    endomorphism = Clause('(ii) endomorphism')
    connection = Clause('(iii) connection')
    sides = ((B.left, D1, '1'), (B.right, D2, '2'))
    for action, D, label in sides:
        if D.bundle != action.algebroid.bundle:
            raise InvariantViolation("derivation %d lives on %r, the action "
                                     "on %r" % (int(label), D.bundle,
                                                action.algebroid.bundle))
        frame = D.bundle.frame
        for a, field in enumerate(action.table):
            moved = action.apply(D.endo_apply(D.bundle.frame_section(a)))
            residual = J(field) - moved
            endomorphism.zeros('J(a%s(%s)) - a%s(l%s %s)'
                               % (label, frame[a], label, label, frame[a]),
                               residual.components, residual)
        for i, a in product(range(P.dim), range(D.bundle.rank)):
            v = VectorField.coordinate(P, i)
            w = action.moment.push(v)
            expected = action.apply_along(_connection_along(action, D, w, a))
            residual = nabla_r(J, v, action.table[a]) - expected
            connection.zeros('∇^J_∂%s(a%s(%s)) - a%s(∇%s %s)'
                             % (P.coords[i], label, frame[a], label, label,
                                frame[a]), residual.components, residual)
    return [_base_clause(B, J, D1.base, D2.base, '(i) base'),
            endomorphism.outcome(), connection.outcome()]


def check_derivation_morita(B, D1, D2, J):
    _require_algebroid_morita(B)
    return MoritaReport('derivation-morita', derivation_clauses(B, D1, D2, J))


def check_im_tensor_morita(B, R1, R2, J):
    """The 1-derivation check on the derivations of linear tensors R1, R2."""
    D1 = derivation_of_tensor(R1, B.left.algebroid.bundle)
    D2 = derivation_of_tensor(R2, B.right.algebroid.bundle)
    report = check_derivation_morita(B, D1, D2, J)
    witness = ''
    for outcome in (check_nijenhuis_equations(D1),
                    check_nijenhuis_equations(D2), is_nijenhuis(J)):
        if not outcome and not witness:
            witness = outcome.witness
    flags = {'nijenhuis': not witness, 'nijenhuis_witness': witness}
    if not witness and report:
        logger.debug("Morita equivalence of Nijenhuis IM tensor fields")
    return MoritaReport('im-tensor-morita', report.clauses, flags)


# Dirac Morita equivalence

def _pullback_twist(mu, eta):
    if eta is None or eta.is_zero():
        return None
    return pullback_form(mu, eta)


def _bibundle_twist(mu1, mu2, L1, L2):
    """eta = mu2* eta2 - mu1* eta1, or None when both vanish."""
    first = _pullback_twist(mu1, L1.twist)
    second = _pullback_twist(mu2, L2.twist)
    if first is None:
        return second
    if second is None:
        return -first
    return second - first


def _solve_action(mu1, mu2, varpi, section, on_left):
    """The u in TP with dmu(u) = v, dmu'(u) = 0 and i_u varpi = +-mu* alpha."""
    P = mu1.source
    mu, other = (mu1, mu2) if on_left else (mu2, mu1)
    sign = 1 if on_left else -1
    rows = mu.jacobian() + other.jacobian() + varpi.flat_matrix()
    form = pullback_form(mu, section.alpha).scale(sign).as_covector()
    rhs = (mu.pullback_vector(section.v) + [P.zero] * other.target.dim
           + form)
    solution = linalg.solve(rows, rhs, P)
    if solution is None:
        raise InvariantViolation("no vector on %s induces %s" % (P.name,
                                                                 section))
    return VectorField(P, solution)


def induced_actions(source, L1, L2, varpi):
    """
    The actions induced by varpi on P. ``source`` is a bibundle or a
    (mu1, mu2) pair. The right table is the negated natural action, a left
    action of the opposite algebroid of L2.
    """
    if isinstance(source, InfBibundle):
        mu1, mu2 = source.mu1, source.mu2
    else:
        mu1, mu2 = source
    left = InfAction(algebroid_of_dirac(L1), mu1, [
        _solve_action(mu1, mu2, varpi, g, True) for g in L1.generators])
    right = InfAction(algebroid_of_dirac(L2).opposite(), mu2, [
        -_solve_action(mu1, mu2, varpi, g, False) for g in L2.generators])
    return left, right


def _table_clause(name, declared, induced):
    """
    Declared tables against the expected ones. In the same frame they must
    agree field by field; in another frame they must span the same
    distribution.
    """
    clause = Clause(name)
    for action, expected in zip(declared, induced):
        if len(action.table) != len(expected.table):
            clause.fail('%s has %d fields, the expected action %d'
                        % (action.name, len(action.table),
                           len(expected.table)))
            continue
        frame = expected.algebroid.bundle.frame
        if action.algebroid.bundle.frame != frame:
            clause.rank('%s and %s together' % (action.name, expected.name),
                        action.matrix() + expected.matrix(), action.P,
                        len(expected.table))
            continue
        for a, (u, w) in enumerate(zip(action.table, expected.table)):
            residual = u - w
            clause.zeros('%s(%s) - expected' % (action.name, frame[a]),
                         residual.components, residual)
    return clause.outcome()


def dirac_clauses(B, L1, L2, varpi):
    P = B.P
    P.check(varpi)
    mu1, mu2 = B.mu1, B.mu2
    opposite = L2.opposite()
    eta = _bibundle_twist(mu1, mu2, L1, L2)
    if eta is None and P.dim >= 2:
        eta = DiffForm.zero(P, 3)
    L_varpi = graph_of_two_form(varpi, twist=eta, name='L_ϖ')
    clauses = [
        relabel(is_forward_dirac(mu1, L_varpi, L1), '(a) forward-dirac mu1'),
        relabel(is_forward_dirac(mu2, L_varpi, opposite),
                '(a) forward-dirac mu2'),
        assumed('(a) simply-connected-fibres', FIBRES),
        assumed('(b) complete-actions', COMPLETE),
    ]
    kernel = Clause('(c) kernel')
    stacked = varpi.flat_matrix() + mu1.jacobian() + mu2.jacobian()
    kernel.rank('ker ϖ ∩ ker dmu1 ∩ ker dmu2', stacked, P, P.dim)
    clauses.append(kernel.outcome())
    orthogonal = Clause('(d) orthogonal-fibres')
    for f1, f2 in product(mu1.fiber_indices(), mu2.fiber_indices()):
        orthogonal.zero('ϖ(∂%s, ∂%s)' % (P.coords[f1], P.coords[f2]),
                        varpi[(f1, f2)])
    clauses.append(orthogonal.outcome())
    closed = Clause('(e) closed')
    if varpi.degree < P.dim:
        d_varpi = exterior_derivative(varpi)
        for key in combinations(range(P.dim), 3):
            expected = eta[key] if eta is not None else P.zero
            closed.equal('(dϖ - η)(%s)' % ', '.join(
                '∂%s' % P.coords[k] for k in key), d_varpi[key], expected)
    clauses.append(closed.outcome())
    try:
        induced = induced_actions(B, L1, L2, varpi)
    except InvariantViolation as exc:
        clauses.append(Outcome('induced-actions', Verdict.FAIL,
                               witness=str(exc)))
    else:
        clauses.append(_table_clause('induced-actions', (B.left, B.right),
                                     induced))
    return clauses


def check_dirac_morita(B, L1, L2, varpi):
    """L2 is read through its opposite; the twist on P is mu2* eta2 - mu1* eta1."""
    return MoritaReport('dirac-morita', dirac_clauses(B, L1, L2, varpi))


# Poisson-Nijenhuis Morita equivalence

def _as_pn(value):
    if isinstance(value, PNStructure):
        return value
    return PNStructure(*value)


def poisson_actions(mu1, mu2, pi1, pi2, varpi):
    """a_i(dx^j) = pi_varpi#(mu_i* dx^j); the right side acts by T*M2^op."""
    sharp = poisson_of_symplectic(varpi).sharp
    actions = []
    for mu, pi, opposite in ((mu1, pi1, False), (mu2, pi2, True)):
        algebroid = cotangent_algebroid(pi)
        if opposite:
            algebroid = algebroid.opposite()
        table = [sharp(pullback_form(mu, DiffForm.coordinate(mu.target, j)))
                 for j in range(mu.target.dim)]
        actions.append(InfAction(algebroid, mu, table))
    return tuple(actions)


def _nondegenerate(varpi):
    clause = Clause('nondegenerate')
    P = varpi.chart
    if not clause.rank('ϖ♭', varpi.flat_matrix(), P, P.dim):
        raise InvariantViolation("ϖ is degenerate on %s: %s"
                                 % (P.name, clause.witness))
    return clause.outcome()


def check_pn_morita(B, pn1, pn2, varpi, J):
    pn1, pn2 = _as_pn(pn1), _as_pn(pn2)
    P = B.P
    P.check(varpi, J)
    clauses = [relabel(pn1.check(), 'pn-1'), relabel(pn2.check(), 'pn-2'),
               _nondegenerate(varpi)]
    L_varpi = graph_of_two_form(varpi)
    forward = [
        relabel(is_forward_dirac(B.mu1, L_varpi, graph_of_bivector(pn1.pi)),
                'mu1'),
        relabel(is_forward_dirac(B.mu2, L_varpi,
                                 graph_of_bivector(pn2.pi).opposite()),
                'mu2'),
    ]
    clauses.append(combine('(0) poisson-morita', forward))
    clauses.append(_base_clause(B, J, pn1.r, pn2.r, '(1) base'))
    sharp = poisson_of_symplectic(varpi).sharp
    endomorphism = Clause('(2) endomorphism')
    connection = Clause('(3) connection')
    for label, mu, pn in (('1', B.mu1, pn1), ('2', B.mu2, pn2)):
        M = mu.target
        for j in range(M.dim):
            dx = DiffForm.coordinate(M, j)
            lifted = sharp(pullback_form(mu, dx))
            residual = J(lifted) - sharp(pullback_form(
                mu, pn.r.transpose_apply(dx)))
            endomorphism.zeros('J π♯_ϖ(mu%s* d%s) - π♯_ϖ(mu%s* r%s* d%s)'
                               % (label, M.coords[j], label, label,
                                  M.coords[j]),
                               residual.components, residual)
            for i in range(P.dim):
                v = VectorField.coordinate(P, i)
                w = mu.push(v)
                form = DiffForm.zero(P, 1)
                for k in range(M.dim):
                    if w[k].is_zero():
                        continue
                    moved = nabla_r_star(pn.r, VectorField.coordinate(M, k),
                                         dx)
                    form = form + pullback_form(mu, moved).scale(w[k])
                residual = nabla_r(J, v, lifted) - sharp(form)
                connection.zeros('∇^J_∂%s π♯_ϖ(mu%s* d%s) - π♯_ϖ(mu%s* '
                                 '∇^{r%s,*} d%s)'
                                 % (P.coords[i], label, M.coords[j], label,
                                    label, M.coords[j]),
                                 residual.components, residual)
    clauses.extend([endomorphism.outcome(), connection.outcome(),
                    compatible_pair(varpi, J)])
    try:
        expected = poisson_actions(B.mu1, B.mu2, pn1.pi, pn2.pi, varpi)
    except InvariantViolation as exc:
        clauses.append(Outcome('actions', Verdict.FAIL, witness=str(exc)))
    else:
        clauses.append(_table_clause('actions', (B.left, B.right), expected))
    return MoritaReport('pn-morita', clauses)


def _derivation_report(B, first, second, J):
    """(i)-(iii) for the derivations of compatible tensors on L1 and L2."""
    try:
        D1 = dirac_derivation(*first)
        D2 = dirac_derivation(*second)
        _require_algebroid_morita(B)
    except NijenhuisError as exc:
        return Outcome('im-tensor-morita', Verdict.FAIL, witness=str(exc))
    return combine('im-tensor-morita', derivation_clauses(B, D1, D2, J))


def check_dirac_nijenhuis_morita(B, first, second, varpi, J):
    """Dirac Morita plus the tensor conditions, for (L1, r1) and (L2, r2)."""
    (L1, r1), (L2, r2) = first, second
    P = B.P
    P.check(varpi, J)
    clauses = [combine('dirac-morita', dirac_clauses(B, L1, L2, varpi))]
    try:
        induced = InfBibundle(*induced_actions(B, L1, L2, varpi))
    except InvariantViolation as exc:
        clauses.append(Outcome('im-tensor-morita', Verdict.FAIL,
                               witness=str(exc)))
    else:
        clauses.append(_derivation_report(induced, first, second, J))
    clauses.extend([compatible_pair(varpi, J),
                    relabel(is_compatible_tensor(L1, r1), 'compatible-1'),
                    relabel(is_compatible_tensor(L2, r2), 'compatible-2')])
    return MoritaReport('dirac-nijenhuis-morita', clauses)


def check_holomorphic_morita(B, D1, D2, J):
    """1-derivation Morita equivalence of two holomorphic derivations."""
    _require_algebroid_morita(B)
    P = B.P
    complex_J = Clause('complex-J')
    square = J.compose(J) + OneOneTensor.identity(P)
    for i, j in product(range(P.dim), repeat=2):
        complex_J.zero('(J² + id)[%s][%s]' % (P.coords[i], P.coords[j]),
                       square.matrix[i][j])
    clauses = derivation_clauses(B, D1, D2, J)
    clauses.extend([complex_J.outcome(),
                    relabel(check_holomorphic(D1), 'holomorphic-1'),
                    relabel(check_holomorphic(D2), 'holomorphic-2')])
    return MoritaReport('holomorphic-morita', clauses)


# Hierarchies and the standard pair

Hierarchy = namedtuple('Hierarchy', 'form first second bibundle report')

StandardPair = namedtuple('StandardPair', 'bibundle first second form')


def _flat_times(varpi, tensor):
    matrix = linalg.matmul(varpi.flat_matrix(),
                           [list(row) for row in tensor.matrix])
    return form_of_matrix(varpi.chart, matrix)


def _deformed(action, algebroid, J_n):
    return InfAction(algebroid, action.moment,
                     [J_n(field) for field in action.table])


def hierarchy_bibundle(B, n, mode, first, second):
    """
    Cotangent mode: varpi_n with flat varpi o J^n, L_i^(0,n) and the induced
    actions. PN mode: varpi^n with flat varpi o J^-n, the Poisson hierarchy
    and the actions deformed by J^n.
    """
    varpi, J = B.form, B.tensor
    if varpi is None or J is None:
        raise PreconditionFailed("hierarchy needs a bibundle carrying ϖ and J")
    if n < 0:
        raise InvariantViolation("hierarchy index must be non-negative, "
                                 "got %d" % n)
    if mode == 'cotangent':
        (L1, r1), (L2, r2) = first, second
        form = _flat_times(varpi, J.power(n))
        L1n = dirac_hierarchy(L1, r1, n, 'cotangent')
        L2n = dirac_hierarchy(L2, r2, n, 'cotangent')
        bibundle = InfBibundle(*induced_actions(B, L1n, L2n, form),
                               form=form, tensor=J, name=B.name)
        report = check_dirac_nijenhuis_morita(bibundle, (L1n, r1), (L2n, r2),
                                              form, J)
        return Hierarchy(form, (L1n, r1), (L2n, r2), bibundle, report)
    if mode != 'pn':
        raise InvariantViolation("hierarchy mode must be 'cotangent' or "
                                 "'pn', got %r" % mode)
    pn1, pn2 = _as_pn(first), _as_pn(second)
    if J.determinant().is_zero():
        raise PreconditionFailed("J is not invertible: det J = 0 on %s"
                                 % B.P.name)
    locus = linalg.degeneracy_locus([list(row) for row in J.matrix], B.P,
                                    B.P.dim)
    if locus:
        logger.info("J is invertible away from %s", locus)
    form = _flat_times(varpi, J.power(-n))
    pi1 = poisson_hierarchy(pn1.pi, pn1.r, n)
    pi2 = poisson_hierarchy(pn2.pi, pn2.r, n)
    J_n = J.power(n)
    base_left, base_right = poisson_actions(B.mu1, B.mu2, pn1.pi, pn2.pi,
                                            varpi)
    left = _deformed(base_left, cotangent_algebroid(pi1), J_n)
    right = _deformed(base_right, cotangent_algebroid(pi2).opposite(), J_n)
    bibundle = InfBibundle(left, right, form=form, tensor=J, name=B.name)
    report = check_pn_morita(bibundle, (pi1, pn1.r), (pi2, pn2.r), form, J)
    clauses = report.clauses + [assumed(
        'deformed-actions-complete',
        "the deformed actions are not automatically complete; assumed, not "
        "verified")]
    report = MoritaReport(report.check, clauses, report.flags)
    return Hierarchy(form, PNStructure(pi1, pn1.r), PNStructure(pi2, pn2.r),
                     bibundle, report)


def self_morita_bibundle(omega0, right_coords=('u', 'v'), name='P'):
    """
    M x M' with varpi = pr1* omega0 - pr2* omega0 for a nondegenerate
    constant 2-form, with the induced actions of graph(omega0) on both
    sides.
    """
    M1 = omega0.chart
    if any(not value.is_constant() for _, value in omega0.items()):
        raise InvariantViolation("omega0 must have constant coefficients")
    if linalg.rank(omega0.flat_matrix(), M1) != M1.dim:
        raise InvariantViolation("omega0 is degenerate")
    M2 = Chart(M1.name + "'", right_coords)
    omega2 = DiffForm(M2, 2, dict((key, value.rename(M2))
                                  for key, value in omega0.items()))
    P = M1.product(M2, name)
    mu1 = SmoothMap.projection(P, M1)
    mu2 = SmoothMap.projection(P, M2, P.coords[M1.dim:])
    varpi = pullback_form(mu1, omega0) - pullback_form(mu2, omega2)
    L1 = graph_of_two_form(omega0, name='graph(%s)' % M1.name)
    L2 = graph_of_two_form(omega2, name='graph(%s)' % M2.name)
    left, right = induced_actions((mu1, mu2), L1, L2, varpi)
    bibundle = InfBibundle(left, right, form=varpi,
                           tensor=OneOneTensor.identity(P), name=name)
    return StandardPair(bibundle, L1, L2, varpi)
