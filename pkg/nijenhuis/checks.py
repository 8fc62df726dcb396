"""
The operations a scenario's ``[check]`` section may call, and the runner.

Every operation returns an Outcome. Predicates return their verdict;
constructions (lifts, hierarchies, modular fields) return PASS and carry the
constructed object as ``value``.
"""
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
import logging
import random
import time

from nijenhuis import calculus, conf, derivations, dirac, morita, oracle
from nijenhuis.derivations import format_section
from nijenhuis.exceptions import NijenhuisError
from nijenhuis.expr import RationalPoint, derive_partial, eval_at
from nijenhuis.report import CheckResult, Report
from nijenhuis.verdicts import Clause, Outcome, Verdict, combine, relabel

logger = logging.getLogger(__name__)

Operation = namedtuple('Operation', 'name function suffix')

OPERATIONS = {}


def operation(name, suffix=''):
    def register(function):
        OPERATIONS[name] = Operation(name, function, suffix)
        return function
    return register


def _value(check, value, **kwargs):
    return Outcome(check, Verdict.PASS, value=value, **kwargs)


# expr-core

@operation('is_zero')
def _is_zero(f):
    clause = Clause('is_zero')
    clause.zero('f', f)
    return clause.outcome()


@operation('derive_partial')
def _derive_partial(f, coord):
    return _value('derive_partial', derive_partial(f, coord))


@operation('eval_at')
def _eval_at(f, *values):
    return _value('eval_at', eval_at(f, RationalPoint(f.chart, values)))


# tensor-calc

@operation('lie_bracket')
def _lie_bracket(u, v):
    return _value('lie_bracket', calculus.lie_bracket(u, v))


@operation('exterior_derivative')
def _exterior_derivative(alpha):
    return _value('exterior_derivative', calculus.exterior_derivative(alpha))


@operation('is_closed')
def _is_closed(alpha):
    clause = Clause('is_closed')
    d_alpha = calculus.exterior_derivative(alpha)
    coords = alpha.chart.coords
    for key in combinations(range(alpha.chart.dim), d_alpha.degree):
        clause.zero('dα(%s)' % ', '.join('∂%s' % coords[k] for k in key),
                    d_alpha[key])
    return clause.outcome()


@operation('contract_form_with_tensor')
def _contract(alpha, K):
    contracted = calculus.contract_form_with_tensor(alpha, K)
    return _value('contract_form_with_tensor', contracted)


@operation('nijenhuis_torsion', suffix='=0')
def _nijenhuis_torsion(N):
    return relabel(calculus.is_nijenhuis(N), 'nijenhuis_torsion')


@operation('is_nijenhuis')
def _is_nijenhuis(N):
    return relabel(calculus.is_nijenhuis(N), 'is_nijenhuis')


@operation('deformed_bracket')
def _deformed_bracket(r, u, v):
    return _value('deformed_bracket', calculus.deformed_bracket(r, u, v))


@operation('nabla_r')
def _nabla_r(r, v, u):
    return _value('nabla_r', calculus.nabla_r(r, v, u))


@operation('nabla_r_star')
def _nabla_r_star(r, v, alpha):
    return _value('nabla_r_star', calculus.nabla_r_star(r, v, alpha))


@operation('tangent_lift')
def _tangent_lift(J):
    return _value('tangent_lift', calculus.tangent_lift(J))


@operation('cotangent_lift')
def _cotangent_lift(r):
    lifted = calculus.cotangent_lift(r)
    return combine('cotangent_lift',
                   [calculus.cotangent_lift_residual(r, lifted)], value=lifted)


@operation('is_related')
def _is_related(phi, N, N_B):
    return relabel(calculus.relatedness(phi, N, N_B), 'is_related')


@operation('project_tensor')
def _project_tensor(phi, N):
    projection = calculus.project_tensor(phi, N)
    if not projection:
        return Outcome('project_tensor', Verdict.FAIL,
                       witness=projection.witness)
    return _value('project_tensor', projection.tensor)


@operation('compatible_pair')
def _compatible_pair(omega, K):
    return calculus.compatible_pair(omega, K)


# dirac

@operation('is_involutive')
def _is_involutive(L):
    return relabel(dirac.is_involutive(L), 'is_involutive')


@operation('is_forward_dirac')
def _is_forward_dirac(phi, L_P, L_M):
    return relabel(dirac.is_forward_dirac(phi, L_P, L_M), 'is_forward_dirac')


@operation('is_compatible_tensor')
def _is_compatible_tensor(L, r):
    return dirac.is_compatible_tensor(L, r)


@operation('magri_morosi')
def _magri_morosi(pi, r):
    coords = pi.chart.coords
    value = dict(('R(∂%s, d%s)' % (coords[i], coords[j]), field)
                 for (i, j), field in dirac.magri_morosi(pi, r).items())
    return _value('magri_morosi', value)


@operation('is_poisson_nijenhuis')
def _is_poisson_nijenhuis(pi, r):
    return dirac.is_poisson_nijenhuis(pi, r)


@operation('poisson_hierarchy')
def _poisson_hierarchy(pi, r, n):
    result = dirac.poisson_hierarchy(pi, r, n)
    if not result.validated:
        pn = dirac.is_poisson_nijenhuis(pi, r)
        return Outcome('poisson_hierarchy', Verdict.FAIL, value=result,
                       witness='not validated: %s' % pn.witness)
    return _value('poisson_hierarchy', result)


@operation('dirac_hierarchy')
def _dirac_hierarchy(L, r, n, side='tangent'):
    result = dirac.dirac_hierarchy(L, r, n, side)
    clause = Clause('dirac_hierarchy')
    clause.rank('generators of %s' % result.name, result.matrix(), L.chart,
                L.chart.dim)
    outcome = clause.outcome()
    outcome.value = result
    return outcome


@operation('divergence')
def _divergence(v, nu):
    return _value('divergence', dirac.divergence(v, nu))


@operation('modular_field')
def _modular_field(pi, nu, opposite=False):
    field = dirac.modular_field(pi, nu)
    value = {'X': field, 'opposite convention': -field}
    if opposite:
        value = {'X': -field, 'opposite convention': field}
    return _value('modular_field', value)


@operation('pn_modular_field')
def _pn_modular_field(pi, r, nu):
    return _value('pn_modular_field', dirac.pn_modular_field(pi, r, nu))


@operation('gauge')
def _gauge(pi, nu, g):
    return dirac.gauge_clause(pi, nu, g)


# derivations

@operation('connection_apply')
def _connection_apply(D, v, *coefficients):
    section = derivations.connection_apply(D, v, D.bundle.section(coefficients))
    return _value('connection_apply', format_section(D.bundle, section))


@operation('check_nijenhuis_equations')
def _check_nijenhuis_equations(D):
    return derivations.check_nijenhuis_equations(D)


@operation('check_im_equations')
def _check_im_equations(D, A):
    return derivations.check_im_equations(D, A)


@operation('check_holomorphic')
def _check_holomorphic(D):
    return derivations.check_holomorphic(D)


@operation('derivation_of_tensor')
def _derivation_of_tensor(R, bundle):
    return _value('derivation_of_tensor',
                  derivations.derivation_of_tensor(R, bundle))


@operation('tensor_of_derivation')
def _tensor_of_derivation(D):
    return _value('tensor_of_derivation', derivations.tensor_of_derivation(D))


@operation('pullback_derivation')
def _pullback_derivation(mu, D, J):
    return _value('pullback_derivation',
                  derivations.pullback_derivation(mu, D, J))


@operation('are_related_derivations')
def _are_related_derivations(phi, D1, D2):
    return derivations.are_related_derivations(phi, D1, D2)


@operation('dirac_derivation')
def _dirac_derivation(L, r):
    return _value('dirac_derivation', dirac.dirac_derivation(L, r))


# morita

@operation('sum_of_actions')
def _sum_of_actions(B):
    return _value('sum_of_actions', morita.sum_of_actions(B))


@operation('check_algebroid_morita')
def _check_algebroid_morita(B):
    return morita.check_algebroid_morita(B)


@operation('check_derivation_morita')
def _check_derivation_morita(B, D1, D2, J):
    return morita.check_derivation_morita(B, D1, D2, J)


@operation('check_im_tensor_morita')
def _check_im_tensor_morita(B, R1, R2, J):
    return morita.check_im_tensor_morita(B, R1, R2, J)


@operation('check_dirac_morita')
def _check_dirac_morita(B, L1, L2, varpi):
    return morita.check_dirac_morita(B, L1, L2, varpi)


@operation('check_pn_morita')
def _check_pn_morita(B, first, second, varpi, J):
    return morita.check_pn_morita(B, first, second, varpi, J)


@operation('check_dirac_nijenhuis_morita')
def _check_dirac_nijenhuis_morita(B, first, second, varpi, J):
    return morita.check_dirac_nijenhuis_morita(B, first, second, varpi, J)


@operation('check_holomorphic_morita')
def _check_holomorphic_morita(B, D1, D2, J):
    return morita.check_holomorphic_morita(B, D1, D2, J)


@operation('hierarchy_bibundle')
def _hierarchy_bibundle(B, n, mode, first, second):
    hierarchy = morita.hierarchy_bibundle(B, n, mode, first, second)
    outcome = relabel(hierarchy.report, 'hierarchy_bibundle')
    outcome.value = hierarchy.form
    return outcome


# Running a scenario

def _execute(call, index, seed, sample, timings):
    started = time.time()
    try:
        outcome = call.operation.function(*call.args, **call.kwargs)
        if sample:
            rng = random.Random('%d:%d' % (seed, index))
            oracle.confirm(outcome, rng, sample)
    except NijenhuisError as exc:
        logger.warning("%s failed: %s", call.text, exc)
        outcome = Outcome(call.operation.name, Verdict.ERROR, witness=str(exc))
    except Exception as exc:
        logger.exception("%s raised", call.text)
        outcome = Outcome(call.operation.name, Verdict.ERROR,
                          witness='%s: %s' % (type(exc).__name__, exc))
    millis = int(round((time.time() - started) * 1000)) if timings else 0
    logger.debug("%s: %s in %d ms", call.text, outcome.verdict.value, millis)
    return CheckResult.from_outcome(outcome, call.text + call.operation.suffix,
                                    millis)


def run_scenario(scenario, sample=None, seed=None, jobs=1, timings=False):
    """
    Run every check of ``scenario`` and collect a Report in declaration
    order. With ``sample`` > 0 each outcome is re-checked by the numeric
    oracle, seeded per check so the result does not depend on ``jobs``.
    ``millis`` stays 0 unless ``timings`` is set, so the same scenario and
    seed always give the same report.
    """
    if sample is None:
        sample = conf.sample_points()
    if seed is None:
        seed = conf.seed()
    calls = list(enumerate(scenario.checks))

    def execute(item):
        index, call = item
        return _execute(call, index, seed, sample, timings)

    if jobs > 1 and len(calls) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(execute, calls))
    else:
        results = [execute(item) for item in calls]
    return Report(scenario.name, seed, sample, results)
