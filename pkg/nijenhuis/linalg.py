"""
Linear algebra over the rational function field of a chart.

Matrices are lists of rows of ScalarExpr. Everything is decided at the
generic point; ``degeneracy_locus`` reports where a generic rank drops.
"""
from fractions import Fraction
from itertools import combinations
import logging

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from nijenhuis.exceptions import InvariantViolation
from nijenhuis.expr import ScalarExpr, _format_poly

logger = logging.getLogger(__name__)


def _shape(rows):
    if not rows:
        return 0, 0
    width = len(rows[0])
    for row in rows:
        if len(row) != width:
            raise InvariantViolation("ragged matrix")
    return len(rows), width


def to_domain_matrix(rows, chart):
    shape = _shape(rows)
    domain = chart.field.to_domain()
    return DomainMatrix([[entry.canon for entry in row] for row in rows],
                        shape, domain)


def _from_domain_matrix(matrix, chart):
    return [[ScalarExpr(chart, entry) for entry in row]
            for row in matrix.to_list()]


def transpose(rows):
    return [list(column) for column in zip(*rows)]


def rank(rows, chart):
    if not rows or not rows[0]:
        return 0
    return to_domain_matrix(rows, chart).rank()


def determinant(rows, chart):
    n, m = _shape(rows)
    if n != m:
        raise InvariantViolation("determinant of a %dx%d matrix" % (n, m))
    return ScalarExpr(chart, to_domain_matrix(rows, chart).det())


def inverse(rows, chart):
    if determinant(rows, chart).is_zero():
        raise InvariantViolation("matrix is singular over the function field")
    return _from_domain_matrix(to_domain_matrix(rows, chart).inv(), chart)


def matmul(left, right):
    return [[sum((a * b for a, b in zip(row, column)), row[0].chart.zero)
             for column in zip(*right)] for row in left]


def solve(rows, rhs, chart):
    """One solution x of rows . x = rhs (free unknowns set to 0), or None."""
    n, m = _shape(rows)
    augmented = [list(row) + [value] for row, value in zip(rows, rhs)]
    reduced, pivots = to_domain_matrix(augmented, chart).rref()
    if m in pivots:
        return None
    reduced = reduced.to_list()
    solution = [chart.zero] * m
    for row_index, column in enumerate(pivots):
        solution[column] = ScalarExpr(chart, reduced[row_index][m])
    return solution


def combination(generators, target, chart):
    """Coefficients c with sum(c_i * generators[i]) == target, or None."""
    if not generators:
        return None if any(not t.is_zero() for t in target) else []
    return solve(transpose(generators), target, chart)


def nullspace(rows, chart):
    """Basis (list of vectors) of {x : rows . x = 0}."""
    n, m = _shape(rows)
    if n == 0:
        return [[chart.one if i == j else chart.zero for i in range(m)]
                for j in range(m)]
    basis = to_domain_matrix(rows, chart).nullspace()
    return [[ScalarExpr(chart, entry) for entry in row]
            for row in basis.to_list()]


def degeneracy_locus(rows, chart, expected=None):
    """
    Printed polynomial whose zero set contains the points where ``rows``
    drops below its generic rank: the gcd of the numerators of all maximal
    minors. Empty string when the gcd is a unit.
    """
    generic = rank(rows, chart) if expected is None else expected
    if generic == 0:
        return ''
    n, m = _shape(rows)
    gcd = None
    for row_set in combinations(range(n), generic):
        for column_set in combinations(range(m), generic):
            minor = [[rows[i][j] for j in column_set] for i in row_set]
            numer = determinant(minor, chart).canon.numer
            if not numer:
                continue
            gcd = numer if gcd is None else gcd.gcd(numer)
            if gcd.is_ground:
                return ''
    if gcd is None or gcd.is_ground:
        return ''
    gcd = gcd.sqf_part()
    _, gcd = gcd.clear_denoms()
    _, gcd = gcd.primitive()
    if gcd.LC < 0:
        gcd = -gcd
    locus = 'det = %s' % _format_poly(gcd, chart.coords)
    logger.info("degeneracy locus on %s: %s", chart.name, locus)
    return locus


def numeric_rank(rows, values):
    """Rank of ``rows`` evaluated at a point (raises PoleError at poles)."""
    if not rows or not rows[0]:
        return 0
    evaluated = []
    for row in rows:
        out = []
        for entry in row:
            value = Fraction(entry.evaluate(values))
            out.append(QQ(value.numerator, value.denominator))
        evaluated.append(out)
    return DomainMatrix(evaluated, _shape(rows), QQ).rank()
