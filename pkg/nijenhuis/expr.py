"""
Exact scalars: elements of the rational function field Q(x1, ..., xn) of a
chart, kept in sympy's canonical reduced form (numerator and denominator
coprime, denominator leading coefficient positive under grlex).
"""
from fractions import Fraction
import logging
import re

from sympy import QQ
from sympy.polys.fields import field as rational_function_field
from sympy.polys.orderings import grlex

from nijenhuis import conf
from nijenhuis import parser
from nijenhuis.exceptions import (ChartMismatch, DegreeOverflow,
                                  InvariantViolation, PoleError,
                                  UnknownCoordinate, ZeroDenominator)

logger = logging.getLogger(__name__)

_IDENTIFIER = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')


class Chart(object):
    """A manifold modelled by one global chart with named coordinates."""

    def __init__(self, name, coords):
        coords = tuple(coords)
        if not coords:
            raise InvariantViolation("chart %r has no coordinates" % name)
        if len(set(coords)) != len(coords):
            raise InvariantViolation("chart %r repeats a coordinate name"
                                     % name)
        for coord in coords:
            if not _IDENTIFIER.match(coord):
                raise InvariantViolation("%r is not a valid coordinate name"
                                         % coord)
        self.name = name
        self.coords = coords
        self.field = rational_function_field(coords, QQ, grlex)[0]
        self.ring = self.field.ring

    @property
    def dim(self):
        return len(self.coords)

    def index(self, coord):
        try:
            return self.coords.index(coord)
        except ValueError:
            raise UnknownCoordinate("%r is not a coordinate of chart %s%s"
                                    % (coord, self.name, self.coords))

    def coord(self, name_or_index):
        if not isinstance(name_or_index, int):
            name_or_index = self.index(name_or_index)
        return ScalarExpr(self, self.field.gens[name_or_index])

    def const(self, value):
        value = Fraction(value)
        numer = self.ring.ground_new(QQ(value.numerator, value.denominator))
        return ScalarExpr(self, self.field.new(numer))

    @property
    def zero(self):
        return ScalarExpr(self, self.field.zero)

    @property
    def one(self):
        return ScalarExpr(self, self.field.one)

    def parse(self, src):
        return parse_scalar(src, self)

    def tangent(self):
        """The doubled chart TP with fibre coordinates ``<x>_dot``."""
        return Chart('T%s' % self.name,
                     self.coords + tuple('%s_dot' % c for c in self.coords))

    def cotangent(self):
        """The chart T*M with fibre coordinates ``p_<x>``."""
        return Chart('T*%s' % self.name,
                     self.coords + tuple('p_%s' % c for c in self.coords))

    def product(self, other, name=None):
        """Chart of self x other; clashing names on the right get ``_2``."""
        taken = set(self.coords)
        renamed = []
        for coord in other.coords:
            new = coord
            while new in taken:
                new = new + '_2'
            taken.add(new)
            renamed.append(new)
        return Chart(name or '%sx%s' % (self.name, other.name),
                     self.coords + tuple(renamed))

    def check(self, *others):
        for other in others:
            chart = getattr(other, 'chart', other)
            if chart != self:
                raise ChartMismatch("chart %s does not match %s"
                                    % (describe_chart(chart),
                                       describe_chart(self)))

    def __eq__(self, other):
        return (isinstance(other, Chart) and self.name == other.name
                and self.coords == other.coords)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.name, self.coords))

    def __repr__(self):
        return 'Chart(%r, %r)' % (self.name, self.coords)


def describe_chart(chart):
    return '%s(%s)' % (chart.name, ', '.join(chart.coords))


def _fraction(coeff):
    return Fraction(int(coeff.numerator), int(coeff.denominator))


def _total_degree(poly):
    return max([sum(monom) for monom in poly.monoms()] or [0])


def _check_degree(degree):
    limit = conf.max_degree()
    if degree > limit:
        raise DegreeOverflow("total degree %d exceeds the cap of %d"
                             % (degree, limit))


class ScalarExpr(object):
    """A rational function on a chart, in canonical form."""
    __slots__ = ('chart', 'canon')

    def __init__(self, chart, canon):
        _check_degree(max(_total_degree(canon.numer),
                          _total_degree(canon.denom)))
        self.chart = chart
        self.canon = canon

    def _coerce(self, other):
        if isinstance(other, ScalarExpr):
            if other.chart != self.chart:
                raise ChartMismatch("cannot combine functions on %s and %s"
                                    % (describe_chart(self.chart),
                                       describe_chart(other.chart)))
            return other.canon
        if isinstance(other, (int, Fraction)):
            return self.chart.const(other).canon
        return NotImplemented

    def _new(self, canon):
        return ScalarExpr(self.chart, canon)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.canon + other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.canon - other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(other - self.canon)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self.canon * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other:
            raise ZeroDenominator("division by an expression that is "
                                  "identically zero")
        return self._new(self.canon / other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.canon:
            raise ZeroDenominator("division by an expression that is "
                                  "identically zero")
        return self._new(other / self.canon)

    def __neg__(self):
        return self._new(-self.canon)

    def __pow__(self, n):
        if n < 0 and not self.canon:
            raise ZeroDenominator("negative power of zero")
        _check_degree(abs(n) * max(_total_degree(self.canon.numer),
                                   _total_degree(self.canon.denom)))
        return self._new(self.canon ** n)

    def __eq__(self, other):
        if isinstance(other, ScalarExpr) and other.chart != self.chart:
            return False
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.canon == other

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.chart, str(self)))

    def __bool__(self):
        return bool(self.canon)

    __nonzero__ = __bool__

    def is_zero(self):
        return not self.canon.numer

    def is_constant(self):
        return self.canon.numer.is_ground and self.canon.denom.is_ground

    def constant(self):
        if not self.is_constant():
            raise InvariantViolation("%s is not constant" % self)
        return self.evaluate([0] * self.chart.dim)

    def depends_on(self, coord):
        return not self.diff(coord).is_zero()

    def diff(self, coord):
        index = self.chart.index(coord)
        return self._new(self.canon.diff(self.chart.field.gens[index]))

    def evaluate(self, values):
        """Exact value at a point given as one Fraction per coordinate."""
        denom = _evaluate_poly(self.canon.denom, values)
        if denom == 0:
            raise PoleError("%s has a pole at %s"
                            % (self, format_point(self.chart, values)))
        return _evaluate_poly(self.canon.numer, values) / denom

    def substitute(self, values):
        """Compose with ``values``, one ScalarExpr per coordinate of self."""
        if len(values) != self.chart.dim:
            raise InvariantViolation("substitution needs %d values, got %d"
                                     % (self.chart.dim, len(values)))
        target = values[0].chart
        numer = _substitute_poly(self.canon.numer, values, target)
        denom = _substitute_poly(self.canon.denom, values, target)
        if not denom:
            raise ZeroDenominator("substitution makes the denominator of %s "
                                  "vanish identically" % self)
        return numer / denom

    def rename(self, chart):
        """The same formula read on a chart with the same coordinate count."""
        return self.substitute([chart.coord(i) for i in range(chart.dim)])

    def numerator(self):
        return ScalarExpr(self.chart, self.chart.field.new(self.canon.numer))

    def denominator(self):
        return ScalarExpr(self.chart, self.chart.field.new(self.canon.denom))

    def __str__(self):
        if self.canon.denom.is_ground:
            return _format_poly(self.canon.numer.quo_ground(
                self.canon.denom.LC), self.chart.coords)
        numer = _format_poly(self.canon.numer, self.chart.coords)
        denom = _format_poly(self.canon.denom, self.chart.coords)
        if len(self.canon.numer.terms()) > 1 or '/' in numer:
            numer = '(%s)' % numer
        if not _is_plain_factor(self.canon.denom):
            denom = '(%s)' % denom
        return '%s/%s' % (numer, denom)

    def __repr__(self):
        return 'ScalarExpr(%s)' % self


def _evaluate_poly(poly, values):
    total = Fraction(0)
    for monom, coeff in poly.terms():
        term = _fraction(coeff)
        for value, exponent in zip(values, monom):
            if exponent:
                term *= value ** exponent
        total += term
    return total


def _substitute_poly(poly, values, target):
    total = target.zero
    for monom, coeff in poly.terms():
        term = target.const(_fraction(coeff))
        for value, exponent in zip(values, monom):
            if exponent:
                term = term * value ** exponent
        total = total + term
    return total


def _is_plain_factor(poly):
    terms = poly.terms()
    if len(terms) != 1:
        return False
    monom, coeff = terms[0]
    return _fraction(coeff) == 1 and sum(1 for e in monom if e) <= 1


def _format_fraction(value):
    if value.denominator == 1:
        return str(value.numerator)
    return '%d/%d' % (value.numerator, value.denominator)


def _format_poly(poly, names):
    terms = poly.terms()
    if not terms:
        return '0'
    out = []
    for monom, coeff in terms:
        value = _fraction(coeff)
        negative = value < 0
        value = abs(value)
        factors = [name if exponent == 1 else '%s^%d' % (name, exponent)
                   for name, exponent in zip(names, monom) if exponent]
        if value != 1 or not factors:
            factors.insert(0, _format_fraction(value))
        body = '*'.join(factors)
        if not out:
            out.append('-' + body if negative else body)
        else:
            out.append(('- ' if negative else '+ ') + body)
    return ' '.join(out)


def format_point(chart, values):
    return '(%s)' % ', '.join('%s=%s' % (name, _format_fraction(value))
                              for name, value in zip(chart.coords, values))


class RationalPoint(object):

    def __init__(self, chart, values):
        values = tuple(Fraction(value) for value in values)
        if len(values) != chart.dim:
            raise InvariantViolation("point needs %d values on %s, got %d"
                                     % (chart.dim, describe_chart(chart),
                                        len(values)))
        self.chart = chart
        self.values = values

    def __repr__(self):
        return 'RationalPoint%s' % format_point(self.chart, self.values)


def parse_tree(src, chart):
    return parser.parse(src, chart.coords)


def canonical(tree, chart):
    """Fold a parse tree into canonical form on ``chart``."""
    if isinstance(tree, parser.Number):
        return chart.const(tree.value)
    if isinstance(tree, parser.Name):
        return chart.coord(tree.name)
    if isinstance(tree, parser.Negate):
        return -canonical(tree.operand, chart)
    if isinstance(tree, parser.Power):
        return canonical(tree.base, chart) ** tree.exponent
    left = canonical(tree.left, chart)
    right = canonical(tree.right, chart)
    if tree.op == '+':
        return left + right
    if tree.op == '-':
        return left - right
    if tree.op == '*':
        return left * right
    return left / right


def parse_scalar(src, chart):
    return canonical(parse_tree(src, chart), chart)


def derive_partial(f, coord):
    return f.diff(coord)


def is_zero(f):
    return f.is_zero()


def eval_at(f, point):
    if point.chart != f.chart:
        raise ChartMismatch("point on %s, function on %s"
                            % (describe_chart(point.chart),
                               describe_chart(f.chart)))
    return f.evaluate(point.values)
