"""
Tensor fields on a chart, stored as components in the coordinate frame.

Conventions used everywhere:

* ``OneOneTensor.matrix[i][j]`` is the i-th component of ``N(d/dx^j)``.
* ``omega.flat(v) = i_v omega`` (first slot).
* ``pi.sharp(alpha) = pi(alpha, .)``, so for ``pi = d/dx ^ d/dy`` we get
  ``sharp(dx) = d/dy`` and ``sharp(dy) = -d/dx``.
* Forms evaluate on vectors by the determinant convention,
  ``(dx ^ dy)(d/dx, d/dy) = 1``.
"""
from itertools import combinations, permutations, product
import logging

from nijenhuis import linalg
from nijenhuis.exceptions import DegreeOverflow, InvariantViolation
from nijenhuis.expr import ScalarExpr, describe_chart

logger = logging.getLogger(__name__)


def as_scalar(chart, value):
    if isinstance(value, ScalarExpr):
        chart.check(value)
        return value
    if isinstance(value, str):
        return chart.parse(value)
    return chart.const(value)


def permutation_sign(indices):
    """(sign, sorted tuple) of an index tuple; sign 0 on a repeated index."""
    indices = list(indices)
    if len(set(indices)) != len(indices):
        return 0, None
    sign = 1
    for i in range(len(indices)):
        for j in range(i + 1, len(indices)):
            if indices[i] > indices[j]:
                sign = -sign
    return sign, tuple(sorted(indices))


def small_det(rows, chart):
    n = len(rows)
    if n == 0:
        return chart.one
    total = chart.zero
    for perm in permutations(range(n)):
        sign, _ = permutation_sign(perm)
        term = chart.const(sign)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        total = total + term
    return total


def _wrap(text):
    if any(op in text for op in ' +-/'):
        return '(%s)' % text
    return text


class VectorField(object):

    def __init__(self, chart, components):
        components = tuple(as_scalar(chart, c) for c in components)
        if len(components) != chart.dim:
            raise InvariantViolation("vector field on %s needs %d components,"
                                     " got %d" % (describe_chart(chart),
                                                  chart.dim, len(components)))
        self.chart = chart
        self.components = components

    @classmethod
    def zero(cls, chart):
        return cls(chart, [chart.zero] * chart.dim)

    @classmethod
    def coordinate(cls, chart, index):
        if not isinstance(index, int):
            index = chart.index(index)
        return cls(chart, [chart.one if i == index else chart.zero
                           for i in range(chart.dim)])

    def __getitem__(self, index):
        return self.components[index]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __add__(self, other):
        self.chart.check(other)
        return VectorField(self.chart, [a + b for a, b in zip(self, other)])

    def __sub__(self, other):
        self.chart.check(other)
        return VectorField(self.chart, [a - b for a, b in zip(self, other)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self])

    def scale(self, f):
        f = as_scalar(self.chart, f)
        return VectorField(self.chart, [f * a for a in self])

    __rmul__ = scale

    def __call__(self, f):
        """Derivative of the function ``f`` along this field."""
        self.chart.check(f)
        total = self.chart.zero
        for coord, component in zip(self.chart.coords, self.components):
            if not component.is_zero():
                total = total + component * f.diff(coord)
        return total

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other):
        return (isinstance(other, VectorField) and other.chart == self.chart
                and self.components == other.components)

    def __ne__(self, other):
        return not self == other

    def __str__(self):
        terms = []
        for coord, c in zip(self.chart.coords, self.components):
            if c.is_zero():
                continue
            if c == 1:
                terms.append('∂%s' % coord)
            elif c == -1:
                terms.append('-∂%s' % coord)
            else:
                terms.append('%s*∂%s' % (_wrap(str(c)), coord))
        return ' + '.join(terms) or '0'

    def __repr__(self):
        return 'VectorField(%s)' % self


class _Alternating(object):
    """
    Components per strictly increasing multi-index; zeros are dropped.
    Degree dim + 1 is allowed and always zero: it is where d sends top forms.
    """
    symbol = None

    def __init__(self, chart, degree, components=None):
        if degree < 0 or degree > chart.dim + 1:
            raise DegreeOverflow("degree %d on %d-dimensional chart %s"
                                 % (degree, chart.dim, chart.name))
        self.chart = chart
        self.degree = degree
        stored = {}
        for key, value in (components or {}).items():
            key = tuple(chart.index(k) if not isinstance(k, int) else k
                        for k in (key if isinstance(key, tuple) else (key,)))
            if len(key) != degree:
                raise InvariantViolation("index %r does not have length %d"
                                         % (key, degree))
            sign, ordered = permutation_sign(key)
            if sign == 0:
                continue
            value = as_scalar(chart, value)
            previous = stored.get(ordered, chart.zero)
            stored[ordered] = previous + (value if sign > 0 else -value)
        self.components = dict((k, v) for k, v in stored.items()
                               if not v.is_zero())

    def _new(self, components):
        return type(self)(self.chart, self.degree, components)

    @classmethod
    def zero(cls, chart, degree):
        return cls(chart, degree, {})

    def items(self):
        return sorted(self.components.items())

    def __getitem__(self, indices):
        """Antisymmetric lookup for any index tuple."""
        sign, ordered = permutation_sign(indices)
        if sign == 0:
            return self.chart.zero
        value = self.components.get(ordered, self.chart.zero)
        return value if sign > 0 else -value

    def _check_compatible(self, other):
        self.chart.check(other)
        if other.degree != self.degree:
            raise InvariantViolation("degree %d does not match degree %d"
                                     % (other.degree, self.degree))

    def __add__(self, other):
        self._check_compatible(other)
        out = dict(self.components)
        for key, value in other.components.items():
            out[key] = out.get(key, self.chart.zero) + value
        return self._new(out)

    def __neg__(self):
        return self._new(dict((k, -v) for k, v in self.components.items()))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        f = as_scalar(self.chart, f)
        return self._new(dict((k, f * v) for k, v in self.components.items()))

    __rmul__ = scale

    def is_zero(self):
        return not self.components

    def __eq__(self, other):
        return (type(other) is type(self) and other.chart == self.chart
                and other.degree == self.degree
                and (self - other).is_zero())

    def __ne__(self, other):
        return not self == other

    def _basis(self, key):
        raise NotImplementedError

    def __str__(self):
        if self.degree == 0:
            return str(self[()])
        terms = []
        for key, value in self.items():
            basis = self._basis(key)
            if value == 1:
                terms.append(basis)
            else:
                terms.append('%s*%s' % (_wrap(str(value)), basis))
        return ' + '.join(terms) or '0'

    def __repr__(self):
        return '%s(%s)' % (type(self).__name__, self)


class DiffForm(_Alternating):

    @classmethod
    def coordinate(cls, chart, index):
        if not isinstance(index, int):
            index = chart.index(index)
        return cls(chart, 1, {(index,): chart.one})

    @classmethod
    def function(cls, f):
        return cls(f.chart, 0, {(): f})

    @classmethod
    def differential(cls, f):
        return cls(f.chart, 1, dict(((i,), f.diff(c))
                                    for i, c in enumerate(f.chart.coords)))

    @classmethod
    def covector(cls, chart, components):
        return cls(chart, 1, dict(((i,), c) for i, c in enumerate(components)))

    def as_covector(self):
        if self.degree != 1:
            raise InvariantViolation("%d-form is not a covector" % self.degree)
        return [self[(i,)] for i in range(self.chart.dim)]

    def _basis(self, key):
        return '∧'.join('d%s' % self.chart.coords[i] for i in key)

    def wedge(self, other):
        self.chart.check(other)
        degree = self.degree + other.degree
        if degree > self.chart.dim + 1:
            raise DegreeOverflow("wedge of degree %d on %d-dimensional chart"
                                 % (degree, self.chart.dim))
        out = {}
        for (a, f), (b, g) in product(self.items(), other.items()):
            sign, ordered = permutation_sign(a + b)
            if sign == 0:
                continue
            value = f * g if sign > 0 else -(f * g)
            out[ordered] = out.get(ordered, self.chart.zero) + value
        return DiffForm(self.chart, degree, out)

    def evaluate(self, *vectors):
        """omega(v1, ..., vk) as a function."""
        if len(vectors) != self.degree:
            raise InvariantViolation("%d-form evaluated on %d vectors"
                                     % (self.degree, len(vectors)))
        total = self.chart.zero
        for key, value in self.items():
            rows = [[vector[i] for vector in vectors] for i in key]
            total = total + value * small_det(rows, self.chart)
        return total

    def interior(self, v):
        """i_v omega, contracting the first slot."""
        self.chart.check(v)
        if self.degree == 0:
            raise DegreeOverflow("interior product of a function")
        out = {}
        n = self.chart.dim
        for rest in combinations(range(n), self.degree - 1):
            total = self.chart.zero
            for i in range(n):
                if not v[i].is_zero():
                    total = total + v[i] * self[(i,) + rest]
            out[rest] = total
        return DiffForm(self.chart, self.degree - 1, out)

    def flat(self, v):
        return self.interior(v)

    def flat_matrix(self):
        """Matrix of omega-flat: column j is the covector i_{d_j} omega."""
        if self.degree != 2:
            raise InvariantViolation("flat needs a 2-form")
        n = self.chart.dim
        return [[self[(j, i)] for j in range(n)] for i in range(n)]

    def as_tensor(self):
        n = self.chart.dim
        return CovariantTensor(self.chart, self.degree, dict(
            (key, self[key]) for key in product(range(n), repeat=self.degree)))


class Multivector(_Alternating):

    def _basis(self, key):
        return '∧'.join('∂%s' % self.chart.coords[i] for i in key)

    def matrix(self):
        """pi^{ij} = pi(dx^i, dx^j) for a bivector."""
        if self.degree != 2:
            raise InvariantViolation("matrix needs a bivector")
        n = self.chart.dim
        return [[self[(i, j)] for j in range(n)] for i in range(n)]

    def sharp(self, alpha):
        """pi(alpha, .) as a vector field."""
        self.chart.check(alpha)
        n = self.chart.dim
        covector = alpha.as_covector()
        return VectorField(self.chart, [
            sum((covector[i] * self[(i, j)] for i in range(n)),
                self.chart.zero) for j in range(n)])

    def pair(self, alpha, beta):
        return beta.evaluate(self.sharp(alpha))

    @classmethod
    def from_matrix(cls, chart, matrix):
        n = chart.dim
        for i in range(n):
            for j in range(n):
                if not (matrix[i][j] + matrix[j][i]).is_zero():
                    raise InvariantViolation(
                        "bivector matrix is not antisymmetric at (%s, %s)"
                        % (chart.coords[i], chart.coords[j]))
        return cls(chart, 2, dict(((i, j), matrix[i][j])
                                  for i, j in combinations(range(n), 2)))


class CovariantTensor(object):
    """A general (0,p) tensor; ``antisymmetric`` says whether it is a form."""

    def __init__(self, chart, degree, components):
        self.chart = chart
        self.degree = degree
        n = chart.dim
        self.components = dict(
            (key, components.get(key, chart.zero))
            for key in product(range(n), repeat=degree))

    def __getitem__(self, key):
        return self.components[tuple(key)]

    @property
    def antisymmetric(self):
        for key, value in self.components.items():
            for i in range(self.degree - 1):
                swapped = list(key)
                swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
                if not (value + self.components[tuple(swapped)]).is_zero():
                    return False
        return True

    def asymmetry_witness(self):
        for key, value in sorted(self.components.items()):
            for i in range(self.degree - 1):
                swapped = list(key)
                swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
                residual = value + self.components[tuple(swapped)]
                if not residual.is_zero():
                    names = ', '.join('∂%s' % self.chart.coords[k] for k in key)
                    return 'T(%s) + T(swapped) = %s' % (names, residual)
        return ''

    def as_form(self):
        if not self.antisymmetric:
            raise InvariantViolation("tensor is not antisymmetric: %s"
                                     % self.asymmetry_witness())
        return DiffForm(self.chart, self.degree, dict(
            (key, self.components[key])
            for key in combinations(range(self.chart.dim), self.degree)))

    def is_zero(self):
        return all(v.is_zero() for v in self.components.values())

    def __sub__(self, other):
        return CovariantTensor(self.chart, self.degree, dict(
            (k, v - other.components[k]) for k, v in self.components.items()))

    def __eq__(self, other):
        return (isinstance(other, CovariantTensor)
                and other.chart == self.chart and other.degree == self.degree
                and (self - other).is_zero())

    def __ne__(self, other):
        return not self == other


class OneOneTensor(object):

    def __init__(self, chart, matrix):
        n = chart.dim
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise InvariantViolation(
                "(1,1)-tensor on %s needs a %dx%d matrix, got %dx%s"
                % (describe_chart(chart), n, n, len(matrix),
                   '/'.join(str(len(row)) for row in matrix) or '0'))
        self.chart = chart
        self.matrix = tuple(tuple(as_scalar(chart, e) for e in row)
                            for row in matrix)

    @classmethod
    def identity(cls, chart):
        return cls.scalar(chart, chart.one)

    @classmethod
    def zero(cls, chart):
        return cls.scalar(chart, chart.zero)

    @classmethod
    def scalar(cls, chart, f):
        f = as_scalar(chart, f)
        n = chart.dim
        return cls(chart, [[f if i == j else chart.zero for j in range(n)]
                           for i in range(n)])

    @classmethod
    def diag(cls, chart, entries):
        n = chart.dim
        entries = [as_scalar(chart, e) for e in entries]
        return cls(chart, [[entries[i] if i == j else chart.zero
                            for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, chart, columns):
        return cls(chart, linalg.transpose([list(c) for c in columns]))

    def column(self, j):
        return VectorField(self.chart, [row[j] for row in self.matrix])

    def __call__(self, v):
        self.chart.check(v)
        n = self.chart.dim
        return VectorField(self.chart, [
            sum((self.matrix[i][j] * v[j] for j in range(n)
                 if not v[j].is_zero()), self.chart.zero)
            for i in range(n)])

    apply = __call__

    def transpose_apply(self, alpha):
        """r*alpha, with (r*alpha)(u) = alpha(r(u))."""
        self.chart.check(alpha)
        covector = alpha.as_covector()
        n = self.chart.dim
        return DiffForm.covector(self.chart, [
            sum((covector[i] * self.matrix[i][j] for i in range(n)),
                self.chart.zero) for j in range(n)])

    def compose(self, other):
        """self o other."""
        self.chart.check(other)
        return OneOneTensor(self.chart, linalg.matmul(
            [list(r) for r in self.matrix], [list(r) for r in other.matrix]))

    def __mul__(self, other):
        if isinstance(other, OneOneTensor):
            return self.compose(other)
        return self.scale(other)

    def scale(self, f):
        f = as_scalar(self.chart, f)
        return OneOneTensor(self.chart, [[f * e for e in row]
                                         for row in self.matrix])

    __rmul__ = scale

    def __add__(self, other):
        self.chart.check(other)
        return OneOneTensor(self.chart, [
            [a + b for a, b in zip(r, s)]
            for r, s in zip(self.matrix, other.matrix)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def power(self, n):
        base = self
        if n < 0:
            base = self.inverse()
            n = -n
        out = OneOneTensor.identity(self.chart)
        for _ in range(n):
            out = base.compose(out)
        return out

    def determinant(self):
        return linalg.determinant([list(r) for r in self.matrix], self.chart)

    def inverse(self):
        return OneOneTensor(self.chart, linalg.inverse(
            [list(r) for r in self.matrix], self.chart))

    def is_zero(self):
        return all(e.is_zero() for row in self.matrix for e in row)

    def __eq__(self, other):
        return (isinstance(other, OneOneTensor) and other.chart == self.chart
                and self.matrix == other.matrix)

    def __ne__(self, other):
        return not self == other

    def __str__(self):
        return '[%s]' % '; '.join(', '.join(str(e) for e in row)
                                  for row in self.matrix)

    def __repr__(self):
        return 'OneOneTensor(%s)' % self


class OneTwoTensor(object):
    """Vector-valued 2-form; ``components[(i, j)]`` is T(d_i, d_j)."""

    def __init__(self, chart, components):
        self.chart = chart
        n = chart.dim
        self.components = {}
        for i in range(n):
            for j in range(n):
                value = components.get((i, j), VectorField.zero(chart))
                self.components[(i, j)] = value
        for i in range(n):
            for j in range(n):
                if not (self.components[(i, j)]
                        + self.components[(j, i)]).is_zero():
                    raise InvariantViolation(
                        "(1,2)-tensor is not antisymmetric at (%s, %s)"
                        % (chart.coords[i], chart.coords[j]))

    def __getitem__(self, key):
        i, j = key
        if not isinstance(i, int):
            i = self.chart.index(i)
        if not isinstance(j, int):
            j = self.chart.index(j)
        return self.components[(i, j)]

    def is_zero(self):
        return all(v.is_zero() for v in self.components.values())

    def witness(self):
        for (i, j), value in sorted(self.components.items()):
            if i < j and not value.is_zero():
                return 'N(∂%s, ∂%s) = %s' % (self.chart.coords[i],
                                             self.chart.coords[j], value)
        return ''

    def __eq__(self, other):
        return (isinstance(other, OneTwoTensor) and other.chart == self.chart
                and self.components == other.components)

    def __ne__(self, other):
        return not self == other


class SmoothMap(object):

    def __init__(self, source, target, formulas):
        formulas = [as_scalar(source, f) for f in formulas]
        if len(formulas) != target.dim:
            raise InvariantViolation("map to %s needs %d formulas, got %d"
                                     % (describe_chart(target), target.dim,
                                        len(formulas)))
        self.source = source
        self.target = target
        self.formulas = tuple(formulas)

    @classmethod
    def identity(cls, chart):
        return cls(chart, chart, [chart.coord(i) for i in range(chart.dim)])

    @classmethod
    def projection(cls, source, target, coords=None):
        """The map reading ``coords`` of ``source`` as ``target``'s coordinates."""
        coords = coords or target.coords
        return cls(source, target, [source.coord(c) for c in coords])

    def jacobian(self):
        """Rows indexed by target coordinates, columns by source ones."""
        return [[f.diff(c) for c in self.source.coords] for f in self.formulas]

    def push(self, v):
        """Components of d(phi)(v) along the target frame, as source functions."""
        self.source.check(v)
        return [sum((row[j] * v[j] for j in range(self.source.dim)),
                    self.source.zero) for row in self.jacobian()]

    def pullback(self, f):
        self.target.check(f)
        return f.substitute(self.formulas)

    def pullback_vector(self, v):
        """Components of a target field composed with phi (a field along phi)."""
        return [self.pullback(c) for c in v]

    def projection_indices(self):
        """Source index of each target coordinate, or None if not a projection."""
        indices = []
        for f in self.formulas:
            match = None
            for i in range(self.source.dim):
                if f == self.source.coord(i):
                    match = i
            if match is None or match in indices:
                return None
            indices.append(match)
        return tuple(indices)

    def is_coordinate_projection(self):
        return self.projection_indices() is not None

    def fiber_indices(self):
        base = self.projection_indices() or ()
        return tuple(i for i in range(self.source.dim) if i not in base)

    def __repr__(self):
        return 'SmoothMap(%s -> %s: %s)' % (
            self.source.name, self.target.name,
            ', '.join(str(f) for f in self.formulas))


class VolumeDensity(object):

    def __init__(self, chart, density):
        density = as_scalar(chart, density)
        if density.is_zero():
            raise InvariantViolation("volume density is identically zero")
        self.chart = chart
        self.density = density

    def scale(self, g):
        return VolumeDensity(self.chart, self.density * as_scalar(self.chart, g))

    def __repr__(self):
        return 'VolumeDensity(%s)' % self.density
