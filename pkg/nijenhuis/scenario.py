"""
Declarative scenario files.

A scenario is a UTF-8 text file of sections. A header names the kind and
the name of a declaration, ``[tensor N]``, and the lines below it are
``key = value`` pairs; ``#`` starts a comment. The ``[check]`` section
lists calls such as ``is_nijenhuis(N)``::

    [chart M]
    coords = x, y

    [tensor N]
    chart = M
    matrix = y, 0; 0, x

    [check]
    nijenhuis_torsion(N)

Any declaration may instead be derived with ``from = operation(args)``;
``DERIVED`` lists what each kind accepts. Arguments are names declared
earlier (``B.P`` reads an attribute), integers, quoted strings, ``true`` and
``false``, or parenthesised tuples such as ``(pi, r)``. Every diagnostic is a
ScenarioError carrying the line and column.
"""
from collections import OrderedDict, namedtuple
from fractions import Fraction
import inspect
import io
import logging
import os
import re

from nijenhuis import calculus, derivations, dirac, morita
from nijenhuis.checks import OPERATIONS
from nijenhuis.derivations import (BundleMap, LieAlgebroidData,
                                   OneDerivation, TrivialBundle)
from nijenhuis.dirac import CourantSection, DiracStructure
from nijenhuis.exceptions import (ExprSyntaxError, NijenhuisError,
                                  ScenarioError)
from nijenhuis.expr import Chart, ScalarExpr, derive_partial
from nijenhuis.morita import InfAction, InfBibundle
from nijenhuis.tensors import (DiffForm, Multivector, OneOneTensor, SmoothMap,
                               VectorField, VolumeDensity)

logger = logging.getLogger(__name__)

_IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_HEADER = re.compile(r"^\[\s*(?P<kind>[a-z]+)(?:\s+(?P<name>%s))?\s*\]$"
                     % _IDENT)
_REFERENCE = re.compile(r"^%s(?:\.[A-Za-z_][A-Za-z0-9_]*)*$" % _IDENT)
_TOKEN = re.compile(r"""
    (?P<space>\s+)
  | (?P<number>-?\d+(?:/\d+)?)
  | (?P<string>"[^"]*")
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*(?:\.[A-Za-z_][A-Za-z0-9_]*)*)
  | (?P<punct>[(),=])
""", re.VERBOSE)

KINDS = OrderedDict([
    ('chart', Chart),
    ('scalar', ScalarExpr),
    ('vector', VectorField),
    ('form', DiffForm),
    ('multivector', Multivector),
    ('tensor', OneOneTensor),
    ('map', SmoothMap),
    ('density', VolumeDensity),
    ('bundle', TrivialBundle),
    ('bundlemap', BundleMap),
    ('algebroid', LieAlgebroidData),
    ('derivation', OneDerivation),
    ('dirac', DiracStructure),
    ('bibundle', InfBibundle),
])

Entry = namedtuple('Entry', 'key value line column key_column')
CheckCall = namedtuple('CheckCall', 'operation args kwargs text line')


# Derived declarations

def _graph(structure, twist=None, name=None):
    if isinstance(structure, Multivector):
        return dirac.graph_of_bivector(structure, name=name)
    return dirac.graph_of_two_form(structure, twist=twist, name=name)


def _projection(source, target, *coords):
    return SmoothMap.projection(source, target, coords or None)


def _project(phi, N):
    projection = calculus.project_tensor(phi, N)
    if not projection:
        raise ScenarioError(projection.witness)
    return projection.tensor


def _standard_pair(omega0, name='P'):
    return morita.self_morita_bibundle(omega0, name=name)


def _induced(mu1, mu2, L1, L2, varpi, name=None):
    left, right = morita.induced_actions((mu1, mu2), L1, L2, varpi)
    return InfBibundle(left, right, form=varpi, name=name)


def _poisson_bibundle(mu1, mu2, pi1, pi2, varpi, name=None):
    left, right = morita.poisson_actions(mu1, mu2, pi1, pi2, varpi)
    return InfBibundle(left, right, form=varpi, name=name)


DERIVED = {
    'chart': {
        'product': lambda first, second, name=None: first.product(second,
                                                                  name),
    },
    'scalar': {
        'partial': derive_partial,
        'divergence': dirac.divergence,
        'determinant': lambda N: N.determinant(),
    },
    'vector': {
        'coordinate': lambda chart, coord: VectorField.coordinate(
            chart, chart.index(coord)),
        'bracket': calculus.lie_bracket,
        'apply': lambda N, v: N(v),
        'sharp': lambda pi, alpha: pi.sharp(alpha),
        'nabla_r': calculus.nabla_r,
        'deformed_bracket': calculus.deformed_bracket,
        'modular': dirac.modular_field,
        'pn_modular': dirac.pn_modular_field,
    },
    'form': {
        'coordinate': lambda chart, coord: DiffForm.coordinate(
            chart, chart.index(coord)),
        'differential': DiffForm.differential,
        'd': calculus.exterior_derivative,
        'wedge': lambda alpha, beta: alpha.wedge(beta),
        'interior': lambda alpha, v: alpha.interior(v),
        'pullback': calculus.pullback_form,
        'nabla_r_star': calculus.nabla_r_star,
        'contract': calculus.contract_form_with_tensor,
        'canonical': calculus.canonical_symplectic,
    },
    'multivector': {
        'poisson': calculus.poisson_of_symplectic,
        'hierarchy': dirac.poisson_hierarchy,
    },
    'tensor': {
        'identity': OneOneTensor.identity,
        'scalar': OneOneTensor.scalar,
        'diag': lambda chart, *entries: OneOneTensor.diag(chart, entries),
        'tangent_lift': calculus.tangent_lift,
        'cotangent_lift': calculus.cotangent_lift,
        'of_derivation': derivations.tensor_of_derivation,
        'pullback': derivations.pullback_tensor,
        'project': _project,
        'power': lambda N, n: N.power(n),
        'compose': lambda a, b: a.compose(b),
    },
    'map': {
        'identity': SmoothMap.identity,
        'projection': _projection,
    },
    'density': {
        'scale': lambda nu, g: nu.scale(g),
    },
    'bundle': {
        'tangent': TrivialBundle.tangent,
        'cotangent': TrivialBundle.cotangent,
        'pullback': derivations.pullback_bundle,
    },
    'bundlemap': {},
    'algebroid': {
        'tangent': LieAlgebroidData.tangent,
        'cotangent': dirac.cotangent_algebroid,
        'dirac': dirac.algebroid_of_dirac,
        'opposite': lambda A: A.opposite(),
        'product': lambda first, second, name=None: first.product(second,
                                                                  name),
    },
    'derivation': {
        'constant': OneDerivation.constant,
        'tangent_lift': derivations.tangent_lift_derivation,
        'cotangent_lift': derivations.cotangent_lift_derivation,
        'of_tensor': derivations.derivation_of_tensor,
        'dirac': dirac.dirac_derivation,
        'pullback': derivations.pullback_derivation,
    },
    'dirac': {
        'graph': _graph,
        'opposite': lambda L: L.opposite(),
        'hierarchy': dirac.dirac_hierarchy,
        'transform': lambda L, a, b, name=None: L.transform(a, b, name),
    },
    'bibundle': {
        'standard_pair': _standard_pair,
        'induced': _induced,
        'poisson': _poisson_bibundle,
        'hierarchy': morita.hierarchy_bibundle,
    },
}


class Scenario(object):
    """Resolved declarations by name plus the ordered check list."""

    def __init__(self, name, objects, checks):
        self.name = name
        self.objects = objects
        self.checks = list(checks)

    def __getitem__(self, name):
        return self.objects[name]

    def __contains__(self, name):
        return name in self.objects

    def __len__(self):
        return len(self.checks)

    def __repr__(self):
        return '<Scenario %s: %d declarations, %d checks>' % (
            self.name, len(self.objects), len(self.checks))


class _Section(object):

    def __init__(self, kind, name, line, column):
        self.kind = kind
        self.name = name
        self.line = line
        self.column = column
        self.entries = OrderedDict()
        self.calls = []

    @property
    def title(self):
        return '[%s %s]' % (self.kind, self.name)

    def add(self, entry):
        if entry.key in self.entries:
            raise ScenarioError("duplicate key %r in %s" % (entry.key,
                                                            self.title),
                                entry.line, entry.key_column)
        self.entries[entry.key] = entry

    def pop(self, key, required=True):
        entry = self.entries.pop(key, None)
        if entry is None and required:
            raise ScenarioError("%s needs a %r line" % (self.title, key),
                                self.line, self.column)
        return entry

    def pop_prefixed(self, prefix):
        keys = [key for key in self.entries
                if key.split(' ', 1)[0] == prefix and ' ' in key]
        return [self.entries.pop(key) for key in keys]

    def finish(self):
        for entry in self.entries.values():
            raise ScenarioError("unexpected key %r in %s" % (entry.key,
                                                             self.title),
                                entry.line, entry.key_column)


def _split(text, column, separator):
    """Pieces of ``text`` with the column where each starts."""
    pieces = []
    start = 0
    for part in text.split(separator):
        lead = len(part) - len(part.lstrip())
        pieces.append((part.strip(), column + start + lead))
        start += len(part) + 1
    return pieces


def _read_sections(lines):
    sections = []
    current = None
    for number, raw in enumerate(lines, 1):
        text = raw.split('#', 1)[0].rstrip()
        stripped = text.strip()
        if not stripped:
            continue
        indent = len(text) - len(text.lstrip())
        if stripped.startswith('['):
            match = _HEADER.match(stripped)
            if match is None:
                raise ScenarioError("malformed section header %r" % stripped,
                                    number, indent + 1)
            kind, name = match.group('kind'), match.group('name')
            if kind == 'check':
                if name:
                    raise ScenarioError("[check] takes no name", number,
                                        indent + 1)
            elif kind not in KINDS:
                raise ScenarioError("unknown section kind %r" % kind, number,
                                    indent + 2)
            elif name is None:
                raise ScenarioError("[%s] needs a name" % kind, number,
                                    indent + 1)
            column = indent + 1 + (stripped.index(name, len(kind) + 1)
                                   if name else 0)
            current = _Section(kind, name, number, column)
            sections.append(current)
            continue
        if current is None:
            raise ScenarioError("expected a section header", number,
                                indent + 1)
        if current.kind == 'check':
            current.calls.append((stripped, number, indent + 1))
            continue
        key, separator, value = text.partition('=')
        if not separator or not key.strip():
            raise ScenarioError("expected 'key = value'", number, indent + 1)
        value_column = len(key) + 2 + len(value) - len(value.lstrip())
        current.add(Entry(' '.join(key.split()), value.strip(), number,
                          value_column, indent + 1))
    return sections


# Call syntax: operation(arg, ...)

_Token = namedtuple('_Token', 'kind text column')


class _CallParser(object):

    def __init__(self, text, line, column):
        self.line = line
        self.tokens = []
        pos = 0
        while pos < len(text):
            match = _TOKEN.match(text, pos)
            if match is None:
                raise ScenarioError("unexpected character %r" % text[pos],
                                    line, column + pos)
            if match.lastgroup != 'space':
                self.tokens.append(_Token(match.lastgroup, match.group(),
                                          column + pos))
            pos = match.end()
        self.tokens.append(_Token('end', '', column + len(text)))
        self.index = 0

    def peek(self, offset=0):
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def next(self):
        token = self.peek()
        self.index += 1
        return token

    def at(self, text):
        token = self.peek()
        return token.kind == 'punct' and token.text == text

    def error(self, message, token):
        return ScenarioError(message, self.line, token.column)

    def expect(self, text):
        token = self.next()
        if token.kind != 'punct' or token.text != text:
            raise self.error("expected %r, got %s" % (text, _describe(token)),
                             token)
        return token

    def call(self):
        head = self.next()
        if head.kind != 'name' or '.' in head.text:
            raise self.error("expected an operation name, got %s"
                             % _describe(head), head)
        self.expect('(')
        args, kwargs = [], OrderedDict()
        if not self.at(')'):
            while True:
                if self.peek().kind == 'name' and self.peek(1).text == '=':
                    key = self.next()
                    self.next()
                    if key.text in kwargs:
                        raise self.error("repeated keyword %r" % key.text, key)
                    kwargs[key.text] = self.argument()
                elif kwargs:
                    raise self.error("positional argument after a keyword",
                                     self.peek())
                else:
                    args.append(self.argument())
                if not self.at(','):
                    break
                self.next()
        self.expect(')')
        end = self.next()
        if end.kind != 'end':
            raise self.error("unexpected %s after the call" % _describe(end),
                             end)
        return head, args, kwargs

    def argument(self):
        token = self.next()
        if token.kind == 'punct' and token.text == '(':
            items = [self.argument()]
            while self.at(','):
                self.next()
                items.append(self.argument())
            self.expect(')')
            return ('tuple', items, token)
        if token.kind == 'number':
            return ('literal', _number(token.text), token)
        if token.kind == 'string':
            return ('literal', token.text[1:-1], token)
        if token.kind == 'name':
            if token.text in ('true', 'false'):
                return ('literal', token.text == 'true', token)
            return ('ref', token.text, token)
        raise self.error("expected an argument, got %s" % _describe(token),
                         token)


def _describe(token):
    return 'end of line' if token.kind == 'end' else repr(token.text)


def _number(text):
    value = Fraction(text)
    return int(value) if value.denominator == 1 else value


def _bind(function, args, kwargs, what, line, column):
    try:
        inspect.signature(function).bind(*args, **kwargs)
    except TypeError as exc:
        raise ScenarioError("bad arguments for %s: %s" % (what, exc), line,
                            column)


class _Loader(object):

    def __init__(self, name):
        self.name = name
        self.objects = OrderedDict()
        self.checks = []

    def load(self, lines):
        for section in _read_sections(lines):
            if section.kind == 'check':
                for text, line, column in section.calls:
                    self.checks.append(self.check(text, line, column))
                continue
            if section.name in self.objects:
                raise ScenarioError("duplicate name %r" % section.name,
                                    section.line, section.column)
            declared = section.pop('from', required=False)
            if declared is not None:
                value = self.derive(section, declared)
            else:
                value = getattr(self, 'build_' + section.kind)(section)
            section.finish()
            self.objects[section.name] = value
            logger.debug("declared %s %s", section.kind, section.name)
        return Scenario(self.name, self.objects, self.checks)

    # references and values

    def lookup(self, name, line, column):
        if name in self.objects:
            return self.objects[name]
        parts = name.split('.')
        for split in range(len(parts) - 1, 0, -1):
            head = '.'.join(parts[:split])
            if head not in self.objects:
                continue
            value = self.objects[head]
            for attribute in parts[split:]:
                attribute = 'tensor' if attribute == 'J' else attribute
                if attribute.startswith('_') or not hasattr(value, attribute):
                    raise ScenarioError("%s has no attribute %r"
                                        % (head, attribute), line, column)
                value = getattr(value, attribute)
            return value
        raise ScenarioError("undefined reference %r" % name, line, column)

    def resolve(self, node, line):
        kind, value, token = node
        if kind == 'tuple':
            return tuple(self.resolve(item, line) for item in value)
        if kind == 'ref':
            return self.lookup(value, line, token.column)
        return value

    def ref(self, entry, kind):
        if not _REFERENCE.match(entry.value):
            raise ScenarioError("expected a name, got %r" % entry.value,
                                entry.line, entry.column)
        value = self.lookup(entry.value, entry.line, entry.column)
        expected = KINDS[kind]
        if not isinstance(value, expected):
            raise ScenarioError("%s is a %s, expected a %s"
                                % (entry.value, type(value).__name__, kind),
                                entry.line, entry.column)
        return value

    def chart_of(self, section, key='chart'):
        return self.ref(section.pop(key), 'chart')

    def integer(self, entry):
        try:
            return int(entry.value)
        except ValueError:
            raise ScenarioError("expected an integer, got %r" % entry.value,
                                entry.line, entry.column)

    def scalar(self, text, chart, line, column):
        if not text:
            raise ScenarioError("missing expression", line, column)
        try:
            return chart.parse(text)
        except ExprSyntaxError as exc:
            raise ScenarioError(exc.reason, line,
                                column + (exc.position or 0))
        except NijenhuisError as exc:
            raise ScenarioError(str(exc), line, column)

    def scalars(self, entry, chart, count=None, what='entries'):
        pieces = _split(entry.value, entry.column, ',')
        if count is not None and len(pieces) != count:
            raise ScenarioError("dimension mismatch: %d %s given, %s needs %d"
                                % (len(pieces), what, chart.name, count),
                                entry.line, entry.column)
        return [self.scalar(text, chart, entry.line, column)
                for text, column in pieces]

    def matrix(self, entry, chart, rows, columns):
        pieces = _split(entry.value, entry.column, ';')
        if len(pieces) != rows:
            raise ScenarioError("dimension mismatch: %d rows given, expected "
                                "%d" % (len(pieces), rows), entry.line,
                                entry.column)
        out = []
        for text, column in pieces:
            row = Entry(entry.key, text, entry.line, column, entry.key_column)
            if len(_split(text, column, ',')) != columns:
                raise ScenarioError("dimension mismatch: a %dx%d matrix needs"
                                    " %d entries per row, got %d"
                                    % (rows, columns, columns,
                                       len(_split(text, column, ','))),
                                    entry.line, column)
            out.append(self.scalars(row, chart))
        return out

    def names(self, entry):
        names = [text for text, _ in _split(entry.value, entry.column, ',')]
        for text, column in _split(entry.value, entry.column, ','):
            if not re.match(r'^%s$' % _IDENT, text):
                raise ScenarioError("%r is not a valid name" % text,
                                    entry.line, column)
        return names

    def index_in(self, names, name, what, entry):
        try:
            return names.index(name)
        except ValueError:
            raise ScenarioError("%r is not a %s" % (name, what), entry.line,
                                entry.key_column)

    def construct(self, section, entry, function, *args, **kwargs):
        try:
            return function(*args, **kwargs)
        except ScenarioError as exc:
            if exc.line is not None:
                raise
            raise ScenarioError(str(exc), entry.line, entry.column)
        except NijenhuisError as exc:
            raise ScenarioError("%s: %s" % (section.title, exc), entry.line,
                                entry.column)

    # derived declarations

    def derive(self, section, entry):
        head, args, kwargs = _CallParser(entry.value, entry.line,
                                         entry.column).call()
        table = DERIVED[section.kind]
        if head.text not in table:
            raise ScenarioError("%s cannot be derived with %r; known: %s"
                                % (section.title, head.text,
                                   ', '.join(sorted(table)) or 'none'),
                                entry.line, head.column)
        function = table[head.text]
        args = [self.resolve(arg, entry.line) for arg in args]
        kwargs = OrderedDict((key, self.resolve(value, entry.line))
                             for key, value in kwargs.items())
        parameters = inspect.signature(function).parameters
        if 'name' in parameters and 'name' not in kwargs:
            kwargs['name'] = section.name
        _bind(function, args, kwargs, head.text, entry.line, head.column)
        value = self.construct(section, entry, function, *args, **kwargs)
        if section.kind == 'bibundle':
            value = self.bibundle_extras(section, value)
        if not isinstance(value, KINDS[section.kind]):
            raise ScenarioError("%s(...) gives a %s, not a %s"
                                % (head.text, type(value).__name__,
                                   section.kind), entry.line, head.column)
        return value

    def bibundle_extras(self, section, value):
        """Register the side results of a derived bibundle as ``NAME.key``."""
        if hasattr(value, '_asdict'):
            for key, extra in value._asdict().items():
                if key != 'bibundle':
                    self.objects['%s.%s' % (section.name, key)] = extra
            value = value.bibundle
        form = section.pop('form', required=False)
        tensor = section.pop('tensor', required=False)
        if form is None and tensor is None:
            return value
        return value.with_structures(
            form=self.ref(form, 'form') if form else None,
            tensor=self.ref(tensor, 'tensor') if tensor else None)

    # explicit declarations

    def build_chart(self, section):
        entry = section.pop('coords')
        return self.construct(section, entry, Chart, section.name,
                              self.names(entry))

    def build_scalar(self, section):
        chart = self.chart_of(section)
        entry = section.pop('expr')
        return self.scalar(entry.value, chart, entry.line, entry.column)

    def build_vector(self, section):
        chart = self.chart_of(section)
        entry = section.pop('components')
        return VectorField(chart, self.scalars(entry, chart, chart.dim,
                                               'components'))

    def _alternating(self, section, cls):
        chart = self.chart_of(section)
        degree_entry = section.pop('degree', required=False)
        degree = self.integer(degree_entry) if degree_entry else None
        components = {}
        for key in list(section.entries):
            entry = section.entries.pop(key)
            indices = []
            for coord in key.replace(' ', '').split('^'):
                indices.append(self.index_in(chart.coords, coord,
                                             'coordinate of %s' % chart.name,
                                             entry))
            if degree is None:
                degree = len(indices)
            if len(indices) != degree:
                raise ScenarioError("component %r has degree %d, expected %d"
                                    % (key, len(indices), degree), entry.line,
                                    entry.key_column)
            components[tuple(indices)] = self.scalar(entry.value, chart,
                                                     entry.line, entry.column)
        if degree is None:
            raise ScenarioError("%s has no components and no degree"
                                % section.title, section.line, section.column)
        return self.construct(section, degree_entry or Entry(
            'degree', '', section.line, section.column, section.column),
            cls, chart, degree, components)

    def build_form(self, section):
        return self._alternating(section, DiffForm)

    def build_multivector(self, section):
        return self._alternating(section, Multivector)

    def build_tensor(self, section):
        chart = self.chart_of(section)
        entry = section.pop('matrix')
        return OneOneTensor(chart, self.matrix(entry, chart, chart.dim,
                                               chart.dim))

    def build_map(self, section):
        source = self.chart_of(section, 'source')
        target = self.chart_of(section, 'target')
        entry = section.pop('formulas')
        return SmoothMap(source, target, self.scalars(entry, source,
                                                      target.dim, 'formulas'))

    def build_density(self, section):
        chart = self.chart_of(section)
        entry = section.pop('density')
        density = self.scalar(entry.value, chart, entry.line, entry.column)
        return self.construct(section, entry, VolumeDensity, chart, density)

    def build_bundle(self, section):
        base = self.chart_of(section, 'base')
        kind = section.pop('kind', required=False)
        if kind is not None:
            if kind.value not in ('tangent', 'cotangent'):
                raise ScenarioError("bundle kind must be tangent or "
                                    "cotangent, got %r" % kind.value,
                                    kind.line, kind.column)
            return getattr(TrivialBundle, kind.value)(base)
        entry = section.pop('rank')
        rank = self.integer(entry)
        frame = section.pop('frame', required=False)
        return self.construct(section, entry, TrivialBundle, base, rank,
                              name=section.name,
                              frame=self.names(frame) if frame else None)

    def build_bundlemap(self, section):
        source = self.ref(section.pop('source'), 'bundle')
        target = self.ref(section.pop('target'), 'bundle')
        entry = section.pop('matrix')
        matrix = self.matrix(entry, source.base, target.rank, source.rank)
        return self.construct(section, entry, BundleMap, source, target,
                              matrix)

    def build_algebroid(self, section):
        bundle = self.ref(section.pop('bundle'), 'bundle')
        base = bundle.base
        frame = list(bundle.frame)
        anchor = [VectorField.zero(base)] * bundle.rank
        for entry in section.pop_prefixed('anchor'):
            a = self.index_in(frame, entry.key.split(' ', 1)[1],
                              'frame element of %s' % bundle.name, entry)
            anchor[a] = VectorField(base, self.scalars(entry, base, base.dim,
                                                       'components'))
        structure = {}
        for entry in section.pop_prefixed('bracket'):
            pair = entry.key.split()[1:]
            if len(pair) != 2:
                raise ScenarioError("expected 'bracket e1 e2 = ...'",
                                    entry.line, entry.key_column)
            a, b = [self.index_in(frame, name, 'frame element of %s'
                                  % bundle.name, entry) for name in pair]
            structure[(a, b)] = self.scalars(entry, base, bundle.rank,
                                             'coefficients')
        return self.construct(section, Entry('bundle', '', section.line,
                                             section.column, section.column),
                              LieAlgebroidData, bundle, anchor, structure,
                              name=section.name)

    def build_derivation(self, section):
        bundle = self.ref(section.pop('bundle'), 'bundle')
        chart = bundle.base
        k = bundle.rank
        base_entry = section.pop('base', required=False)
        base = (self.ref(base_entry, 'tensor') if base_entry
                else OneOneTensor.identity(chart))
        endo_entry = section.pop('endo', required=False)
        endo = (self.matrix(endo_entry, chart, k, k) if endo_entry
                else [[chart.one if a == b else chart.zero for a in range(k)]
                      for b in range(k)])
        conn = [[[chart.zero] * k for _ in range(k)] for _ in range(chart.dim)]
        for entry in section.pop_prefixed('connection'):
            parts = entry.key.split()[1:]
            if len(parts) != 2:
                raise ScenarioError("expected 'connection x e1 = ...'",
                                    entry.line, entry.key_column)
            i = self.index_in(chart.coords, parts[0],
                              'coordinate of %s' % chart.name, entry)
            a = self.index_in(list(bundle.frame), parts[1],
                              'frame element of %s' % bundle.name, entry)
            conn[i][a] = self.scalars(entry, chart, k, 'coefficients')
        return OneDerivation(bundle, conn, endo, base)

    def build_dirac(self, section):
        chart = self.chart_of(section)
        twist_entry = section.pop('twist', required=False)
        twist = self.ref(twist_entry, 'form') if twist_entry else None
        generators = []
        for a in range(chart.dim):
            entry = section.pop('s%d' % (a + 1))
            halves = _split(entry.value, entry.column, '|')
            if len(halves) != 2:
                raise ScenarioError("expected 'vector | covector'",
                                    entry.line, entry.column)
            parts = [self.scalars(Entry(entry.key, text, entry.line, column,
                                        entry.key_column), chart, chart.dim,
                                  'components')
                     for text, column in halves]
            generators.append(CourantSection(VectorField(chart, parts[0]),
                                             DiffForm.covector(chart,
                                                               parts[1])))
        return self.construct(section, Entry('chart', '', section.line,
                                             section.column, section.column),
                              DiracStructure, chart, generators, twist,
                              name=section.name)

    def build_bibundle(self, section):
        actions = []
        for side, mu in (('left', 'mu1'), ('right', 'mu2')):
            algebroid = self.ref(section.pop(side), 'algebroid')
            if side == 'right':
                algebroid = algebroid.opposite()
            moment = self.ref(section.pop(mu), 'map')
            entry = section.pop('%s_action' % side)
            P = moment.source
            table = self.matrix(entry, P, algebroid.bundle.rank, P.dim)
            actions.append(self.construct(section, entry, InfAction,
                                          algebroid, moment, table))
        form = section.pop('form', required=False)
        tensor = section.pop('tensor', required=False)
        return self.construct(
            section, Entry('left', '', section.line, section.column,
                           section.column),
            InfBibundle, actions[0], actions[1],
            form=self.ref(form, 'form') if form else None,
            tensor=self.ref(tensor, 'tensor') if tensor else None,
            name=section.name)

    # checks

    def check(self, text, line, column):
        head, args, kwargs = _CallParser(text, line, column).call()
        if head.text not in OPERATIONS:
            raise ScenarioError("unknown check %r" % head.text, line,
                                head.column)
        operation = OPERATIONS[head.text]
        args = [self.resolve(arg, line) for arg in args]
        kwargs = dict((key, self.resolve(value, line))
                      for key, value in kwargs.items())
        _bind(operation.function, args, kwargs, head.text, line, head.column)
        return CheckCall(operation, tuple(args), kwargs, text, line)


def parse_scenario(text, name='scenario'):
    return _Loader(name).load(text.splitlines())


def load_scenario(path):
    """Read and resolve the scenario file at ``path``."""
    with io.open(path, encoding='utf-8') as handle:
        text = handle.read()
    name = os.path.splitext(os.path.basename(path))[0]
    scenario = parse_scenario(text, name)
    logger.info("loaded scenario %s: %d declarations, %d checks", name,
                len(scenario.objects), len(scenario.checks))
    return scenario
