"""
Recursive-descent parser for the scalar expression grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := base ('^' nat)?
    base   := name | number | '(' expr ')'

Parsing yields an unreduced tree. ``nijenhuis.expr`` folds the tree into a
canonical rational function; ``Node.evaluate`` evaluates the tree as written,
which is what the canonicalization property tests compare against.
"""
from collections import namedtuple
from fractions import Fraction
import re

from nijenhuis.exceptions import ExprSyntaxError, PoleError, UnknownIdentifier

_TOKEN_REGEXP = re.compile(r"""
    (?P<space>\s+)
  | (?P<number>\d+(?:\.\d+)?|\.\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)

Token = namedtuple('Token', 'kind text position')


def tokenize(src):
    tokens = []
    position = 0
    while position < len(src):
        match = _TOKEN_REGEXP.match(src, position)
        if match is None:
            raise ExprSyntaxError("unexpected character %r" % src[position],
                                  position)
        kind = match.lastgroup
        if kind != 'space':
            tokens.append(Token(kind, match.group(kind), position))
        position = match.end()
    tokens.append(Token('end', '', len(src)))
    return tokens


class Node(object):
    __slots__ = ()

    def evaluate(self, values):
        raise NotImplementedError


class Number(Node):
    __slots__ = ('value',)

    def __init__(self, value):
        self.value = value

    def evaluate(self, values):
        return self.value

    def __repr__(self):
        return 'Number(%s)' % self.value


class Name(Node):
    __slots__ = ('name',)

    def __init__(self, name):
        self.name = name

    def evaluate(self, values):
        return values[self.name]

    def __repr__(self):
        return 'Name(%s)' % self.name


class Negate(Node):
    __slots__ = ('operand',)

    def __init__(self, operand):
        self.operand = operand

    def evaluate(self, values):
        return -self.operand.evaluate(values)


class Power(Node):
    __slots__ = ('base', 'exponent')

    def __init__(self, base, exponent):
        self.base = base
        self.exponent = exponent

    def evaluate(self, values):
        return self.base.evaluate(values) ** self.exponent


class BinaryOp(Node):
    __slots__ = ('op', 'left', 'right')

    def __init__(self, op, left, right):
        self.op = op
        self.left = left
        self.right = right

    def evaluate(self, values):
        left = self.left.evaluate(values)
        right = self.right.evaluate(values)
        if self.op == '+':
            return left + right
        if self.op == '-':
            return left - right
        if self.op == '*':
            return left * right
        if right == 0:
            raise PoleError("division by zero while evaluating")
        return left / right


class Parser(object):

    def __init__(self, src, names=None):
        self.src = src
        self.tokens = tokenize(src)
        self.index = 0
        self.names = None if names is None else frozenset(names)

    @property
    def current(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, text):
        token = self.current
        if token.text != text:
            raise ExprSyntaxError("expected %r, found %s"
                                  % (text, describe(token)), token.position)
        return self.advance()

    def parse(self):
        if self.current.kind == 'end':
            raise ExprSyntaxError("empty expression", 0)
        node = self.expr()
        if self.current.kind != 'end':
            raise ExprSyntaxError("unexpected %s" % describe(self.current),
                                  self.current.position)
        return node

    def expr(self):
        node = self.term()
        while self.current.text in ('+', '-') and self.current.kind == 'op':
            op = self.advance().text
            node = BinaryOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.current.text in ('*', '/') and self.current.kind == 'op':
            op = self.advance().text
            node = BinaryOp(op, node, self.unary())
        return node

    def unary(self):
        if self.current.kind == 'op' and self.current.text == '-':
            self.advance()
            return Negate(self.unary())
        return self.power()

    def power(self):
        node = self.base()
        if self.current.kind == 'op' and self.current.text == '^':
            self.advance()
            token = self.current
            if token.kind != 'number' or not token.text.isdigit():
                raise ExprSyntaxError("exponent must be a non-negative "
                                      "integer, found %s" % describe(token),
                                      token.position)
            self.advance()
            node = Power(node, int(token.text))
        return node

    def base(self):
        token = self.current
        if token.kind == 'number':
            self.advance()
            return Number(Fraction(token.text))
        if token.kind == 'name':
            if self.names is not None and token.text not in self.names:
                raise UnknownIdentifier("unknown identifier %r" % token.text,
                                        token.position)
            self.advance()
            return Name(token.text)
        if token.kind == 'op' and token.text == '(':
            self.advance()
            node = self.expr()
            self.expect(')')
            return node
        raise ExprSyntaxError("unexpected %s" % describe(token),
                              token.position)


def describe(token):
    if token.kind == 'end':
        return "end of input"
    return repr(token.text)


def parse(src, names=None):
    """Parse ``src`` into a tree; ``names`` restricts the allowed identifiers."""
    return Parser(src, names).parse()
