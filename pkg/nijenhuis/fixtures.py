"""
Named structures used by the test suite and the shipped scenarios, plus
seeded generators of random fixtures.
"""
from collections import namedtuple
from itertools import product
import random

from nijenhuis.calculus import poisson_of_symplectic
from nijenhuis.derivations import OneDerivation, TrivialBundle
from nijenhuis.expr import Chart
from nijenhuis.morita import (InfBibundle, poisson_actions,
                              self_morita_bibundle)
from nijenhuis.tensors import DiffForm, Multivector, OneOneTensor

PoissonPair = namedtuple('PoissonPair', 'bibundle first second form')


def plane(name='M'):
    return Chart(name, ('x', 'y'))


def space(name='M'):
    return Chart(name, ('x', 'y', 'z'))


def pi_std(chart):
    """d/dx ^ d/dy on the first two coordinates."""
    return Multivector(chart, 2, {(0, 1): 1})


def omega_std(chart):
    return DiffForm(chart, 2, {(0, 1): 1})


def j0(chart):
    """The complex structure d/dx -> d/dy, d/dy -> -d/dx."""
    return OneOneTensor(chart, [[0, -1], [1, 0]])


def n_diag(chart):
    """diag(y, x), whose torsion is (y - x)(d/dx + d/dy) on each pair."""
    return OneOneTensor.diag(chart, ['y', 'x'])


def holomorphic_derivation(chart, gamma=None):
    """
    (nabla, J0, J0) on the rank 2 bundle over (x, y): nabla_{d_x} has
    matrix G commuting with J0, and nabla_{d_y} = -J0 G solves
    l(nabla_v) + nabla_{r v} = 0.
    """
    bundle = TrivialBundle(chart, 2)
    ell = [[chart.zero, -chart.one], [chart.one, chart.zero]]
    if gamma is None:
        gamma = [[chart.one, -chart.const(2)], [chart.const(2), chart.one]]
    second = [[-sum((ell[b][c] * gamma[c][a] for c in range(2)), chart.zero)
               for a in range(2)] for b in range(2)]
    conn = [[[matrix[b][a] for b in range(2)] for a in range(2)]
            for matrix in (gamma, second)]
    return OneDerivation(bundle, conn, ell, j0(chart))


def standard_pair(chart=None):
    """The symplectic self-Morita bibundle of (M, dx^dy)."""
    return self_morita_bibundle(omega_std(chart or plane()))


def poisson_pair(pair=None):
    """The standard pair with the actions of the cotangent algebroids."""
    pair = pair or standard_pair()
    B = pair.bibundle
    first = poisson_of_symplectic(omega_std(B.mu1.target))
    second = poisson_of_symplectic(omega_std(B.mu2.target))
    left, right = poisson_actions(B.mu1, B.mu2, first, second, pair.form)
    bibundle = InfBibundle(left, right, form=pair.form, tensor=B.tensor,
                           name=B.name)
    return PoissonPair(bibundle, first, second, pair.form)


# Random fixtures

def random_scalar(chart, rng, degree=3, terms=3, bound=3):
    """A polynomial with up to ``terms`` monomials of total degree <= degree."""
    total = chart.zero
    for _ in range(terms):
        monomial = chart.const(rng.randint(-bound, bound))
        for _ in range(rng.randint(0, degree)):
            monomial = monomial * chart.coord(rng.randrange(chart.dim))
        total = total + monomial
    return total


def random_tensor(chart, rng, degree=2):
    n = chart.dim
    return OneOneTensor(chart, [[random_scalar(chart, rng, degree)
                                 for _ in range(n)] for _ in range(n)])


def random_two_form(chart, rng, degree=3):
    n = chart.dim
    return DiffForm(chart, 2, dict(((i, j), random_scalar(chart, rng, degree))
                                   for i, j in product(range(n), repeat=2)
                                   if i < j))


def random_derivation(chart, rng, rank=2, degree=2):
    bundle = TrivialBundle(chart, rank)
    conn = [[[random_scalar(chart, rng, degree) for _ in range(rank)]
             for _ in range(rank)] for _ in range(chart.dim)]
    endo = [[random_scalar(chart, rng, degree) for _ in range(rank)]
            for _ in range(rank)]
    return OneDerivation(bundle, conn, endo, random_tensor(chart, rng, degree))


def rng(seed=0):
    return random.Random(seed)
