"""
Numeric cross-check of symbolic verdicts at random rational points.

A symbolic PASS whose residuals fail to vanish at a sample, or a rank
claim exceeded at a sample, is a bug in the engine rather than a property
of the input; such outcomes are downgraded to ERROR.
"""
from fractions import Fraction
import logging
import random

from nijenhuis import conf
from nijenhuis.exceptions import PoleError
from nijenhuis.expr import RationalPoint, format_point
from nijenhuis.linalg import numeric_rank
from nijenhuis.verdicts import Verdict

logger = logging.getLogger(__name__)


def random_point(chart, rng):
    bound = conf.coord_bound()
    limit = conf.max_denominator()
    values = []
    for _ in chart.coords:
        denominator = rng.randint(1, limit)
        numerator = rng.randint(-bound * denominator, bound * denominator)
        values.append(Fraction(numerator, denominator))
    return RationalPoint(chart, values)


class _Sampler(object):
    """One point per chart and sample; redraws a chart's point at a pole."""

    def __init__(self, rng):
        self.rng = rng
        self.points = {}

    def point(self, chart):
        if chart not in self.points:
            self.points[chart] = random_point(chart, self.rng)
        return self.points[chart]

    def redraw(self, chart):
        self.points[chart] = random_point(chart, self.rng)
        return self.points[chart]


def _attempt(sampler, chart, evaluate):
    """Run ``evaluate(values)``; None when every attempt lands on a pole."""
    point = sampler.point(chart)
    for _ in range(conf.oracle_attempts()):
        try:
            return point, evaluate(point.values)
        except PoleError:
            point = sampler.redraw(chart)
    return point, None


def _disagreement(outcome, sampler):
    for label, expr in outcome.residuals:
        point, value = _attempt(sampler, expr.chart, expr.evaluate)
        if value is not None and value != 0:
            return '%s evaluates to %s at %s' % (
                label, value, format_point(expr.chart, point.values))
    for label, rows, expected in outcome.ranks:
        if not rows or not rows[0]:
            continue
        chart = rows[0][0].chart
        point, actual = _attempt(sampler, chart,
                                 lambda values: numeric_rank(rows, values))
        if actual is not None and actual > expected:
            return '%s has rank %d at %s, above the generic rank %d' % (
                label, actual, format_point(chart, point.values), expected)
    return ''


def _confirm_once(outcome, sampler):
    if outcome.verdict == Verdict.ASSUMED:
        return False
    downgraded = False
    for clause in outcome.clauses:
        downgraded = _confirm_once(clause, sampler) or downgraded
    if outcome.verdict in (Verdict.PASS, Verdict.GENERIC_PASS):
        message = _disagreement(outcome, sampler)
        if message:
            logger.warning("oracle disagrees with %s: %s", outcome.check,
                           message)
            outcome.verdict = Verdict.ERROR
            outcome.witness = 'oracle: %s' % message
            return True
    if downgraded and outcome.verdict != Verdict.ERROR:
        outcome.verdict = Verdict.ERROR
        for clause in outcome.clauses:
            if clause.verdict == Verdict.ERROR:
                outcome.witness = '%s: %s' % (clause.check, clause.witness)
                break
    return downgraded


def confirm(outcome, rng=None, samples=None):
    """
    Re-evaluate the residuals and rank claims of ``outcome`` (and of its
    clauses) at ``samples`` random points. Returns the outcome, downgraded
    in place to ERROR on disagreement.
    """
    if rng is None:
        rng = random.Random(conf.seed())
    if samples is None:
        samples = conf.sample_points()
    for _ in range(samples):
        if _confirm_once(outcome, _Sampler(rng)):
            break
    return outcome
