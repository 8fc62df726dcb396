"""
Structured results. Mathematical failure is never an exception: checks
return an ``Outcome`` whose verdict is FAIL and whose witness names the
offending component.
"""
import copy
from enum import Enum
import logging

from nijenhuis import linalg

logger = logging.getLogger(__name__)


class Verdict(Enum):
    PASS = 'pass'
    FAIL = 'fail'
    GENERIC_PASS = 'generic-pass'
    ASSUMED = 'assumed'
    ERROR = 'error'

    @property
    def label(self):
        return self.value.upper()


PASSING = (Verdict.PASS, Verdict.GENERIC_PASS, Verdict.ASSUMED)


class Outcome(object):

    def __init__(self, check, verdict, witness='', locus='', clauses=(),
                 residuals=(), ranks=(), millis=0, flags=None, value=None):
        self.check = check
        self.verdict = verdict
        self.witness = witness
        self.locus = locus
        self.clauses = list(clauses)
        self.residuals = tuple(residuals)
        self.ranks = tuple(ranks)
        self.millis = millis
        self.flags = dict(flags or {})
        self.value = value

    def __bool__(self):
        return self.verdict in PASSING

    __nonzero__ = __bool__

    @property
    def exact(self):
        """Passed with no degeneracy anywhere on the chart."""
        return bool(self) and not self.locus and all(
            clause.exact or clause.verdict == Verdict.ASSUMED
            for clause in self.clauses)

    def clause(self, name):
        for clause in self.clauses:
            if clause.check == name:
                return clause
        raise KeyError(name)

    def all_residuals(self):
        out = list(self.residuals)
        for clause in self.clauses:
            out.extend(clause.all_residuals())
        return out

    def all_ranks(self):
        out = list(self.ranks)
        for clause in self.clauses:
            out.extend(clause.all_ranks())
        return out

    def __repr__(self):
        extra = ''
        if self.witness:
            extra += ' witness=%r' % self.witness
        if self.locus:
            extra += ' locus=%r' % self.locus
        return '<Outcome %s %s%s>' % (self.check, self.verdict.value, extra)


def assumed(check, note):
    return Outcome(check, Verdict.ASSUMED, witness=note)


def relabel(outcome, check):
    """A copy of ``outcome`` reported under another name."""
    out = copy.copy(outcome)
    out.check = check
    return out


class Clause(object):
    """
    Collects the zero-identities and rank claims of one named condition.
    The first nonzero residual becomes the witness.
    """

    def __init__(self, name):
        self.name = name
        self.residuals = []
        self.ranks = []
        self.witness = ''
        self.locus = ''
        self.failed = False

    def zero(self, label, expr):
        self.residuals.append((label, expr))
        if not self.failed and not expr.is_zero():
            self.fail('%s = %s, expected 0' % (label, expr))
        return expr.is_zero()

    def equal(self, label, left, right):
        return self.zero(label, left - right)

    def zeros(self, label, components, shown):
        """Record every component of a vector-valued residual; ``shown`` prints it."""
        nonzero = False
        for index, expr in enumerate(components):
            self.residuals.append(("%s[%d]" % (label, index), expr))
            nonzero = nonzero or not expr.is_zero()
        if nonzero:
            self.fail("%s = %s, expected 0" % (label, shown))
        return not nonzero

    def fail(self, witness):
        if not self.failed:
            self.failed = True
            self.witness = witness

    def rank(self, label, rows, chart, expected):
        actual = linalg.rank(rows, chart)
        if actual != expected:
            self.fail('%s: rank %d, expected %d' % (label, actual, expected))
            return False
        self.ranks.append((label, rows, expected))
        locus = linalg.degeneracy_locus(rows, chart, expected)
        if locus and not self.locus:
            self.locus = locus
        return True

    def outcome(self, generic=False):
        if self.failed:
            verdict = Verdict.FAIL
        elif generic or self.ranks:
            verdict = Verdict.GENERIC_PASS
        else:
            verdict = Verdict.PASS
        logger.debug("%s: %s", self.name, verdict.value)
        return Outcome(self.name, verdict, witness=self.witness,
                       locus=self.locus, residuals=self.residuals,
                       ranks=self.ranks)


def aggregate(clauses):
    verdicts = [clause.verdict for clause in clauses]
    for verdict in (Verdict.ERROR, Verdict.FAIL, Verdict.GENERIC_PASS):
        if verdict in verdicts:
            return verdict
    return Verdict.PASS


def combine(check, clauses, flags=None, value=None):
    """Fold clause outcomes into one; the first failing clause names the witness."""
    clauses = list(clauses)
    verdict = aggregate(clauses)
    witness = ''
    for clause in clauses:
        if clause.verdict in (Verdict.FAIL, Verdict.ERROR):
            witness = '%s: %s' % (clause.check, clause.witness)
            break
    loci = []
    for clause in clauses:
        if clause.locus and clause.locus not in loci:
            loci.append(clause.locus)
    return Outcome(check, verdict, witness=witness, locus='; '.join(loci),
                   clauses=clauses, flags=flags, value=value)


class MoritaReport(Outcome):
    """Per-clause verdicts of one Morita check; each clause appears once."""

    def __init__(self, check, clauses, flags=None, value=None):
        folded = combine(check, clauses, flags, value)
        names = [clause.check for clause in folded.clauses]
        if len(set(names)) != len(names):
            raise ValueError("duplicate clause in %s report" % check)
        super(MoritaReport, self).__init__(
            check, folded.verdict, witness=folded.witness,
            locus=folded.locus, clauses=folded.clauses, flags=folded.flags,
            value=value)
