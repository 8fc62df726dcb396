"""
Reports of a scenario run, as stable text or as one JSON document.

The JSON fields are fixed: ``check``, ``verdict``, ``witness``, ``locus``,
``millis``, ``value``, ``flags`` and ``clauses``. Every expression appears as
its printed string, so ``Report.from_json(report.to_json())`` gives back an
equal report.
"""
import json
import logging

from nijenhuis.verdicts import Verdict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

_INDENT = ' ' * 14


def render_value(value):
    if value is None:
        return ''
    if isinstance(value, dict):
        return '; '.join('%s: %s' % (key, render_value(value[key]))
                         for key in sorted(value))
    if isinstance(value, (list, tuple)):
        return ', '.join(render_value(item) for item in value)
    return str(value)


class CheckResult(object):

    def __init__(self, check, verdict, witness='', locus='', millis=0,
                 value='', flags=None, clauses=()):
        self.check = check
        self.verdict = verdict
        self.witness = witness
        self.locus = locus
        self.millis = millis
        self.value = value
        self.flags = dict(flags or {})
        self.clauses = list(clauses)

    @classmethod
    def from_outcome(cls, outcome, check=None, millis=0):
        return cls(check or outcome.check, outcome.verdict,
                   witness=outcome.witness, locus=outcome.locus,
                   millis=millis, value=render_value(outcome.value),
                   flags=dict((key, render_value(value)
                               if not isinstance(value, bool) else value)
                              for key, value in outcome.flags.items()),
                   clauses=[cls.from_outcome(clause)
                            for clause in outcome.clauses])

    def to_dict(self):
        return {
            'check': self.check,
            'verdict': self.verdict.value,
            'witness': self.witness,
            'locus': self.locus,
            'millis': self.millis,
            'value': self.value,
            'flags': self.flags,
            'clauses': [clause.to_dict() for clause in self.clauses],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data['check'], Verdict(data['verdict']),
                   witness=data.get('witness', ''),
                   locus=data.get('locus', ''),
                   millis=data.get('millis', 0),
                   value=data.get('value', ''),
                   flags=data.get('flags'),
                   clauses=[cls.from_dict(clause)
                            for clause in data.get('clauses', ())])

    def lines(self, depth=0):
        prefix = '  ' * depth + ('- ' if depth else '')
        out = ['%s%-13s %s' % (prefix, self.verdict.label, self.check)]
        pad = '  ' * depth + ('  ' if depth else '') + _INDENT
        if self.witness:
            out.append('%switness: %s' % (pad, self.witness))
        if self.locus:
            out.append('%sdegeneracy locus: %s' % (pad, self.locus))
        if self.value:
            out.append('%svalue: %s' % (pad, self.value))
        for key in sorted(self.flags):
            if self.flags[key] != '':
                out.append('%s%s: %s' % (pad, key, self.flags[key]))
        for clause in self.clauses:
            out.extend(clause.lines(depth + 1))
        return out

    def __eq__(self, other):
        return isinstance(other, CheckResult) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return '<CheckResult %s %s>' % (self.check, self.verdict.value)


class Report(object):

    def __init__(self, scenario, seed, sample, results):
        self.scenario = scenario
        self.seed = seed
        self.sample = sample
        self.results = list(results)

    @property
    def exit_code(self):
        verdicts = [result.verdict for result in self.results]
        if Verdict.ERROR in verdicts:
            return EXIT_ERROR
        if Verdict.FAIL in verdicts:
            return EXIT_FAIL
        return EXIT_OK

    def counts(self):
        counts = dict((verdict, 0) for verdict in Verdict)
        for result in self.results:
            counts[result.verdict] += 1
        return counts

    def to_dict(self):
        return {
            'scenario': self.scenario,
            'seed': self.seed,
            'sample': self.sample,
            'exit': self.exit_code,
            'results': [result.to_dict() for result in self.results],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True,
                          ensure_ascii=False) + '\n'

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(data['scenario'], data['seed'], data['sample'],
                   [CheckResult.from_dict(result)
                    for result in data['results']])

    def to_text(self):
        lines = ['scenario %s: %d checks (seed %d, %d samples)'
                 % (self.scenario, len(self.results), self.seed, self.sample)]
        for result in self.results:
            lines.extend(result.lines())
        counts = self.counts()
        summary = ', '.join('%d %s' % (counts[verdict], verdict.value)
                            for verdict in Verdict if counts[verdict])
        lines.append('%d checks: %s; exit %d' % (len(self.results),
                                                  summary or 'none',
                                                  self.exit_code))
        return '\n'.join(lines) + '\n'

    def __eq__(self, other):
        return isinstance(other, Report) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self == other


def emit_report(report, format='text'):
    if format == 'json':
        return report.to_json()
    if format == 'text':
        return report.to_text()
    raise ValueError("unknown report format %r" % format)
