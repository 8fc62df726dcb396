"""
Command line front end::

    nijenhuis check <file> [--seed N] [--sample N] [--format text|json]
                           [--max-degree N] [--jobs N] [--timings] [-v]

The exit status is 0 when every verdict is pass, generic-pass or assumed,
1 when a check fails and 2 on an error (including an unreadable or invalid
scenario).
"""
import argparse
import logging
import sys

from django.test.utils import override_settings

from nijenhuis import __version__, conf
from nijenhuis.checks import run_scenario
from nijenhuis.exceptions import ScenarioError
from nijenhuis.report import EXIT_ERROR, emit_report
from nijenhuis.scenario import load_scenario

logger = logging.getLogger(__name__)


def _non_negative(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("%s is negative" % text)
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("%s is not positive" % text)
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog='nijenhuis',
        description="Verify Nijenhuis, Dirac and Morita statements "
                    "described in a scenario file.")
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    commands = parser.add_subparsers(dest='command')
    check = commands.add_parser('check', help="run the checks of a scenario")
    check.add_argument('file', help="scenario file")
    check.add_argument('--seed', type=_non_negative, default=None,
                       help="oracle seed (default 0)")
    check.add_argument('--sample', type=_non_negative, default=None,
                       help="oracle points per check, 0 to disable "
                            "(default 16)")
    check.add_argument('--format', choices=('text', 'json'), default='text')
    check.add_argument('--max-degree', type=_positive, default=None,
                       help="total degree cap for expressions (default 64)")
    check.add_argument('--jobs', type=_positive, default=1,
                       help="run checks on this many threads")
    check.add_argument('--timings', action='store_true',
                       help="record wall time per check in millis; output "
                            "is then no longer byte-identical across runs")
    check.add_argument('-v', '--verbose', action='store_true')
    return parser


def check(args, stdout, stderr):
    conf.setup()
    overrides = {}
    if args.max_degree is not None:
        overrides['NIJENHUIS_MAX_DEGREE'] = args.max_degree
    with override_settings(**overrides):
        return _check(args, stdout, stderr)


def _check(args, stdout, stderr):
    try:
        scenario = load_scenario(args.file)
    except ScenarioError as exc:
        stderr.write('%s: %s\n' % (args.file, exc))
        return EXIT_ERROR
    except (IOError, OSError, UnicodeDecodeError) as exc:
        stderr.write('%s: cannot read scenario: %s\n' % (args.file, exc))
        return EXIT_ERROR
    report = run_scenario(scenario, sample=args.sample, seed=args.seed,
                          jobs=args.jobs, timings=args.timings)
    stdout.write(emit_report(report, args.format))
    return report.exit_code


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(stderr)
        return EXIT_ERROR
    logging.basicConfig(
        stream=stderr, format='%(levelname)s %(name)s: %(message)s',
        level=logging.DEBUG if args.verbose else logging.WARNING)
    return check(args, stdout, stderr)
