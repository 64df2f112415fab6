"""Command-line front end.

Exit codes: 0 accepted (or a clean ``check``), 1 rejected, no derivation,
or an invalid grammar under ``check``, 2 budget exhausted, 3 bad input (an
unknown word or a grammar that does not load), 4 a cyclic item under the
acyclicity guard.
"""

import argparse
import logging
import os
import sys
import warnings

from . import __version__, grammars
from .errors import TFSError, UnknownWord, BudgetExhausted, CyclicItemError
from .grammar import GrammarLint, load_grammar_file
from .oracle import DEFAULT_MAX_STEPS, find_derivation
from .parser import ACCEPTED, REJECTED, ComputationConfig, run
from .utils import _dump_json, _sentence

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_BUDGET = 2
EXIT_INPUT = 3
EXIT_CYCLIC = 4

_VERDICT_EXIT = {ACCEPTED: EXIT_OK, REJECTED: EXIT_REJECTED}


def _grammar_path(name):
    if os.path.isfile(name):
        return name
    return grammars.path(name)


def _load(name):
    return load_grammar_file(_grammar_path(name))


def _error(msg):
    print(f'error: {msg}', file=sys.stderr)


def _config(args, early_exit=True):
    return ComputationConfig(
        subsumption_filter=args.filter,
        max_iterations=args.max_iterations,
        acyclicity_guard=args.guard_acyclic,
        trace_level=min(args.verbosity, 2),
        early_exit=early_exit and not args.full_fixpoint,
        schedule=args.schedule,
        sentinel_threshold=args.sentinel_threshold,
    )


def cmd_check(args):
    try:
        grammar = _load(args.grammar)
    except (OSError, TFSError) as e:
        _error(e)
        return EXIT_REJECTED

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', GrammarLint)
        lints = grammar.lints()
    entries = sum(len(cats) for cats in grammar.lexicon.values())
    print(f'{len(grammar.rules)} rules, {entries} lexical entries, signature OK')
    for msg in lints:
        print(f'lint: {msg}')
    return EXIT_OK


def _computation(args, early_exit):
    """Load, run and map failures onto exit codes.

    Returns:
        tuple: ``(result, None)`` or ``(None, exit code)``.
    """

    try:
        grammar = _load(args.grammar)
    except (OSError, TFSError) as e:
        _error(e)
        return None, EXIT_INPUT
    try:
        return run(grammar, _sentence(args.sentence), _config(args, early_exit)), None
    except UnknownWord as e:
        _error(e)
        return None, EXIT_INPUT
    except CyclicItemError as e:
        _error(e)
        return None, EXIT_CYCLIC


def cmd_parse(args):
    result, code = _computation(args, early_exit=True)
    if result is None:
        return code
    print(f'{result.verdict} after {result.iterations} iterations')
    if args.witness and result.witness is not None:
        print(result.witness.amrs.project(1).avm())
    for report in result.sentinel:
        print(f'sentinel: cell {list(report.cell)} holds {report.count} incomparable items',
              file=sys.stderr)
    return _VERDICT_EXIT.get(result.verdict, EXIT_BUDGET)


def cmd_chart(args):
    result, code = _computation(args, early_exit=False)
    if result is None:
        return code
    if args.golden:
        print(result.golden())
    else:
        print(_dump_json(result.to_json()))
    return _VERDICT_EXIT.get(result.verdict, EXIT_BUDGET)


def cmd_derive(args):
    try:
        grammar = _load(args.grammar)
    except (OSError, TFSError) as e:
        _error(e)
        return EXIT_INPUT

    words = _sentence(args.sentence)
    try:
        found = find_derivation(grammar, words, max_steps=args.max_steps)
    except UnknownWord as e:
        _error(e)
        return EXIT_INPUT
    except BudgetExhausted:
        print(f'none found (step budget {args.max_steps} exhausted)')
        return EXIT_BUDGET

    if found is None:
        print('none found')
        return EXIT_REJECTED
    if args.json:
        print(_dump_json(found.to_json()))
    else:
        print(found.render(verbose=args.verbose))
    return EXIT_OK


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {text}')
    return value


def _non_negative(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f'expected a non-negative integer, got {text}')
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog='tfsparse', description='Parse sentences with typed feature structure grammars')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', dest='verbosity', action='count', default=0,
                        help='log progress (-v) or every step (-vv) to standard error')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    check = commands.add_parser('check', help='validate a grammar and report lints')
    check.add_argument('grammar', help='grammar file, or the name of a shipped grammar')
    check.set_defaults(func=cmd_check)

    computation = argparse.ArgumentParser(add_help=False)
    computation.add_argument('grammar', help='grammar file, or the name of a shipped grammar')
    computation.add_argument('sentence', help='whitespace separated words; may be empty')
    computation.add_argument('--no-filter', dest='filter', action='store_false',
                             help='keep every item, not just the most general ones')
    computation.add_argument('--max-iterations', type=_positive,
                             default=ComputationConfig.max_iterations)
    computation.add_argument('--full-fixpoint', action='store_true',
                             help='do not stop at the first successful iteration')
    computation.add_argument('--schedule', choices=['naive', 'agenda'], default='naive')
    computation.add_argument('--guard-acyclic', dest='guard_acyclic', action='store_true',
                             default=True, help='fail on the first cyclic item (default)')
    computation.add_argument('--no-guard-acyclic', dest='guard_acyclic', action='store_false')
    computation.add_argument('--sentinel-threshold', type=_positive, default=None,
                             help='warn about cells with more incomparable items than this')

    parse = commands.add_parser('parse', parents=[computation], help='decide membership')
    parse.add_argument('--witness', action='store_true',
                       help='print the structure of the accepting item')
    parse.set_defaults(func=cmd_parse)

    chart = commands.add_parser('chart', parents=[computation],
                                help='dump the fixpoint chart as JSON')
    chart.add_argument('--golden', action='store_true',
                       help='numbered text listing instead of JSON')
    chart.set_defaults(func=cmd_chart)

    derive = commands.add_parser('derive', help='search for a leftmost derivation')
    derive.add_argument('grammar', help='grammar file, or the name of a shipped grammar')
    derive.add_argument('sentence', help='whitespace separated words; may be empty')
    derive.add_argument('--max-steps', type=_non_negative, default=DEFAULT_MAX_STEPS)
    derive.add_argument('--verbose', action='store_true', help='print every sentential form')
    derive.add_argument('--json', action='store_true', help='print the derivation as JSON')
    derive.set_defaults(func=cmd_derive)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    log.debug(f'{args.command}: {vars(args)}')
    return args.func(args)


if __name__ == '__main__':
    sys.exit(main())
