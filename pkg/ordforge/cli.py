'''
Command line interface: `ordforge <command> [options]`.

Exit codes: cmp gives 0/1/2 for LT/EQ/GT; checks give 0 when everything
passes and 4 otherwise; 3 is a parse or formation error and 5 a usage or
configuration error.
'''
import argparse
import json
import logging
import sys

from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence

from ordforge.config import CliConfig
from ordforge.config import IncompatibleOptionsError
from ordforge.config import ValidationError
from ordforge.dilator import IncoherentDenotationsError
from ordforge.dilator import PreconditionError
from ordforge.dilator import SupportNotFoundError
from ordforge.dilator import check_finite_support
from ordforge.dilator import dilator_failures
from ordforge.dilator import supp_naturality_witness
from ordforge.functors import get_functor
from ordforge.harness import Report
from ordforge.harness import check_functor_laws
from ordforge.harness import descent_fuzz
from ordforge.harness import run_suite
from ordforge.notation import Notation
from ordforge.notation import NotationError
from ordforge.notation import ZERO
from ordforge.orders import OrderError
from ordforge.orders import all_morphisms
from ordforge.orders import finite
from ordforge.runner import output
from ordforge.searchtree import AxiomTemplate
from ordforge.searchtree import OpenFormulaError
from ordforge.searchtree import build_tree
from ordforge.searchtree import parse_formula
from ordforge.searchtree import show_sequent
from ordforge.syntax import ParseError
from ordforge.systems import DENOTED
from ordforge.systems import SYSTEMS
from ordforge.systems import UnknownSystemError
from ordforge.systems import build_system
from ordforge.systems import load_denotations

logger = logging.getLogger('ordforge.cli')

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_CHECK = 4
EXIT_USAGE = 5

CMP_EXIT = {'LT': 0, 'EQ': 1, 'GT': 2}

FUNCTORS_CHECKED = ('identity', 'exp2', 'eps')


class UsageError(Exception):
    '''Error for command lines argparse rejects'''
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument('--system', help=f'notation system: {", ".join(SYSTEMS)}')
    common.add_argument('--base', help='base order: fin:N, omega or list:[a,b,...]')
    common.add_argument('--bound', type=int, help='term size bound')
    common.add_argument('--seed', type=int, help='random seed')
    common.add_argument('--format', choices=('text', 'json'), help='output format')
    common.add_argument('--config', help='YAML file with options')
    common.add_argument('--levels', type=int, help='number of Ω_n levels for om-x and om-d')
    common.add_argument('--denotations', help='identity, exp2, const:K or a JSON table')
    common.add_argument('--depth', type=int, help='search tree depth')
    common.add_argument('--witness-bound', dest='witness_bound', type=int,
                        help='numerals tried for universal number quantifiers')
    common.add_argument('--template', help='axiom template C(X)')
    common.add_argument('--trials', type=int, help='descent fuzz trials')
    common.add_argument('--max-order', dest='max_order', type=int,
                        help='largest fin:n the functor checks range over')
    common.add_argument('--debug', action='store_true', default=None, help='debug logging and tracebacks')
    common.add_argument('--quiet', action='store_true', default=None, help='only print results')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(prog='ordforge', description='Relativized ordinal notation systems and their checks.')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    for name, help_text in (('parse', 'parse a term and print its normal form'),
                            ('normalize', 'bring a term into normal form')):
        command = commands.add_parser(name, parents=[common], help=help_text)
        command.add_argument('term')
    compare = commands.add_parser('cmp', parents=[common], help='compare two terms')
    compare.add_argument('left')
    compare.add_argument('right')
    commands.add_parser('enumerate', parents=[common], help='list a fragment in ascending order')
    check = commands.add_parser('check', parents=[common], help='run the property checks')
    check.add_argument('suite', nargs='?', default='all', choices=('all',) + SYSTEMS)
    dilcheck = commands.add_parser('dilcheck', parents=[common], help='check the dilator properties of a functor')
    dilcheck.add_argument('functor')
    tree = commands.add_parser('tree', parents=[common], help='build the deduction chain tree')
    tree.add_argument('goal', nargs='*', help='formulas of the root sequent')
    fuzz = commands.add_parser('fuzz', parents=[common], help='random descending chains')
    fuzz.add_argument('start', nargs='?', help='start term (default: largest fragment term)')
    return parser


def _setup_logging(config: CliConfig) -> None:
    if config['debug']:
        level = logging.DEBUG
    elif config['quiet']:
        level = logging.ERROR
    else:
        level = logging.INFO
    logging.basicConfig(stream=sys.stderr, level=level,
                        format='%(levelname)s %(name)s: %(message)s')


def _system(config: CliConfig, name: Optional[str] = None) -> Notation:
    name = name or config['system']
    denotations = load_denotations(config['denotations'], config['bound']) if name in DENOTED else None
    return build_system(name, config['base'], config['levels'], denotations)


def _emit(config: CliConfig, text: str, data: Any) -> None:
    if config['format'] == 'json':
        print(json.dumps(data, ensure_ascii=False, default=str))
    else:
        print(text)


def _emit_reports(config: CliConfig, reports: Sequence[Report]) -> int:
    if config['format'] == 'json':
        print(json.dumps([r.to_dict() for r in reports], ensure_ascii=False, default=str))
    else:
        for report in reports:
            print(report.to_text())
    failed = [r for r in reports if not r.passed]
    output(f'{len(reports) - len(failed)} of {len(reports)} checks passed',
           config['quiet'] or config['format'] == 'json')
    return EXIT_CHECK if failed else EXIT_OK


def cmd_parse(config: CliConfig, text: str) -> int:
    system = _system(config)
    term = system.parse(text)
    shown = system.show(term)
    _emit(config, shown, {'system': system.name, 'input': text, 'term': shown, 'size': system.size(term)})
    return EXIT_OK


def cmd_normalize(config: CliConfig, text: str) -> int:
    system = _system(config)
    term = system.parse(text)
    shown = system.show(term)
    _emit(config, shown, {'system': system.name, 'input': text, 'term': shown,
                          'changed': shown != text.strip()})
    return EXIT_OK


def cmd_cmp(config: CliConfig, left: str, right: str) -> int:
    system = _system(config)
    relation = system.compare(system.parse(left), system.parse(right)).name
    _emit(config, relation, {'system': system.name, 'left': left, 'right': right, 'relation': relation})
    return CMP_EXIT[relation]


def cmd_enumerate(config: CliConfig) -> int:
    system = _system(config)
    frag = system.fragment(config['bound'])
    shown = [system.show(t) for t in frag]
    _emit(config, '\n'.join(shown), {'system': frag.system, 'base': frag.base,
                                     'bound': frag.bound, 'terms': shown})
    return EXIT_OK


def cmd_check(config: CliConfig, suite: str) -> int:
    names = SYSTEMS if suite == 'all' else (suite,)
    systems = [_system(config, name) for name in names]
    functors = FUNCTORS_CHECKED if suite == 'all' else ()
    reports = run_suite(systems, functors, bound=config['bound'], seed=config['seed'],
                        trials=config['trials'], max_order=config['max_order'],
                        debug=config['debug'], quiet=config['quiet'])
    return _emit_reports(config, reports)


def cmd_dilcheck(config: CliConfig, name: str) -> int:
    try:
        F = get_functor(name, config['bound'])
    except KeyError as e:
        raise UnknownSystemError(str(e)) from e
    max_order = config['max_order']
    reports = [check_functor_laws(F, max_order)]

    witnesses = list(dilator_failures(F, max_order))
    reports.append(Report('range-condition', F.name, F.bound, not witnesses, witnesses[:5],
                          {'max_order': max_order}))

    X = finite(max_order)
    support_witnesses: List[Dict[str, Any]] = []
    for term in F.terms(X):
        try:
            n, _ = check_finite_support(F, X, term)
        except SupportNotFoundError as e:
            support_witnesses.append({'term': F.show(X, term), 'error': str(e)})
            continue
        if n != len(F.support(X, term)):
            support_witnesses.append({'term': F.show(X, term), 'least_n': n,
                                      'support': sorted(F.support(X, term))})
    reports.append(Report('finite-support', F.name, F.bound, not support_witnesses,
                          support_witnesses[:5], {'order': X.describe(), 'terms': len(F.terms(X))}))

    naturality: List[Dict[str, Any]] = []
    for m in range(max_order + 1):
        for n in range(m, max_order + 1):
            for f in all_morphisms(finite(m), finite(n)):
                witness = supp_naturality_witness(F, f)
                if witness is not None:
                    naturality.append(witness)
    reports.append(Report('supp-naturality', F.name, F.bound, not naturality, naturality[:5],
                          {'max_order': max_order}))
    return _emit_reports(config, reports)


def cmd_tree(config: CliConfig, goal: Sequence[str]) -> int:
    template = AxiomTemplate.from_text(config['template'])
    root = [parse_formula(text) for text in goal]
    chains = build_tree(root, template, config['depth'], config['witness_bound'])
    if config['format'] == 'json':
        print(chains.to_json())
        return EXIT_OK
    print(f'status: {chains.status}')
    if chains.truncated:
        print(f'universal number quantifiers truncated at {chains.witness_bound} witnesses')
    for node in chains.tree:
        mark = ' *' if chains.axiomatic[node] else ''
        print(f'{"  " * len(node)}{list(node)} {show_sequent(chains.sequents[node])}{mark}')
    return EXIT_OK


def cmd_fuzz(config: CliConfig, start: Optional[str]) -> int:
    system = _system(config)
    if start is not None:
        term = system.parse(start)
    else:
        terms = system.fragment(config['bound']).terms
        term = terms[-1] if terms else ZERO
    report = descent_fuzz(system, term, config['trials'], config['seed'],
                          config['step_budget'], config['mutation_budget'])
    return _emit_reports(config, [report])


def run(args: argparse.Namespace) -> int:
    options = {key: value for key, value in vars(args).items()
               if key not in ('command', 'config', 'term', 'left', 'right', 'suite',
                              'functor', 'goal', 'start')}
    config = CliConfig(options, config_path=args.config)
    _setup_logging(config)
    if args.command == 'check':
        if args.suite != 'all':
            config['system'] = args.suite
        for name in (SYSTEMS if args.suite == 'all' else (args.suite,)):
            config.check_compatibility(name)
    elif args.command not in ('tree', 'dilcheck'):
        config.check_compatibility()
    logger.debug(f'Running {args.command} with {config}')

    if args.command == 'parse':
        return cmd_parse(config, args.term)
    if args.command == 'normalize':
        return cmd_normalize(config, args.term)
    if args.command == 'cmp':
        return cmd_cmp(config, args.left, args.right)
    if args.command == 'enumerate':
        return cmd_enumerate(config)
    if args.command == 'check':
        return cmd_check(config, args.suite)
    if args.command == 'dilcheck':
        return cmd_dilcheck(config, args.functor)
    if args.command == 'tree':
        return cmd_tree(config, args.goal)
    return cmd_fuzz(config, args.start)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return run(args)
    except ParseError as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_PARSE
    except (NotationError, OpenFormulaError) as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, ValidationError, IncompatibleOptionsError,
            UnknownSystemError, OrderError, PreconditionError, IncoherentDenotationsError) as e:
        logger.debug('Usage error', exc_info=True)
        print(f'usage error: {e}', file=sys.stderr)
        return EXIT_USAGE
