"""Command-line surface: classify, moments, stieltjes-xi, verify, transform,
recurrence and catalog {list, show, suite}.

Exit codes: 0 success, 1 computational error or failed check, 2 input error.
"""
import json
import logging
import sys
from argparse import ArgumentParser
from dataclasses import dataclass

import mpmath as mp

from semiclassical.commons.conf import Conf
from semiclassical.commons.errors import ConfigError, InputError, SemiclassicalError
from semiclassical.commons.helper import load_json_input, render
from semiclassical.core.exact import DEFAULT_DIGITS
from semiclassical.core.hyper import DEFAULT_TOLERANCE
from semiclassical.service.catalog_service import CatalogService
from semiclassical.service.functional_service import FunctionalService
from semiclassical.version import VERSION

logger = logging.getLogger(__name__)

DESCRIPTION = 'Semiclassical discrete functionals: Pearson pairs, moments, Stieltjes equations and transforms'

MIN_PRECISION = 20
OUTPUT_MODES = ('json', 'table')


@dataclass(frozen=True)
class CliConfig:
    precision: int = DEFAULT_DIGITS
    tolerance: str = DEFAULT_TOLERANCE
    output: str = 'json'
    catalog_path: str = None

    def __post_init__(self):
        if not isinstance(self.precision, int) or self.precision < MIN_PRECISION:
            raise ConfigError(
                'precision must be an integer of at least {} digits, got {!r}'.format(MIN_PRECISION, self.precision))
        try:
            tol = mp.mpf(self.tolerance)
        except (ValueError, TypeError):
            raise ConfigError('tolerance {!r} is not a number'.format(self.tolerance))
        if not tol > 0:
            raise ConfigError('tolerance must be positive, got {}'.format(self.tolerance))
        if self.output not in OUTPUT_MODES:
            raise ConfigError('output must be one of {}, got {!r}'.format(', '.join(OUTPUT_MODES), self.output))

    @classmethod
    def from_args(cls, args, conf):
        precision = conf.d.get('precision') or {}
        catalog = conf.d.get('catalog') or {}
        return cls(
            precision=args.precision if args.precision is not None else precision.get('digits', DEFAULT_DIGITS),
            tolerance=args.tol if args.tol is not None else precision.get('tolerance', DEFAULT_TOLERANCE),
            output=args.output or conf.d.get('output') or 'json',
            catalog_path=args.catalog_path or catalog.get('path'),
        )

    def apply(self, conf):
        """Write the effective settings back into ``conf.d`` for the services."""
        precision = dict(conf.d.get('precision') or {})
        precision['digits'] = self.precision
        precision['tolerance'] = self.tolerance
        catalog = dict(conf.d.get('catalog') or {})
        catalog['path'] = self.catalog_path
        conf.d = dict(conf.d, precision=precision, catalog=catalog, output=self.output)
        return conf


## argument parsing

def _common_arguments(parser):
    parser.add_argument(
        '-c', '--conf-file', action='store', type=str, metavar='CONF_FILE',
        help='CONF_FILE (yaml) as local path.'
    )
    parser.add_argument('--precision', type=int, metavar='DIGITS', help='working precision in decimal digits')
    parser.add_argument('--tol', type=str, metavar='TOL', help='series tolerance, e.g. 1e-30')
    parser.add_argument('--output', choices=OUTPUT_MODES, help='json (default) or table')
    parser.add_argument('--catalog-path', type=str, metavar='PATH', help='catalog fixture file')


def _input_arguments(parser):
    parser.add_argument('--input', type=str, default='-', metavar='FILE', help='JSON input file, - for stdin')
    parser.add_argument('--catalog', type=str, metavar='ID', help='use a catalog entry instead of --input')
    parser.add_argument(
        '--param', action='append', default=[], metavar='NAME=VALUE', help='catalog parameter assignment'
    )


def build_parser():
    parser = ArgumentParser(prog='semiclassical', description=DESCRIPTION)
    parser.add_argument('--version', action='version', version=VERSION)
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    for name, help_text in (
            ('classify', 'Pearson pair, class and moment convergence'),
            ('stieltjes-xi', 'derive the Stieltjes difference equation')):
        sub = commands.add_parser(name, help=help_text)
        _common_arguments(sub)
        _input_arguments(sub)

    sub = commands.add_parser('moments', help='moments in the falling-factorial basis')
    _common_arguments(sub)
    _input_arguments(sub)
    sub.add_argument('-K', type=int, metavar='K', help='highest moment index')
    sub.add_argument('--brute-force', action='store_true', help='cross-check by direct summation')

    sub = commands.add_parser('verify', help='residual of the Stieltjes equation at sample points')
    _common_arguments(sub)
    _input_arguments(sub)
    sub.add_argument('--samples', nargs='+', metavar='T', help='sample points, e.g. 21/2 51/2')
    sub.add_argument('--residual-tol', type=str, metavar='TOL', help='residual tolerance, default 1e-20')

    sub = commands.add_parser('transform', help='apply Uvarov, Christoffel, Geronimus, truncation or symmetrization')
    _common_arguments(sub)
    _input_arguments(sub)
    sub.add_argument('--transform', type=str, metavar='JSON', help='transform object or list, as JSON text')
    sub.add_argument('-K', type=int, metavar='K', help='highest moment index')

    sub = commands.add_parser('recurrence', help='three-term recurrence from the moments')
    _common_arguments(sub)
    _input_arguments(sub)
    sub.add_argument('-K', type=int, metavar='K', help='number of recurrence coefficients')
    sub.add_argument('--method', choices=('hankel', 'chebyshev'), help='recurrence algorithm')

    catalog = commands.add_parser('catalog', help='the catalog of families')
    catalog_commands = catalog.add_subparsers(dest='catalog_command', metavar='CATALOG_COMMAND')
    catalog_commands.required = True
    sub = catalog_commands.add_parser('list', help='list entries')
    _common_arguments(sub)
    sub.add_argument('--kind', choices=('canonical', 'subcase', 'variant'))
    sub = catalog_commands.add_parser('show', help='show one entry')
    _common_arguments(sub)
    sub.add_argument('entry_id', metavar='ID')
    sub = catalog_commands.add_parser('suite', help='run the regression suite')
    _common_arguments(sub)
    sub.add_argument('--id', dest='ids', action='append', metavar='ID', help='restrict to an entry, repeatable')
    sub.add_argument('--residual-tol', type=str, metavar='TOL', help='agreement tolerance, default 1e-20')
    return parser


def _parse_params(pairs):
    params = {}
    for pair in pairs:
        name, sep, value = pair.partition('=')
        if not sep or not name:
            raise InputError('parameter {!r} must look like NAME=VALUE'.format(pair))
        params[name.strip()] = value.strip()
    return params


def _body(args):
    if getattr(args, 'catalog', None):
        return {'catalog': args.catalog, 'params': _parse_params(args.param)}
    body = load_json_input(args.input)
    if not isinstance(body, dict):
        raise InputError('input must be a JSON object')
    return body


## commands

def run_command(args, functional, catalog):
    """Dispatch a parsed command.

    :return: JSON-ready result and whether its check passed
    :rtype: tuple(dict, bool)
    """
    if args.command == 'catalog':
        if args.catalog_command == 'list':
            return catalog.list(args.kind), True
        if args.catalog_command == 'show':
            return catalog.show(args.entry_id), True
        report = catalog.suite(args.ids, args.residual_tol)
        return report.to_dict(), report.passed

    body = _body(args)
    if getattr(args, 'K', None) is not None:
        body['K'] = args.K
    if args.command == 'classify':
        return functional.classify(body), True
    if args.command == 'moments':
        if args.brute_force:
            body['brute_force'] = True
        return functional.moments(body), True
    if args.command == 'stieltjes-xi':
        return functional.stieltjes_xi(body), True
    if args.command == 'verify':
        if args.samples:
            body['samples'] = args.samples
        if args.residual_tol:
            body['tol'] = args.residual_tol
        result = functional.verify(body)
        return result, result['passed']
    if args.command == 'transform':
        if args.transform:
            try:
                body['transform'] = json.loads(args.transform)
            except ValueError as e:
                raise InputError('--transform is not valid JSON: {}'.format(e))
        return functional.transform(body), True
    if args.method:
        body['method'] = args.method
    result = functional.recurrence(body)
    return result, result['orthogonality']['passed']


def main(argv=None):
    args = build_parser().parse_args(argv)
    output = args.output or 'json'
    try:
        conf = Conf(args.conf_file)
        logging.basicConfig(level=(conf.d.get('logging') or {}).get('level', 'WARNING'))
        cli_config = CliConfig.from_args(args, conf)
        output = cli_config.output
        cli_config.apply(conf)
        catalog = CatalogService(conf)
        functional = FunctionalService(conf, catalog)
        result, passed = run_command(args, functional, catalog)
    except SemiclassicalError as e:
        logger.debug('%s: %s', e.kind, e.message)
        print(render(e.to_dict(), output))
        return e.exit_code
    print(render(result, output))
    return 0 if passed else 1


if __name__ == '__main__':
    sys.exit(main())
