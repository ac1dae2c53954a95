"""Command-line interface: ``analyze`` a digraph and ``verify`` prime matrices."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from sympy import isprime, primerange

from .bowen_franks import bf_operator_from_adjacency, r_invariant_from_adjacency, zeta_report_from_adjacency
from .catalog import Instance, get_builtin, is_builtin
from .config import Settings
from .digraph import adjacency_matrix
from .errors import ConfigurationError, DigraphFormatError, PreconditionError
from .exporter import dumps, export_rows, read_digraph_json, read_voltage_assignment
from .models import CHECKS, VerificationMatrix
from .verifier import all_passed, default_workers, run_matrix
from .voltage import derived_adjacency, derived_digraph, equivariant_zeta

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_FORMAT = 2
EXIT_PRECONDITION = 3


def parse_primes(text: str) -> List[int]:
    """'a..b' (odd primes in the closed range) or a comma list of odd primes."""
    try:
        if '..' in text:
            low, high = (int(x) for x in text.split('..', 1))
            primes = [p for p in primerange(max(low, 3), high + 1)]
        else:
            primes = [int(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid prime list: {text!r}")
    bad = [p for p in primes if p < 3 or not isprime(p)]
    if bad:
        raise argparse.ArgumentTypeError(f"Not odd primes: {', '.join(str(p) for p in bad)}")
    if not primes:
        raise argparse.ArgumentTypeError(f"No primes in {text!r}")
    return primes


def parse_ells(text: str) -> List[Union[int, str]]:
    """Comma list of primes, 'p' for l = p, and 'below:N' for all primes below N."""
    ells: List[Union[int, str]] = []
    for item in (x.strip() for x in text.split(',')):
        if not item:
            continue
        if item == 'p':
            ells.append('p')
        elif item.startswith('below:'):
            try:
                bound = int(item[len('below:'):])
            except ValueError:
                raise argparse.ArgumentTypeError(f"Invalid bound in {item!r}")
            ells.extend(int(q) for q in primerange(2, bound))
        else:
            try:
                ell = int(item)
            except ValueError:
                raise argparse.ArgumentTypeError(f"Invalid l value: {item!r}")
            if not isprime(ell):
                raise argparse.ArgumentTypeError(f"{ell} is not prime")
            ells.append(ell)
    return ells


def parse_checks(text: str) -> List[str]:
    checks = [x.strip() for x in text.split(',') if x.strip()]
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise argparse.ArgumentTypeError(f"Unknown checks {unknown}; choose from {', '.join(CHECKS)}")
    return checks


def parse_group(text: str) -> List[int]:
    try:
        orders = [int(x) for x in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid group orders: {text!r}")
    if not orders or any(n < 1 for n in orders):
        raise argparse.ArgumentTypeError("Group orders must be positive")
    return orders


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help="raise log verbosity (repeatable); logs go to stderr")
    common.add_argument('--precision-cap', type=int, default=None,
                        help="largest l-adic precision before giving up (default 512)")

    parser = argparse.ArgumentParser(prog='stickelgraph',
                                     description="Bowen-Franks groups, zeta functions and Stickelberger covers of digraphs")
    sub = parser.add_subparsers(dest='command', required=True)

    analyze = sub.add_parser('analyze', parents=[common], help="zeta and Bowen-Franks report of one digraph")
    analyze.add_argument('target', help="digraph JSON file or builtin name such as example:2.4 or stickelberger:23")
    analyze.add_argument('--dump-matrices', action='store_true', help="include adjacency and BF operator")
    analyze.add_argument('--group', type=parse_group, default=None,
                         help="cyclic orders n1,n2,... of the voltage group; analyse the derived digraph")

    verify = sub.add_parser('verify', parents=[common], help="run verification checks over primes")
    verify.add_argument('--primes', type=parse_primes, required=True, help="a..b or a comma list of odd primes")
    verify.add_argument('--ells', type=parse_ells, default=None,
                        help="l values for theorem-b: primes, 'p' and 'below:N' (default p)")
    verify.add_argument('--checks', type=parse_checks, default=['a'], help="comma list from a,b,plus,artin")
    verify.add_argument('--workers', type=int, default=None, help="worker processes (default: CPU count)")
    verify.add_argument('--format', choices=('json', 'csv'), default='json')
    verify.add_argument('--out', type=Path, default=None, help="write the table here instead of stdout")
    return parser


def configure_logging(verbosity: int) -> None:
    level = max(logging.WARNING - 10 * verbosity, logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level, format='%(levelname)s %(name)s: %(message)s')


def _load_target(args: argparse.Namespace, settings: Settings) -> Instance:
    if args.group is None and is_builtin(args.target):
        return get_builtin(args.target, settings)
    if args.group is not None:
        voltage = read_voltage_assignment(args.target, args.group)
        return Instance(args.target, "derived digraph", derived_adjacency(voltage),
                        lambda: derived_digraph(voltage)[0], voltage)
    d, _ = read_digraph_json(args.target)
    return Instance(args.target, "digraph", adjacency_matrix(d), lambda: d)


def analyze_report(instance: Instance, settings: Settings, dump_matrices: bool = False) -> Dict[str, Any]:
    """JSON-ready zeta and Bowen-Franks report of an instance."""
    zeta = zeta_report_from_adjacency(instance.adjacency, settings)
    report: Dict[str, Any] = {
        'target': instance.name,
        'description': instance.description,
        'vertices': instance.adjacency.rows,
        'zeta': zeta.to_dict(),
        'bf': zeta.bf.to_dict(),
        'lattice_index': r_invariant_from_adjacency(instance.adjacency, settings) if zeta.delta == 0 else None,
    }
    if instance.voltage is not None:
        report['group'] = list(instance.voltage.group.cyclic_orders)
        report['equivariant_zeta'] = equivariant_zeta(instance.voltage, settings).to_json()
    if dump_matrices:
        report['matrices'] = {
            'adjacency': instance.adjacency.to_json(),
            'bf_operator': bf_operator_from_adjacency(instance.adjacency).to_json(),
        }
    return report


def cmd_analyze(args: argparse.Namespace, settings: Settings) -> int:
    instance = _load_target(args, settings)
    sys.stdout.write(dumps(analyze_report(instance, settings, args.dump_matrices)))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    ells = args.ells if args.ells is not None else ['p']
    matrix = VerificationMatrix(args.primes, ells, tuple(args.checks))
    rows = run_matrix(matrix, settings, args.workers or default_workers())
    text = export_rows(rows, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    for row in rows:
        if not row.failed:
            continue
        logger.error("%s failed at p = %d%s", row.check, row.p, f", l = {row.ell}" if row.ell else "")
    return EXIT_OK if all_passed(rows) else EXIT_CHECK_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_FORMAT
    configure_logging(args.verbose)
    try:
        settings = Settings.from_env().with_overrides(precision_cap=args.precision_cap)
        if args.command == 'analyze':
            return cmd_analyze(args, settings)
        return cmd_verify(args, settings)
    except (DigraphFormatError, ConfigurationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FORMAT
    except PreconditionError as exc:
        sys.stderr.write(f"precondition violated: {exc}\n")
        return EXIT_PRECONDITION
    except ArithmeticError as exc:
        sys.stderr.write(f"internal arithmetic error: {exc}\n")
        return EXIT_CHECK_FAILED
