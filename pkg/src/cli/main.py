"""
Command line front end.

Records go to standard output as JSON lines, a summary table and the log
go to standard error. Exit codes: 0 success, 1 verification failure,
2 budget exhausted or result unknown, 3 parse or usage error.
"""
import argparse
import logging
import os
import sys
from typing import List, Optional, Sequence

from pydantic import BaseModel

from src.config.settings import (APP_NAME, APP_VERSION, DEFAULT_ELEMENT_CAP,
                                 DEFAULT_ENUM_CAP, DEFAULT_TIME_BUDGET,
                                 DEFAULT_WORKERS, LOG_LEVEL)
from src.core.derangement_graph import derangement_graph, spectrum
from src.core.ekr import EkrAnalyzer, EkrReport
from src.core.exceptions import (BudgetExceededError, EkrLabError,
                                 GraphTooLargeError, GroupError,
                                 GroupTooLargeError,
                                 SpecParseError, VerificationError)
from src.core.products import ProductReport, check_product
from src.core.witness import (STANDARD_M20_PATTERN, RefutationCertificate,
                              internal_product_repair, m20_certificate,
                              pattern_from_text, t_intersecting_certificate)
from src.utils.logging_config import setup_logging
from src.utils.reporting import (GraphDumpRecord, ScalarRecord, print_summary,
                                 spectrum_record, write_record)
from src.utils.spec_parser import (build_factor, build_groups_per_record,
                                   load_group_file, parse_spec_file)
from .batch_worker import BatchWorker

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_BUDGET = 2
EXIT_PARSE = 3

# a verification failure outranks an exhausted budget
_SEVERITY = {EXIT_OK: 0, EXIT_BUDGET: 1, EXIT_VERIFICATION: 2, EXIT_PARSE: 3}


class UsageError(EkrLabError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='ekrlab', description=f"{APP_NAME} {APP_VERSION}: EKR checks for permutation groups")
    parser.add_argument('--time-budget', type=float, default=DEFAULT_TIME_BUDGET,
                        help='seconds per solve (default %(default)s)')
    parser.add_argument('--element-cap', type=_positive_int, default=DEFAULT_ELEMENT_CAP,
                        help='maximum group order enumerated (default %(default)s)')
    parser.add_argument('--enum-cap', type=_positive_int, default=DEFAULT_ENUM_CAP,
                        help='maximum sets enumerated by the strict check (default %(default)s)')
    parser.add_argument('--workers', type=_positive_int, default=DEFAULT_WORKERS)
    parser.add_argument('--no-strict', action='store_true', help='skip the strict EKR check')
    parser.add_argument('--log-dir', default=None, help='also log to a timestamped file here')
    parser.add_argument('--log-level', default=LOG_LEVEL)

    commands = parser.add_subparsers(dest='command', parser_class=_Parser)
    commands.required = True

    check = commands.add_parser('check-ekr', help='full EKR report per group')
    check.add_argument('specfile')
    for name in ('alpha', 'omega', 'spectrum'):
        sub = commands.add_parser(name, help=f'{name} of each derangement graph')
        sub.add_argument('specfile')

    witness = commands.add_parser('witness', help='refutation certificates')
    witness_kinds = witness.add_subparsers(dest='witness_kind', parser_class=_Parser)
    witness_kinds.required = True
    m20 = witness_kinds.add_parser('m20', help='block pattern witness from a generator file')
    m20.add_argument('genfile')
    m20.add_argument('--pattern', default=None, help='four source:target block pairs, e.g. 1:1,2:2,3:3,4:5')
    tint = witness_kinds.add_parser('t-intersecting', help='t-intersecting family in Sym(2t)')
    tint.add_argument('--t', type=int, required=True)
    repair = witness_kinds.add_parser('m20-repair', help='verdict for the product with Sym(n)')
    repair.add_argument('--n', type=_positive_int, required=True)

    product = commands.add_parser('product', help='product verdicts next to factor verdicts')
    product.add_argument('--kind', choices=['external', 'internal', 'wreath'], required=True)
    product.add_argument('factors', nargs='+', help='factor atoms (sym:3, cycle:3, dihedral:4, young:2,2, '
                                                    'affine:5), generator files or labels from --spec')
    product.add_argument('--spec', default=None, help='spec file whose record labels may be used as factors')

    dump = commands.add_parser('dump-graph', help='edge list of a derangement graph')
    dump.add_argument('specfile')
    dump.add_argument('--label', default=None, help='record to dump (default: the first)')
    dump.add_argument('--output', default=None, help='write the edge list here instead of stdout')
    return parser


class Session:
    """Shared state of one invocation: budgets, collected records and the worst outcome."""

    def __init__(self, args):
        self.args = args
        self.records: List[BaseModel] = []
        self.exit_code = EXIT_OK
        self.analyzer = EkrAnalyzer(args.time_budget, args.enum_cap, not args.no_strict)

    def flag(self, code: int):
        if _SEVERITY[code] > _SEVERITY[self.exit_code]:
            self.exit_code = code

    def outcome_of(self, record: BaseModel) -> int:
        if isinstance(record, EkrReport):
            if record.ekr == 'unknown' or (record.strict_ekr == 'unknown' and not self.args.no_strict):
                return EXIT_BUDGET
        elif isinstance(record, ScalarRecord) and not record.exact:
            return EXIT_BUDGET
        elif isinstance(record, RefutationCertificate) and not record.verified:
            return EXIT_VERIFICATION
        elif isinstance(record, ProductReport):
            if False in (record.alpha_law_holds, record.graph_identity_holds, record.implication_holds):
                return EXIT_VERIFICATION
            if record.ekr == 'unknown':
                return EXIT_BUDGET
        return EXIT_OK

    def emit(self, records: Sequence[BaseModel]):
        for record in records:
            write_record(record, sys.stdout)
            self.records.append(record)
            self.flag(self.outcome_of(record))


def _exit_code_for(error: Exception) -> int:
    if isinstance(error, (SpecParseError, UsageError)):
        return EXIT_PARSE
    if isinstance(error, (BudgetExceededError, GroupTooLargeError, GraphTooLargeError)):
        return EXIT_BUDGET
    return EXIT_VERIFICATION


def _group_task(session: Session, command: str):
    analyzer = session.analyzer

    def task(item):
        spec, G, cap_error = item
        if cap_error is not None:
            raise cap_error
        if command == 'check-ekr':
            return [analyzer.analyze(G, spec.label)]
        if command == 'spectrum':
            return [spectrum_record(spec.label, G.description, spectrum(derangement_graph(G)))]
        report = EkrAnalyzer(analyzer.time_budget, analyzer.enum_cap, decide_strict=False).analyze(G, spec.label)
        if command == 'alpha':
            return [ScalarRecord(kind='alpha', label=spec.label, description=G.description, order=G.order,
                                 value=report.alpha, exact=report.alpha is not None,
                                 lower_bound=report.alpha_lower_bound,
                                 witness=report.witnesses.max_independent_set)]
        return [ScalarRecord(kind='omega', label=spec.label, description=G.description, order=G.order,
                             value=report.omega if report.omega_exact else None, exact=report.omega_exact,
                             lower_bound=report.omega, witness=report.witnesses.max_clique)]

    return task


def _run_batch(session: Session, command: str):
    args = session.args
    items = build_groups_per_record(parse_spec_file(args.specfile), args.element_cap)
    worker = BatchWorker(_group_task(session, command), label_of=lambda item: item[0].label, workers=args.workers)
    for result in worker.run(items):
        if result.error is not None:
            session.flag(_exit_code_for(result.error))
            continue
        session.emit(result.records)


def _run_witness(session: Session):
    args = session.args
    if args.witness_kind == 'm20':
        pattern = pattern_from_text(args.pattern) if args.pattern else STANDARD_M20_PATTERN
        G = load_group_file(args.genfile, 'M20', args.element_cap)
        session.emit([m20_certificate(G, pattern)])
    elif args.witness_kind == 't-intersecting':
        session.emit([t_intersecting_certificate(args.t)])
    else:
        session.emit([internal_product_repair(args.n)])


def _run_product(session: Session):
    args = session.args
    known, failed = {}, {}
    if args.spec is not None:
        for spec, G, cap_error in build_groups_per_record(parse_spec_file(args.spec), args.element_cap):
            if cap_error is None:
                known[spec.label] = G
            else:
                failed[spec.label] = cap_error
    factors = []
    for atom in args.factors:
        if atom in failed:
            raise failed[atom]
        if atom not in known and os.path.isfile(atom):
            factors.append(load_group_file(atom, element_cap=args.element_cap))
        else:
            factors.append(build_factor(atom, known, element_cap=args.element_cap))
    session.emit([check_product(args.kind, factors, session.analyzer, element_cap=args.element_cap)])


def _run_dump(session: Session):
    args = session.args
    items = build_groups_per_record(parse_spec_file(args.specfile), args.element_cap)
    if not items:
        raise SpecParseError("Spec file has no records", source=args.specfile)
    chosen = items[0]
    if args.label is not None:
        matches = [item for item in items if item[0].label == args.label]
        if not matches:
            raise SpecParseError(f"No record labelled {args.label!r}", source=args.specfile)
        chosen = matches[0]
    spec, G, cap_error = chosen
    if cap_error is not None:
        raise cap_error
    gamma = derangement_graph(G)
    if args.output is None:
        gamma.write_edge_list(sys.stdout)
        return
    with open(args.output, 'w', encoding='utf-8') as f:
        gamma.write_edge_list(f)
    session.emit([GraphDumpRecord(label=spec.label, vertex_count=gamma.vertex_count,
                                  edge_count=gamma.edge_count, path=args.output)])


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse the command line, run it and return the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_PARSE
    setup_logging(args.log_dir, args.log_level)
    session = Session(args)
    try:
        if args.command in ('check-ekr', 'alpha', 'omega', 'spectrum'):
            _run_batch(session, args.command)
        elif args.command == 'witness':
            _run_witness(session)
        elif args.command == 'product':
            _run_product(session)
        else:
            _run_dump(session)
    except SpecParseError as e:
        logger.error(f"Parse error: {e}")
        return EXIT_PARSE
    except (BudgetExceededError, GroupTooLargeError, GraphTooLargeError) as e:
        logger.error(f"Budget exhausted: {e}")
        session.flag(EXIT_BUDGET)
    except GroupError as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_PARSE
    except VerificationError as e:
        logger.error(f"Verification failed: {e}")
        session.flag(EXIT_VERIFICATION)
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        session.flag(EXIT_VERIFICATION)

    if args.command != 'dump-graph' or args.output is not None:
        print_summary(session.records, sys.stderr)
    sys.stdout.flush()
    return session.exit_code


def main():
    sys.exit(run())
