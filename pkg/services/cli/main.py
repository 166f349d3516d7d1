"""
delpezzo-lines command line.

Every command builds a Report and renders it to stdout, as YAML text by
default or as JSON with --json. Exit codes: 0 on success, 1 when a
verification check fails, 2 on usage or domain errors.

Binary forms are comma-separated rationals ("p" or "p/q") in descending
powers of x0, e.g. --p4 "1,0,2,0,1" for (x0^2 + x1^2)^2. A form whose first
coefficient is negative must be attached with "=", as in --p4=-1,0,3,0,4.
"""

import argparse
import sys
from collections.abc import Sequence
from typing import Any

import structlog
import yaml

from services.cli.verification import GROUPS, VerificationService
from services.hasse_matching.service import HasseMatchingService, MatchingError
from services.pin_quadratic.service import (
    InadmissibleError,
    PinQuadraticError,
    PinQuadraticService,
    line_counts,
    special_basis,
)
from services.real_structures.catalog import CATALOG_VERSION
from services.real_structures.service import RealStructureError, RealStructureService
from services.roots.service import RootSystemError, RootSystemService
from services.tritangent.forms import BinaryForm, TritangentError, gram_matrix
from services.tritangent.service import (
    TritangentService,
    classify_tritangent,
    parse_sextic,
    symmetric_to_cone,
)
from shared.config import Settings, get_settings
from shared.lattice import LatticeError
from shared.logging_config import configure_logging
from shared.models import Report, ReportStatus

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

DOMAIN_ERRORS = (
    LatticeError,
    RootSystemError,
    RealStructureError,
    PinQuadraticError,
    MatchingError,
    TritangentError,
)


class UsageError(Exception):
    """argparse rejected the command line."""

    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}", EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="delpezzo-lines", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--json", action="store_true", help="render the report as JSON")
    # accepted after any subcommand too; SUPPRESS keeps a leading --json intact
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="render the report as JSON")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    commands.add_parser("catalog", parents=[common], help="list the eleven real deformation classes")

    lines = commands.add_parser("lines", parents=[common], help="real line counts for one class")
    lines.add_argument("--class", dest="label", required=True, help='class label, e.g. "RP2+Klein"')

    verify = commands.add_parser("verify", parents=[common], help="run the acceptance suite")
    for group in GROUPS:
        verify.add_argument(f"--{group}", action="store_true", help=f"run the {group} checks")
    verify.add_argument("--all", action="store_true", help="run every group (default)")

    hasse = commands.add_parser("hasse", parents=[common], help="Hasse poset and cover matching of a standard system")
    hasse.add_argument("--type", dest="label", required=True, choices=["E8", "E7", "D6", "D4", "A1"])
    hasse.add_argument("--emit-matching", action="store_true", help="include the matched pairs")
    hasse.add_argument("--emit-poset", action="store_true", help="include the cover edges")

    tritangent = commands.add_parser("tritangent", parents=[common], help="tritangent section tools")
    tritangent_commands = tritangent.add_subparsers(dest="action", required=True, parser_class=_Parser)
    classify = tritangent_commands.add_parser("classify", parents=[common], help="side and species of y = 0")
    classify.add_argument("--p2", required=True, help="3 coefficients")
    classify.add_argument("--p4", required=True, help="5 coefficients")
    classify.add_argument("--p6", required=True, help="7 coefficients")
    gram = tritangent_commands.add_parser("gram", parents=[common], help="moment matrix of p4 over the roots of q3")
    gram.add_argument("--p4", required=True, help="5 coefficients")
    gram.add_argument("--q3", required=True, help="4 coefficients")
    gram.add_argument("--shear", action="store_true", help="move a root at [0:1] by x0 -> x0 + k x1")

    sextic = commands.add_parser("sextic", parents=[common], help="plane sextic adapters")
    sextic_commands = sextic.add_subparsers(dest="action", required=True, parser_class=_Parser)
    symmetric = sextic_commands.add_parser("symmetric", parents=[common], help="symmetric plane sextic to (p2, p4, p6)")
    symmetric.add_argument("--coeffs", required=True, help='terms "ijk=c" for c x0^i x1^j x2^k')

    nodal = commands.add_parser("nodal", parents=[common], help="signed counts with k real nodes")
    nodal.add_argument("--k", type=int, required=True, choices=range(9), metavar="0..8")

    table = commands.add_parser("table", parents=[common], help="real tritangent sections for an arrangement")
    table.add_argument("--arrangement", required=True, help='"<4|0>", "<1|1>", "<|||>", ...')
    return parser


# =============================================================================
# Commands
# =============================================================================


class Commands:
    """Command handlers sharing one set of services.

    Handler names come from the command path, so service attributes carry a
    suffix wherever a command has the same name.
    """

    def __init__(self, settings: Settings):
        self.settings = settings
        self.roots = RootSystemService(settings)
        self.real_structures = RealStructureService(settings)
        self.pin_quadratic = PinQuadraticService(settings)
        self.hasse_service = HasseMatchingService(settings)
        self.tritangent = TritangentService(settings, self.real_structures, self.pin_quadratic)

    def catalog(self, args: argparse.Namespace) -> tuple[ReportStatus, dict[str, Any]]:
        classes = [self.real_structures.describe(entry) for entry in self.real_structures.catalog()]
        return ReportStatus.PASS, {"classes": classes}

    def lines(self, args: argparse.Namespace) -> tuple[ReportStatus, dict[str, Any]]:
        entry = self.real_structures.entry(args.label)
        result = self.pin_quadratic.lines(entry.structure)
        f = result.first
        count = line_counts(f)
        basis = special_basis(f)
        if basis is None:
            raise InadmissibleError(f"no special basis for chi {f.chi}")
        payload = {
            "class": entry.label,
            "eigen_type": entry.record.eigen_type,
            "real_lines": count.total,
            "hyperbolic": count.hyperbolic,
            "elliptic": count.elliptic,
            "signed_sum": count.signed_sum,
            "admissible_count": len(result.admissible),
            "counts_agree": result.counts_agree,
            "chi": list(f.chi),
            "special_basis": [list(r) for r in basis.roots],
            "smith_quotient_dimension": result.model.dimension,
            "euler_characteristic": result.model.euler_characteristic,
            "brown_invariants": list(result.brown_invariants),
        }
        return ReportStatus.PASS, payload

    def verify(self, args: argparse.Namespace) -> tuple[ReportStatus, dict[str, Any]]:
        groups = [g for g in GROUPS if getattr(args, g)]
        if args.all or not groups:
            groups = list(GROUPS)
        service = VerificationService(
            self.settings, self.roots, self.real_structures, self.pin_quadratic, self.hasse_service, self.tritangent
        )
        checks = service.run(groups)
        failed = [c.name for c in checks if not c.passed]
        payload = {
            "groups": groups,
            "total": len(checks),
            "passed": len(checks) - len(failed),
            "failed": failed,
            "checks": [c.model_dump() for c in checks],
        }
        return (ReportStatus.FAIL if failed else ReportStatus.PASS), payload

    def hasse(self, args: argparse.Namespace) -> tuple[ReportStatus, dict[str, Any]]:
        system = self.roots.standard_system(args.label)
        poset = self.hasse_service.poset(system)
        pairing = self.hasse_service.pairing(system)
        payload: dict[str, Any] = {
            "type": args.label,
            "simple_roots": [list(r) for r in system.roots],
            "nodes": len(poset.nodes),
            "covers": len(poset.covers),
            "pairs": len(pairing),
            "maximal": [list(r) for r in poset.maximal()],
        }
        if args.emit_poset:
            payload["cover_edges"] = [[list(f), list(g)] for f, g in poset.covers]
        if args.emit_matching:
            payload["matching"] = [[list(u), list(v)] for u, v in pairing.pairs]
        return ReportStatus.PASS, payload

    def tritangent_classify(self, args: argparse.Namespace) -> tuple[ReportStatus, dict[str, Any]]:
        verdict = classify_tritangent(
            BinaryForm.parse(args.p2, 2), BinaryForm.parse(args.p4, 4), BinaryForm.parse(args.p6, 6)
        )
        return ReportStatus.PASS, verdict.to_payload()

    def tritangent_gram(self, args: argparse.Namespace) -> tuple[ReportStatus, dict[str, Any]]:
        report = gram_matrix(BinaryForm.parse(args.p4, 4), BinaryForm.parse(args.q3, 3), shear=args.shear)
        return ReportStatus.PASS, report.to_payload()

    def sextic_symmetric(self, args: argparse.Namespace) -> tuple[ReportStatus, dict[str, Any]]:
        p2, p4, p6 = symmetric_to_cone(parse_sextic(args.coeffs))
        return ReportStatus.PASS, {"p2": p2.to_payload(), "p4": p4.to_payload(), "p6": p6.to_payload()}

    def nodal(self, args: argparse.Namespace) -> tuple[ReportStatus, dict[str, Any]]:
        return ReportStatus.PASS, self.tritangent.nodal(args.k)

    def table(self, args: argparse.Namespace) -> tuple[ReportStatus, dict[str, Any]]:
        count = self.tritangent.table(args.arrangement)
        expected = self.tritangent.expected(count.arrangement)
        payload = {
            "arrangement": count.arrangement,
            "plus_class": count.plus_class,
            "minus_class": count.minus_class,
            "total": count.total,
            "hyperbolic": count.hyperbolic,
            "elliptic": count.elliptic,
        }
        status = ReportStatus.PASS if count.as_tuple() == expected else ReportStatus.FAIL
        return status, payload


def _command_name(args: argparse.Namespace) -> str:
    action = getattr(args, "action", None)
    return f"{args.command} {action}" if action else args.command


def run(argv: Sequence[str] | None = None, settings: Settings | None = None) -> tuple[int, Report]:
    """
    Parse argv, run one command and return (exit code, report).

    Domain errors become a failed report with exit code 2.
    """
    settings = settings or get_settings()
    configure_logging(settings)
    parser = build_parser()

    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except UsageError as e:
        report = Report(command="usage", status=ReportStatus.FAIL, version=CATALOG_VERSION,
                        payload={"error": {"type": "UsageError", "message": str(e)}})
        return e.status, report
    except SystemExit as e:
        # --help and --version exit through argparse
        code = e.code if isinstance(e.code, int) else EXIT_USAGE
        return code, Report(command="help", status=ReportStatus.PASS, version=CATALOG_VERSION)

    command = _command_name(args)
    handler = getattr(Commands(settings), command.replace(" ", "_"))
    log = logger.bind(command=command)
    try:
        status, payload = handler(args)
    except DOMAIN_ERRORS as e:
        log.warning("command_failed", error_type=type(e).__name__, error=str(e))
        report = Report(command=command, status=ReportStatus.FAIL, version=CATALOG_VERSION,
                        payload={"error": {"type": type(e).__name__, "message": str(e)}})
        return EXIT_USAGE, report

    report = Report(command=command, status=status, version=CATALOG_VERSION, payload=payload)
    log.info("command_finished", status=status.value)
    return (EXIT_OK if report.passed else EXIT_CHECK_FAILED), report


def json_requested(argv: Sequence[str]) -> bool:
    """Whether --json was given, before or after the subcommand."""
    try:
        return bool(build_parser().parse_args(list(argv)).json)
    except (UsageError, SystemExit):
        return "--json" in argv


def render(report: Report, as_json: bool, indent: int = 2) -> str:
    if as_json:
        return report.model_dump_json(indent=indent)
    return yaml.safe_dump(report.model_dump(mode="json"), sort_keys=False, allow_unicode=True).rstrip()


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point."""
    arguments = list(sys.argv[1:] if argv is None else argv)
    settings = get_settings()
    code, report = run(arguments, settings)
    if report.command == "help":
        return code
    output = render(report, json_requested(arguments), settings.report.indent)
    stream = sys.stdout if report.command != "usage" else sys.stderr
    print(output, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
