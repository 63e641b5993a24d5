"""
Command-line entry point: ``skein-cli homfly|colored|ov ...``.

Exit codes: 0 success, 1 a verification check failed, 2 malformed input or
usage, 3 a request outside the supported scope.
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from pydantic import ValidationError

from models.options import LinkName, Normalization, Orientation, OutputFormat
from models.run_config import RunConfig
from models.skein import BraidRequest
from services.combinatorics import Partition
from services.homfly_engine import BraidWord
from services.ov_solver import normalize_unknot, partition_function, solve_kernel
from services.verification_suite import run_all
from settings.config import settings
from utils.exceptions import InconsistentClosureError, ParseError, ScopeLimitError
from utils.rendering import (
    colored_response,
    homfly_response,
    partition_function_schema,
    render,
    render_homfly,
    render_partition_function,
    render_reports,
    render_reports_text,
    render_tensor,
    rows_to_csv,
    tensor_schema,
    to_ascii,
)

# Configure logging
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_SCOPE = 3


class UsageError(Exception):
    """Raised instead of argparse's own exit so the caller keeps control of the status."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, default=None, help="Truncation degree N")
    common.add_argument("--normalization", choices=[n.value for n in Normalization], default=None)
    common.add_argument("--orientation", choices=[o.value for o in Orientation], default=None)
    common.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat], default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--ascii", action="store_true", help="Use O, gamma and W[2,1] instead of symbols")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="skein-cli", description="Exact HOMFLYPT skein computations")
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    homfly = commands.add_parser("homfly", parents=[common], help="HOMFLYPT value of a braid closure")
    homfly.add_argument("braid", help="'n=2; w=1,1' or a JSON braid request")

    colored = commands.add_parser("colored", parents=[common], help="Colored value for colors with at most two boxes")
    colored.add_argument("braid")
    colored.add_argument("partition", help="e.g. [2] or 1,1")
    colored.add_argument("--components", default=None, help="Comma-separated component indices")

    ov = commands.add_parser("ov", help="Annulus solution, kernel, partition functions and verification")
    actions = ov.add_subparsers(dest="action", parser_class=_Parser)
    actions.required = True
    actions.add_parser("psi", parents=[common], help="Diagonal solution truncated at --degree")
    actions.add_parser("kernel", parents=[common], help="Kernel basis on bidegree (--degree, --degree)")
    function = actions.add_parser("partition-function", parents=[common], help="Colored partition function")
    function.add_argument("--link", choices=[link.value for link in LinkName], default=LinkName.UNKNOT.value)
    verify = actions.add_parser("verify", parents=[common], help="Run the verification suite")
    verify.add_argument("--trials", type=int, default=None, help="Randomized battery size")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    flags = {
        "degree": args.degree,
        "normalization": args.normalization,
        "orientation": args.orientation,
        "output_format": args.output_format,
        "seed": args.seed,
        "ascii": args.ascii,
    }
    return RunConfig(**{key: value for key, value in flags.items() if value is not None})


def _braid(text: str, config: RunConfig):
    """Braid and normalization from the grammar form or a JSON ``BraidRequest``."""
    if text.lstrip().startswith("{"):
        request = BraidRequest.parse_raw(text)
        return BraidWord(request.strands, tuple(request.word)), Normalization(request.normalization)
    return BraidWord.parse(text), config.normalization


def _components(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(piece) for piece in text.split(",") if piece.strip()]
    except ValueError:
        raise ParseError(f"Malformed component list {text!r}", 0, text)


def _finish(text: str, config: RunConfig) -> str:
    return to_ascii(text) if config.ascii else text


def cmd_homfly(args: argparse.Namespace, config: RunConfig) -> int:
    braid, normalization = _braid(args.braid, config)
    response = homfly_response(braid, normalization)
    header = ["braid", "value", "framing_monomial", "normalization"]
    rows = [[response.braid, response.value, response.framing_monomial, response.normalization]]
    text = render_homfly(response, braid.strands)
    print(_finish(render(config.output_format, text, response.dict(exclude_none=True), header, rows), config))
    return EXIT_OK


def cmd_colored(args: argparse.Namespace, config: RunConfig) -> int:
    braid, normalization = _braid(args.braid, config)
    lam = Partition.parse(args.partition)
    response = colored_response(braid, lam, _components(args.components), normalization)
    header = ["braid", "partition", "value", "framing_monomial", "normalization"]
    rows = [[response.braid, str(lam), response.value, response.framing_monomial, response.normalization]]
    text = render_homfly(response, braid.strands)
    print(_finish(render(config.output_format, text, response.dict(exclude_none=True), header, rows), config))
    return EXIT_OK


def _tensor_rows(schema) -> List[List[object]]:
    return [
        [str(Partition(tuple(term.left))), str(Partition(tuple(term.right))), term.coefficient, str(term.framing_tag)]
        for term in schema.terms
    ]


def cmd_ov(args: argparse.Namespace, config: RunConfig) -> int:
    header = ["left", "right", "coefficient", "framing_tag"]
    if args.action == "psi":
        psi = normalize_unknot(config.degree).psi
        schema = tensor_schema(psi, config.degree, config.ascii)
        text = render_tensor(psi, config.ascii)
        print(_finish(render(config.output_format, text, schema.dict(), header, _tensor_rows(schema)), config))
        return EXIT_OK

    if args.action == "kernel":
        vectors = solve_kernel(config.degree)
        schemas = [tensor_schema(vector, config.degree, config.ascii) for vector in vectors]
        text = "\n".join(render_tensor(vector, config.ascii) for vector in vectors)
        rows = [row for schema in schemas for row in _tensor_rows(schema)]
        payload = [schema.dict() for schema in schemas]
        print(_finish(render(config.output_format, text, payload, header, rows), config))
        return EXIT_OK

    if args.action == "partition-function":
        result = partition_function(LinkName(args.link), config.degree, config.orientation)
        schema = partition_function_schema(result)
        text = render_partition_function(schema)
        rows = [
            [str(Partition(tuple(entry.partition))), entry.value, entry.framing_monomial, entry.cross_checked]
            for entry in schema.coefficients
        ]
        csv_header = ["partition", "value", "framing_monomial", "cross_checked"]
        print(_finish(render(config.output_format, text, schema.dict(), csv_header, rows), config))
        return EXIT_OK

    reports = run_all(config.degree, seed=config.seed, trials=args.trials)
    if config.output_format == OutputFormat.TEXT:
        output = render_reports_text(reports)
    elif config.output_format == OutputFormat.CSV:
        output = rows_to_csv(
            ["name", "status", "witness", "runtime", "degree", "seed"],
            [[r.name, r.status, r.witness or "", f"{r.runtime:.3f}", r.degree, r.seed] for r in reports],
        )
    else:
        output = render_reports(reports)
    print(_finish(output, config))
    failed = [report.name for report in reports if not report.passed]
    if failed:
        logger.warning(f"Failed checks: {', '.join(failed)}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


COMMANDS = {"homfly": cmd_homfly, "colored": cmd_colored, "ov": cmd_ov}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config(args)
        return COMMANDS[args.command](args, config)
    except UsageError as e:
        print(f"usage error: {str(e)}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"parse error: {str(e)}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as e:
        print(f"invalid input: {str(e)}", file=sys.stderr)
        return EXIT_USAGE
    except ScopeLimitError as e:
        print(f"scope limit: {str(e)}", file=sys.stderr)
        return EXIT_SCOPE
    except InconsistentClosureError as e:
        logger.error(f"Unknot normalization failed: {str(e)}")
        print(f"error: {str(e)}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except ValueError as e:
        print(f"invalid input: {str(e)}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
