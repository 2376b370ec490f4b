import argparse
import logging
import os
import sys
from collections.abc import Callable, Sequence

from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError

from app.cli.commands import (
    RELATION_ALIASES,
    oracle_command,
    ord_command,
    pigeonhole_command,
    ramsey_bounds_command,
    witness_check_command,
    witness_list_command,
)
from app.models.errors import OrdinalError, OrdinalParseError
from app.services.report_formatter import report_formatter

load_dotenv()

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2

Command = Callable[[argparse.Namespace], BaseModel | list[BaseModel]]


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value else default


def build_parser() -> argparse.ArgumentParser:
    """Build the ordcalc command line; defaults come from the environment."""
    seed = _env_int("ORDINAL_SEED", 20240601)
    max_vertices = _env_int("ORDINAL_ORACLE_MAX_VERTICES", 6)
    max_classes = _env_int("ORDINAL_ORACLE_MAX_CLASSES", 20000)
    jobs = _env_int("ORDINAL_JOBS", 1)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    common.add_argument("--jobs", type=int, default=jobs, help="worker processes for oracle searches")

    parser = argparse.ArgumentParser(
        prog="ordcalc",
        description="Partition calculus of countable ordinals below epsilon_0",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    ordinal = commands.add_parser("ord", help="ordinal arithmetic")
    ops = ordinal.add_subparsers(dest="op", required=True)
    for op in ("eval", "cb", "tail"):
        sub = ops.add_parser(op, parents=[common])
        sub.add_argument("a")
    for op in ("cmp", "add", "mul", "lsub"):
        sub = ops.add_parser(op, parents=[common])
        sub.add_argument("a")
        sub.add_argument("b")
    for op in ("nsum", "mrsum"):
        sub = ops.add_parser(op, parents=[common])
        sub.add_argument("values", nargs="+")
    fund = ops.add_parser("fund", parents=[common])
    fund.add_argument("a")
    fund.add_argument("n", type=int)
    ordinal.set_defaults(handler=ord_command)

    pigeonhole = commands.add_parser("pigeonhole", help="pigeonhole numbers", parents=[common])
    pigeonhole.add_argument("variant", choices=["cl", "top", "classical"])
    pigeonhole.add_argument("targets", nargs="+")
    pigeonhole.add_argument("--copies", type=int, help="repeat a single target this many times")
    pigeonhole.set_defaults(handler=pigeonhole_command)

    ramsey = commands.add_parser("ramsey", help="ordinal Ramsey bounds")
    ramsey_ops = ramsey.add_subparsers(dest="op", required=True)
    bounds = ramsey_ops.add_parser("bounds", parents=[common])
    bounds.add_argument("--rel", choices=sorted(RELATION_ALIASES), required=True)
    bounds.add_argument("--alpha", required=True)
    bounds.add_argument("--k", type=int, required=True)
    bounds.add_argument("--allow-lm-bound", action="store_true", help="use R(K*_n, L_3) <= n^2 when needed")
    bounds.add_argument("--exclude-draft", action="store_true", help="ignore results from unpublished drafts")
    bounds.add_argument("--max-vertices", type=int, default=max_vertices)
    bounds.add_argument("--max-classes", type=int, default=max_classes, help="isomorphism classes kept per search level")
    bounds.set_defaults(handler=ramsey_bounds_command)

    witness = commands.add_parser("witness", help="lower-bound colorings")
    witness_ops = witness.add_subparsers(dest="op", required=True)
    witness_ops.add_parser("list", parents=[common]).set_defaults(handler=witness_list_command)
    check = witness_ops.add_parser("check", parents=[common])
    check.add_argument("name")
    check.add_argument("--trials", type=int, default=1000)
    check.add_argument("--sample-size", type=int, default=20)
    check.add_argument("--seed", type=int, default=seed)
    check.set_defaults(handler=witness_check_command)

    oracle = commands.add_parser("oracle", help="finite Ramsey numbers", parents=[common])
    oracle.add_argument("kind", choices=["ramsey", "digraph"])
    oracle.add_argument("m", type=int)
    oracle.add_argument("k", type=int)
    oracle.add_argument("--max-vertices", type=int, default=max_vertices)
    oracle.add_argument("--max-classes", type=int, default=max_classes)
    oracle.add_argument("--no-prune", action="store_true", help="extend every graph instead of one per isomorphism class")
    oracle.set_defaults(handler=oracle_command)

    return parser


def run(args: argparse.Namespace) -> int:
    handler: Command = args.handler
    try:
        result = handler(args)
    except OrdinalParseError as exc:
        print(f"ordcalc: parse error at position {exc.position}: {exc}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    except ValidationError as exc:
        print(f"ordcalc: invalid arguments: {exc.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    except OrdinalError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"ordcalc: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR

    render = report_formatter.to_json if args.json else report_formatter.to_text
    print(render(result))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE_ERROR

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
