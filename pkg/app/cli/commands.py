import argparse
import logging

from pydantic import BaseModel

from app.models.errors import OrdinalError
from app.models.ordinal import Ordinal, compare
from app.models.schemas import BoundQuery, EngineSettings, OrdinalResult, WitnessListing, WitnessReport
from app.services.finite_oracles import FiniteOracleService
from app.services.milner_rado import milner_rado
from app.services.ordinal_parser import ordinal_parser
from app.services.pigeonhole import PigeonholeCalculator
from app.services.ramsey_engine import RamseyEngine
from app.services.report_formatter import report_formatter
from app.services.witnesses import witnesses

logger = logging.getLogger(__name__)

RELATION_ALIASES = {"cl": "closed", "top": "topological", "classical": "classical"}


def _parse_all(texts: list[str]) -> list[Ordinal]:
    return [ordinal_parser.parse(text) for text in texts]


def _binary(args: argparse.Namespace) -> tuple[Ordinal, Ordinal]:
    a, b = _parse_all([args.a, args.b])
    return a, b


def ord_command(args: argparse.Namespace) -> OrdinalResult:
    """Ordinal arithmetic; every result is rendered in canonical form."""
    op = args.op
    if op in ("eval", "cb", "tail"):
        (a,) = _parse_all([args.a])
        inputs = [str(a)]
        if op == "eval":
            result = str(a)
        elif op == "cb":
            result = str(a.cb_rank)
        else:
            head, exponent = a.tail_decompose()
            result = f"{head} + w^({exponent})" if not head.is_zero else f"w^({exponent})"
    elif op == "fund":
        (a,) = _parse_all([args.a])
        inputs = [str(a), str(args.n)]
        result = str(a.fundamental(args.n))
    elif op == "nsum":
        values = _parse_all(args.values)
        inputs = [str(v) for v in values]
        total = values[0]
        for value in values[1:]:
            total = total.natural_sum(value)
        result = str(total)
    elif op == "mrsum":
        values = _parse_all(args.values)
        inputs = [str(v) for v in values]
        result = str(milner_rado.sum_all(values))
    else:
        a, b = _binary(args)
        inputs = [str(a), str(b)]
        if op == "cmp":
            result = compare(a, b)
        elif op == "add":
            result = str(a + b)
        elif op == "mul":
            result = str(a * b)
        elif op == "lsub":
            result = str(a.left_subtract(b))
        else:
            raise OrdinalError(f"unknown operation {op}")
    return OrdinalResult(operation=op, inputs=inputs, result=result)


def pigeonhole_command(args: argparse.Namespace) -> OrdinalResult:
    targets = _parse_all(args.targets)
    if args.copies is not None:
        if len(targets) != 1:
            raise OrdinalError("--copies repeats a single target")
        targets = targets * args.copies
    calculator = PigeonholeCalculator()
    inputs = [str(t) for t in targets]

    if args.variant == "cl":
        return OrdinalResult(
            operation="pigeonhole-cl", inputs=inputs, result=str(calculator.closed(targets)), cite="Thm 3.2"
        )
    lookup = calculator.topological_lookup if args.variant == "top" else calculator.classical_lookup
    found = lookup(targets)
    if found is None:
        raise OrdinalError(f"no {args.variant} pigeonhole value is known for these targets")
    return OrdinalResult(
        operation=f"pigeonhole-{args.variant}", inputs=inputs, result=str(found.value), cite=found.cite
    )


def ramsey_bounds_command(args: argparse.Namespace) -> BaseModel:
    settings = EngineSettings(
        allow_lm_bound=args.allow_lm_bound,
        exclude_draft=args.exclude_draft,
        oracle_max_vertices=args.max_vertices,
        oracle_max_classes=args.max_classes,
        jobs=args.jobs,
    )
    engine = RamseyEngine(settings)
    query = BoundQuery(relation=RELATION_ALIASES[args.rel], alpha=ordinal_parser.parse(args.alpha), k=args.k)
    logger.debug("bounds query %s", query)
    return report_formatter.format_bounds(engine.best_bounds(query))


def witness_list_command(args: argparse.Namespace) -> list[BaseModel]:
    listings: list[BaseModel] = []
    for name in witnesses.names():
        w = witnesses.get(name)
        listings.append(
            WitnessListing(name=w.name, description=w.description, classes=len(w.classes), edges=len(w.adjacency))
        )
    return listings


def witness_check_command(args: argparse.Namespace) -> WitnessReport:
    """Exact class-graph and shape checks followed by the sampled report."""
    w = witnesses.get(args.name)
    exact: list[str] = []
    if not witnesses.verify_graph_triangle_free(w):
        exact.append("class graph has a triangle")
    exact.extend(witnesses.verify_partition_symbolic(w))

    report = witnesses.sampled_homogeneity_report(w, args.sample_size, args.trials, args.seed)
    violations = exact + report.violations
    return report.model_copy(update={"violations": violations, "verdict": "fail" if violations else "pass"})


def oracle_command(args: argparse.Namespace) -> BaseModel:
    oracles = FiniteOracleService(max_vertices=args.max_vertices, max_classes=args.max_classes, jobs=args.jobs)
    search = oracles.finite_ramsey if args.kind == "ramsey" else oracles.digraph_ramsey
    return search(args.m, args.k, prune=not args.no_prune)
