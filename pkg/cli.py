"""Command line front end.

Exit codes: 0 definitive success, 2 definitive negative (no embedding, vector
invalid, no action), 3 inconclusive (budget, overflow or missing catalog),
1 usage or parse error. Reports go to stdout, logs to stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ValidationError

from audit import run_audit
from catalog import (
    Catalog,
    CatalogParseError,
    DeclaredOrderMismatchError,
    InvalidParameterError,
    format_catalog,
    load_catalogs,
    resolve_group_spec,
    two_generated_classes,
)
from config import RunConfig, configure_logging, load_config
from exclusivity import minimal_positive_measures, weakly_exclusive_verdict
from fpgroups import CosetOverflowError, PresentationError, parse_presentation, todd_coxeter
from permcore import CeilingExceededError, PermutationParseError, find_monomorphism
from report import (
    ActionSearchReport,
    CosetReport,
    EmbeddingReport,
    MeasureReport,
    MinimalMeasuresReport,
    ReportError,
    SignatureListReport,
    TrichotomyReport,
    TwoGeneratedReport,
    emit_report,
)
from result_cache import CacheFormatError, ResultCache, input_digest
from riemann_hurwitz import (
    GeneratingVector,
    GenusRangeError,
    PreconditionError,
    SignatureError,
    acts_on,
    enumerate_signatures,
    format_measure,
    parse_declared_signature,
    rh_measure,
    verify_vector,
)
from trichotomy import GeometryProfile, ProfileError, trichotomy_classify

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

USAGE_ERRORS = (
    PermutationParseError,
    PresentationError,
    SignatureError,
    CatalogParseError,
    DeclaredOrderMismatchError,
    InvalidParameterError,
    GenusRangeError,
    PreconditionError,
    ProfileError,
    ReportError,
    CacheFormatError,
    ValidationError,
    ValueError,
    KeyError,
    OSError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(result: BaseModel, config: RunConfig) -> None:
    sys.stdout.write(emit_report(result, config.output_format))


def _config(args: argparse.Namespace) -> RunConfig:
    return load_config(
        search_node_budget=args.node_budget,
        coset_budget=args.coset_budget,
        parallelism=args.workers,
        output_format=args.format,
        catalog_paths=args.catalog,
        cache_path=args.cache,
        use_cache=False if args.no_cache else None,
    )


def _catalog(config: RunConfig) -> Optional[Catalog]:
    return load_catalogs(config.catalog_paths) if config.catalog_paths else None


def _cache(config: RunConfig) -> Optional[ResultCache]:
    return ResultCache(config.cache_path) if config.use_cache else None


def cmd_measure(args: argparse.Namespace, config: RunConfig) -> int:
    signature, _, _ = parse_declared_signature(args.signature)
    _emit(MeasureReport(signature=str(signature), measure=format_measure(rh_measure(signature))), config)
    return EXIT_OK


def cmd_measures(args: argparse.Namespace, config: RunConfig) -> int:
    found = minimal_positive_measures(args.k)
    measures = [{"measure": format_measure(mu), "signature": str(s)} for mu, s in found]
    notes = []
    if len(found) >= 2:
        mu, s = found[1]
        notes.append(f"second smallest measure {format_measure(mu)} is attained at {s}; printed with periods {{1,2,8}}")
    _emit(MinimalMeasuresReport(measures=measures, notes=notes), config)
    return EXIT_OK


def cmd_signatures(args: argparse.Namespace, config: RunConfig) -> int:
    found = enumerate_signatures(args.genus, args.order)
    _emit(SignatureListReport(genus=args.genus, order=args.order, signatures=[str(s) for s in found]), config)
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_find_action(args: argparse.Namespace, config: RunConfig) -> int:
    catalog = _catalog(config)
    entry = resolve_group_spec(args.group, catalog)
    G = entry.group
    inputs = {
        "degree": G.degree,
        "generators": [str(g) for g in G.generators],
        "genus": args.genus,
        "node_budget": config.search_node_budget,
    }
    cache = _cache(config)
    report = cache.get("find-action", inputs, catalog, config) if cache else None
    if report is None:
        result = acts_on(G, args.genus, entry.id, config.search_node_budget, config.parallelism)
        report = ActionSearchReport(
            group=entry.id,
            group_order=G.order,
            genus=args.genus,
            status=result.status,
            record=result.record,
            searched=[list(pair) for pair in result.searched],
        )
        if cache and report.status == "found":
            cache.put("find-action", inputs, report)
    _emit(report, config)
    return {"found": EXIT_OK, "absent": EXIT_NEGATIVE}.get(report.status, EXIT_INCONCLUSIVE)


def cmd_verify_vector(args: argparse.Namespace, config: RunConfig) -> int:
    """Input file: {"group": spec, "signature": "(0;5,2,4)", "hyperbolic": [...], "elliptic": [...]}."""
    data = json.loads(Path(args.path).read_text(encoding="utf-8"))
    entry = resolve_group_spec(data["group"], _catalog(config))
    signature, declared, notes = parse_declared_signature(data["signature"])
    vector = GeneratingVector(
        degree=entry.group.degree,
        hyperbolic=data.get("hyperbolic", []),
        elliptic=data.get("elliptic", []),
        periods=declared,
    )
    report = verify_vector(entry.group, signature, vector, notes)
    _emit(report, config)
    return EXIT_OK if report.verdict == "VALID" else EXIT_NEGATIVE


def cmd_todd_coxeter(args: argparse.Namespace, config: RunConfig) -> int:
    presentation = parse_presentation(args.presentation)
    max_cosets = args.max_cosets or config.coset_budget
    table = todd_coxeter(presentation, max_cosets)
    report = CosetReport(presentation=str(presentation), status=table.status, max_cosets=max_cosets)
    if table.status == "complete":
        group = table.to_perm_group(presentation)
        report = CosetReport(
            presentation=str(presentation),
            status=table.status,
            max_cosets=max_cosets,
            order=group.order,
            generators={n: str(table.generator_permutation(n)) for n in presentation.generator_names},
        )
    _emit(report, config)
    return EXIT_OK if table.status == "complete" else EXIT_INCONCLUSIVE


def cmd_embed(args: argparse.Namespace, config: RunConfig) -> int:
    catalog = _catalog(config)
    source = resolve_group_spec(args.source, catalog)
    target = resolve_group_spec(args.target, catalog)
    result = find_monomorphism(
        source.group,
        target.group,
        node_budget=config.search_node_budget,
        definitive_ceiling=config.definitive_embedding_ceiling,
    )
    images = [str(g) for g in result.monomorphism.images] if result.monomorphism else []
    report = EmbeddingReport(
        source=source.id,
        target=target.id,
        source_order=source.order,
        target_order=target.order,
        status=result.status,
        method=result.method,
        definitive=result.definitive,
        images=images,
    )
    _emit(report, config)
    return {"found": EXIT_OK, "absent": EXIT_NEGATIVE}.get(result.status, EXIT_INCONCLUSIVE)


def cmd_genus_report(args: argparse.Namespace, config: RunConfig) -> int:
    catalog = _catalog(config)
    inputs = {
        "genus": args.genus,
        "catalog": input_digest({"text": format_catalog(catalog)}) if catalog else None,
        "node_budget": config.search_node_budget,
        "coset_budget": config.coset_budget,
    }
    cache = _cache(config)
    verdict = cache.get("genus-report", inputs, catalog, config) if cache else None
    if verdict is None:
        verdict = weakly_exclusive_verdict(args.genus, catalog, config)
        if cache:
            cache.put("genus-report", inputs, verdict)
    _emit(verdict, config)
    return EXIT_OK if verdict.result == "impossible" else EXIT_INCONCLUSIVE


def _singular_kind(text: str) -> tuple:
    if text in ("empty", "0", "zero_dim"):
        return ("empty", None) if text == "empty" else ("zero_dim", 0)
    if text == "positive":
        return "positive_dim", None
    if text.isdigit():
        return "positive_dim", int(text)
    raise UsageError(f"--singular takes empty, 0, positive or a dimension, got {text!r}")


def cmd_trichotomy(args: argparse.Namespace, config: RunConfig) -> int:
    singular, dim = _singular_kind(args.singular)
    profile = GeometryProfile(
        ambient_dim=args.dim,
        singular=singular,
        singular_dim=dim,
        has_order_two_with_fixed_points=args.involution_fixes,
        context=args.context,
    )
    outcome = trichotomy_classify(profile)
    _emit(TrichotomyReport(profile=profile, outcome=outcome), config)
    return EXIT_OK


def cmd_two_generated(args: argparse.Namespace, config: RunConfig) -> int:
    catalog = _catalog(config)
    if catalog is None:
        raise UsageError("two-generated needs --catalog or HF_CATALOG")
    found = two_generated_classes(catalog, args.order, config.search_node_budget)
    report = TwoGeneratedReport(
        order=args.order,
        groups=[g.id for g in found.groups],
        coverage=catalog.coverage,
        unresolved=[list(pair) for pair in found.unresolved],
    )
    _emit(report, config)
    return EXIT_INCONCLUSIVE if report.unresolved else EXIT_OK


def cmd_audit(args: argparse.Namespace, config: RunConfig) -> int:
    report = run_audit(config)
    _emit(report, config)
    return EXIT_OK if report.failed == 0 else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "markdown"], default=None, help="Report format")
    common.add_argument("--workers", type=int, default=None, help="Parallel signature searches")
    common.add_argument("--node-budget", type=int, default=None, help="Backtracking node budget")
    common.add_argument("--coset-budget", type=int, default=None, help="Todd-Coxeter coset limit")
    common.add_argument("--catalog", action="append", default=None, help="Catalog file (repeatable)")
    common.add_argument("--cache", default=None, help="Result cache path")
    common.add_argument("--no-cache", action="store_true", help="Neither read nor write the result cache")
    common.add_argument("--log-level", default=None, help="Logging level on stderr")

    parser = _Parser(
        prog="hurwitz",
        description="Finite group actions on surfaces: Riemann-Hurwitz data, generating vectors, "
        "weak-exclusivity certificates and the singular-set trichotomy.",
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands", parser_class=_Parser)

    p = subparsers.add_parser("measure", parents=[common], help="Riemann-Hurwitz measure of a signature")
    p.add_argument("signature", help='Signature such as "(0;2,3,7)"')

    p = subparsers.add_parser("measures", parents=[common], help="The k smallest positive measures")
    p.add_argument("k", type=int)

    p = subparsers.add_parser("signatures", parents=[common], help="Signatures of an order on a genus")
    p.add_argument("genus", type=int)
    p.add_argument("order", type=int)

    p = subparsers.add_parser("find-action", parents=[common], help="Search an action of a group on a genus")
    p.add_argument("group", help="Builtin name, catalog id or inline generators")
    p.add_argument("genus", type=int)

    p = subparsers.add_parser("verify-vector", parents=[common], help="Verify a generating vector from JSON")
    p.add_argument("path", help="Path to vector JSON file")

    p = subparsers.add_parser("todd-coxeter", parents=[common], help="Enumerate cosets of a presentation")
    p.add_argument("presentation", help='e.g. "<x,y | x^4, y^6, (x*y)^2, (x^-1*y)^2>"')
    p.add_argument("--max-cosets", type=int, default=None)

    p = subparsers.add_parser("embed", parents=[common], help="Search a monomorphism H -> G")
    p.add_argument("source")
    p.add_argument("target")

    p = subparsers.add_parser("genus-report", parents=[common], help="Weak-exclusivity verdict for a genus")
    p.add_argument("genus", type=int)

    p = subparsers.add_parser("trichotomy", parents=[common], help="Classify a geometry profile")
    p.add_argument("--dim", type=int, required=True, help="Ambient dimension")
    p.add_argument("--singular", required=True, help="empty, 0, positive, or the singular dimension")
    p.add_argument("--involution-fixes", action="store_true", help="Some order-2 element has fixed points")
    p.add_argument("--context", choices=["manifold", "lattice"], default="manifold")

    p = subparsers.add_parser("two-generated", parents=[common], help="Count 2-generated catalog groups")
    p.add_argument("order", type=int)

    subparsers.add_parser("audit-paper", aliases=["audit"], parents=[common], help="Run the reproduction audit")
    return parser


COMMANDS = {
    "measure": cmd_measure,
    "measures": cmd_measures,
    "signatures": cmd_signatures,
    "find-action": cmd_find_action,
    "verify-vector": cmd_verify_vector,
    "todd-coxeter": cmd_todd_coxeter,
    "embed": cmd_embed,
    "genus-report": cmd_genus_report,
    "trichotomy": cmd_trichotomy,
    "two-generated": cmd_two_generated,
    "audit-paper": cmd_audit,
    "audit": cmd_audit,
}


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    if not args.command:
        parser.print_help()
        return EXIT_USAGE
    configure_logging(args.log_level)
    try:
        config = _config(args)
        return COMMANDS[args.command](args, config)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (CeilingExceededError, CosetOverflowError) as exc:
        sys.stderr.write(f"inconclusive in {args.command}: {exc}\n")
        return EXIT_INCONCLUSIVE
    except USAGE_ERRORS as exc:
        sys.stderr.write(f"error in {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
