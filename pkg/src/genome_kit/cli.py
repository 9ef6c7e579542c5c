"""``genome-kit`` command line: review, evaluate, populate, enrich, iterate, export."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import enrich as _enrich
from .config import RunConfig, resolve_config
from .cq import NEXT_ACTION, decide_satisfaction, dedup_corpus, evaluate_corpus, parse_cq_corpus
from .errors import ConfigError, GenomeError, GuardError, PopulateError, TemplateError
from .graph import Graph
from .lint import run_lint
from .populate import PopulateConfig, parse_predicate_map, populate_graph
from .report import render_report
from .schema import RelationshipMatrix, build_schema_view, default_matrix, parse_matrix
from .template import parse_kr_template
from .turtle import parse_turtle, serialize_turtle

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2

log = logging.getLogger("genome_kit")


class CommandError(GenomeError):
    """Usage problem detected after argument parsing (e.g. a required path is missing)."""


def _read(path: str | None, what: str) -> str:
    if not path:
        raise CommandError(f"--{what} is required for this command")
    return Path(path).read_text(encoding="utf-8")


def load_graph(path: str | None) -> Graph:
    return parse_turtle(_read(path, "ontology"), source=path)


def load_corpus(path: str | None):
    return dedup_corpus(parse_cq_corpus(_read(path, "corpus")))


def load_matrix(cfg: RunConfig, g: Graph) -> RelationshipMatrix:
    if cfg.matrix_path:
        return parse_matrix(_read(cfg.matrix_path, "matrix"), cfg.matrix_path)
    local = build_schema_view(g).local_namespaces
    return default_matrix(local[0]) if local else RelationshipMatrix()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_review(cfg: RunConfig) -> int:
    g = load_graph(cfg.ontology_path)
    report = run_lint(build_schema_view(g), load_matrix(cfg, g), cfg.lint_config())
    _emit(report.to_json() + "\n" if cfg.output_format == "json" else report.to_markdown(), cfg.out)
    return EXIT_VALIDATION if report.error_count else EXIT_OK


def cmd_evaluate(cfg: RunConfig) -> int:
    g = load_graph(cfg.ontology_path)
    table = evaluate_corpus(g, load_corpus(cfg.corpus_path))
    decision = decide_satisfaction(table, cfg.lower, cfg.upper)
    if cfg.output_format == "json":
        text = json.dumps({"table": table.to_dict(), "decision": decision.to_dict(),
                           "next_action": NEXT_ACTION[decision.value]}, indent=2) + "\n"
    else:
        text = render_report(table, "markdown")
        text += f"\nDecision: {decision.value.value} (coverage {table.considered.pct_answered}%)\n"
        text += f"Next action: {NEXT_ACTION[decision.value]}\n"
        if table.no_pattern_ids:
            text += "Factual questions without a pattern: " + ", ".join(table.no_pattern_ids) + "\n"
    _emit(text, cfg.out)
    return EXIT_OK


def cmd_populate(cfg: RunConfig) -> int:
    g = load_graph(cfg.ontology_path)
    rows = parse_kr_template(_read(cfg.template_path, "template"))
    local = build_schema_view(g).local_namespaces
    base = cfg.base_namespace or (g.prefixes.entries.get("") or (local[0] if local else None))
    if not base:
        raise ConfigError("no base namespace: set base_namespace or declare an empty prefix in the ontology")
    predicate_map = {}
    if cfg.predicate_map_path:
        predicate_map = parse_predicate_map(_read(cfg.predicate_map_path, "predicate-map"), cfg.predicate_map_path)
    pcfg = PopulateConfig(base, cfg.character_class or base + "Character", strict=cfg.strict,
                          predicate_map=predicate_map, auto_declare=not cfg.strict)
    out, report = populate_graph(g, rows, pcfg)
    for w in report.warnings:
        log.warning(w)
    print(json.dumps(report.to_dict(), indent=2), file=sys.stderr)
    _emit(serialize_turtle(out), cfg.out)
    return EXIT_OK


def _patches(cfg: RunConfig) -> list:
    if not cfg.patch_dirs:
        raise CommandError("--patch is required for this command")
    return [_enrich.load_patch_dir(p) for p in cfg.patch_dirs]


def cmd_enrich(cfg: RunConfig) -> int:
    g = load_graph(cfg.ontology_path)
    for patch in _patches(cfg):
        g, report = _enrich.apply_patch(g, patch)
        for w in report.warnings:
            log.warning(w)
        print(f"{patch.provenance.value} patch '{patch.note}': +{report.added} -{report.removed}", file=sys.stderr)
    if cfg.internal_fixes:
        fixes = _enrich.suggest_internal_fixes(run_lint(build_schema_view(g), load_matrix(cfg, g), cfg.lint_config()))
        g, report = _enrich.apply_patch(g, fixes)
        print(f"internal fixes: +{report.added} -{report.removed} ({fixes.note})", file=sys.stderr)
    _emit(serialize_turtle(g), cfg.out)
    return EXIT_OK


def _iteration_markdown(result) -> str:
    lines = ["| Pass | Coverage | Decision | Lint errors | Patches applied |", "| --- | --- | --- | --- | --- |"]
    for r in result.records:
        lines.append(f"| {r.index} | {r.coverage * 100:.4f} | {r.decision.value.value} | "
                     f"{r.lint_error_count} | {'; '.join(r.patches_applied) or '-'} |")
    tail = f"\nFinal decision: {result.decision.value.value}"
    if result.truncated:
        tail += " (stopped: max iterations reached)"
    return "\n".join(lines) + tail + f"\nNext action: {NEXT_ACTION[result.decision.value]}\n"


def cmd_iterate(cfg: RunConfig) -> int:
    g = load_graph(cfg.ontology_path)
    corpus = load_corpus(cfg.corpus_path)
    patches = [_enrich.load_patch_dir(p) for p in cfg.patch_dirs]
    result = _enrich.run_iteration(g, corpus, load_matrix(cfg, g), patches, (cfg.lower, cfg.upper),
                                   cfg.max_iters, internal_fixes=cfg.internal_fixes,
                                   lint_config=cfg.lint_config())
    log_text = (json.dumps(result.to_dict(), indent=2) + "\n" if cfg.output_format == "json"
                else _iteration_markdown(result))
    sys.stdout.write(log_text)
    if cfg.out:
        Path(cfg.out).write_text(serialize_turtle(result.graph), encoding="utf-8")
    return EXIT_OK


def cmd_export(cfg: RunConfig, iterations: int) -> int:
    g = load_graph(cfg.ontology_path)
    table = evaluate_corpus(g, load_corpus(cfg.corpus_path))
    decision = decide_satisfaction(table, cfg.lower, cfg.upper)
    meta = _enrich.fekr_metadata(decision, iterations, cfg.timestamp)
    _emit(_enrich.export_fekr(g, meta), cfg.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML config file (overrides $GENOME_CONFIG)")
    common.add_argument("--ontology", dest="ontology_path", help="ontology in Turtle")
    common.add_argument("--corpus", dest="corpus_path", help="competency-question corpus (TSV)")
    common.add_argument("--matrix", dest="matrix_path", help="relationship matrix file")
    common.add_argument("--patch", dest="patch_dirs", action="append", default=[],
                        help="patch directory (repeatable, applied in order)")
    common.add_argument("--template", dest="template_path", help="KR template CSV")
    common.add_argument("--predicate-map", dest="predicate_map_path", help="phrase-to-property map file")
    common.add_argument("--lower", type=float, help="unsatisfactory threshold (fraction)")
    common.add_argument("--upper", type=float, help="satisfactory threshold (fraction, inclusive)")
    common.add_argument("--upper-namespace", dest="upper_namespaces", action="append", default=[],
                        help="upper-ontology namespace for the alignment check (repeatable)")
    common.add_argument("--format", dest="output_format", choices=("markdown", "json"))
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--max-iters", dest="max_iters", type=int)
    common.add_argument("--strict", action="store_true", default=None)
    common.add_argument("--internal-fixes", dest="internal_fixes", action="store_true", default=None,
                        help="also apply lint auto-fixes after each patch")
    common.add_argument("--base-namespace", dest="base_namespace")
    common.add_argument("--character-class", dest="character_class")
    common.add_argument("--default-domain", dest="default_domain")
    common.add_argument("--default-range", dest="default_range")
    common.add_argument("--timestamp", help="export timestamp (ISO-8601); defaults to now")
    common.add_argument("--print-config", action="store_true", help="print the effective config and exit")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="genome-kit", description="Ontology review, CQ coverage and enrichment.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("review", parents=[common], help="lint the ontology and classify its profile")
    sub.add_parser("evaluate", parents=[common], help="coverage table and decision for a CQ corpus")
    sub.add_parser("populate", parents=[common], help="populate the ontology from a KR template")
    sub.add_parser("enrich", parents=[common], help="apply patches (and optional internal fixes)")
    sub.add_parser("iterate", parents=[common], help="run the evaluate/enrich loop")
    export = sub.add_parser("export", parents=[common], help="export a satisfactory model as FEKR")
    export.add_argument("--iterations", type=int, default=1, help="iteration count recorded in provenance")
    return parser


COMMANDS = {
    "review": cmd_review,
    "evaluate": cmd_evaluate,
    "populate": cmd_populate,
    "enrich": cmd_enrich,
    "iterate": cmd_iterate,
}


def run_command(argv: list[str] | None = None, env: dict | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    flags = vars(args).copy()
    command = flags.pop("command")
    print_config = flags.pop("print_config")
    iterations = flags.pop("iterations", 1)
    flags.pop("verbose")
    try:
        cfg = resolve_config(flags, env)
        if print_config:
            print(json.dumps(cfg.to_dict(), indent=2))
            return EXIT_OK
        if command == "export":
            return cmd_export(cfg, iterations)
        return COMMANDS[command](cfg)
    except (GuardError, ConfigError, PopulateError, TemplateError, CommandError) as exc:
        print(f"genome-kit {command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, GenomeError) as exc:
        print(f"genome-kit {command}: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
