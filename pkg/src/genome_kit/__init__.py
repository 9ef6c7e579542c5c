"""genome-kit: review, score and enrich epic ontologies against competency questions."""

from .cq import (BGP, CQ, CoverageRow, CoverageTable, CQKind, Decision, DecisionKind, Var,
                 coverage_from_counts, decide_satisfaction, dedup_corpus, eval_pattern,
                 evaluate_corpus, parse_cq_corpus, parse_pattern)
from .enrich import (FekrMetadata, IterationRecord, Patch, apply_patch, export_fekr, fekr_metadata,
                     load_patch_dir, parse_patch, run_iteration, suggest_internal_fixes)
from .errors import (ConfigError, CorpusError, GenomeError, GuardError, MatrixError, PatchError,
                     PopulateError, TemplateError, TurtleSyntaxError)
from .graph import Graph, PrefixMap, graph_equal, match_triples
from .lint import LintConfig, LintFinding, LintReport, run_lint
from .populate import PopulateConfig, PopulationReport, mint_iri, populate_graph
from .report import render_report
from .schema import (OntologyProfile, RelationshipMatrix, RigidityTag, SchemaView, build_schema_view,
                     classify_profile, default_matrix, parse_matrix)
from .stats import significance_test
from .template import KRRow, RelationPhrase, expand_relation, parse_kr_template
from .terms import BNode, Iri, Literal, Triple
from .turtle import parse_turtle, serialize_turtle

__version__ = "0.1.0"
