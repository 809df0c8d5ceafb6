"""Sequential-question network attack taxonomy toolkit.

Classify attacks by answering Who / Where / How / What from structured
evidence, plan defence actions from the answers, audit the taxonomy's
requirements, and browse the golden corpus of worked classifications.
"""
from .audit import (
    AuditReport,
    ComparisonColumn,
    CriterionResult,
    audit,
    builtin_comparison_columns,
    builtin_manual_flags,
    render_comparison,
    render_report,
)
from .classifier import (
    ASSIGNED,
    UNKNOWN,
    Assignment,
    Classification,
    classification_from_answers,
    classification_from_dict,
    classification_to_dict,
    classify,
    classify_question,
)
from .corpus import (
    AttackDossier,
    Corpus,
    dossier_from_dict,
    dossier_to_dict,
    export_corpus,
    golden_corpus,
    import_corpus,
)
from .defense import (
    DefenseAction,
    DefensePlan,
    Trigger,
    builtin_actions,
    load_actions,
    plan,
    plan_to_dict,
)
from .errors import (
    DuplicateKeyError,
    DuplicateName,
    NotFound,
    ParseError,
    SchemaMismatch,
    TaxonomyError,
)
from .evidence import (
    AttackerKind,
    AttackerMotive,
    ChannelSignals,
    EvidenceRecord,
    Initiation,
    PlatformHint,
    ScopeHint,
    SourceCount,
    Symptom,
    Transport,
    evidence_from_dict,
    evidence_to_dict,
)
from .overlap import RuleOverlap, detect_rule_overlaps
from .rules import Condition, ConditionOp, Rule, builtin_rules, load_rules
from .schema import (
    Category,
    Question,
    SchemaViolation,
    TaxonomySchema,
    ViolationCode,
    builtin_sequential_schema,
    category_path,
    dump_schema,
    load_schema,
    validate_schema,
)

__version__ = "0.1.0"
