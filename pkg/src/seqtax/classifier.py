"""Deterministic, total classification of evidence against a taxonomy.

Evaluation is fully ordered: matching rules are ranked by priority first,
then category id, then rule id, so permuting the rule list never changes
the outcome. Questions with no matching rule are answered "unknown" —
absence of evidence is never turned into a guess.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .errors import NotFound, ParseError, SchemaMismatch
from .evidence import EvidenceRecord
from .rules import Rule, validate_rules
from .schema import Question, TaxonomySchema

ASSIGNED = "assigned"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Assignment:
    """One question's answer: either category ids plus rationale, or unknown."""

    status: str
    categories: tuple[str, ...] = ()
    rationale: tuple[str, ...] = ()

    def is_assigned(self) -> bool:
        return self.status == ASSIGNED


UNKNOWN_ASSIGNMENT = Assignment(status=UNKNOWN)


@dataclass(frozen=True)
class Classification:
    """Per-question assignments keyed by question id, in question order."""

    schema_id: str
    assignments: Mapping[str, Assignment]

    def answers(self) -> dict[str, tuple[str, tuple[str, ...]]]:
        """(status, categories) per question — the identity that matters for
        fidelity checks, independent of which rules produced it."""
        return {qid: (a.status, a.categories) for qid, a in self.assignments.items()}

    def answered_question_ids(self) -> tuple[str, ...]:
        return tuple(qid for qid, a in self.assignments.items() if a.is_assigned())


def _canonical_categories(question: Question, category_ids: set[str]) -> tuple[str, ...]:
    order = {cat.id: i for i, cat in enumerate(question.categories)}
    return tuple(sorted(category_ids, key=lambda cid: order[cid]))


def _assign_question(question: Question, rules: Sequence[Rule],
                     evidence: EvidenceRecord) -> Assignment:
    matching = [r for r in rules if r.question_id == question.id and r.matches(evidence)]
    if not matching:
        return UNKNOWN_ASSIGNMENT
    matching.sort(key=lambda r: (-r.priority, r.category_id, r.id))
    if question.selection == "single":
        winner = matching[0]
        return Assignment(
            status=ASSIGNED,
            categories=(winner.category_id,),
            rationale=tuple(r.id for r in matching),
        )
    categories = _canonical_categories(question, {r.category_id for r in matching})
    return Assignment(
        status=ASSIGNED,
        categories=categories,
        rationale=tuple(sorted(r.id for r in matching)),
    )


def classify(schema: TaxonomySchema, rules: Sequence[Rule],
             evidence: EvidenceRecord) -> Classification:
    """Answer every question of the schema from the evidence; total and pure."""
    validate_rules(schema, rules)
    assignments = {
        q.id: _assign_question(q, rules, evidence) for q in schema.ordered_questions()
    }
    return Classification(schema_id=schema.id, assignments=assignments)


def classify_question(schema: TaxonomySchema, rules: Sequence[Rule],
                      evidence: EvidenceRecord, question_id: str) -> Assignment:
    """Single-question projection of :func:`classify`."""
    validate_rules(schema, rules)
    question = schema.question(question_id)
    return _assign_question(question, rules, evidence)


def classification_from_answers(
        schema: TaxonomySchema, answers: Mapping[str, Sequence[str]]) -> Classification:
    """Build a classification from direct analyst selections (the wizard path).

    Unanswered questions become unknown; selections are validated against the
    schema and canonically ordered. Rationale stays empty — no rules fired.
    """
    for qid in answers:
        if not schema.has_question(qid):
            raise NotFound("question", qid)
    assignments: dict[str, Assignment] = {}
    for question in schema.ordered_questions():
        selected = list(answers.get(question.id, ()))
        if not selected:
            assignments[question.id] = UNKNOWN_ASSIGNMENT
            continue
        for cid in selected:
            if not question.has_category(cid):
                raise SchemaMismatch(
                    f"category {cid!r} not in question {question.id!r}", subject=cid)
        if question.selection == "single" and len(selected) > 1:
            raise SchemaMismatch(
                f"question {question.id!r} is single-select", subject=question.id)
        assignments[question.id] = Assignment(
            status=ASSIGNED,
            categories=_canonical_categories(question, set(selected)),
        )
    return Classification(schema_id=schema.id, assignments=assignments)


def classification_to_dict(classification: Classification) -> dict[str, Any]:
    return {
        "schema_id": classification.schema_id,
        "assignments": {
            qid: {
                "status": a.status,
                "categories": list(a.categories),
                "rationale": list(a.rationale),
            }
            for qid, a in classification.assignments.items()
        },
    }


def classification_from_dict(data: Any, schema: TaxonomySchema | None = None) -> Classification:
    """Parse a classification; with a schema, enforce its per-question invariants."""
    if not isinstance(data, dict):
        raise ParseError("classification must be a JSON object")
    for key in data:
        if key not in ("schema_id", "assignments"):
            raise ParseError(f"unknown classification field {key!r}", subject=key)
    schema_id = data.get("schema_id")
    raw = data.get("assignments")
    if not isinstance(schema_id, str):
        raise ParseError("classification missing schema_id", subject="schema_id")
    if not isinstance(raw, dict):
        raise ParseError("classification missing assignments", subject="assignments")

    assignments: dict[str, Assignment] = {}
    for qid, obj in raw.items():
        if not isinstance(obj, dict):
            raise ParseError(f"assignment for {qid!r} must be an object", subject=qid)
        status = obj.get("status")
        categories = obj.get("categories", [])
        rationale = obj.get("rationale", [])
        if status not in (ASSIGNED, UNKNOWN):
            raise ParseError(f"assignment for {qid!r}: bad status {status!r}", subject=qid)
        if not isinstance(categories, list) or not all(isinstance(c, str) for c in categories):
            raise ParseError(f"assignment for {qid!r}: categories must be strings", subject=qid)
        if not isinstance(rationale, list) or not all(isinstance(r, str) for r in rationale):
            raise ParseError(f"assignment for {qid!r}: rationale must be strings", subject=qid)
        if status == ASSIGNED and not categories:
            raise ParseError(f"assignment for {qid!r}: assigned without categories", subject=qid)
        if status == UNKNOWN and categories:
            raise ParseError(f"assignment for {qid!r}: unknown with categories", subject=qid)
        assignments[qid] = Assignment(status, tuple(categories), tuple(rationale))

    if schema is not None:
        if schema_id != schema.id:
            raise SchemaMismatch(
                f"classification targets schema {schema_id!r}, expected {schema.id!r}",
                subject=schema_id)
        expected = {q.id for q in schema.questions}
        got = set(assignments)
        if expected != got:
            missing = expected - got
            extra = got - expected
            raise SchemaMismatch(
                f"classification questions do not match schema "
                f"(missing={sorted(missing)}, extra={sorted(extra)})")
        for qid, a in assignments.items():
            question = schema.question(qid)
            if question.selection == "single" and len(a.categories) > 1:
                raise SchemaMismatch(
                    f"question {qid!r} is single-select but has {len(a.categories)} categories",
                    subject=qid)
            for cid in a.categories:
                if not question.has_category(cid):
                    raise SchemaMismatch(
                        f"category {cid!r} not in question {qid!r}", subject=cid)
        # Re-key in schema question order for canonical form.
        assignments = {q.id: assignments[q.id] for q in schema.ordered_questions()}

    return Classification(schema_id=schema_id, assignments=assignments)
