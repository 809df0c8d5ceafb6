"""Exhaustive detection of ambiguous rule pairs on single-select questions.

Two rules overlap when some evidence record matches both at equal priority
for different categories — the classifier then has to tie-break, which is a
rule-set defect. The enumerator walks the whole finite evidence domain:
fields no rule reads cannot influence matching, so it enumerates the cross
product of abstract value classes for exactly the fields a question's rules
reference. Unbounded fields (port numbers, strings) collapse to the
equivalence classes induced by the literals that appear in conditions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Sequence

from .errors import SchemaMismatch
from .evidence import EvidenceRecord
from .rules import FIELD_REGISTRY, ConditionOp, FieldSpec, Rule, build_evidence, validate_rules
from .schema import TaxonomySchema

# Beyond this many combinations the rule set needs restructuring, not scanning.
MAX_ENUMERATION = 1 << 21

_ABSENT = object()


@dataclass(frozen=True)
class RuleOverlap:
    question_id: str
    rule_a: str
    rule_b: str
    witness: EvidenceRecord


def _literals(rules: Sequence[Rule], field: str) -> list[Any]:
    found: list[Any] = []
    for rule in rules:
        for cond in rule.when:
            if cond.field != field:
                continue
            if cond.op is ConditionOp.EQ:
                if cond.value not in found:
                    found.append(cond.value)
            elif cond.op is ConditionOp.IN:
                for value in cond.value:
                    if value not in found:
                        found.append(value)
    return found


def _fresh_int(spec: FieldSpec, taken: list[Any]) -> int | None:
    for candidate in range(spec.lo, spec.hi + 1):
        if candidate not in taken:
            return candidate
    return None


def _abstract_domain(field: str, rules: Sequence[Rule]) -> list[Any]:
    """Value classes that are distinguishable by the rules, plus absence."""
    spec = FIELD_REGISTRY[field]
    if spec.kind == "enum":
        return [_ABSENT, *spec.values]
    if spec.kind == "bool":
        return [_ABSENT, True, False]
    if spec.kind == "flag":
        return [_ABSENT, True]
    if spec.kind == "list":
        return [_ABSENT, True]  # any non-empty list is one class
    literals = sorted(_literals(rules, field), key=repr)
    if spec.kind == "int":
        fresh = _fresh_int(spec, literals)
        return [_ABSENT, *literals, *( [fresh] if fresh is not None else [] )]
    # string: one representative no rule tests for
    fresh_str = "~other~"
    while fresh_str in literals:
        fresh_str += "~"
    return [_ABSENT, *literals, fresh_str]


def detect_rule_overlaps(schema: TaxonomySchema, rules: Sequence[Rule]) -> list[RuleOverlap]:
    """Every equal-priority, different-category ambiguity, with a witness each.

    Only single-select questions are scanned; multi-select questions union
    their matches by design. One witness is reported per rule pair.
    """
    validate_rules(schema, rules)
    overlaps: dict[tuple[str, str, str], RuleOverlap] = {}

    for question in schema.ordered_questions():
        if question.selection != "single":
            continue
        qrules = [r for r in rules if r.question_id == question.id]
        if len(qrules) < 2:
            continue
        fields = sorted({f for r in qrules for f in r.fields()})
        domains = [_abstract_domain(field, qrules) for field in fields]

        size = 1
        for domain in domains:
            size *= len(domain)
        if size > MAX_ENUMERATION:
            raise SchemaMismatch(
                f"question {question.id!r}: rule conditions induce {size} evidence "
                f"combinations, above the {MAX_ENUMERATION} enumeration cap")

        for combo in itertools.product(*domains):
            assignment = {
                field: value for field, value in zip(fields, combo) if value is not _ABSENT
            }
            witness = build_evidence(assignment, attack_name="overlap-witness")
            matched = [r for r in qrules if r.matches(witness)]
            if len(matched) < 2:
                continue
            by_priority: dict[int, list[Rule]] = {}
            for rule in matched:
                by_priority.setdefault(rule.priority, []).append(rule)
            for group in by_priority.values():
                for a, b in itertools.combinations(sorted(group, key=lambda r: r.id), 2):
                    if a.category_id == b.category_id:
                        continue
                    key = (question.id, a.id, b.id)
                    if key not in overlaps:
                        overlaps[key] = RuleOverlap(question.id, a.id, b.id, witness)

    question_rank = {q.id: q.order for q in schema.questions}
    return sorted(
        overlaps.values(),
        key=lambda o: (question_rank[o.question_id], o.rule_a, o.rule_b),
    )
