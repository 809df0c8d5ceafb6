"""Shared test machinery: seeded fuzzers, defect fixtures, independent oracles."""
from __future__ import annotations

import random
from typing import Any

import hypothesis.strategies as st

from seqtax.evidence import (
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
)
from seqtax.rules import FIELD_REGISTRY, Condition, ConditionOp, Rule, build_evidence

# Two equal-priority WHO rules that send the same motive to different
# categories: the canonical constructed ambiguity.
BROKEN_RULES = (
    Rule("bad_black_hat", "who", "black_hat", 5,
         (Condition("attacker_motive", ConditionOp.EQ, "damage_or_theft"),)),
    Rule("bad_joker", "who", "joker", 5,
         (Condition("attacker_motive", ConditionOp.EQ, "damage_or_theft"),)),
)


def random_evidence(rng: random.Random) -> EvidenceRecord:
    """Seeded fuzz record: all-absent, adversarial all-present, and mixtures."""
    mode = rng.random()
    if mode < 0.1:
        return EvidenceRecord(attack_name="fuzz")
    density = 1.0 if mode < 0.2 else rng.random()

    def maybe(value: Any) -> Any:
        return value if rng.random() < density else None

    def pick(enum: Any) -> Any:
        return rng.choice(list(enum))

    channel = None
    if rng.random() < density:
        channel = ChannelSignals(
            port=maybe(rng.choice([0, 1, 80, 135, 1434, 4444, 65535])),
            transport=maybe(pick(Transport)),
            standardized_protocol=maybe(rng.random() < 0.5),
            virtualization=maybe(rng.random() < 0.5),
            mitm_or_botnet=maybe(rng.random() < 0.5),
            inter_segment_protocol=maybe(rng.random() < 0.5),
        )
    symptoms = frozenset(s for s in Symptom if rng.random() < density * 0.6)
    return EvidenceRecord(
        attack_name=rng.choice(["fuzz", "", "Unnamed", "x" * 40]),
        attacker_motive=maybe(pick(AttackerMotive)),
        attacker_kind=maybe(pick(AttackerKind)),
        attacker_name=maybe(rng.choice(["someone", "group-29A", ""])),
        initiation=maybe(pick(Initiation)),
        source_count=maybe(pick(SourceCount)),
        target_scope_hint=maybe(pick(ScopeHint)),
        platform_hint=maybe(pick(PlatformHint)),
        channel=channel,
        symptoms=symptoms,
        vulnerability_refs=tuple(rng.sample(["CVE-1", "CVE-2"], k=rng.randint(0, 2))),
        notes=maybe("observed during triage"),
    )


def evidence_records() -> st.SearchStrategy[EvidenceRecord]:
    """Hypothesis strategy over the full syntactic evidence space."""
    opt = lambda s: st.none() | s  # noqa: E731
    channels = st.builds(
        ChannelSignals,
        port=opt(st.integers(min_value=0, max_value=65535)),
        transport=opt(st.sampled_from(Transport)),
        standardized_protocol=opt(st.booleans()),
        virtualization=opt(st.booleans()),
        mitm_or_botnet=opt(st.booleans()),
        inter_segment_protocol=opt(st.booleans()),
    )
    return st.builds(
        EvidenceRecord,
        attack_name=st.text(max_size=12),
        attacker_motive=opt(st.sampled_from(AttackerMotive)),
        attacker_kind=opt(st.sampled_from(AttackerKind)),
        attacker_name=opt(st.text(max_size=12)),
        initiation=opt(st.sampled_from(Initiation)),
        source_count=opt(st.sampled_from(SourceCount)),
        target_scope_hint=opt(st.sampled_from(ScopeHint)),
        platform_hint=opt(st.sampled_from(PlatformHint)),
        channel=opt(channels),
        symptoms=st.frozensets(st.sampled_from(Symptom)),
        vulnerability_refs=st.lists(st.text(max_size=8), max_size=2).map(tuple),
        notes=opt(st.text(max_size=12)),
    )


def _condition_allows(cond: Condition, present: bool, value: Any) -> bool:
    if cond.op is ConditionOp.PRESENT:
        return present
    if cond.op is ConditionOp.ABSENT:
        return not present
    if not present:
        return False
    if cond.op is ConditionOp.EQ:
        return value == cond.value
    return value in cond.value


def _field_candidates(field: str, rules: tuple[Rule, ...]) -> list[Any]:
    spec = FIELD_REGISTRY[field]
    if spec.kind == "enum":
        return [None, *spec.values]
    if spec.kind == "bool":
        return [None, True, False]
    if spec.kind in ("flag", "list"):
        return [None, True]
    literals: list[Any] = []
    for rule in rules:
        for cond in rule.when:
            if cond.field != field:
                continue
            if cond.op is ConditionOp.EQ and cond.value not in literals:
                literals.append(cond.value)
            elif cond.op is ConditionOp.IN:
                literals.extend(v for v in cond.value if v not in literals)
    extra: Any = 64999 if spec.kind == "int" else "~unseen~"
    return [None, *literals, extra]


def satisfiable_witness(rule_a: Rule, rule_b: Rule) -> EvidenceRecord | None:
    """Constraint-propagation oracle: a record matching both rules, or None.

    Independent of the production enumerator: solves field by field instead
    of walking the cross product.
    """
    fields = sorted(rule_a.fields() | rule_b.fields())
    assignment: dict[str, Any] = {}
    for field in fields:
        conditions = [c for c in (*rule_a.when, *rule_b.when) if c.field == field]
        chosen = None
        for candidate in _field_candidates(field, (rule_a, rule_b)):
            present = candidate is not None
            if all(_condition_allows(c, present, candidate) for c in conditions):
                chosen = candidate
                break
        else:
            return None
        if chosen is not None:
            assignment[field] = chosen
    witness = build_evidence(assignment)
    assert rule_a.matches(witness) and rule_b.matches(witness)
    return witness


def oracle_overlap_pairs(schema, rules) -> set[tuple[str, str, str]]:
    """All (question, rule_a, rule_b) ambiguities found by pairwise solving."""
    pairs: set[tuple[str, str, str]] = set()
    by_question: dict[str, list[Rule]] = {}
    for rule in rules:
        by_question.setdefault(rule.question_id, []).append(rule)
    for question in schema.questions:
        if question.selection != "single":
            continue
        qrules = by_question.get(question.id, [])
        for i, a in enumerate(qrules):
            for b in qrules[i + 1:]:
                if a.priority != b.priority or a.category_id == b.category_id:
                    continue
                if satisfiable_witness(a, b) is not None:
                    first, second = sorted((a.id, b.id))
                    pairs.add((question.id, first, second))
    return pairs
