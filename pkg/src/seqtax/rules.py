"""Priority-ordered predicate rules mapping evidence fields to categories.

Rules address evidence through a flat field registry: channel subfields use
dotted paths (``channel.port``) and each symptom is a presence flag
(``symptoms.request_flood``). A rule matches when every one of its atomic
conditions holds; absent evidence never matches ``eq``/``in``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Sequence

from .errors import ParseError, SchemaMismatch
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
)
from .schema import TaxonomySchema


class ConditionOp(str, Enum):
    EQ = "eq"
    IN = "in"
    PRESENT = "present"
    ABSENT = "absent"


@dataclass(frozen=True)
class FieldSpec:
    """How one addressable evidence field behaves under rule conditions.

    ``kind`` drives the overlap enumerator's abstract domain:
    enum fields enumerate every member, bool fields {true, false},
    flag fields presence only, and int/string fields collapse to the
    equivalence classes induced by the literals rules actually test.
    """

    kind: str  # enum | bool | flag | int | string | list
    values: tuple[str, ...] = ()
    lo: int = 0
    hi: int = 0


FIELD_REGISTRY: dict[str, FieldSpec] = {
    "attack_name": FieldSpec("string"),
    "attacker_motive": FieldSpec("enum", tuple(m.value for m in AttackerMotive)),
    "attacker_kind": FieldSpec("enum", tuple(k.value for k in AttackerKind)),
    "attacker_name": FieldSpec("string"),
    "initiation": FieldSpec("enum", tuple(i.value for i in Initiation)),
    "source_count": FieldSpec("enum", tuple(s.value for s in SourceCount)),
    "target_scope_hint": FieldSpec("enum", tuple(h.value for h in ScopeHint)),
    "platform_hint": FieldSpec("enum", tuple(p.value for p in PlatformHint)),
    "notes": FieldSpec("string"),
    "channel.port": FieldSpec("int", lo=0, hi=65535),
    "channel.transport": FieldSpec("enum", tuple(t.value for t in Transport)),
    "channel.standardized_protocol": FieldSpec("bool"),
    "channel.virtualization": FieldSpec("bool"),
    "channel.mitm_or_botnet": FieldSpec("bool"),
    "channel.inter_segment_protocol": FieldSpec("bool"),
    "symptoms.resource_utilization_anomaly": FieldSpec("flag"),
    "symptoms.request_flood": FieldSpec("flag"),
    "symptoms.abnormal_controllable_requests": FieldSpec("flag"),
    "vulnerability_refs": FieldSpec("list"),
}

_VALUE_OPS = (ConditionOp.EQ, ConditionOp.IN)


def field_value(evidence: EvidenceRecord, field: str) -> tuple[bool, Any]:
    """(present, value) for a registry field; enums surface their string value."""
    if field not in FIELD_REGISTRY:
        raise SchemaMismatch(f"unknown evidence field {field!r}", subject=field)
    if field == "attack_name":
        return True, evidence.attack_name
    if field.startswith("channel."):
        if evidence.channel is None:
            return False, None
        value = getattr(evidence.channel, field.split(".", 1)[1])
        if value is None:
            return False, None
        if isinstance(value, Transport):
            return True, value.value
        return True, value
    if field.startswith("symptoms."):
        symptom = Symptom(field.split(".", 1)[1])
        return (symptom in evidence.symptoms), True
    if field == "vulnerability_refs":
        return bool(evidence.vulnerability_refs), evidence.vulnerability_refs
    value = getattr(evidence, field)
    if value is None:
        return False, None
    if isinstance(value, Enum):
        return True, value.value
    return True, value


@dataclass(frozen=True)
class Condition:
    field: str
    op: ConditionOp
    value: Any = None  # scalar for eq; tuple of scalars for in

    def holds(self, evidence: EvidenceRecord) -> bool:
        present, value = field_value(evidence, self.field)
        if self.op is ConditionOp.PRESENT:
            return present
        if self.op is ConditionOp.ABSENT:
            return not present
        if not present:
            return False
        if self.op is ConditionOp.EQ:
            return value == self.value
        return value in self.value


@dataclass(frozen=True)
class Rule:
    id: str
    question_id: str
    category_id: str
    priority: int
    when: tuple[Condition, ...]

    def matches(self, evidence: EvidenceRecord) -> bool:
        return all(cond.holds(evidence) for cond in self.when)

    def fields(self) -> frozenset[str]:
        return frozenset(cond.field for cond in self.when)


def validate_rules(schema: TaxonomySchema, rules: Sequence[Rule]) -> None:
    """Raise SchemaMismatch unless every rule resolves against the schema."""
    for rule in rules:
        if not schema.has_question(rule.question_id):
            raise SchemaMismatch(
                f"rule {rule.id!r} references unknown question {rule.question_id!r}",
                subject=rule.question_id)
        question = schema.question(rule.question_id)
        if not question.has_category(rule.category_id):
            raise SchemaMismatch(
                f"rule {rule.id!r} references unknown category {rule.category_id!r} "
                f"in question {rule.question_id!r}",
                subject=rule.category_id)
        if not rule.when:
            raise SchemaMismatch(f"rule {rule.id!r} has an empty predicate", subject=rule.id)
        for cond in rule.when:
            spec = FIELD_REGISTRY.get(cond.field)
            if spec is None:
                raise SchemaMismatch(
                    f"rule {rule.id!r} references unknown evidence field {cond.field!r}",
                    subject=cond.field)
            if cond.op in _VALUE_OPS and spec.kind in ("flag", "list"):
                raise SchemaMismatch(
                    f"rule {rule.id!r}: field {cond.field!r} supports only "
                    f"presence checks", subject=cond.field)


def field_partition(rules: Iterable[Rule]) -> dict[str, frozenset[str]]:
    """Evidence fields read per question; disjointness keeps questions independent."""
    out: dict[str, set[str]] = {}
    for rule in rules:
        out.setdefault(rule.question_id, set()).update(rule.fields())
    return {qid: frozenset(fields) for qid, fields in out.items()}


def _eq(field: str, value: Any) -> Condition:
    return Condition(field, ConditionOp.EQ, value)


def _in(field: str, values: tuple[Any, ...]) -> Condition:
    return Condition(field, ConditionOp.IN, values)


def _present(field: str) -> Condition:
    return Condition(field, ConditionOp.PRESENT)


# Channel indicators can co-occur (a botnet riding a standardized port), so the
# channel rules carry a fixed priority ladder: concrete port evidence beats
# technique evidence. All other questions key on a single disjoint-valued
# field and share one priority.
_P_DEFAULT = 100
_P_LEGACY, _P_UNDEFINED, _P_N2N, _P_VIRT, _P_U2N = 50, 40, 30, 20, 10


def builtin_rules() -> tuple[Rule, ...]:
    """The shipped rule set reproducing the taxonomy's prose definitions."""
    rules: list[Rule] = []

    def add(rule_id: str, question: str, category: str, priority: int, *conds: Condition) -> None:
        rules.append(Rule(rule_id, question, category, priority, tuple(conds)))

    add("who_joker_learning", "who", "joker", _P_DEFAULT,
        _eq("attacker_motive", AttackerMotive.LEARNING_CHALLENGE.value))
    add("who_white_hat_reporting", "who", "white_hat", _P_DEFAULT,
        _eq("attacker_motive", AttackerMotive.VULNERABILITY_REPORTING.value))
    add("who_black_hat_damage", "who", "black_hat", _P_DEFAULT,
        _eq("attacker_motive", AttackerMotive.DAMAGE_OR_THEFT.value))
    add("who_little_sisters_competition", "who", "little_sisters", _P_DEFAULT,
        _eq("attacker_motive", AttackerMotive.FINANCIAL_COMPETITION.value),
        _in("attacker_kind", (AttackerKind.ORGANIZATION.value, AttackerKind.GROUP.value)))
    add("who_big_brothers_political", "who", "big_brothers", _P_DEFAULT,
        _eq("attacker_motive", AttackerMotive.POLITICAL.value),
        _eq("attacker_kind", AttackerKind.GOVERNMENT.value))

    add("where_loc_host", "where_location", "host_initiated", _P_DEFAULT,
        _eq("initiation", Initiation.HOST.value))
    add("where_loc_network", "where_location", "network_initiated", _P_DEFAULT,
        _eq("initiation", Initiation.NETWORK.value))

    scope_map = {
        "scope_object_computer": (ScopeHint.PHYSICAL_COMPUTER, "computer"),
        "scope_object_mobility": (ScopeHint.PHYSICAL_MOBILITY_DEVICE, "mobility_device"),
        "scope_object_embedded": (ScopeHint.PHYSICAL_EMBEDDED_DEVICE, "embedded_device"),
        "scope_object_network_equipment": (
            ScopeHint.PHYSICAL_NETWORK_EQUIPMENT, "network_equipment"),
        "scope_host": (ScopeHint.HOST, "host_based"),
        "scope_local_segment": (ScopeHint.LOCAL_SEGMENT, "local_segment"),
        "scope_segment_to_segment": (ScopeHint.CORE_NETWORK, "segment_to_segment"),
        "scope_wireless": (ScopeHint.WIRELESS, "wireless_network"),
    }
    for rule_id, (hint, category) in scope_map.items():
        add(rule_id, "where_scope", category, _P_DEFAULT,
            _eq("target_scope_hint", hint.value))

    platform_map = {
        "platform_software": (PlatformHint.OS_OR_APPLICATION, "software"),
        "platform_hardware": (PlatformHint.PHYSICAL_ACCESS, "hardware"),
        "platform_embedded": (PlatformHint.FIRMWARE, "embedded_hardware"),
        "platform_mobile": (PlatformHint.MOBILE_APP_OR_SMS, "mobile"),
    }
    for rule_id, (hint, category) in platform_map.items():
        add(rule_id, "how_platform", category, _P_DEFAULT,
            _eq("platform_hint", hint.value))

    add("channel_legacy_ports", "how_channel", "legacy_ports", _P_LEGACY,
        _eq("channel.standardized_protocol", True), _present("channel.port"))
    add("channel_undefined_ports", "how_channel", "undefined_ports", _P_UNDEFINED,
        _eq("channel.standardized_protocol", False), _present("channel.port"))
    add("channel_network_to_network", "how_channel", "network_to_network", _P_N2N,
        _eq("channel.inter_segment_protocol", True))
    add("channel_virtualization", "how_channel", "virtualization", _P_VIRT,
        _eq("channel.virtualization", True))
    add("channel_user_to_network", "how_channel", "user_to_network", _P_U2N,
        _eq("channel.mitm_or_botnet", True))

    add("what_abnormal_activity", "what", "abnormal_system_activity", _P_DEFAULT,
        _present("symptoms.resource_utilization_anomaly"))
    add("what_traffic_volume", "what", "traffic_volume", _P_DEFAULT,
        _present("symptoms.request_flood"))
    add("what_controllable_requests", "what", "controllable_requests", _P_DEFAULT,
        _present("symptoms.abnormal_controllable_requests"))

    return tuple(rules)


def _condition_from_dict(obj: Any, where: str) -> Condition:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: condition must be an object")
    for key in obj:
        if key not in ("field", "op", "value"):
            raise ParseError(f"{where}: unknown condition field {key!r}", subject=key)
    field = obj.get("field")
    if not isinstance(field, str):
        raise ParseError(f"{where}: missing condition field name", subject="field")
    op_raw = obj.get("op")
    try:
        op = ConditionOp(op_raw)
    except ValueError:
        raise ParseError(
            f"{where}: op must be one of eq|in|present|absent", subject="op") from None
    value = obj.get("value")
    if op in _VALUE_OPS and value is None:
        raise ParseError(f"{where}: op {op.value!r} requires a value", subject="value")
    if op is ConditionOp.IN:
        if not isinstance(value, list):
            raise ParseError(f"{where}: op 'in' requires an array value", subject="value")
        value = tuple(value)
    return Condition(field, op, value)


def load_rules(document: bytes | str) -> tuple[Rule, ...]:
    """Parse a rules file: a JSON list of {id, question, category, priority, when}."""
    from .schema import parse_json_document

    data = parse_json_document(document)
    if not isinstance(data, list):
        raise ParseError("rules document must be a JSON array")
    rules: list[Rule] = []
    for i, obj in enumerate(data):
        where = f"rules[{i}]"
        if not isinstance(obj, dict):
            raise ParseError(f"{where}: rule must be an object")
        for key in obj:
            if key not in ("id", "question", "category", "priority", "when"):
                raise ParseError(f"{where}: unknown rule field {key!r}", subject=key)
        rule_id = obj.get("id")
        question = obj.get("question")
        category = obj.get("category")
        priority = obj.get("priority")
        when = obj.get("when")
        if not isinstance(rule_id, str):
            raise ParseError(f"{where}: missing rule id", subject="id")
        if not isinstance(question, str):
            raise ParseError(f"{where}: missing question", subject="question")
        if not isinstance(category, str):
            raise ParseError(f"{where}: missing category", subject="category")
        if not isinstance(priority, int) or isinstance(priority, bool):
            raise ParseError(f"{where}: priority must be an integer", subject="priority")
        if not isinstance(when, list) or not when:
            raise ParseError(f"{where}: when must be a non-empty array", subject="when")
        conditions = tuple(
            _condition_from_dict(c, f"{where}.when[{j}]") for j, c in enumerate(when))
        rules.append(Rule(rule_id, question, category, priority, conditions))
    return tuple(rules)


def rules_to_json(rules: Sequence[Rule]) -> str:
    def cond(c: Condition) -> dict[str, Any]:
        out: dict[str, Any] = {"field": c.field, "op": c.op.value}
        if c.op in _VALUE_OPS:
            out["value"] = list(c.value) if c.op is ConditionOp.IN else c.value
        return out

    return json.dumps(
        [
            {
                "id": r.id,
                "question": r.question_id,
                "category": r.category_id,
                "priority": r.priority,
                "when": [cond(c) for c in r.when],
            }
            for r in rules
        ],
        indent=2,
        ensure_ascii=False,
    ) + "\n"


def build_evidence(assignment: dict[str, Any], attack_name: str = "witness") -> EvidenceRecord:
    """Construct a record from flat {registry field: value}; used for witnesses."""
    kwargs: dict[str, Any] = {"attack_name": attack_name}
    channel: dict[str, Any] = {}
    symptoms: set[Symptom] = set()
    enum_types = {
        "attacker_motive": AttackerMotive,
        "attacker_kind": AttackerKind,
        "initiation": Initiation,
        "source_count": SourceCount,
        "target_scope_hint": ScopeHint,
        "platform_hint": PlatformHint,
    }
    for field, value in assignment.items():
        if value is None:
            continue
        if field == "attack_name":
            kwargs["attack_name"] = value
        elif field.startswith("channel."):
            name = field.split(".", 1)[1]
            channel[name] = Transport(value) if name == "transport" else value
        elif field.startswith("symptoms."):
            symptoms.add(Symptom(field.split(".", 1)[1]))
        elif field == "vulnerability_refs":
            kwargs["vulnerability_refs"] = tuple(value) if value is not True else ("ref-0",)
        elif field in enum_types:
            kwargs[field] = enum_types[field](value)
        else:
            kwargs[field] = value
    if channel:
        kwargs["channel"] = ChannelSignals(**channel)
    if symptoms:
        kwargs["symptoms"] = frozenset(symptoms)
    return EvidenceRecord(**kwargs)
