"""Defence-action planning from a (possibly partial) classification.

Each action belongs to one question group and fires either on any answer in
that group or on specific attacker categories. Unknown questions contribute
nothing, so a plan grows monotonically as more questions get answered.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any, Sequence

from .classifier import Classification
from .errors import ParseError, SchemaMismatch
from .schema import QUESTION_GROUPS, TaxonomySchema

ANY_ANSWER = "any_answer"
CATEGORY = "category"


@dataclass(frozen=True)
class Trigger:
    kind: str  # any_answer | category
    category_ids: tuple[str, ...] = ()

    def fires(self, assigned_categories: set[str]) -> bool:
        if self.kind == ANY_ANSWER:
            return bool(assigned_categories)
        return any(cid in assigned_categories for cid in self.category_ids)


@dataclass(frozen=True)
class DefenseAction:
    id: str
    question_group: str
    trigger: Trigger
    text: str


@dataclass(frozen=True)
class DefensePlan:
    attack_name: str
    entries: tuple[tuple[str, DefenseAction], ...]  # (group, action), question order

    def action_ids(self) -> tuple[str, ...]:
        return tuple(action.id for _, action in self.entries)


def parse_trigger(raw: str) -> Trigger:
    if raw == ANY_ANSWER:
        return Trigger(kind=ANY_ANSWER)
    if raw.startswith("category:"):
        ids = tuple(part.strip() for part in raw[len("category:"):].split(",") if part.strip())
        if ids:
            return Trigger(kind=CATEGORY, category_ids=ids)
    raise ParseError(
        f"trigger must be 'any_answer' or 'category:<id>[,<id>...]', got {raw!r}",
        subject="trigger")


def trigger_to_str(trigger: Trigger) -> str:
    if trigger.kind == ANY_ANSWER:
        return ANY_ANSWER
    return "category:" + ",".join(trigger.category_ids)


def load_actions(document: bytes | str) -> tuple[DefenseAction, ...]:
    """Parse an actions file: JSON list of {id, group, trigger, text}."""
    from .schema import parse_json_document

    data = parse_json_document(document)
    if not isinstance(data, list):
        raise ParseError("actions document must be a JSON array")
    actions: list[DefenseAction] = []
    for i, obj in enumerate(data):
        where = f"actions[{i}]"
        if not isinstance(obj, dict):
            raise ParseError(f"{where}: action must be an object")
        for key in obj:
            if key not in ("id", "group", "trigger", "text"):
                raise ParseError(f"{where}: unknown action field {key!r}", subject=key)
        action_id = obj.get("id")
        group = obj.get("group")
        trigger = obj.get("trigger")
        text = obj.get("text")
        if not isinstance(action_id, str) or not action_id:
            raise ParseError(f"{where}: missing action id", subject="id")
        if group not in QUESTION_GROUPS:
            raise ParseError(f"{where}: group must be one of {QUESTION_GROUPS}", subject="group")
        if not isinstance(trigger, str):
            raise ParseError(f"{where}: missing trigger", subject="trigger")
        if not isinstance(text, str) or not text.strip():
            raise ParseError(f"{where}: action text must be non-empty", subject="text")
        actions.append(DefenseAction(action_id, group, parse_trigger(trigger), text))
    return tuple(actions)


def dump_actions(actions: Sequence[DefenseAction]) -> str:
    return json.dumps(
        [
            {
                "id": a.id,
                "group": a.question_group,
                "trigger": trigger_to_str(a.trigger),
                "text": a.text,
            }
            for a in actions
        ],
        indent=2,
        ensure_ascii=False,
    ) + "\n"


def validate_actions(schema: TaxonomySchema, actions: Sequence[DefenseAction]) -> None:
    """Raise SchemaMismatch unless every category trigger resolves in the schema."""
    seen: set[str] = set()
    for action in actions:
        if action.id in seen:
            raise SchemaMismatch(f"duplicate action id {action.id!r}", subject=action.id)
        seen.add(action.id)
        if action.trigger.kind != CATEGORY:
            continue
        group_questions = [q for q in schema.questions if q.group == action.question_group]
        for cid in action.trigger.category_ids:
            if not any(q.has_category(cid) for q in group_questions):
                raise SchemaMismatch(
                    f"action {action.id!r} trigger category {cid!r} does not resolve "
                    f"in group {action.question_group!r}",
                    subject=cid)


@lru_cache(maxsize=1)
def builtin_actions() -> tuple[DefenseAction, ...]:
    """The shipped defence-action set, loaded from the embedded asset."""
    raw = resources.files("seqtax.assets").joinpath("actions/table7.json").read_bytes()
    return load_actions(raw)


def plan(schema: TaxonomySchema, classification: Classification,
         actions: Sequence[DefenseAction] | None = None,
         attack_name: str = "") -> DefensePlan:
    """Emit the actions earned by the answered question groups, in question order."""
    if actions is None:
        actions = builtin_actions()
    validate_actions(schema, actions)

    group_rank: dict[str, int] = {}
    group_categories: dict[str, set[str]] = {}
    for question in schema.ordered_questions():
        assignment = classification.assignments.get(question.id)
        if assignment is None:
            raise SchemaMismatch(
                f"classification lacks question {question.id!r}", subject=question.id)
        for cid in assignment.categories:
            if not question.has_category(cid):
                raise SchemaMismatch(
                    f"category {cid!r} not in question {question.id!r}", subject=cid)
        if not assignment.is_assigned():
            continue
        group_rank.setdefault(question.group, question.order)
        group_categories.setdefault(question.group, set()).update(assignment.categories)

    entries: list[tuple[str, DefenseAction]] = []
    for group in sorted(group_categories, key=group_rank.__getitem__):
        for action in actions:
            if action.question_group == group and action.trigger.fires(group_categories[group]):
                entries.append((group, action))
    return DefensePlan(attack_name=attack_name, entries=tuple(entries))


def plan_to_dict(defense_plan: DefensePlan) -> dict[str, Any]:
    return {
        "attack_name": defense_plan.attack_name,
        "entries": [
            {"group": group, "action_id": action.id, "text": action.text}
            for group, action in defense_plan.entries
        ],
    }
