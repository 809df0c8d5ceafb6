"""Taxonomy data model: ordered questions, category forests, well-formedness checks.

A :class:`TaxonomySchema` is immutable after load and safe to share among
concurrent readers. The built-in sequential-question schema ships as a JSON
asset and is exposed through :func:`builtin_sequential_schema`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Any

from .errors import DuplicateKeyError, NotFound, ParseError, TaxonomyError

QUESTION_GROUPS = ("who", "where", "how", "what")
SELECTIONS = ("single", "multi")


class ViolationCode(str, Enum):
    """Well-formedness defects reported by :func:`validate_schema`."""

    DUPLICATE_ID = "duplicate_id"
    DANGLING_PARENT = "dangling_parent"
    CYCLE = "cycle"
    EMPTY_QUESTION = "empty_question"
    BAD_ORDER = "bad_order"
    EMPTY_DESCRIPTION = "empty_description"


@dataclass(frozen=True)
class SchemaViolation:
    code: ViolationCode
    subject: str
    message: str


@dataclass(frozen=True)
class Category:
    """One node of a question's category forest."""

    id: str
    label: str
    description: str
    parent: str | None = None


@dataclass(frozen=True)
class Question:
    """One step of the sequential interrogation.

    ``group`` tags the question with its umbrella (who/where/how/what) so
    reports and defence plans can aggregate the two where- and how-parts.
    """

    id: str
    label: str
    prompt: str
    order: int
    group: str
    selection: str
    categories: tuple[Category, ...] = ()

    def category(self, category_id: str) -> Category:
        for cat in self.categories:
            if cat.id == category_id:
                return cat
        raise NotFound("category", category_id)

    def has_category(self, category_id: str) -> bool:
        return any(cat.id == category_id for cat in self.categories)

    def roots(self) -> tuple[Category, ...]:
        return tuple(cat for cat in self.categories if cat.parent is None)

    def children(self, category_id: str) -> tuple[Category, ...]:
        return tuple(cat for cat in self.categories if cat.parent == category_id)


@dataclass(frozen=True)
class TaxonomySchema:
    id: str
    name: str
    questions: tuple[Question, ...] = ()

    def question(self, question_id: str) -> Question:
        for q in self.questions:
            if q.id == question_id:
                return q
        raise NotFound("question", question_id)

    def has_question(self, question_id: str) -> bool:
        return any(q.id == question_id for q in self.questions)

    def ordered_questions(self) -> tuple[Question, ...]:
        return tuple(sorted(self.questions, key=lambda q: q.order))


def _strict_object(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    obj: dict[str, Any] = {}
    for key, value in pairs:
        if key in obj:
            raise DuplicateKeyError(f"repeated field name {key!r}", subject=key)
        obj[key] = value
    return obj


def parse_json_document(document: bytes | str) -> Any:
    """Parse UTF-8 JSON, rejecting repeated field names.

    Raises ParseError with line/column on malformed input.
    """
    if isinstance(document, bytes):
        try:
            text = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"document is not UTF-8: {exc}") from exc
    else:
        text = document
    if not text.strip():
        raise ParseError("document is empty")
    try:
        return json.loads(text, object_pairs_hook=_strict_object)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc


def _expect(obj: dict[str, Any], key: str, kind: type, where: str, optional: bool = False) -> Any:
    if key not in obj:
        if optional:
            return None
        raise ParseError(f"{where}: missing field {key!r}", subject=key)
    value = obj[key]
    if optional and value is None:
        return None
    # bool is an int subclass; an order of `true` is still malformed.
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise ParseError(f"{where}: field {key!r} must be {kind.__name__}", subject=key)
    return value


def _category_from_dict(obj: Any, where: str) -> Category:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: category must be an object")
    known = {"id", "label", "description", "parent"}
    for key in obj:
        if key not in known:
            raise ParseError(f"{where}: unknown category field {key!r}", subject=key)
    return Category(
        id=_expect(obj, "id", str, where),
        label=_expect(obj, "label", str, where),
        description=_expect(obj, "description", str, where),
        parent=_expect(obj, "parent", str, where, optional=True),
    )


def _question_from_dict(obj: Any, where: str) -> Question:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: question must be an object")
    known = {"id", "label", "prompt", "order", "group", "selection", "categories"}
    for key in obj:
        if key not in known:
            raise ParseError(f"{where}: unknown question field {key!r}", subject=key)
    group = _expect(obj, "group", str, where)
    if group not in QUESTION_GROUPS:
        raise ParseError(f"{where}: group must be one of {QUESTION_GROUPS}", subject="group")
    selection = _expect(obj, "selection", str, where)
    if selection not in SELECTIONS:
        raise ParseError(f"{where}: selection must be one of {SELECTIONS}", subject="selection")
    raw_categories = _expect(obj, "categories", list, where)
    categories = tuple(
        _category_from_dict(cat, f"{where}.categories[{i}]") for i, cat in enumerate(raw_categories)
    )
    return Question(
        id=_expect(obj, "id", str, where),
        label=_expect(obj, "label", str, where),
        prompt=_expect(obj, "prompt", str, where),
        order=_expect(obj, "order", int, where),
        group=group,
        selection=selection,
        categories=categories,
    )


def schema_from_dict(data: Any) -> TaxonomySchema:
    if not isinstance(data, dict):
        raise ParseError("schema document must be a JSON object")
    known = {"id", "name", "questions"}
    for key in data:
        if key not in known:
            raise ParseError(f"unknown schema field {key!r}", subject=key)
    raw_questions = _expect(data, "questions", list, "schema")
    questions = tuple(
        _question_from_dict(q, f"questions[{i}]") for i, q in enumerate(raw_questions)
    )
    return TaxonomySchema(
        id=_expect(data, "id", str, "schema"),
        name=_expect(data, "name", str, "schema"),
        questions=questions,
    )


def load_schema(document: bytes | str) -> TaxonomySchema:
    """Parse a schema file into a TaxonomySchema.

    Structural only: semantic well-formedness is the job of
    :func:`validate_schema`.
    """
    return schema_from_dict(parse_json_document(document))


def schema_to_dict(schema: TaxonomySchema) -> dict[str, Any]:
    def cat(c: Category) -> dict[str, Any]:
        out: dict[str, Any] = {"id": c.id, "label": c.label, "description": c.description}
        if c.parent is not None:
            out["parent"] = c.parent
        return out

    return {
        "id": schema.id,
        "name": schema.name,
        "questions": [
            {
                "id": q.id,
                "label": q.label,
                "prompt": q.prompt,
                "order": q.order,
                "group": q.group,
                "selection": q.selection,
                "categories": [cat(c) for c in q.categories],
            }
            for q in schema.questions
        ],
    }


def dump_schema(schema: TaxonomySchema) -> str:
    """Serialize a schema so that load_schema(dump_schema(s)) == s."""
    return json.dumps(schema_to_dict(schema), indent=2, ensure_ascii=False) + "\n"


def validate_schema(schema: TaxonomySchema) -> list[SchemaViolation]:
    """Check every structural invariant; returns one violation per defect."""
    violations: list[SchemaViolation] = []

    if not schema.questions:
        violations.append(SchemaViolation(
            ViolationCode.EMPTY_QUESTION, schema.id, "schema has no questions"))

    seen_questions: set[str] = set()
    seen_orders: dict[int, str] = {}
    for question in schema.questions:
        if question.id in seen_questions:
            violations.append(SchemaViolation(
                ViolationCode.DUPLICATE_ID, question.id,
                f"question id {question.id!r} appears more than once"))
        seen_questions.add(question.id)
        if question.order in seen_orders:
            violations.append(SchemaViolation(
                ViolationCode.BAD_ORDER, question.id,
                f"question {question.id!r} repeats order {question.order} "
                f"already used by {seen_orders[question.order]!r}"))
        else:
            seen_orders[question.order] = question.id

        violations.extend(_validate_categories(question))

    return violations


def _validate_categories(question: Question) -> list[SchemaViolation]:
    violations: list[SchemaViolation] = []
    if not question.categories:
        violations.append(SchemaViolation(
            ViolationCode.EMPTY_QUESTION, question.id,
            f"question {question.id!r} has no categories"))
        return violations

    ids: set[str] = set()
    for cat in question.categories:
        if cat.id in ids:
            violations.append(SchemaViolation(
                ViolationCode.DUPLICATE_ID, cat.id,
                f"category id {cat.id!r} appears more than once in question {question.id!r}"))
        ids.add(cat.id)

    parents = {cat.id: cat.parent for cat in question.categories}
    for cat in question.categories:
        if cat.parent is not None and cat.parent not in parents:
            violations.append(SchemaViolation(
                ViolationCode.DANGLING_PARENT, cat.parent,
                f"category {cat.id!r} names missing parent {cat.parent!r} "
                f"in question {question.id!r}"))

    # Walk parent chains; anything revisited within one walk is cyclic.
    state: dict[str, int] = {}  # 0 = in progress, 1 = done
    for cat in question.categories:
        if state.get(cat.id) == 1:
            continue
        chain: list[str] = []
        node: str | None = cat.id
        while node is not None and node in parents:
            if state.get(node) == 1:
                break
            if node in chain:
                violations.append(SchemaViolation(
                    ViolationCode.CYCLE, node,
                    f"category {node!r} participates in a parent cycle "
                    f"in question {question.id!r}"))
                break
            chain.append(node)
            node = parents[node]
        for seen in chain:
            state[seen] = 1

    children: set[str] = {cat.parent for cat in question.categories if cat.parent is not None}
    for cat in question.categories:
        is_leaf = cat.id not in children
        if is_leaf and not cat.description.strip():
            violations.append(SchemaViolation(
                ViolationCode.EMPTY_DESCRIPTION, cat.id,
                f"leaf category {cat.id!r} in question {question.id!r} "
                f"has an empty description"))
    return violations


def category_path(schema: TaxonomySchema, question_id: str, category_id: str) -> list[str]:
    """Root-to-target chain of category ids within one question."""
    question = schema.question(question_id)
    question.category(category_id)
    parents = {cat.id: cat.parent for cat in question.categories}
    path: list[str] = []
    node: str | None = category_id
    while node is not None:
        if node in path:
            raise TaxonomyError(
                f"category {category_id!r} in question {question_id!r} has a cyclic parent chain")
        path.append(node)
        parent = parents.get(node)
        if parent is not None and parent not in parents:
            raise NotFound("category", parent)
        node = parent
    path.reverse()
    return path


@lru_cache(maxsize=1)
def builtin_sequential_schema() -> TaxonomySchema:
    """The shipped sequential-question schema, loaded from the embedded asset."""
    raw = resources.files("seqtax.assets").joinpath("schemas/sequential.json").read_bytes()
    return load_schema(raw)
