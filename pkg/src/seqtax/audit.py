"""Requirements audit: computed criteria, declared manual flags, comparison matrix.

Four criteria are machine-checkable against a schema, rule set and corpus:
mutual exclusivity, completeness over the corpus, repeatability under rule
permutation, and unambiguity (zero rule overlaps). The judgement-call
criteria (accepted, comprehensible, ...) are never computed; they are read
from a declarations file that pairs each flag with its justification.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any, Mapping, Sequence

from .classifier import classify
from .corpus import Corpus
from .errors import ParseError
from .overlap import detect_rule_overlaps
from .rules import Rule
from .schema import TaxonomySchema, parse_json_document
from .tables import ascii_table

COMPUTED_CRITERIA = ("mutually_exclusive", "complete_over_corpus", "repeatable", "unambiguous")
MANUAL_CRITERIA = ("accepted", "comprehensible", "conforming", "determined",
                   "exhaustive", "well_defined", "useful")

# Row order and display labels of the published comparison matrix.
COMPARISON_ROWS: tuple[tuple[str, str], ...] = (
    ("accepted", "Accepted"),
    ("comprehensible", "Comprehensible"),
    ("conforming", "Conforming"),
    ("determined", "Determined"),
    ("exhaustive", "Exhaustive"),
    ("mutual_exclusion", "Mutual Exclusion"),
    ("repeatable", "Repeatable"),
    ("well_defined", "Well Defined"),
    ("unambiguous", "Unambiguous"),
    ("useful", "Useful"),
)


@dataclass(frozen=True)
class CriterionResult:
    passed: bool
    numerator: int
    denominator: int
    detail: str


@dataclass(frozen=True)
class AuditReport:
    schema_id: str
    computed: Mapping[str, CriterionResult]
    manual: Mapping[str, bool]
    evidence: Mapping[str, str]
    seed: int
    repetitions: int

    def all_computed_pass(self) -> bool:
        return all(result.passed for result in self.computed.values())


@dataclass(frozen=True)
class ComparisonColumn:
    """One named Yes/No column of the comparison matrix."""

    name: str
    values: Mapping[str, bool]


@lru_cache(maxsize=1)
def builtin_manual_flags() -> dict[str, dict[str, Any]]:
    raw = resources.files("seqtax.assets").joinpath("audit/manual_flags.json").read_bytes()
    return load_manual_flags(raw)


def load_manual_flags(document: bytes | str) -> dict[str, dict[str, Any]]:
    """Parse a declarations file: {criterion: {value, justification}}."""
    data = parse_json_document(document)
    if not isinstance(data, dict):
        raise ParseError("manual flags document must be a JSON object")
    for key in data:
        if key not in MANUAL_CRITERIA:
            raise ParseError(
                f"unknown manual criterion {key!r} (expected one of {MANUAL_CRITERIA})",
                subject=key)
    out: dict[str, dict[str, Any]] = {}
    for criterion in MANUAL_CRITERIA:
        entry = data.get(criterion)
        if not isinstance(entry, dict) or not isinstance(entry.get("value"), bool) \
                or not isinstance(entry.get("justification"), str):
            raise ParseError(
                f"manual criterion {criterion!r} needs a boolean 'value' and a "
                f"'justification' string", subject=criterion)
        out[criterion] = {"value": entry["value"], "justification": entry["justification"]}
    return out


def audit(schema: TaxonomySchema, rules: Sequence[Rule], corpus: Corpus,
          repetitions: int, *, manual_flags: Mapping[str, Mapping[str, Any]] | None = None,
          seed: int = 7) -> AuditReport:
    """Evaluate the computable criteria and attach the declared manual flags."""
    if repetitions < 2:
        raise ValueError("repetitions must be at least 2")
    if manual_flags is None:
        manual_flags = builtin_manual_flags()

    names = sorted(corpus.dossiers)
    baseline = {name: classify(schema, rules, corpus.dossiers[name].evidence)
                for name in names}
    single_select = [q for q in schema.ordered_questions() if q.selection == "single"]
    overlaps = detect_rule_overlaps(schema, rules)

    # Mutual exclusivity: one category per single-select answer on every
    # record, and no equal-priority ambiguity anywhere in the rule set.
    exclusive_records = [
        name for name in names
        if all(len(baseline[name].assignments[q.id].categories) <= 1 for q in single_select)
    ]
    mutually_exclusive = CriterionResult(
        passed=len(exclusive_records) == len(names) and not overlaps,
        numerator=len(exclusive_records),
        denominator=len(names),
        detail=(f"{len(exclusive_records)}/{len(names)} records single-categoried "
                f"on single-select questions; {len(overlaps)} rule overlap(s)"),
    )

    complete_records = [
        name for name in names
        if all(a.is_assigned() for a in baseline[name].assignments.values())
    ]
    if names:
        complete_detail = f"{len(complete_records)}/{len(names)} records fully classified"
        incomplete = [n for n in names if n not in complete_records]
        if incomplete:
            complete_detail += f"; unresolved: {', '.join(incomplete)}"
    else:
        complete_detail = "0/0 records: empty corpus, vacuously complete"
    complete = CriterionResult(
        passed=len(complete_records) == len(names),
        numerator=len(complete_records),
        denominator=len(names),
        detail=complete_detail,
    )

    rng = random.Random(seed)
    stable_records = []
    for name in names:
        stable = True
        for _ in range(repetitions - 1):
            shuffled = list(rules)
            rng.shuffle(shuffled)
            if classify(schema, shuffled, corpus.dossiers[name].evidence) != baseline[name]:
                stable = False
                break
        if stable:
            stable_records.append(name)
    repeatable = CriterionResult(
        passed=len(stable_records) == len(names),
        numerator=len(stable_records),
        denominator=len(names),
        detail=(f"{len(stable_records)}/{len(names)} records identical across "
                f"{repetitions} rule-order permutations (seed {seed})"),
    )

    clean_questions = [
        q for q in single_select if not any(o.question_id == q.id for o in overlaps)
    ]
    unambiguous_detail = (
        f"{len(clean_questions)}/{len(single_select)} single-select questions overlap-free")
    if overlaps:
        first = overlaps[0]
        unambiguous_detail += (
            f"; e.g. rules {first.rule_a!r} and {first.rule_b!r} on "
            f"{first.question_id!r} both match one record")
    unambiguous = CriterionResult(
        passed=not overlaps,
        numerator=len(clean_questions),
        denominator=len(single_select),
        detail=unambiguous_detail,
    )

    computed = {
        "mutually_exclusive": mutually_exclusive,
        "complete_over_corpus": complete,
        "repeatable": repeatable,
        "unambiguous": unambiguous,
    }
    manual = {criterion: bool(manual_flags[criterion]["value"])
              for criterion in MANUAL_CRITERIA}
    evidence = {criterion: result.detail for criterion, result in computed.items()}
    evidence.update({
        criterion: str(manual_flags[criterion]["justification"])
        for criterion in MANUAL_CRITERIA
    })
    return AuditReport(
        schema_id=schema.id,
        computed=computed,
        manual=manual,
        evidence=evidence,
        seed=seed,
        repetitions=repetitions,
    )


def report_to_dict(report: AuditReport) -> dict[str, Any]:
    return {
        "schema_id": report.schema_id,
        "seed": report.seed,
        "repetitions": report.repetitions,
        "computed": {
            criterion: {
                "pass": result.passed,
                "numerator": result.numerator,
                "denominator": result.denominator,
                "detail": result.detail,
            }
            for criterion, result in report.computed.items()
        },
        "manual": dict(report.manual),
        "evidence": dict(report.evidence),
    }


def render_report(report: AuditReport) -> str:
    """Plain-text report: computed results first, then the declared flags."""
    rows = [
        [criterion, "pass" if result.passed else "FAIL",
         f"{result.numerator}/{result.denominator}", result.detail]
        for criterion, result in report.computed.items()
    ]
    out = f"Audit of schema {report.schema_id!r}\n"
    out += ascii_table(["Computed criterion", "Result", "Count", "Detail"], rows)
    manual_rows = [
        [criterion, "yes" if report.manual[criterion] else "no",
         report.evidence[criterion]]
        for criterion in MANUAL_CRITERIA
    ]
    out += ascii_table(["Declared criterion", "Value", "Justification"], manual_rows)
    return out


def _report_column(report: AuditReport, name: str) -> ComparisonColumn:
    values = {
        "accepted": report.manual["accepted"],
        "comprehensible": report.manual["comprehensible"],
        "conforming": report.manual["conforming"],
        "determined": report.manual["determined"],
        "exhaustive": report.manual["exhaustive"],
        "mutual_exclusion": report.computed["mutually_exclusive"].passed,
        "repeatable": report.computed["repeatable"].passed,
        "well_defined": report.manual["well_defined"],
        "unambiguous": report.computed["unambiguous"].passed,
        "useful": report.manual["useful"],
    }
    return ComparisonColumn(name=name, values=values)


def builtin_comparison_columns() -> tuple[ComparisonColumn, ComparisonColumn]:
    """The two published reference columns of the comparison matrix."""
    van_heerden = ComparisonColumn("Van Heerden", {
        "accepted": True, "comprehensible": True, "conforming": True,
        "determined": True, "exhaustive": False, "mutual_exclusion": True,
        "repeatable": True, "well_defined": False, "unambiguous": True,
        "useful": True,
    })
    simmons = ComparisonColumn("Simmons", {
        "accepted": True, "comprehensible": True, "conforming": True,
        "determined": True, "exhaustive": True, "mutual_exclusion": False,
        "repeatable": True, "well_defined": True, "unambiguous": True,
        "useful": True,
    })
    return van_heerden, simmons


def render_comparison(reports: Sequence[AuditReport],
                      external_rows: Sequence[ComparisonColumn]) -> str:
    """Yes/No matrix: one column per external row and audited report."""
    columns = list(external_rows)
    for i, report in enumerate(reports):
        name = "Proposed" if len(reports) == 1 else f"Proposed ({report.schema_id})"
        if len(reports) > 1 and sum(r.schema_id == report.schema_id for r in reports) > 1:
            name = f"Proposed ({report.schema_id} #{i + 1})"
        columns.append(_report_column(report, name))
    headers = ["Requirement", *(column.name for column in columns)]
    if not columns:
        return ascii_table(headers, [])
    rows = [
        [label, *("Yes" if column.values.get(key, False) else "No" for column in columns)]
        for key, label in COMPARISON_ROWS
    ]
    return ascii_table(headers, rows)


def manual_flags_to_json(flags: Mapping[str, Mapping[str, Any]]) -> str:
    return json.dumps({k: dict(v) for k, v in flags.items()},
                      indent=2, ensure_ascii=False) + "\n"
