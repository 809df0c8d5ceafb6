"""Acceptance gate: run with `pytest tests/test_acceptance.py -s -v` to see one
pass/fail line per criterion."""
from __future__ import annotations

import json
import random
import time

from fastapi.testclient import TestClient

from helpers import BROKEN_RULES, random_evidence
from seqtax.api import create_app
from seqtax.audit import audit, builtin_comparison_columns, render_comparison
from seqtax.classifier import (
    ASSIGNED,
    UNKNOWN,
    classification_from_answers,
    classification_to_dict,
    classify,
)
from seqtax.defense import plan
from seqtax.evidence import AttackerMotive, evidence_to_dict
from seqtax.overlap import detect_rule_overlaps
from seqtax.schema import validate_schema
from test_audit import EXPECTED_MATRIX
from test_defense import expected_plan_ids


def _verdict(criterion: str, ok: bool) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion}")
    return ok


def test_golden_fidelity(schema, rules, golden):
    """All 5 dossiers classify to their curated rows, in under a second."""
    started = time.perf_counter()
    mismatches = []
    for name, dossier in golden.dossiers.items():
        computed = classify(schema, rules, dossier.evidence)
        if computed.answers() != dossier.curated.answers():
            mismatches.append(name)
    elapsed = time.perf_counter() - started
    ok = not mismatches and len(golden) == 5 and elapsed < 1.0
    assert _verdict(
        f"golden fidelity: {5 - len(mismatches)}/5 rows equal in {elapsed:.3f}s", ok), \
        f"mismatched: {mismatches}, elapsed {elapsed:.3f}s"


def test_schema_shape(schema):
    """6 questions; category counts 5/2/5(+4 children)/4/5/3; zero violations."""
    ordered = schema.ordered_questions()
    counts_ok = (
        [q.id for q in ordered] == ["who", "where_location", "where_scope",
                                    "how_platform", "how_channel", "what"]
        and len(schema.question("who").categories) == 5
        and len(schema.question("where_location").categories) == 2
        and len(schema.question("where_scope").roots()) == 5
        and len(schema.question("where_scope").children("object_based")) == 4
        and len(schema.question("how_platform").categories) == 4
        and len(schema.question("how_channel").categories) == 5
        and len(schema.question("what").categories) == 3
    )
    violations = validate_schema(schema)
    ok = counts_ok and violations == []
    assert _verdict(
        f"schema shape: counts ok={counts_ok}, violations={len(violations)}", ok)


def test_unambiguity(schema, rules):
    """Shipped rules scan clean; the broken fixture yields exactly one witness."""
    shipped = detect_rule_overlaps(schema, rules)
    broken = detect_rule_overlaps(schema, BROKEN_RULES)
    witness_valid = (
        len(broken) == 1
        and broken[0].witness.attacker_motive is AttackerMotive.DAMAGE_OR_THEFT
        and all(rule.matches(broken[0].witness) for rule in BROKEN_RULES)
        and broken[0].rule_a != broken[0].rule_b
    )
    ok = shipped == [] and witness_valid
    assert _verdict(
        f"unambiguity: shipped overlaps={len(shipped)}, "
        f"fixture overlaps={len(broken)} with valid witness={witness_valid}", ok)


def test_repeatability(schema, rules, golden):
    """1,000 fuzzed records x3 permuted rule orders, identical, under 10s."""
    rng = random.Random(1988)
    records = [random_evidence(rng) for _ in range(1_000)]
    started = time.perf_counter()
    unstable = 0
    rule_list = list(rules)
    for record in records:
        baseline = classify(schema, rule_list, record)
        for _ in range(2):
            shuffled = list(rule_list)
            rng.shuffle(shuffled)
            if classify(schema, shuffled, record) != baseline:
                unstable += 1
                break
    elapsed = time.perf_counter() - started
    report = audit(schema, rules, golden, 3)
    ok = unstable == 0 and elapsed < 10.0 and report.computed["repeatable"].passed
    assert _verdict(
        f"repeatability: {1_000 - unstable}/1000 stable in {elapsed:.2f}s, "
        f"audit repeatable={report.computed['repeatable'].passed}", ok)


def test_totality(schema, rules):
    """>=10,000 fuzzed records, every classification well-formed, zero failures."""
    rng = random.Random(2003)
    question_ids = {q.id for q in schema.questions}
    failures = 0
    cases = 10_000
    for _ in range(cases):
        record = random_evidence(rng)
        try:
            result = classify(schema, rules, record)
        except Exception:
            failures += 1
            continue
        if set(result.assignments) != question_ids:
            failures += 1
            continue
        for qid, assignment in result.assignments.items():
            question = schema.question(qid)
            well_formed = (
                (assignment.status == ASSIGNED and assignment.categories)
                or (assignment.status == UNKNOWN and not assignment.categories)
            )
            if not well_formed or (question.selection == "single"
                                   and len(assignment.categories) > 1):
                failures += 1
                break
            if any(not question.has_category(c) for c in assignment.categories):
                failures += 1
                break
    ok = failures == 0
    assert _verdict(f"totality: {cases - failures}/{cases} well-formed", ok)


def test_table_1_reproduction(schema, rules, golden):
    """Matrix equals the published 10-row Yes/No table, byte-stable."""
    columns = list(builtin_comparison_columns())
    first = render_comparison([audit(schema, rules, golden, 3)], columns)
    second = render_comparison([audit(schema, rules, golden, 3)], columns)
    proposed_all_yes = all(
        line.strip().endswith("Yes      |") or not line.startswith("| ")
        for line in first.splitlines()[3:-1])
    simmons_no = "| Mutual Exclusion | Yes         | No      | Yes      |" in first
    ok = first == EXPECTED_MATRIX and first == second and proposed_all_yes and simmons_no
    assert _verdict(
        f"table 1 reproduction: byte-stable={first == second}, "
        f"proposed all yes={proposed_all_yes}, simmons mutual exclusion no={simmons_no}",
        ok)


def test_defense_plan(schema, rules, golden):
    """Blaster plan equals the independent table enumeration; monotone over
    1,000 random answer-subset pairs."""
    classification = classify(schema, rules, golden.dossiers["Blaster"].evidence)
    answers = {qid: list(a.categories)
               for qid, a in classification.assignments.items() if a.categories}
    blaster_plan = plan(schema, classification, attack_name="Blaster")
    blaster_ok = list(blaster_plan.action_ids()) == expected_plan_ids(answers) and \
        [g for g, _ in blaster_plan.entries] == ["who", "where", "where", "how",
                                                 "what", "what"]

    rng = random.Random(29)
    violations = 0
    for _ in range(1_000):
        smaller: dict[str, list[str]] = {}
        larger: dict[str, list[str]] = {}
        for question in schema.questions:
            pick = rng.random()
            if pick < 0.4:
                continue
            cids = [rng.choice(question.categories).id]
            larger[question.id] = cids
            if pick < 0.7:
                smaller[question.id] = cids
        plan_small = plan(schema, classification_from_answers(schema, smaller))
        plan_large = plan(schema, classification_from_answers(schema, larger))
        if not set(plan_small.action_ids()) <= set(plan_large.action_ids()):
            violations += 1
    ok = blaster_ok and violations == 0
    assert _verdict(
        f"defense plan: blaster families exact={blaster_ok}, "
        f"monotonicity violations={violations}/1000", ok)


def test_api_equals_library(schema, rules, golden):
    """POST /classify byte-equals the library; /next is the minimum-order
    unanswered question over 500 random answer subsets."""
    from seqtax.defense import plan_to_dict

    with TestClient(create_app()) as client:
        equal = 0
        for dossier in golden.dossiers.values():
            response = client.post("/classify", json=evidence_to_dict(dossier.evidence))
            classification = classify(schema, rules, dossier.evidence)
            expected = {
                "classification": classification_to_dict(classification),
                "defense_plan": plan_to_dict(plan(
                    schema, classification, attack_name=dossier.evidence.attack_name)),
            }
            if json.dumps(response.json(), sort_keys=True) == \
                    json.dumps(expected, sort_keys=True):
                equal += 1

        rng = random.Random(641)
        ordered = [q.id for q in schema.ordered_questions()]
        next_ok = 0
        subsets = 500
        for _ in range(subsets):
            subset = [qid for qid in ordered if rng.random() < 0.5]
            sid = client.post("/sessions").json()["session_id"]
            for qid in subset:
                question = schema.question(qid)
                client.post(f"/sessions/{sid}/answers", json={
                    "question_id": qid,
                    "category_ids": [rng.choice(question.categories).id]})
            view = client.get(f"/sessions/{sid}/next").json()
            unanswered = [qid for qid in ordered if qid not in subset]
            if (view["question"]["id"] == unanswered[0]) if unanswered \
                    else (view["done"] is True):
                next_ok += 1
    ok = equal == 5 and next_ok == subsets
    assert _verdict(
        f"api == library: classify equal {equal}/5, "
        f"next-question correct {next_ok}/{subsets}", ok)
