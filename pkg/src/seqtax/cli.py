"""Operator command line: batch classify, wizard, audit, corpus, compare, serve.

Exit codes: 0 success, 1 domain failure (failed audit criterion, missing
dossier), 2 usage or parse errors. Table output uses fixed-width ASCII so
golden tests can diff it byte for byte.
"""
from __future__ import annotations

import json
import os
import socket
import sys
from pathlib import Path

import click

from . import __version__
from .audit import audit as run_audit
from .audit import builtin_comparison_columns, render_comparison, render_report, report_to_dict
from .classifier import Classification, classification_from_answers, classification_to_dict, classify
from .corpus import (
    TAXONOMY_DISPLAY,
    Corpus,
    dossier_from_dict,
    dossier_to_dict,
    export_corpus,
    get as corpus_get,
    golden_corpus,
    import_corpus,
    upsert,
)
from .defense import DefensePlan, plan, plan_to_dict
from .errors import NotFound, ParseError, TaxonomyError
from .evidence import evidence_from_dict
from .rules import builtin_rules, load_rules
from .schema import TaxonomySchema, builtin_sequential_schema, load_schema, parse_json_document
from .tables import ascii_table

SCHEMA_ENV_VAR = "SEQTAX_SCHEMA"


def _active_schema() -> TaxonomySchema:
    override = os.environ.get(SCHEMA_ENV_VAR)
    if not override:
        return builtin_sequential_schema()
    try:
        return load_schema(Path(override).read_bytes())
    except (OSError, ParseError) as exc:
        raise click.UsageError(f"cannot load schema from {SCHEMA_ENV_VAR}={override}: {exc}")


def _read_file(path: str, what: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise click.UsageError(f"cannot read {what} file {path!r}: {exc}")


def _load_corpus(path: str | None) -> Corpus:
    if path is None:
        return golden_corpus()
    try:
        return import_corpus(_read_file(path, "corpus"))
    except TaxonomyError as exc:
        raise click.UsageError(f"cannot parse corpus file {path!r}: {exc}")


def _load_rules(path: str | None):
    if path is None:
        return builtin_rules()
    try:
        return load_rules(_read_file(path, "rules"))
    except ParseError as exc:
        raise click.UsageError(f"cannot parse rules file {path!r}: {exc}")


def render_classification_table(schema: TaxonomySchema,
                                classification: Classification) -> str:
    rows = []
    for question in schema.ordered_questions():
        assignment = classification.assignments[question.id]
        if assignment.is_assigned():
            answer = ", ".join(
                question.category(cid).label for cid in assignment.categories)
        else:
            answer = "Unknown"
        rows.append([question.label, answer])
    return ascii_table(["Question", "Answer"], rows)


def render_plan_table(defense_plan: DefensePlan) -> str:
    if not defense_plan.entries:
        return "No defence actions: no question has been answered yet.\n"
    rows = [[group.upper(), action.text] for group, action in defense_plan.entries]
    return ascii_table(["Question", "Defence action"], rows)


def _print_result(schema: TaxonomySchema, classification: Classification,
                  defense_plan: DefensePlan, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(
            {"classification": classification_to_dict(classification),
             "defense_plan": plan_to_dict(defense_plan)},
            indent=2, ensure_ascii=False))
        return
    click.echo("Classification")
    click.echo(render_classification_table(schema, classification), nl=False)
    click.echo("Defence plan")
    click.echo(render_plan_table(defense_plan), nl=False)


@click.group()
@click.version_option(version=__version__, prog_name="seqtax")
def main() -> None:
    """Sequential-question network attack triage."""


@main.command("classify")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Evidence record (JSON).")
@click.option("--rules", "rules_path", type=click.Path(exists=True, dir_okay=False),
              help="Alternate rules file; defaults to the shipped rule set.")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="table",
              show_default=True)
def cmd_classify(input_path: str, rules_path: str | None, fmt: str) -> None:
    """Classify one evidence record and plan the defence."""
    schema = _active_schema()
    rules = _load_rules(rules_path)
    try:
        evidence = evidence_from_dict(parse_json_document(_read_file(input_path, "evidence")))
    except ParseError as exc:
        raise click.UsageError(f"bad evidence file {input_path!r}: {exc}")
    try:
        classification = classify(schema, rules, evidence)
        defense_plan = plan(schema, classification, attack_name=evidence.attack_name)
    except TaxonomyError as exc:
        raise click.UsageError(str(exc))
    _print_result(schema, classification, defense_plan, fmt)


def _prompt_selection(question, numbered) -> list[str]:
    while True:
        raw = click.prompt("Select" if question.selection == "single"
                           else "Select (comma-separated for several)",
                           type=str, default="", show_default=False).strip()
        if raw in ("", "0"):
            return []
        parts = [p.strip() for p in raw.split(",") if p.strip()]
        if question.selection == "single" and len(parts) > 1:
            click.echo("This question takes a single answer; pick one number.")
            continue
        try:
            picks = [int(p) for p in parts]
        except ValueError:
            click.echo("Enter option numbers, e.g. 1 or 1,3.")
            continue
        if any(p < 0 or p > len(numbered) for p in picks):
            click.echo(f"Options run from 0 to {len(numbered)}; try again.")
            continue
        if 0 in picks:
            if len(picks) > 1:
                click.echo("0 (unknown) cannot be combined with other options.")
                continue
            return []
        return [numbered[p - 1].id for p in dict.fromkeys(picks)]


@main.command("wizard")
def cmd_wizard() -> None:
    """Answer the six questions interactively; see classification and plan."""
    schema = _active_schema()
    answers: dict[str, list[str]] = {}
    click.echo(f"{schema.name}: answer each question, 0 = unknown.\n")
    for question in schema.ordered_questions():
        click.echo(f"{question.label} - {question.prompt}")
        numbered = list(question.categories)
        for i, category in enumerate(numbered, start=1):
            click.echo(f"  {i}. {category.label}: {category.description}")
        click.echo("  0. Unknown")
        selected = _prompt_selection(question, numbered)
        if selected:
            answers[question.id] = selected
        click.echo("")
    classification = classification_from_answers(schema, answers)
    defense_plan = plan(schema, classification)
    _print_result(schema, classification, defense_plan, "table")


@main.command("audit")
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, dir_okay=False),
              help="Corpus NDJSON; defaults to the shipped golden corpus.")
@click.option("--repetitions", default=3, show_default=True,
              type=click.IntRange(min=2))
@click.option("--compare", "with_compare", is_flag=True,
              help="Also print the requirement comparison matrix.")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="table",
              show_default=True)
def cmd_audit(corpus_path: str | None, repetitions: int, with_compare: bool, fmt: str) -> None:
    """Audit the taxonomy requirements; exit 1 when a computed criterion fails."""
    schema = _active_schema()
    corpus = _load_corpus(corpus_path)
    report = run_audit(schema, builtin_rules(), corpus, repetitions)
    if fmt == "json":
        click.echo(json.dumps(report_to_dict(report), indent=2, ensure_ascii=False))
    else:
        click.echo(render_report(report), nl=False)
    if with_compare:
        click.echo(render_comparison([report], list(builtin_comparison_columns())), nl=False)
    if not report.all_computed_pass():
        sys.exit(1)


def render_dossier(schema: TaxonomySchema, dossier) -> str:
    lines = [f"Attack: {dossier.name}", ""]
    lines.append(f"[{schema.name}]")
    width = max(len(q.label) for q in schema.questions)
    for question in schema.ordered_questions():
        assignment = dossier.curated.assignments[question.id]
        if assignment.is_assigned():
            value = ", ".join(
                question.category(cid).label for cid in assignment.categories)
        else:
            value = "Unknown"
        lines.append(f"  {question.label.ljust(width)} : {value}")
    for taxonomy, rows in dossier.annotations.items():
        lines.append("")
        lines.append(f"[{TAXONOMY_DISPLAY[taxonomy]}]")
        label_width = max(len(label) for label, _ in rows)
        for label, value in rows:
            lines.append(f"  {label.ljust(label_width)} : {value}")
    lines.append("")
    lines.append(f"Provenance: {dossier.provenance}")
    return "\n".join(lines) + "\n"


@main.command("compare")
@click.option("--name", required=True, help="Dossier name, e.g. Blaster.")
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, dir_okay=False))
def cmd_compare(name: str, corpus_path: str | None) -> None:
    """Show one attack's sequential row beside its foreign-taxonomy rows."""
    schema = _active_schema()
    corpus = _load_corpus(corpus_path)
    try:
        dossier = corpus_get(corpus, name)
    except NotFound as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    click.echo(render_dossier(schema, dossier), nl=False)


@main.group("corpus")
def cmd_corpus() -> None:
    """Inspect, export and extend dossier corpora."""


@cmd_corpus.command("list")
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, dir_okay=False))
def corpus_list(corpus_path: str | None) -> None:
    """List dossier names."""
    corpus = _load_corpus(corpus_path)
    for name in sorted(corpus.dossiers):
        click.echo(name)


@cmd_corpus.command("show")
@click.argument("name")
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, dir_okay=False))
def corpus_show(name: str, corpus_path: str | None) -> None:
    """Print one dossier as JSON."""
    corpus = _load_corpus(corpus_path)
    try:
        dossier = corpus_get(corpus, name)
    except NotFound as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    click.echo(json.dumps(dossier_to_dict(dossier), indent=2, ensure_ascii=False))


@cmd_corpus.command("export")
@click.option("--output", "output_path", required=True, type=click.Path(dir_okay=False))
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, dir_okay=False))
def corpus_export(output_path: str, corpus_path: str | None) -> None:
    """Write a corpus as NDJSON (defaults to the golden corpus)."""
    corpus = _load_corpus(corpus_path)
    Path(output_path).write_bytes(export_corpus(corpus))
    click.echo(f"wrote {len(corpus)} dossiers to {output_path}")


@cmd_corpus.command("add")
@click.option("--dossier", "dossier_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Dossier JSON object to insert or replace.")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(dir_okay=False),
              help="Corpus NDJSON file to update (created when missing).")
def corpus_add(dossier_path: str, corpus_path: str) -> None:
    """Upsert a dossier into a corpus file."""
    try:
        dossier = dossier_from_dict(parse_json_document(_read_file(dossier_path, "dossier")))
    except ParseError as exc:
        raise click.UsageError(f"bad dossier file {dossier_path!r}: {exc}")
    corpus = _load_corpus(corpus_path) if Path(corpus_path).exists() else Corpus(dossiers={})
    corpus = upsert(corpus, dossier)
    Path(corpus_path).write_bytes(export_corpus(corpus))
    click.echo(f"corpus {corpus_path} now holds {len(corpus)} dossiers")


@main.command("serve")
@click.option("--port", default=8642, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--corpus", "corpus_path", type=click.Path(dir_okay=False))
@click.option("--ui-origin", default=None,
              help="Origin allowed to call the API from a browser.")
@click.option("--ui-dir", type=click.Path(file_okay=False), default=None,
              help="Static UI assets to mount under /ui (default: frontend/dist).")
def cmd_serve(port: int, host: str, corpus_path: str | None,
              ui_origin: str | None, ui_dir: str | None) -> None:
    """Serve the HTTP API (and the triage UI when built)."""
    import uvicorn

    from .api import create_app

    if corpus_path is not None and not Path(corpus_path).exists():
        raise click.UsageError(f"corpus file {corpus_path!r} does not exist")
    corpus = _load_corpus(corpus_path)

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise click.UsageError(f"cannot bind {host}:{port}: {exc}")
    finally:
        probe.close()

    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = "frontend/dist"
    app = create_app(schema=_active_schema(), corpus=corpus,
                     ui_origin=ui_origin, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, access_log=False, log_level="info")


if __name__ == "__main__":
    main()
