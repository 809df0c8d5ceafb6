from __future__ import annotations

import json
import socket
from dataclasses import replace

import pytest
from click.testing import CliRunner

from seqtax.classifier import classification_from_answers, classify
from seqtax.cli import main, render_classification_table, render_plan_table
from seqtax.corpus import dossier_to_dict, export_corpus, golden_corpus, upsert
from seqtax.defense import plan
from seqtax.evidence import EvidenceRecord, evidence_to_dict
from seqtax.rules import rules_to_json
from seqtax.schema import dump_schema

# Wizard keystrokes reproducing the Blaster answers, question by question.
BLASTER_WIZARD_INPUT = "3\n1\n6\n3\n1\n3\n"


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def blaster_file(tmp_path, golden):
    path = tmp_path / "blaster.json"
    path.write_text(json.dumps(evidence_to_dict(golden.dossiers["Blaster"].evidence)))
    return str(path)


class TestClassify:
    def test_blaster_table_names_the_attacker_class(self, runner, blaster_file):
        result = runner.invoke(main, ["classify", "--input", blaster_file])
        assert result.exit_code == 0
        assert "Black-hat hackers" in result.output
        assert "Legacy network equipment ports" in result.output

    def test_empty_evidence_is_all_unknown(self, runner, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text("{}")
        result = runner.invoke(main, ["classify", "--input", str(path)])
        assert result.exit_code == 0
        assert result.output.count("Unknown") == 6
        assert "No defence actions" in result.output

    def test_missing_file_is_usage_error(self, runner):
        result = runner.invoke(main, ["classify", "--input", "no-such-file.json"])
        assert result.exit_code == 2

    def test_malformed_evidence_names_offending_field(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"attack_name": "x", "flavour": "spicy"}))
        result = runner.invoke(main, ["classify", "--input", str(path)])
        assert result.exit_code == 2
        assert "flavour" in result.output

    def test_json_format_matches_library(self, runner, blaster_file, schema, rules, golden):
        result = runner.invoke(main, ["classify", "--input", blaster_file,
                                      "--format", "json"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        classification = classify(schema, rules, golden.dossiers["Blaster"].evidence)
        from seqtax.classifier import classification_to_dict
        from seqtax.defense import plan_to_dict

        assert payload["classification"] == classification_to_dict(classification)
        assert payload["defense_plan"] == plan_to_dict(
            plan(schema, classification, attack_name="Blaster"))

    def test_custom_rules_file(self, runner, blaster_file, tmp_path, rules):
        rules_path = tmp_path / "rules.json"
        rules_path.write_text(rules_to_json(rules))
        result = runner.invoke(main, ["classify", "--input", blaster_file,
                                      "--rules", str(rules_path)])
        assert result.exit_code == 0
        assert "Black-hat hackers" in result.output

    def test_bad_rules_file(self, runner, blaster_file, tmp_path):
        rules_path = tmp_path / "rules.json"
        rules_path.write_text("[{]")
        result = runner.invoke(main, ["classify", "--input", blaster_file,
                                      "--rules", str(rules_path)])
        assert result.exit_code == 2


class TestWizard:
    def test_blaster_answers_match_batch_output(self, runner, blaster_file):
        batch = runner.invoke(main, ["classify", "--input", blaster_file])
        wizard = runner.invoke(main, ["wizard"], input=BLASTER_WIZARD_INPUT)
        assert wizard.exit_code == 0
        tail = wizard.output[wizard.output.index("Classification"):]
        assert tail == batch.output

    def test_all_unknown_yields_empty_plan(self, runner):
        result = runner.invoke(main, ["wizard"], input="0\n0\n0\n0\n0\n0\n")
        assert result.exit_code == 0
        assert result.output.count("Unknown") >= 6
        assert "No defence actions" in result.output

    def test_out_of_range_selection_reprompts(self, runner):
        result = runner.invoke(main, ["wizard"], input="9\n3\n1\n6\n3\n1\n3\n")
        assert result.exit_code == 0
        assert "Options run from 0 to 5" in result.output
        assert "Black-hat hackers" in result.output

    def test_multi_select_on_what(self, runner):
        result = runner.invoke(main, ["wizard"], input="0\n0\n0\n0\n0\n2,3\n")
        assert result.exit_code == 0
        assert "Traffic volume, Controllable requests" in result.output

    def test_single_select_rejects_multiple(self, runner):
        result = runner.invoke(main, ["wizard"], input="1,2\n1\n0\n0\n0\n0\n0\n")
        assert result.exit_code == 0
        assert "single answer" in result.output

    def test_wizard_equals_direct_answer_classification(self, runner, schema):
        wizard = runner.invoke(main, ["wizard"], input=BLASTER_WIZARD_INPUT)
        classification = classification_from_answers(schema, {
            "who": ["black_hat"], "where_location": ["host_initiated"],
            "where_scope": ["host_based"], "how_platform": ["embedded_hardware"],
            "how_channel": ["legacy_ports"], "what": ["controllable_requests"]})
        expected = render_classification_table(schema, classification)
        assert expected in wizard.output
        assert render_plan_table(plan(schema, classification)) in wizard.output


class TestAudit:
    def test_golden_corpus_passes(self, runner):
        result = runner.invoke(main, ["audit"])
        assert result.exit_code == 0
        assert "pass" in result.output
        assert "FAIL" not in result.output

    def test_unclassifiable_record_fails_with_count(self, runner, tmp_path, schema, golden):
        from seqtax.corpus import AttackDossier

        broken = upsert(golden, AttackDossier(
            name="Unclassifiable",
            evidence=EvidenceRecord(attack_name="Unclassifiable"),
            curated=classification_from_answers(schema, {}),
            annotations={},
            provenance="constructed"))
        path = tmp_path / "corpus.ndjson"
        path.write_bytes(export_corpus(broken))
        result = runner.invoke(main, ["audit", "--corpus", str(path)])
        assert result.exit_code == 1
        assert "5/6" in result.output

    def test_compare_flag_prints_matrix(self, runner):
        result = runner.invoke(main, ["audit", "--compare"])
        assert result.exit_code == 0
        assert "Van Heerden" in result.output
        assert "Simmons" in result.output
        assert "Proposed" in result.output

    def test_bad_corpus_file_is_usage_error(self, runner, tmp_path):
        path = tmp_path / "corpus.ndjson"
        path.write_text("not json\n")
        result = runner.invoke(main, ["audit", "--corpus", str(path)])
        assert result.exit_code == 2

    def test_json_format(self, runner):
        result = runner.invoke(main, ["audit", "--format", "json"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["computed"]["complete_over_corpus"]["pass"] is True


class TestCompare:
    def test_slammer_block_contains_avoidit_row(self, runner):
        result = runner.invoke(main, ["compare", "--name", "Slammer"])
        assert result.exit_code == 0
        assert "Misconfiguration" in result.output
        assert "[AVOIDIT]" in result.output

    def test_morris_shows_only_its_taxonomies(self, runner):
        result = runner.invoke(main, ["compare", "--name", "Morris"])
        assert result.exit_code == 0
        assert "[Hansman-Hunt]" in result.output
        assert "[ADMIT]" in result.output
        assert "[VERDICT]" not in result.output
        assert "[AVOIDIT]" not in result.output
        assert "[Howard]" not in result.output

    def test_unknown_name_exits_one(self, runner):
        result = runner.invoke(main, ["compare", "--name", "Nimda"])
        assert result.exit_code == 1


class TestCorpusCommands:
    def test_list_golden(self, runner):
        result = runner.invoke(main, ["corpus", "list"])
        assert result.exit_code == 0
        assert result.output.splitlines() == [
            "Blaster", "MS_RPC", "Melissa", "Morris", "Slammer"]

    def test_show_blaster(self, runner, golden):
        result = runner.invoke(main, ["corpus", "show", "Blaster"])
        assert result.exit_code == 0
        assert json.loads(result.output) == dossier_to_dict(golden.dossiers["Blaster"])

    def test_show_unknown_exits_one(self, runner):
        result = runner.invoke(main, ["corpus", "show", "Nimda"])
        assert result.exit_code == 1

    def test_export_writes_golden_bytes(self, runner, tmp_path, golden):
        out = tmp_path / "out.ndjson"
        result = runner.invoke(main, ["corpus", "export", "--output", str(out)])
        assert result.exit_code == 0
        assert out.read_bytes() == export_corpus(golden)

    def test_add_upserts_into_file(self, runner, tmp_path, golden):
        corpus_path = tmp_path / "corpus.ndjson"
        corpus_path.write_bytes(export_corpus(golden))
        dossier = dossier_to_dict(replace(golden.dossiers["Blaster"], name="Blaster-2"))
        dossier_path = tmp_path / "dossier.json"
        dossier_path.write_text(json.dumps(dossier))
        result = runner.invoke(main, ["corpus", "add", "--dossier", str(dossier_path),
                                      "--corpus", str(corpus_path)])
        assert result.exit_code == 0
        listing = runner.invoke(main, ["corpus", "list", "--corpus", str(corpus_path)])
        assert "Blaster-2" in listing.output

    def test_add_bad_dossier_is_usage_error(self, runner, tmp_path):
        dossier_path = tmp_path / "dossier.json"
        dossier_path.write_text("{}")
        result = runner.invoke(main, ["corpus", "add", "--dossier", str(dossier_path),
                                      "--corpus", str(tmp_path / "c.ndjson")])
        assert result.exit_code == 2


class TestServe:
    def test_bad_corpus_path_is_usage_error(self, runner):
        result = runner.invoke(main, ["serve", "--corpus", "missing.ndjson"])
        assert result.exit_code == 2

    def test_busy_port_is_usage_error(self, runner):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        blocker.bind(("127.0.0.1", 0))
        blocker.listen(1)
        port = blocker.getsockname()[1]
        try:
            result = runner.invoke(main, ["serve", "--port", str(port)])
            assert result.exit_code == 2
            assert "cannot bind" in result.output
        finally:
            blocker.close()


class TestSchemaOverride:
    def test_env_var_swaps_the_schema(self, runner, tmp_path, schema, blaster_file):
        renamed = replace(schema, questions=tuple(
            replace(q, label="Attacker" if q.id == "who" else q.label)
            for q in schema.questions))
        override = tmp_path / "alt.json"
        override.write_text(dump_schema(renamed))
        result = runner.invoke(main, ["classify", "--input", blaster_file],
                               env={"SEQTAX_SCHEMA": str(override)})
        assert result.exit_code == 0
        assert "Attacker" in result.output

    def test_unreadable_override_is_usage_error(self, runner, blaster_file):
        result = runner.invoke(main, ["classify", "--input", blaster_file],
                               env={"SEQTAX_SCHEMA": "/nonexistent.json"})
        assert result.exit_code == 2


def test_golden_corpus_is_not_mutated_by_commands(runner=None):
    assert len(golden_corpus()) == 5
