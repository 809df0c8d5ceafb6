from __future__ import annotations

import pytest
from hypothesis import given, settings

from helpers import evidence_records
from seqtax.errors import ParseError
from seqtax.evidence import (
    ChannelSignals,
    EvidenceRecord,
    Symptom,
    evidence_from_dict,
    evidence_to_dict,
)


def test_minimal_record():
    record = evidence_from_dict({})
    assert record == EvidenceRecord()
    assert record.symptoms == frozenset()


def test_unknown_field_rejected_by_name():
    with pytest.raises(ParseError) as err:
        evidence_from_dict({"attack_name": "x", "severity": "high"})
    assert err.value.subject == "severity"
    assert "severity" in str(err.value)


def test_unknown_channel_field_rejected():
    with pytest.raises(ParseError) as err:
        evidence_from_dict({"channel": {"protocol": "tcp"}})
    assert err.value.subject == "channel.protocol"


def test_bad_enum_value_names_field():
    with pytest.raises(ParseError) as err:
        evidence_from_dict({"attacker_motive": "revenge"})
    assert err.value.subject == "attacker_motive"


def test_port_bounds():
    with pytest.raises(ParseError):
        evidence_from_dict({"channel": {"port": 70000}})
    with pytest.raises(ParseError):
        evidence_from_dict({"channel": {"port": -1}})
    with pytest.raises(ValueError):
        ChannelSignals(port=65536)
    assert ChannelSignals(port=0).port == 0
    assert ChannelSignals(port=65535).port == 65535


def test_symptoms_are_a_closed_set():
    record = evidence_from_dict({"symptoms": ["request_flood"]})
    assert record.symptoms == frozenset({Symptom.REQUEST_FLOOD})
    with pytest.raises(ParseError):
        evidence_from_dict({"symptoms": ["sneezing"]})


def test_symptoms_serialize_in_declaration_order():
    record = evidence_from_dict({
        "symptoms": ["abnormal_controllable_requests", "request_flood",
                     "resource_utilization_anomaly"]})
    assert evidence_to_dict(record)["symptoms"] == [
        "resource_utilization_anomaly", "request_flood", "abnormal_controllable_requests"]


def test_golden_blaster_round_trip(golden):
    blaster = golden.dossiers["Blaster"].evidence
    assert evidence_from_dict(evidence_to_dict(blaster)) == blaster


@settings(max_examples=150, deadline=None)
@given(evidence_records())
def test_round_trip_is_identity(record):
    assert evidence_from_dict(evidence_to_dict(record)) == record
