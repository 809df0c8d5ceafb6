"""Structured observations about one attack, as fed to the classifier.

Every field except the attack name is optional: absence means the analyst
does not know, and the classifier must answer "unknown" rather than guess.
"""
from __future__ import annotations

from dataclasses import dataclass, fields as dataclass_fields
from enum import Enum
from typing import Any

from .errors import ParseError


class AttackerMotive(str, Enum):
    LEARNING_CHALLENGE = "learning_challenge"
    VULNERABILITY_REPORTING = "vulnerability_reporting"
    DAMAGE_OR_THEFT = "damage_or_theft"
    FINANCIAL_COMPETITION = "financial_competition"
    POLITICAL = "political"


class AttackerKind(str, Enum):
    INDIVIDUAL = "individual"
    GROUP = "group"
    ORGANIZATION = "organization"
    GOVERNMENT = "government"


class Initiation(str, Enum):
    HOST = "host"
    NETWORK = "network"


class SourceCount(str, Enum):
    SINGLE = "single"
    MULTIPLE = "multiple"


class ScopeHint(str, Enum):
    """Observed target granularity; physical objects carry their object group."""

    PHYSICAL_COMPUTER = "physical_object:computer"
    PHYSICAL_MOBILITY_DEVICE = "physical_object:mobility_device"
    PHYSICAL_EMBEDDED_DEVICE = "physical_object:embedded_device"
    PHYSICAL_NETWORK_EQUIPMENT = "physical_object:network_equipment"
    HOST = "host"
    LOCAL_SEGMENT = "local_segment"
    CORE_NETWORK = "core_network"
    WIRELESS = "wireless"


class PlatformHint(str, Enum):
    OS_OR_APPLICATION = "os_or_application"
    PHYSICAL_ACCESS = "physical_access"
    FIRMWARE = "firmware"
    MOBILE_APP_OR_SMS = "mobile_app_or_sms"


class Transport(str, Enum):
    TCP = "tcp"
    UDP = "udp"


class Symptom(str, Enum):
    RESOURCE_UTILIZATION_ANOMALY = "resource_utilization_anomaly"
    REQUEST_FLOOD = "request_flood"
    ABNORMAL_CONTROLLABLE_REQUESTS = "abnormal_controllable_requests"


@dataclass(frozen=True)
class ChannelSignals:
    """Access-path indicators: ports, protocol character, channel technique."""

    port: int | None = None
    transport: Transport | None = None
    standardized_protocol: bool | None = None
    virtualization: bool | None = None
    mitm_or_botnet: bool | None = None
    inter_segment_protocol: bool | None = None

    def __post_init__(self) -> None:
        if self.port is not None and not 0 <= self.port <= 65535:
            raise ValueError(f"port {self.port} outside [0, 65535]")

    def is_empty(self) -> bool:
        return all(
            getattr(self, f.name) is None for f in dataclass_fields(self)
        )


@dataclass(frozen=True)
class EvidenceRecord:
    """Everything the analyst observed about one attack."""

    attack_name: str = ""
    attacker_motive: AttackerMotive | None = None
    attacker_kind: AttackerKind | None = None
    attacker_name: str | None = None
    initiation: Initiation | None = None
    source_count: SourceCount | None = None
    target_scope_hint: ScopeHint | None = None
    platform_hint: PlatformHint | None = None
    channel: ChannelSignals | None = None
    symptoms: frozenset[Symptom] = frozenset()
    vulnerability_refs: tuple[str, ...] = ()
    notes: str | None = None

    def __post_init__(self) -> None:
        # A channel record with no signal carries no evidence; canonicalize
        # so equality and serialization have one representation of absence.
        if self.channel is not None and self.channel.is_empty():
            object.__setattr__(self, "channel", None)


_ENUM_FIELDS: dict[str, type] = {
    "attacker_motive": AttackerMotive,
    "attacker_kind": AttackerKind,
    "initiation": Initiation,
    "source_count": SourceCount,
    "target_scope_hint": ScopeHint,
    "platform_hint": PlatformHint,
}

_CHANNEL_BOOL_FIELDS = (
    "standardized_protocol", "virtualization", "mitm_or_botnet", "inter_segment_protocol",
)


def _parse_enum(enum_type: type, value: Any, field_name: str) -> Any:
    try:
        return enum_type(value)
    except ValueError:
        allowed = ", ".join(member.value for member in enum_type)  # type: ignore[attr-defined]
        raise ParseError(
            f"field {field_name!r}: {value!r} is not one of: {allowed}",
            subject=field_name) from None


def _parse_channel(data: Any) -> ChannelSignals:
    if not isinstance(data, dict):
        raise ParseError("field 'channel': must be an object", subject="channel")
    known = {"port", "transport", *_CHANNEL_BOOL_FIELDS}
    for key in data:
        if key not in known:
            raise ParseError(f"unknown field 'channel.{key}'", subject=f"channel.{key}")
    port = data.get("port")
    if port is not None:
        if not isinstance(port, int) or isinstance(port, bool) or not 0 <= port <= 65535:
            raise ParseError(
                "field 'channel.port': must be an integer in [0, 65535]",
                subject="channel.port")
    transport = data.get("transport")
    if transport is not None:
        transport = _parse_enum(Transport, transport, "channel.transport")
    bools: dict[str, bool | None] = {}
    for name in _CHANNEL_BOOL_FIELDS:
        value = data.get(name)
        if value is not None and not isinstance(value, bool):
            raise ParseError(
                f"field 'channel.{name}': must be a boolean", subject=f"channel.{name}")
        bools[name] = value
    return ChannelSignals(port=port, transport=transport, **bools)


def evidence_from_dict(data: Any) -> EvidenceRecord:
    """Build an EvidenceRecord from parsed JSON; unknown fields are rejected."""
    if not isinstance(data, dict):
        raise ParseError("evidence must be a JSON object")
    known = {f.name for f in dataclass_fields(EvidenceRecord)}
    for key in data:
        if key not in known:
            raise ParseError(f"unknown field {key!r}", subject=key)

    kwargs: dict[str, Any] = {}

    attack_name = data.get("attack_name", "")
    if not isinstance(attack_name, str):
        raise ParseError("field 'attack_name': must be a string", subject="attack_name")
    kwargs["attack_name"] = attack_name

    for name, enum_type in _ENUM_FIELDS.items():
        value = data.get(name)
        if value is not None:
            kwargs[name] = _parse_enum(enum_type, value, name)

    for name in ("attacker_name", "notes"):
        value = data.get(name)
        if value is not None:
            if not isinstance(value, str):
                raise ParseError(f"field {name!r}: must be a string", subject=name)
            kwargs[name] = value

    if data.get("channel") is not None:
        kwargs["channel"] = _parse_channel(data["channel"])

    symptoms = data.get("symptoms")
    if symptoms is not None:
        if not isinstance(symptoms, list):
            raise ParseError("field 'symptoms': must be an array", subject="symptoms")
        kwargs["symptoms"] = frozenset(
            _parse_enum(Symptom, s, "symptoms") for s in symptoms)

    refs = data.get("vulnerability_refs")
    if refs is not None:
        if not isinstance(refs, list) or not all(isinstance(r, str) for r in refs):
            raise ParseError(
                "field 'vulnerability_refs': must be an array of strings",
                subject="vulnerability_refs")
        kwargs["vulnerability_refs"] = tuple(refs)

    return EvidenceRecord(**kwargs)


def evidence_to_dict(evidence: EvidenceRecord) -> dict[str, Any]:
    """Canonical JSON form: fields in declaration order, absent ones omitted."""
    out: dict[str, Any] = {"attack_name": evidence.attack_name}
    for name in ("attacker_motive", "attacker_kind"):
        value = getattr(evidence, name)
        if value is not None:
            out[name] = value.value
    if evidence.attacker_name is not None:
        out["attacker_name"] = evidence.attacker_name
    for name in ("initiation", "source_count", "target_scope_hint", "platform_hint"):
        value = getattr(evidence, name)
        if value is not None:
            out[name] = value.value
    if evidence.channel is not None and not evidence.channel.is_empty():
        channel: dict[str, Any] = {}
        if evidence.channel.port is not None:
            channel["port"] = evidence.channel.port
        if evidence.channel.transport is not None:
            channel["transport"] = evidence.channel.transport.value
        for name in _CHANNEL_BOOL_FIELDS:
            value = getattr(evidence.channel, name)
            if value is not None:
                channel[name] = value
        out["channel"] = channel
    if evidence.symptoms:
        order = list(Symptom)
        out["symptoms"] = [s.value for s in sorted(evidence.symptoms, key=order.index)]
    if evidence.vulnerability_refs:
        out["vulnerability_refs"] = list(evidence.vulnerability_refs)
    if evidence.notes is not None:
        out["notes"] = evidence.notes
    return out
