"""Attack dossiers: evidence, curated classification, foreign-taxonomy rows.

The five golden dossiers transcribe the published worked classifications of
Blaster, Melissa, Slammer, Morris and the MS RPC stack overflow. Rows from
other taxonomies (VERDICT, Howard, Hansman-Hunt, AVOIDIT, ADMIT) are stored
verbatim as label/value string pairs and never interpreted; the raw cell
text of each sequential row is preserved in the dossier's provenance.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable, Mapping

from .classifier import Classification, classification_from_answers, \
    classification_from_dict, classification_to_dict
from .errors import DuplicateName, NotFound, ParseError, SchemaMismatch
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
    evidence_from_dict,
    evidence_to_dict,
)
from .schema import builtin_sequential_schema, parse_json_document

ANNOTATION_TAXONOMIES = ("verdict", "howard", "hansman_hunt", "avoidit", "admit")

TAXONOMY_DISPLAY = {
    "verdict": "VERDICT",
    "howard": "Howard",
    "hansman_hunt": "Hansman-Hunt",
    "avoidit": "AVOIDIT",
    "admit": "ADMIT",
}

AnnotationRows = tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class AttackDossier:
    name: str
    evidence: EvidenceRecord
    curated: Classification
    annotations: Mapping[str, AnnotationRows]
    provenance: str


@dataclass(frozen=True)
class Corpus:
    """Immutable name-keyed dossier collection; updates produce new snapshots."""

    dossiers: Mapping[str, AttackDossier]

    def names(self) -> tuple[str, ...]:
        return tuple(self.dossiers)

    def __len__(self) -> int:
        return len(self.dossiers)


def get(corpus: Corpus, name: str) -> AttackDossier:
    try:
        return corpus.dossiers[name]
    except KeyError:
        raise NotFound("dossier", name) from None


def upsert(corpus: Corpus, dossier: AttackDossier) -> Corpus:
    updated = dict(corpus.dossiers)
    updated[dossier.name] = dossier
    return Corpus(dossiers=updated)


def dossier_to_dict(dossier: AttackDossier) -> dict[str, Any]:
    return {
        "name": dossier.name,
        "evidence": evidence_to_dict(dossier.evidence),
        "curated": classification_to_dict(dossier.curated),
        "annotations": {
            taxonomy: [[label, value] for label, value in rows]
            for taxonomy, rows in dossier.annotations.items()
        },
        "provenance": dossier.provenance,
    }


def dossier_from_dict(data: Any) -> AttackDossier:
    if not isinstance(data, dict):
        raise ParseError("dossier must be a JSON object")
    for key in data:
        if key not in ("name", "evidence", "curated", "annotations", "provenance"):
            raise ParseError(f"unknown dossier field {key!r}", subject=key)
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise ParseError("dossier name must be a non-empty string", subject="name")
    evidence = evidence_from_dict(data.get("evidence", {}))
    try:
        curated = classification_from_dict(
            data.get("curated"), schema=builtin_sequential_schema())
    except SchemaMismatch as exc:
        raise ParseError(f"curated row does not conform to the schema: {exc}",
                         subject="curated") from exc

    annotations: dict[str, AnnotationRows] = {}
    raw_annotations = data.get("annotations", {})
    if not isinstance(raw_annotations, dict):
        raise ParseError("dossier annotations must be an object", subject="annotations")
    for taxonomy, rows in raw_annotations.items():
        if taxonomy not in ANNOTATION_TAXONOMIES:
            raise ParseError(
                f"unknown annotation taxonomy {taxonomy!r} "
                f"(expected one of {ANNOTATION_TAXONOMIES})", subject=taxonomy)
        if not isinstance(rows, list):
            raise ParseError(f"annotations[{taxonomy!r}] must be an array", subject=taxonomy)
        parsed: list[tuple[str, str]] = []
        for row in rows:
            if (not isinstance(row, list) or len(row) != 2
                    or not all(isinstance(x, str) for x in row)):
                raise ParseError(
                    f"annotations[{taxonomy!r}] rows must be [label, value] string pairs",
                    subject=taxonomy)
            parsed.append((row[0], row[1]))
        annotations[taxonomy] = tuple(parsed)

    provenance = data.get("provenance", "")
    if not isinstance(provenance, str):
        raise ParseError("dossier provenance must be a string", subject="provenance")
    return AttackDossier(name, evidence, curated, annotations, provenance)


def import_corpus(document: bytes) -> Corpus:
    """All-or-nothing NDJSON import; any bad line aborts with its line number."""
    try:
        text = document.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"corpus document is not UTF-8: {exc}") from exc
    dossiers: dict[str, AttackDossier] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            dossier = dossier_from_dict(parse_json_document(line))
        except ParseError as exc:
            raise ParseError(f"bad dossier: {exc}", line=lineno) from exc
        if dossier.name in dossiers:
            raise DuplicateName(dossier.name, line=lineno)
        dossiers[dossier.name] = dossier
    return Corpus(dossiers=dossiers)


def export_corpus(corpus: Corpus) -> bytes:
    """One dossier per line, lexicographic name order, byte-stable."""
    lines = [
        json.dumps(dossier_to_dict(corpus.dossiers[name]),
                   ensure_ascii=False, separators=(",", ":"))
        for name in sorted(corpus.dossiers)
    ]
    return ("\n".join(lines) + "\n" if lines else "").encode("utf-8")


def _curated(answers: Mapping[str, Iterable[str]]) -> Classification:
    return classification_from_answers(
        builtin_sequential_schema(), {qid: list(cids) for qid, cids in answers.items()})


def _blaster() -> AttackDossier:
    return AttackDossier(
        name="Blaster",
        evidence=EvidenceRecord(
            attack_name="Blaster",
            attacker_motive=AttackerMotive.DAMAGE_OR_THEFT,
            attacker_kind=AttackerKind.INDIVIDUAL,
            attacker_name="Jeffrey Parson",
            initiation=Initiation.HOST,
            source_count=SourceCount.SINGLE,
            target_scope_hint=ScopeHint.HOST,
            platform_hint=PlatformHint.FIRMWARE,
            channel=ChannelSignals(port=135, transport=Transport.TCP,
                                   standardized_protocol=True),
            symptoms=frozenset({Symptom.ABNORMAL_CONTROLLABLE_REQUESTS}),
            vulnerability_refs=("CAN-2003-0352",),
            notes="Internet worm against Windows XP/2000, August 2003; "
                  "takes control through TCP port 4444 and UDP port 69.",
        ),
        curated=_curated({
            "who": ["black_hat"],
            "where_location": ["host_initiated"],
            "where_scope": ["host_based"],
            "how_platform": ["embedded_hardware"],
            "how_channel": ["legacy_ports"],
            "what": ["controllable_requests"],
        }),
        annotations={
            "verdict": (
                ("Inappropriate Validation", "None (X)"),
                ("Inappropriate Exposure", "None (X)"),
            ),
            "howard": (
                ("Attack utensils, tools", "Computer Program"),
                ("Threat Weakness", "The overflow of the Buffer"),
                ("Action", "Change"),
                ("Attack Goal", "Computer Network"),
                ("Unlawful outcome", "Data tampering"),
            ),
            "hansman_hunt": (
                ("First Dimension", "System Network-based Worm"),
                ("Second Dimension", "Network"),
                ("Third Dimension", "CAN-2003-0352"),
                ("Fourth Dimension", "TCP and UDP overflow, DoS"),
            ),
            "admit": (
                ("Attack Vector", "The overflow of the buffer"),
                ("Defence", "While listing patch method"),
                ("Method", "System virus"),
                ("Impact", "Distort"),
                ("Target", "MS XP and MS 2000"),
            ),
        },
        provenance="Published worked classification of the Blaster worm. Raw sequential "
                   "row: 'Black-hat hackers (Jeffrey Parson)' / 'Initiated by the host a "
                   "Single PC attack (already attacked PC)' / 'Embedded legacy network "
                   "equipment port (TCP port 135)' / 'Controllable request (Can control "
                   "TCP port 4444 and UDP port 69)'.",
    )


def _melissa() -> AttackDossier:
    return AttackDossier(
        name="Melissa",
        evidence=EvidenceRecord(
            attack_name="Melissa",
            attacker_motive=AttackerMotive.LEARNING_CHALLENGE,
            attacker_kind=AttackerKind.INDIVIDUAL,
            attacker_name="Kwyjibo",
            initiation=Initiation.NETWORK,
            source_count=SourceCount.MULTIPLE,
            target_scope_hint=ScopeHint.WIRELESS,
            platform_hint=PlatformHint.OS_OR_APPLICATION,
            channel=ChannelSignals(mitm_or_botnet=True),
            symptoms=frozenset({Symptom.RESOURCE_UTILIZATION_ANOMALY}),
            notes="Word macro virus spread by bulk email, March 1999. The published "
                  "location row mixes initiation, scope and platform in one phrase; it "
                  "is read here as network-initiated, wireless scope and a software "
                  "platform, which is a transcription choice, not a stated intent.",
        ),
        curated=_curated({
            "who": ["joker"],
            "where_location": ["network_initiated"],
            "where_scope": ["wireless_network"],
            "how_platform": ["software"],
            "how_channel": ["user_to_network"],
            "what": ["abnormal_system_activity"],
        }),
        annotations={
            "verdict": (
                ("Inappropriate Exposure", "None (X)"),
                ("Inappropriate Reallocation", "None (X)"),
            ),
            "howard": (
                ("Attack utensils, tools", "Script"),
                ("Threat Weakness", "Setup"),
                ("Action", "Verification"),
                ("Attack Goal", "Information"),
                ("Unlawful outcome", "Data tampering"),
            ),
            "hansman_hunt": (
                ("First Dimension", "Bulk-emailing worm"),
                ("Second Dimension", "MS word 97 and MS 2000"),
                ("Third Dimension", "Setup"),
                ("Fourth Dimension", "Macro worm & TCP data packet overflow"),
            ),
            "admit": (
                ("Attack Vector", "Setup in a wrong way"),
                ("Defence", "Path system"),
                ("Method", "Virus: Bulk emailing"),
                ("Impact", "Disrupt"),
                ("Target", "App: MSW 97, 2000"),
            ),
            "avoidit": (
                ("Attack Vector", "Misconfiguration"),
                ("Operational Impact", "Attack with email"),
                ("Defence", "List email addresses"),
                ("Impact", "Identify other ways"),
                ("Target", "Microsoft products"),
            ),
        },
        provenance="Published worked classification of the Melissa virus. Raw sequential "
                   "row: 'Joker (Kwyjibo)' / 'Initiated by multiple PC of wireless media "
                   "with software level hacking tool' / 'User to network channel use "
                   "which brings' / 'Abnormal system activity'.",
    )


def _slammer() -> AttackDossier:
    return AttackDossier(
        name="Slammer",
        evidence=EvidenceRecord(
            attack_name="Slammer",
            attacker_motive=AttackerMotive.VULNERABILITY_REPORTING,
            attacker_name="Benny, 29A",
            initiation=Initiation.HOST,
            source_count=SourceCount.SINGLE,
            target_scope_hint=ScopeHint.HOST,
            platform_hint=PlatformHint.OS_OR_APPLICATION,
            channel=ChannelSignals(port=1434, transport=Transport.UDP,
                                   mitm_or_botnet=True),
            symptoms=frozenset({Symptom.ABNORMAL_CONTROLLABLE_REQUESTS}),
            vulnerability_refs=("CAN-2002-0649",),
            notes="SQL Server worm (SQLExp/Sapphire/Helkern), January 2003; overwrites "
                  "the stack. Port 1434 is recorded without a standardization flag so "
                  "the published user-to-network channel reading is preserved.",
        ),
        curated=_curated({
            "who": ["white_hat"],
            "where_location": ["host_initiated"],
            "where_scope": ["host_based"],
            "how_platform": ["software"],
            "how_channel": ["user_to_network"],
            "what": ["controllable_requests"],
        }),
        annotations={
            "verdict": (
                ("Inappropriate Validation", "None (X)"),
                ("Inappropriate Exposure", "None (X)"),
            ),
            "howard": (
                ("Attack utensils, tool", "Computer Script"),
                ("Threat Weakness", "Setup and design"),
                ("Action", "Problem, change"),
                ("Attack Goal", "System Network"),
                ("Unlawful outcome", "Data corrupt"),
            ),
            "hansman_hunt": (
                ("First Dimension", "Computer network-Aware worm"),
                ("Second Dimension", "Microsoft SQL Server 2000"),
                ("Third Dimension", "CAN-2002-0649"),
                ("Fourth Dimension", "Buffer run-off and UDP data flood and DoS"),
            ),
            "avoidit": (
                ("Attack Vector", "Misconfiguration"),
                ("Operational Impact", "Setup virus and malware: Network-based"),
                ("Defence", "Moderation style: Whitelist CVE- 0649"),
                ("Impact", "Discover"),
                ("Target", "Network"),
            ),
            "admit": (
                ("Attack Vector", "Wrong setup"),
                ("Defence", "A patch of the system"),
                ("Method", "Virus: setup worm"),
                ("Impact", "Identification"),
                ("Target", "Network"),
            ),
        },
        provenance="Published worked classification of the Slammer worm. Raw sequential "
                   "row: 'White-hat hackers (Benny, 29A)' / 'Single PC, Host base attack "
                   "(overwrites the stacks)' / 'Software attack on the buffer with "
                   "User-to-network channel (UDP, port 1434)' / 'Controllable request'.",
    )


def _morris() -> AttackDossier:
    return AttackDossier(
        name="Morris",
        evidence=EvidenceRecord(
            attack_name="Morris",
            attacker_motive=AttackerMotive.LEARNING_CHALLENGE,
            attacker_kind=AttackerKind.INDIVIDUAL,
            attacker_name="Robert Morris, Jr.",
            initiation=Initiation.NETWORK,
            source_count=SourceCount.MULTIPLE,
            target_scope_hint=ScopeHint.HOST,
            platform_hint=PlatformHint.OS_OR_APPLICATION,
            channel=ChannelSignals(inter_segment_protocol=True),
            symptoms=frozenset({Symptom.ABNORMAL_CONTROLLABLE_REQUESTS}),
            notes="First internet worm, November 1988; BSD and SunOS targets; written "
                  "at Cornell University, released at MIT.",
        ),
        curated=_curated({
            "who": ["joker"],
            "where_location": ["network_initiated"],
            "where_scope": ["host_based"],
            "how_platform": ["software"],
            "how_channel": ["network_to_network"],
            "what": ["controllable_requests"],
        }),
        annotations={
            "hansman_hunt": (
                ("First Dimension", "Computer network-based virus"),
                ("Second Dimension", "BSD four (4) and Sun three (3) and VAX options"),
                ("Third Dimension", "Design and setup for implementation"),
                ("Fourth Dimension", "Facility stealing and subdivision"),
            ),
            "admit": (
                ("Attack Vector", "Misconfiguration"),
                ("Defence", "Internet file checking"),
                ("Method", "Internet Worm"),
                ("Impact", "Distort"),
                ("Target", "BSD, SunOS"),
            ),
        },
        provenance="Published worked classification of the Morris worm. Raw sequential "
                   "row: 'Joker (Robert Morris, Jr., Cornell University)' / 'Multiple PC "
                   "and Host' / 'Software Attack with the network to the network "
                   "channel' / 'Controllable request'.",
    )


def _ms_rpc() -> AttackDossier:
    return AttackDossier(
        name="MS_RPC",
        evidence=EvidenceRecord(
            attack_name="MS_RPC",
            attacker_motive=AttackerMotive.FINANCIAL_COMPETITION,
            attacker_kind=AttackerKind.ORGANIZATION,
            initiation=Initiation.NETWORK,
            source_count=SourceCount.MULTIPLE,
            target_scope_hint=ScopeHint.CORE_NETWORK,
            platform_hint=PlatformHint.OS_OR_APPLICATION,
            channel=ChannelSignals(mitm_or_botnet=True),
            symptoms=frozenset({Symptom.REQUEST_FLOOD,
                                Symptom.ABNORMAL_CONTROLLABLE_REQUESTS}),
            vulnerability_refs=("CVE-2008-4250",),
            notes="Windows RPC stack buffer overflow worm, October 2008; driven by "
                  "oversized requests.",
        ),
        curated=_curated({
            "who": ["little_sisters"],
            "where_location": ["network_initiated"],
            "where_scope": ["segment_to_segment"],
            "how_platform": ["software"],
            "how_channel": ["user_to_network"],
            "what": ["traffic_volume", "controllable_requests"],
        }),
        annotations={
            "verdict": (
                ("Inappropriate Validation", "None (X)"),
                ("Inappropriate Exposure", "None (X)"),
            ),
            "howard": (
                ("Attack utensils, tool", "Attack Script"),
                ("Threat Weakness", "Design"),
                ("Action", "Modify"),
                ("Attack Goal", "Process"),
                ("Unlawful outcome", "Increased Access"),
            ),
            "hansman_hunt": (
                ("First Dimension", "Stack run-off buffer"),
                ("Second Dimension", "Microsoft Windows Server Computer"),
                ("Third Dimension", "CVE-2008-4250"),
                ("Fourth Dimension", "Data tampering"),
            ),
            "avoidit": (
                ("Attack Vector", "System buffer run an out-off stack"),
                ("Operational Impact", "Installed Malware: ACE"),
                ("Defence", "Distort"),
                ("Impact", "Solution: RA VU#827267 Solution: a patch of the system"),
                ("Target", "Operating system: MS Server"),
            ),
        },
        provenance="Published worked classification of the MS RPC stack overflow. Raw "
                   "sequential row: 'Little sisters' / 'Group of PC attacked from "
                   "segment-to-segment based' / 'Software attack via User to network "
                   "channel (Oversized request)' / 'Traffic volume and Controllable "
                   "request'.",
    )


@lru_cache(maxsize=1)
def golden_corpus() -> Corpus:
    """The five shipped dossiers, keyed by attack name."""
    dossiers = [_blaster(), _melissa(), _slammer(), _morris(), _ms_rpc()]
    return Corpus(dossiers={d.name: d for d in dossiers})
