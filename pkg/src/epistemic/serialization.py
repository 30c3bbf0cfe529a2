"""JSON wire formats for structures and decision tables.

Canonical form: UTF-8 JSON with sorted keys, two-space indent, and a trailing
newline; states, agents, relation pairs and provenance labels are sorted
lexicographically. Serialization is byte-deterministic, so equal values
produce identical files and golden-file comparisons are meaningful.

A structure document carries an optional provenance section turning it into a
counterfactual structure: a content hash of its source document plus one
label per duplicate state. The label map is re-validated on parse, including
the hash of the reconstructed source, so hand-edited documents cannot drift
silently.
"""

from __future__ import annotations

import hashlib
import json
from typing import Sequence

from .counterfactual import CounterfactualLabel, CounterfactualStructure
from .decisions import DecisionFunction
from .errors import EpistemicError, InputError, ParseError
from .partitions import gamma
from .structures import (
    InformationStructure,
    canonical_event_string,
    parse_event_string,
)

FORMAT_VERSION = 1

_STRUCTURE_KEYS = {"version", "states", "agents", "relations", "provenance"}
_PROVENANCE_KEYS = {"origin_hash", "labels"}
_LABEL_KEYS = {"state", "agent", "base", "event"}
_DECISION_KEYS = {"version", "actions", "agents"}


def canonical_json(doc) -> str:
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def structure_to_document(value) -> dict:
    if isinstance(value, CounterfactualStructure):
        doc = structure_to_document(value.structure)
        doc["provenance"] = {
            "origin_hash": structure_hash(value.origin),
            "labels": [
                {
                    "state": name,
                    "agent": label.agent,
                    "base": label.base,
                    "event": canonical_event_string(label.event),
                }
                for name, label in sorted(value.labels.items())
            ],
        }
        return doc
    if not isinstance(value, InformationStructure):
        raise InputError(f"cannot serialize {type(value).__name__}")
    return {
        "version": FORMAT_VERSION,
        "states": list(value.states),
        "agents": list(value.agents),
        "relations": {
            agent: [[u, v] for (u, v) in sorted(value.relations[agent])]
            for agent in value.agents
        },
    }


def serialize_structure(value) -> str:
    return canonical_json(structure_to_document(value))


def structure_hash(structure: InformationStructure) -> str:
    return hashlib.sha256(serialize_structure(structure).encode("utf-8")).hexdigest()


def _expect(doc: dict, key: str, types, where: str):
    if key not in doc:
        raise ParseError(f"{where}: missing key {key!r}")
    if not isinstance(doc[key], types):
        raise ParseError(f"{where}: key {key!r} has the wrong type")
    return doc[key]


def _str_list(values, where: str) -> list[str]:
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise ParseError(f"{where}: expected a list of strings")
    return values


def document_to_structure(doc) -> InformationStructure | CounterfactualStructure:
    if not isinstance(doc, dict):
        raise ParseError("structure document must be a JSON object")
    unknown = set(doc) - _STRUCTURE_KEYS
    if unknown:
        raise ParseError(f"unknown keys in structure document: {sorted(unknown)}")
    version = _expect(doc, "version", int, "structure document")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {version}")
    states = _str_list(_expect(doc, "states", list, "structure document"), "states")
    agents = _str_list(_expect(doc, "agents", list, "structure document"), "agents")
    relations_doc = _expect(doc, "relations", dict, "structure document")
    relations: dict[str, list[tuple[str, str]]] = {}
    for agent, pairs in relations_doc.items():
        if not isinstance(pairs, list):
            raise ParseError(f"relations for agent {agent!r} must be a list of pairs")
        converted = []
        for pair in pairs:
            if not isinstance(pair, list) or len(pair) != 2 or not all(isinstance(p, str) for p in pair):
                raise ParseError(f"relation entry {pair!r} for agent {agent!r} must be a [from, to] pair")
            converted.append((pair[0], pair[1]))
        relations[agent] = converted

    provenance = doc.get("provenance")
    try:
        structure = InformationStructure(
            states, agents, relations, allow_plus_in_names=provenance is not None
        )
    except InputError as exc:
        raise ParseError(str(exc)) from None
    if provenance is None:
        return structure
    return _attach_provenance(structure, provenance)


def _attach_provenance(structure: InformationStructure, provenance) -> CounterfactualStructure:
    if not isinstance(provenance, dict):
        raise ParseError("provenance must be a JSON object")
    unknown = set(provenance) - _PROVENANCE_KEYS
    if unknown:
        raise ParseError(f"unknown keys in provenance: {sorted(unknown)}")
    origin_hash = _expect(provenance, "origin_hash", str, "provenance")
    labels_doc = _expect(provenance, "labels", list, "provenance")
    labels: dict[str, CounterfactualLabel] = {}
    for entry in labels_doc:
        if not isinstance(entry, dict) or set(entry) != _LABEL_KEYS:
            raise ParseError(f"label entry {entry!r} must have exactly the keys {sorted(_LABEL_KEYS)}")
        name = entry["state"]
        if name in labels:
            raise ParseError(f"duplicate label for state {name!r}")
        try:
            event = parse_event_string(entry["event"])
        except InputError as exc:
            raise ParseError(f"label for {name!r}: {exc}") from None
        labels[name] = CounterfactualLabel(agent=entry["agent"], base=entry["base"], event=event)

    state_set = set(structure.states)
    for name in labels:
        if name not in state_set:
            raise ParseError(f"label references undeclared state {name!r}")
    actual = sorted(state_set - set(labels))
    for name in actual:
        if "+" in name:
            raise ParseError(f"actual state {name!r} contains '+'; only duplicate names may")
    if not actual:
        raise ParseError("provenance labels leave no actual states")

    origin = structure.restricted_to(actual)
    if not origin.is_partitional():
        raise ParseError("the actual-state core of a counterfactual document must be partitional")
    if structure_hash(origin) != origin_hash:
        raise ParseError("origin_hash does not match the document's actual-state core")

    try:
        domains = {agent: gamma(origin, agent) for agent in origin.agents}
    except EpistemicError as exc:
        raise ParseError(str(exc)) from None
    expected = {
        (agent, base, canonical_event_string(event))
        for agent, events in domains.items()
        for event in events
        for base in origin.states
    }
    got = {
        (label.agent, label.base, canonical_event_string(label.event))
        for label in labels.values()
    }
    if got != expected:
        missing = sorted(expected - got)[:3]
        extra = sorted(got - expected)[:3]
        raise ParseError(
            f"labels do not form complete duplicate blocks (missing {missing}, unexpected {extra})"
        )
    try:
        return CounterfactualStructure(
            structure=structure, actual=actual, labels=labels, origin=origin
        )
    except InputError as exc:
        raise ParseError(str(exc)) from None


def parse_structure(text: str) -> InformationStructure | CounterfactualStructure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return document_to_structure(doc)


# ---------------------------------------------------------------------------
# Decision documents
# ---------------------------------------------------------------------------


def decisions_to_document(dfs: Sequence[DecisionFunction], actions=None) -> dict:
    names = set(actions or ())
    for df in dfs:
        names.update(df.table.values())
    agents_doc = {}
    for df in sorted(dfs, key=lambda d: d.agent):
        if df.agent in agents_doc:
            raise InputError(f"duplicate agent {df.agent!r} in decision family")
        agents_doc[df.agent] = {
            "kind": df.kind,
            "table": {canonical_event_string(e): a for e, a in df.table.items()},
        }
    return {"version": FORMAT_VERSION, "actions": sorted(names), "agents": agents_doc}


def serialize_decisions(dfs: Sequence[DecisionFunction], actions=None) -> str:
    return canonical_json(decisions_to_document(dfs, actions))


def parse_decisions(text: str) -> tuple[tuple[DecisionFunction, ...], tuple[str, ...]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("decision document must be a JSON object")
    unknown = set(doc) - _DECISION_KEYS
    if unknown:
        raise ParseError(f"unknown keys in decision document: {sorted(unknown)}")
    version = _expect(doc, "version", int, "decision document")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {version}")
    actions = _str_list(_expect(doc, "actions", list, "decision document"), "actions")
    if len(set(actions)) != len(actions):
        raise ParseError("duplicate action names")
    agents_doc = _expect(doc, "agents", dict, "decision document")
    if not agents_doc:
        raise ParseError("decision document declares no agents")
    dfs = []
    for agent in sorted(agents_doc):
        entry = agents_doc[agent]
        if not isinstance(entry, dict) or set(entry) != {"kind", "table"}:
            raise ParseError(f"agent {agent!r} entry must have exactly the keys ['kind', 'table']")
        table_doc = entry["table"]
        if not isinstance(table_doc, dict):
            raise ParseError(f"decision table for agent {agent!r} must be an object")
        table = {}
        for event_string, action in table_doc.items():
            if not isinstance(action, str):
                raise ParseError(f"action for event {event_string!r} must be a string")
            if action not in set(actions):
                raise ParseError(f"action {action!r} is not in the declared action set")
            try:
                event = parse_event_string(event_string)
            except InputError as exc:
                raise ParseError(f"agent {agent!r}: {exc}") from None
            if not event:
                raise ParseError(f"agent {agent!r}: decision table events must be non-empty")
            table[event] = action
        try:
            dfs.append(DecisionFunction(agent=agent, kind=entry["kind"], table=table))
        except InputError as exc:
            raise ParseError(str(exc)) from None
    return tuple(dfs), tuple(actions)
