"""Partition analysis for structures whose relations are equivalence relations.

Covers equivalence classes, the induced partition per agent, the closure of a
partition under non-empty unions (each agent's decision domain), possible
beliefs, and the report that pins down why field-based decision setups break:
they require decisions over events no state of the structure can realize.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from .errors import InputError, PreconditionError, ResourceLimitError
from .structures import CLASS_PARTITIONAL, Event, InformationStructure, canonical_event_string

DEFAULT_MAX_CELLS = 12
MAX_CELLS_ENV_VAR = "EPISTEMIC_MAX_CELLS"


def resolve_max_cells(explicit: int | None = None) -> int:
    """Cell cap for union-closure blowup: explicit arg, else env var, else default."""
    if explicit is not None:
        if explicit < 1:
            raise InputError("cell cap must be positive")
        return explicit
    raw = os.environ.get(MAX_CELLS_ENV_VAR)
    if raw is None:
        return DEFAULT_MAX_CELLS
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{MAX_CELLS_ENV_VAR}={raw!r} is not an integer") from None
    if value < 1:
        raise InputError(f"{MAX_CELLS_ENV_VAR} must be positive, got {value}")
    return value


def equivalence_pairs(cells) -> set[tuple[str, str]]:
    """Relation pairs of the equivalence relation with the given classes."""
    pairs: set[tuple[str, str]] = set()
    for cell in cells:
        members = list(cell)
        pairs.update((u, v) for u in members for v in members)
    return pairs


def _require_partitional(structure: InformationStructure) -> None:
    report = structure.relation_properties()
    if report.classification != CLASS_PARTITIONAL:
        raise PreconditionError(
            f"operation requires a partitional structure, got classification {report.classification!r}"
        )


def equivalence_class(structure: InformationStructure, agent: str, state: str) -> Event:
    """The cell of ``state`` in the agent's partition (= its possibility set)."""
    _require_partitional(structure)
    return structure.possibility_set(agent, state)


def partition(structure: InformationStructure, agent: str) -> tuple[Event, ...]:
    """The agent's distinct equivalence classes, sorted canonically."""
    _require_partitional(structure)
    cells = {structure.possibility_set(agent, s) for s in structure.states}
    return tuple(sorted(cells, key=canonical_event_string))


def gamma(
    structure: InformationStructure, agent: str, *, max_cells: int | None = None
) -> tuple[Event, ...]:
    """All non-empty unions of the agent's partition cells, sorted canonically.

    Materialized eagerly: for k cells this has 2**k - 1 members, so the cell
    count is capped (see :func:`resolve_max_cells`); exceeding the cap raises
    instead of truncating.
    """
    cells = partition(structure, agent)
    cap = resolve_max_cells(max_cells)
    if len(cells) > cap:
        raise ResourceLimitError(
            f"agent {agent!r} has {len(cells)} partition cells, above the cap of {cap}; "
            f"raise the cap explicitly or via {MAX_CELLS_ENV_VAR} if this is intended"
        )
    events = []
    for r in range(1, len(cells) + 1):
        for combo in itertools.combinations(cells, r):
            events.append(frozenset().union(*combo))
    return tuple(sorted(set(events), key=canonical_event_string))


def is_possible_belief(structure: InformationStructure, agent: str, event) -> bool:
    """Whether some state's possibility set for the agent equals the event.

    Works on any structure, partitional or not.
    """
    target = structure._mask(event)
    structure._check_agent(agent)
    return any(m == target for m in structure._succ[agent])


@dataclass(frozen=True)
class FlawReport:
    """Events an agent can never actually believe, though decision setups demand them.

    ``not_possible_beliefs`` lists members of the agent's union closure that no
    state realizes as the agent's possibility set. ``cross_agent_conflicts``
    lists other agents' cells that this agent cannot realize either, which is
    what the field notion of like-mindedness would quantify over.
    """

    agent: str
    not_possible_beliefs: frozenset[Event]
    cross_agent_conflicts: frozenset[tuple[str, Event]]


def flaw_report(
    structure: InformationStructure, agent: str, *, max_cells: int | None = None
) -> FlawReport:
    _require_partitional(structure)
    impossible = frozenset(
        e for e in gamma(structure, agent, max_cells=max_cells)
        if not is_possible_belief(structure, agent, e)
    )
    conflicts = set()
    for other in structure.agents:
        if other == agent:
            continue
        for cell in partition(structure, other):
            if not is_possible_belief(structure, agent, cell):
                conflicts.add((other, cell))
    return FlawReport(
        agent=agent,
        not_possible_beliefs=impossible,
        cross_agent_conflicts=frozenset(conflicts),
    )
