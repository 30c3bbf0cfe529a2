"""Decision functions, the Sure-Thing Principle, and like-mindedness.

Two domain shapes are supported. A ``gamma`` decision function is defined on
the union closure of one agent's partition cells, the shape used on
counterfactual structures. A ``field`` decision function is defined on one
shared family of events over the original states, the shape used directly on
partitional structures. Checkers return violation lists; an empty list means
the property holds.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .counterfactual import CounterfactualStructure
from .errors import DomainError, InputError, PreconditionError, ResourceLimitError
from .partitions import gamma, partition
from .structures import (
    Event,
    InformationStructure,
    canonical_event_string,
    validate_token,
)

GAMMA_KIND = "gamma"
FIELD_KIND = "field"

_FAMILY_NODE_CAP = 1_000_000


@dataclass
class DecisionFunction:
    """One agent's mapping from events (information) to actions."""

    agent: str
    kind: str
    table: dict[Event, str]

    def __post_init__(self):
        validate_token(self.agent, "agent")
        if self.kind not in (GAMMA_KIND, FIELD_KIND):
            raise InputError(f"decision kind must be {GAMMA_KIND!r} or {FIELD_KIND!r}, got {self.kind!r}")
        normalized: dict[Event, str] = {}
        for event, action in self.table.items():
            validate_token(action, "action")
            normalized[frozenset(event)] = action
        self.table = normalized

    def actions(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.table.values())))


@dataclass
class ActionAssignment:
    """Per-state actions induced by a decision function: the action taken at
    each state is the decision on the possibility set there."""

    agent: str
    values: dict[str, str]


@dataclass(frozen=True)
class Violation:
    kind: str  # "stp" | "like-minded"
    agents: tuple[str, ...]
    events: tuple[Event, ...]
    union_event: Event | None
    expected: str
    actual: str

    def describe(self) -> str:
        evs = ", ".join(canonical_event_string(e) or "(empty)" for e in self.events)
        if self.kind == "stp":
            return (
                f"stp: agent {self.agents[0]} maps {{{evs}}} to {self.expected!r} "
                f"but their union {canonical_event_string(self.union_event)} to {self.actual!r}"
            )
        return (
            f"like-minded: agents {self.agents[0]} and {self.agents[1]} disagree on "
            f"{evs}: {self.expected!r} vs {self.actual!r}"
        )


@dataclass(frozen=True)
class ViolationList:
    entries: tuple[Violation, ...]
    exhaustive: bool = True

    @property
    def ok(self) -> bool:
        return not self.entries

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __bool__(self):
        return bool(self.entries)


def normalize_actions(actions) -> tuple[str, ...]:
    """Accept an action count or explicit names; return them sorted."""
    if isinstance(actions, int):
        if actions < 1:
            raise InputError("need at least one action")
        return tuple(str(k) for k in range(actions))
    names = sorted(set(actions))
    if not names:
        raise InputError("need at least one action")
    for a in names:
        validate_token(a, "action")
    return tuple(names)


def powerset_field(structure: InformationStructure) -> tuple[Event, ...]:
    """All non-empty events over the structure's states, the maximal field."""
    states = structure.states
    if len(states) > 16:
        raise ResourceLimitError(f"power-set field over {len(states)} states is too large")
    out = []
    for r in range(1, len(states) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(states, r))
    return tuple(sorted(out, key=canonical_event_string))


def union_of_gammas(structure: InformationStructure, *, max_cells: int | None = None) -> tuple[Event, ...]:
    """The union of every agent's decision domain; a restricted field that
    reproduces the classic definedness failures."""
    events: set[Event] = set()
    for agent in structure.agents:
        events.update(gamma(structure, agent, max_cells=max_cells))
    return tuple(sorted(events, key=canonical_event_string))


def _validate_gamma_domain(structure: InformationStructure, df: DecisionFunction,
                           *, max_cells: int | None = None) -> tuple[Event, ...]:
    if df.kind != GAMMA_KIND:
        raise InputError(f"expected a gamma-kind decision function for agent {df.agent!r}")
    domain = gamma(structure, df.agent, max_cells=max_cells)
    have = set(df.table)
    want = set(domain)
    if have != want:
        missing = sorted(canonical_event_string(e) for e in want - have)[:3]
        extra = sorted(canonical_event_string(e) for e in have - want)[:3]
        raise InputError(
            f"gamma decision table for agent {df.agent!r} must cover the union closure exactly "
            f"(missing {missing}, extra {extra})"
        )
    return domain


def derive_action_function(target, df: DecisionFunction) -> ActionAssignment:
    """Turn a decision function into a per-state action assignment.

    Gamma kind requires a counterfactual structure (whose source provides the
    decision domain); field kind requires the partitional structure itself.
    A state whose possibility set is missing from the table raises a
    :class:`DomainError` naming the offending event, which is precisely the
    definedness failure the counterfactual setup removes.
    """
    if df.kind == GAMMA_KIND:
        if not isinstance(target, CounterfactualStructure):
            raise InputError("gamma-kind action functions are derived on a counterfactual structure")
        _validate_gamma_domain(target.origin, df)
        carrier = target.structure
    else:
        if not isinstance(target, InformationStructure):
            raise InputError("field-kind action functions are derived on the partitional structure")
        if not target.is_partitional():
            raise PreconditionError("field-kind action functions require a partitional structure")
        carrier = target
    values: dict[str, str] = {}
    for state in carrier.states:
        info = carrier.possibility_set(df.agent, state)
        try:
            values[state] = df.table[info]
        except KeyError:
            raise DomainError(
                f"agent {df.agent!r} has no decision for their information at state {state!r} "
                f"(event {canonical_event_string(info)})",
                event=info,
            ) from None
    return ActionAssignment(agent=df.agent, values=values)


# ---------------------------------------------------------------------------
# Sure-Thing Principle
# ---------------------------------------------------------------------------


def check_stp_gamma(structure: InformationStructure, df: DecisionFunction,
                    *, max_cells: int | None = None) -> ViolationList:
    """Uniform families of partition cells must map their union to the shared action.

    Cells are the atoms of the union closure, so each domain event decomposes
    uniquely and the check is a direct sweep over cell subsets.
    """
    _validate_gamma_domain(structure, df, max_cells=max_cells)
    cells = partition(structure, df.agent)
    violations = []
    for r in range(2, len(cells) + 1):
        for family in itertools.combinations(cells, r):
            acts = {df.table[c] for c in family}
            if len(acts) != 1:
                continue
            expected = next(iter(acts))
            union = frozenset().union(*family)
            actual = df.table[union]
            if actual != expected:
                violations.append(
                    Violation(
                        kind="stp",
                        agents=(df.agent,),
                        events=tuple(sorted(family, key=canonical_event_string)),
                        union_event=union,
                        expected=expected,
                        actual=actual,
                    )
                )
    return ViolationList(entries=tuple(violations))


def _field_setup(field: Iterable[Event], df: DecisionFunction):
    events = sorted({frozenset(e) for e in field}, key=canonical_event_string)
    if not events:
        raise InputError("field must contain at least one event")
    if any(not e for e in events):
        raise InputError("field events must be non-empty")
    if set(df.table) != set(events):
        raise InputError(
            f"field decision table for agent {df.agent!r} must be total on the field exactly"
        )
    universe = sorted(frozenset().union(*events))
    index = {s: k for k, s in enumerate(universe)}
    masks = [sum(1 << index[s] for s in e) for e in events]
    return events, masks


def _disjoint_families(masks: Sequence[int], *, node_cap: int = _FAMILY_NODE_CAP):
    """Index tuples of pairwise-disjoint events (size >= 2) whose union is in the field."""
    by_mask = {m: k for k, m in enumerate(masks)}
    out: list[tuple[tuple[int, ...], int]] = []
    nodes = 0

    def recurse(start: int, chosen: list[int], union: int):
        nonlocal nodes
        for k in range(start, len(masks)):
            if masks[k] & union:
                continue
            nodes += 1
            if nodes > node_cap:
                raise ResourceLimitError("too many disjoint event families to enumerate")
            chosen.append(k)
            new_union = union | masks[k]
            if len(chosen) >= 2 and new_union in by_mask:
                out.append((tuple(chosen), by_mask[new_union]))
            recurse(k + 1, chosen, new_union)
            chosen.pop()

    recurse(0, [], 0)
    return out


def check_stp_field(
    field: Iterable[Event],
    df: DecisionFunction,
    *,
    max_exhaustive_states: int = 6,
    samples: int = 5000,
    seed: int = 0,
) -> ViolationList:
    """Check the field form of the principle: disjoint same-action events whose
    union lies in the field must map that union to the same action.

    Exhaustive while the underlying state count is small; above
    ``max_exhaustive_states`` it samples random families instead and the
    returned list is flagged as not exhaustive.
    """
    if df.kind != FIELD_KIND:
        raise InputError(f"expected a field-kind decision function for agent {df.agent!r}")
    events, masks = _field_setup(field, df)
    actions = [df.table[e] for e in events]
    universe_size = max(m.bit_length() for m in masks)
    violations = []

    def record(member_idx: Sequence[int], union_idx: int):
        expected = actions[member_idx[0]]
        actual = actions[union_idx]
        if actual != expected:
            violations.append(
                Violation(
                    kind="stp",
                    agents=(df.agent,),
                    events=tuple(events[k] for k in member_idx),
                    union_event=events[union_idx],
                    expected=expected,
                    actual=actual,
                )
            )

    if universe_size <= max_exhaustive_states:
        for member_idx, union_idx in _disjoint_families(masks):
            if len({actions[k] for k in member_idx}) == 1:
                record(member_idx, union_idx)
        return ViolationList(entries=tuple(violations), exhaustive=True)

    rng = random.Random(seed)
    by_mask = {m: k for k, m in enumerate(masks)}
    order = list(range(len(events)))
    for _ in range(samples):
        rng.shuffle(order)
        chosen: list[int] = []
        union = 0
        want: str | None = None
        for k in order:
            if masks[k] & union:
                continue
            if want is not None and actions[k] != want:
                continue
            if rng.random() < 0.5:
                continue
            chosen.append(k)
            union |= masks[k]
            want = actions[k]
        if len(chosen) >= 2 and union in by_mask:
            record(sorted(chosen), by_mask[union])
    # distinct violations only; sampling may hit the same family twice
    unique = tuple(dict.fromkeys(violations))
    return ViolationList(entries=unique, exhaustive=False)


def complete_stp_field(field: Iterable[Event], table: Mapping[Event, str]) -> dict[Event, str]:
    """Extend a partial field table with every value the principle forces.

    Repeatedly finds disjoint same-action families among the already-valued
    events and fills in their unions. A forced union that lies outside the
    field raises :class:`DomainError` naming it; that is the definedness
    failure of restricted fields. A forced value that contradicts an existing
    one raises :class:`InputError`.
    """
    events = sorted({frozenset(e) for e in field}, key=canonical_event_string)
    if any(not e for e in events):
        raise InputError("field events must be non-empty")
    field_set = set(events)
    out = {frozenset(e): a for e, a in table.items()}
    for e in out:
        if e not in field_set:
            raise InputError(f"table event {canonical_event_string(e)} is not in the field")

    changed = True
    while changed:
        changed = False
        valued = sorted(out, key=canonical_event_string)
        universe = sorted(frozenset().union(*valued)) if valued else []
        index = {s: k for k, s in enumerate(universe)}
        masks = [sum(1 << index[s] for s in e) for e in valued]
        uniform: list[tuple[tuple[int, ...], Event]] = []

        def recurse(start: int, chosen: list[int], union: int, action: str | None):
            for k in range(start, len(valued)):
                if masks[k] & union:
                    continue
                if action is not None and out[valued[k]] != action:
                    continue
                chosen.append(k)
                if len(chosen) >= 2:
                    members = frozenset().union(*(valued[j] for j in chosen))
                    uniform.append((tuple(chosen), members))
                recurse(k + 1, chosen, union | masks[k], out[valued[k]])
                chosen.pop()

        recurse(0, [], 0, None)
        for member_idx, union_event in uniform:
            action = out[valued[member_idx[0]]]
            if union_event not in field_set:
                raise DomainError(
                    f"the principle forces a decision on {canonical_event_string(union_event)}, "
                    f"which is outside the field",
                    event=union_event,
                )
            if union_event not in out:
                out[union_event] = action
                changed = True
            elif out[union_event] != action:
                raise InputError(
                    f"table already violates the principle at {canonical_event_string(union_event)}"
                )
    return out


# ---------------------------------------------------------------------------
# Like-mindedness
# ---------------------------------------------------------------------------


def check_like_minded(
    structure: InformationStructure | None,
    dfs: Sequence[DecisionFunction],
    *,
    max_cells: int | None = None,
) -> ViolationList:
    """Agents must agree wherever their decision domains overlap.

    For gamma-kind functions the overlap is the intersection of the agents'
    union closures (the structure is needed to compute them). For field-kind
    functions the domains coincide, so the tables must be identical.
    """
    if not dfs:
        raise InputError("need at least one decision function")
    kinds = {df.kind for df in dfs}
    if len(kinds) > 1:
        raise InputError("cannot mix gamma-kind and field-kind decision functions")
    agents = [df.agent for df in dfs]
    if len(set(agents)) != len(agents):
        raise InputError("duplicate agent in decision family")
    kind = kinds.pop()
    violations = []
    if kind == GAMMA_KIND:
        if structure is None:
            raise InputError("gamma-kind like-mindedness needs the underlying structure")
        domains = {}
        for df in dfs:
            domains[df.agent] = set(_validate_gamma_domain(structure, df, max_cells=max_cells))
        by_agent = {df.agent: df for df in dfs}
        for i, j in itertools.combinations(sorted(by_agent), 2):
            for event in sorted(domains[i] & domains[j], key=canonical_event_string):
                if by_agent[i].table[event] != by_agent[j].table[event]:
                    violations.append(
                        Violation(
                            kind="like-minded",
                            agents=(i, j),
                            events=(event,),
                            union_event=None,
                            expected=by_agent[i].table[event],
                            actual=by_agent[j].table[event],
                        )
                    )
    else:
        domain = set(dfs[0].table)
        for df in dfs[1:]:
            if set(df.table) != domain:
                raise InputError(
                    f"field decision functions must share one domain; agent {df.agent!r} differs"
                )
        ordered = sorted(dfs, key=lambda d: d.agent)
        for a, b in itertools.combinations(ordered, 2):
            for event in sorted(domain, key=canonical_event_string):
                if a.table[event] != b.table[event]:
                    violations.append(
                        Violation(
                            kind="like-minded",
                            agents=(a.agent, b.agent),
                            events=(event,),
                            union_event=None,
                            expected=a.table[event],
                            actual=b.table[event],
                        )
                    )
    return ViolationList(entries=tuple(violations))


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def stp_completions(
    structure: InformationStructure,
    agent: str,
    cell_values: Mapping[Event, str],
    actions,
    *,
    max_cells: int | None = None,
) -> Iterator[dict[Event, str]]:
    """All principle-respecting tables extending the given values on cells.

    Each domain event decomposes uniquely into cells; unions of same-action
    cells are forced, unions of mixed-action cells are free choices. Tables
    come out in lexicographic order of their action tuple over the canonical
    domain order.
    """
    acts = normalize_actions(actions)
    cells = partition(structure, agent)
    if set(cell_values) != set(cells):
        raise InputError(f"cell values must cover agent {agent!r}'s cells exactly")
    domain = gamma(structure, agent, max_cells=max_cells)
    forced: dict[Event, str] = dict(cell_values)
    free: list[Event] = []
    for event in domain:
        if event in forced:
            continue
        member_actions = {cell_values[c] for c in cells if c <= event}
        if len(member_actions) == 1:
            forced[event] = next(iter(member_actions))
        else:
            free.append(event)
    for choice in itertools.product(acts, repeat=len(free)):
        table = dict(forced)
        table.update(zip(free, choice))
        yield table


def _gamma_tables(
    structure: InformationStructure,
    agent: str,
    acts: tuple[str, ...],
    stp: bool,
    max_families: int,
    max_cells: int | None,
) -> list[dict[Event, str]]:
    domain = gamma(structure, agent, max_cells=max_cells)
    if not stp:
        count = len(acts) ** len(domain)
        if count > max_families:
            raise ResourceLimitError(
                f"agent {agent!r} alone admits {count} tables, above the cap of {max_families}"
            )
        return [dict(zip(domain, combo)) for combo in itertools.product(acts, repeat=len(domain))]
    cells = partition(structure, agent)
    if len(acts) ** len(cells) > max_families:
        raise ResourceLimitError(f"too many cell assignments for agent {agent!r}")
    tables = []
    for cell_combo in itertools.product(acts, repeat=len(cells)):
        cell_values = dict(zip(cells, cell_combo))
        for table in stp_completions(structure, agent, cell_values, acts, max_cells=max_cells):
            tables.append(table)
            if len(tables) > max_families:
                raise ResourceLimitError(f"too many principle-respecting tables for agent {agent!r}")
    tables.sort(key=lambda t: tuple(t[e] for e in domain))
    return tables


def enumerate_decision_profiles(
    structure: InformationStructure,
    actions,
    *,
    kind: str = GAMMA_KIND,
    field: Iterable[Event] | None = None,
    stp: bool = False,
    like_minded: bool = False,
    max_families: int = 1_000_000,
    max_cells: int | None = None,
) -> Iterator[tuple[DecisionFunction, ...]]:
    """Stream decision families over the given actions, optionally constrained.

    Families are tuples with one decision function per agent, ordered by agent
    name, and are produced in lexicographic order of (agent, canonical event,
    action). The count of constrained families equals what filtering the
    unconstrained stream would produce. A cap bounds the work; exceeding it
    raises :class:`ResourceLimitError` rather than truncating silently.
    """
    acts = normalize_actions(actions)
    agents = structure.agents
    if kind == GAMMA_KIND:
        per_agent = [
            _gamma_tables(structure, a, acts, stp, max_families, max_cells) for a in agents
        ]
        total = 1
        for tables in per_agent:
            total *= len(tables)
        if total > max_families:
            raise ResourceLimitError(f"{total} families exceed the cap of {max_families}")
        domains = {a: set(gamma(structure, a, max_cells=max_cells)) for a in agents}
        shared = {
            (i, j): sorted(domains[i] & domains[j], key=canonical_event_string)
            for i, j in itertools.combinations(agents, 2)
        }
        for combo in itertools.product(*per_agent):
            tables = dict(zip(agents, combo))
            if like_minded and any(
                tables[i][e] != tables[j][e]
                for (i, j), events in shared.items()
                for e in events
            ):
                continue
            yield tuple(
                DecisionFunction(agent=a, kind=GAMMA_KIND, table=dict(tables[a])) for a in agents
            )
        return

    if kind != FIELD_KIND:
        raise InputError(f"unknown decision kind {kind!r}")
    domain = tuple(sorted({frozenset(e) for e in (field if field is not None else powerset_field(structure))},
                          key=canonical_event_string))
    if any(not e or not e <= set(structure.states) for e in domain):
        raise InputError("field events must be non-empty subsets of the state set")
    count_one = len(acts) ** len(domain)
    families_idx: list[tuple[tuple[int, ...], int]] = []
    if stp:
        universe = sorted(frozenset().union(*domain))
        index = {s: k for k, s in enumerate(universe)}
        masks = [sum(1 << index[s] for s in e) for e in domain]
        if len(universe) > 6:
            raise ResourceLimitError(
                "constrained field enumeration is exhaustive only up to 6 underlying states"
            )
        families_idx = _disjoint_families(masks)

    def respects_stp(combo: tuple[str, ...]) -> bool:
        for member_idx, union_idx in families_idx:
            first = combo[member_idx[0]]
            if combo[union_idx] != first:
                if all(combo[k] == first for k in member_idx[1:]):
                    return False
        return True

    if like_minded:
        if count_one > max_families:
            raise ResourceLimitError(f"{count_one} shared tables exceed the cap of {max_families}")
        for combo in itertools.product(acts, repeat=len(domain)):
            if stp and not respects_stp(combo):
                continue
            table = dict(zip(domain, combo))
            yield tuple(
                DecisionFunction(agent=a, kind=FIELD_KIND, table=dict(table)) for a in agents
            )
        return
    if count_one > max_families:
        raise ResourceLimitError(
            f"{count_one} tables per agent exceed the cap of {max_families}"
        )
    combos = [c for c in itertools.product(acts, repeat=len(domain)) if not stp or respects_stp(c)]
    total = len(combos) ** len(agents)
    if total > max_families:
        raise ResourceLimitError(f"{total} families exceed the cap of {max_families}")
    for chosen in itertools.product(combos, repeat=len(agents)):
        yield tuple(
            DecisionFunction(agent=a, kind=FIELD_KIND, table=dict(zip(domain, c)))
            for a, c in zip(agents, chosen)
        )
