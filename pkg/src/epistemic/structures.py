"""Finite multi-agent information structures and their belief operators.

States and agents are plain string tokens; events are frozensets of state
names. A structure is immutable once built and every operator is a pure
function of its inputs, so unrestricted concurrent reads are safe.

Internally each event is a bitmask over the lexicographically sorted state
list. That keeps intersection, union, subset and complement at machine-word
cost and makes every derived output deterministic. The small memo caches
(reachability components, belief images) only ever store recomputable
values, so a racing recomputation is benign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import InputError

Event = frozenset[str]

CLASS_PARTITIONAL = "partitional"
CLASS_BELIEF = "belief"
CLASS_KD4 = "kd4"
CLASS_OTHER = "other"

_BELIEF_CACHE_LIMIT = 1 << 16


def canonical_event_string(members: Iterable[str]) -> str:
    """Member names sorted lexicographically and joined with '+'.

    The empty event serializes as the empty string. '+' is reserved for
    this purpose, which is why ordinary state names may not contain it.
    """
    return "+".join(sorted(members))


def parse_event_string(text: str) -> Event:
    """Inverse of :func:`canonical_event_string`; rejects non-canonical input."""
    if text == "":
        return frozenset()
    parts = text.split("+")
    if any(p == "" for p in parts):
        raise InputError(f"empty state name in event string {text!r}")
    if parts != sorted(set(parts)):
        raise InputError(f"event string {text!r} is not canonical (sorted, unique)")
    return frozenset(parts)


def validate_token(name: str, kind: str, *, allow_plus: bool = True) -> None:
    if not isinstance(name, str) or not name:
        raise InputError(f"{kind} name must be a non-empty string, got {name!r}")
    if any(c.isspace() or not c.isprintable() for c in name):
        raise InputError(f"{kind} name {name!r} contains whitespace or unprintable characters")
    if not allow_plus and "+" in name:
        raise InputError(f"{kind} name {name!r} contains '+', which is reserved for event serialization")


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class RelationFlags:
    """Exact evaluation of the four quantified relation properties for one agent."""

    serial: bool
    reflexive: bool
    transitive: bool
    euclidean: bool


@dataclass(frozen=True)
class PropertyReport:
    """Per-agent relation flags plus the structure-level classification."""

    flags: Mapping[str, RelationFlags]
    classification: str


class InformationStructure:
    """A finite state set, agent set, and one reachability relation per agent.

    ``relations`` maps every agent to an iterable of ``(from, to)`` state
    pairs. Exactly the declared agents must appear as keys. State names may
    not contain ``+`` unless ``allow_plus_in_names`` is set (used for
    generated counterfactual-state names, which embed event strings).
    """

    __slots__ = (
        "states",
        "agents",
        "_index",
        "_succ",
        "_full",
        "_pairs",
        "_component_cache",
        "_belief_cache",
    )

    def __init__(
        self,
        states: Iterable[str],
        agents: Iterable[str],
        relations: Mapping[str, Iterable[tuple[str, str]]],
        *,
        allow_plus_in_names: bool = False,
    ):
        state_list = list(states)
        agent_list = list(agents)
        if not state_list:
            raise InputError("a structure needs at least one state")
        if not agent_list:
            raise InputError("a structure needs at least one agent")
        for s in state_list:
            validate_token(s, "state", allow_plus=allow_plus_in_names)
        for a in agent_list:
            validate_token(a, "agent")
        if len(set(state_list)) != len(state_list):
            raise InputError("duplicate state names")
        if len(set(agent_list)) != len(agent_list):
            raise InputError("duplicate agent names")

        self.states = tuple(sorted(state_list))
        self.agents = tuple(sorted(agent_list))
        self._index = {s: k for k, s in enumerate(self.states)}
        self._full = (1 << len(self.states)) - 1

        rel_keys = set(relations)
        declared = set(self.agents)
        if rel_keys != declared:
            missing = sorted(declared - rel_keys)
            extra = sorted(rel_keys - declared)
            raise InputError(
                f"relations must be given for exactly the declared agents (missing {missing}, extra {extra})"
            )
        succ: dict[str, list[int]] = {}
        pairs: dict[str, frozenset[tuple[str, str]]] = {}
        for agent in self.agents:
            masks = [0] * len(self.states)
            norm = set()
            for pair in relations[agent]:
                try:
                    src, dst = pair
                except (TypeError, ValueError):
                    raise InputError(f"relation entry {pair!r} for agent {agent!r} is not a pair") from None
                if src not in self._index:
                    raise InputError(f"relation for agent {agent!r} references unknown state {src!r}")
                if dst not in self._index:
                    raise InputError(f"relation for agent {agent!r} references unknown state {dst!r}")
                masks[self._index[src]] |= 1 << self._index[dst]
                norm.add((src, dst))
            succ[agent] = masks
            pairs[agent] = frozenset(norm)
        self._succ = succ
        self._pairs = pairs
        self._component_cache: dict[tuple[str, ...], list[int]] = {}
        self._belief_cache: dict[tuple[str, int], int] = {}

    # -- basic accessors ---------------------------------------------------

    @property
    def relations(self) -> Mapping[str, frozenset[tuple[str, str]]]:
        return self._pairs

    @property
    def full_event(self) -> Event:
        return frozenset(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InformationStructure):
            return NotImplemented
        return (
            self.states == other.states
            and self.agents == other.agents
            and self._pairs == other._pairs
        )

    __hash__ = None  # mutable-looking equality; not meant to be a dict key

    def __repr__(self) -> str:
        return (
            f"InformationStructure({len(self.states)} states, {len(self.agents)} agents, "
            f"{sum(len(p) for p in self._pairs.values())} relation pairs)"
        )

    # -- mask plumbing -----------------------------------------------------

    def _state_index(self, state: str) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise InputError(f"unknown state {state!r}") from None

    def _check_agent(self, agent: str) -> str:
        if agent not in self._succ:
            raise InputError(f"unknown agent {agent!r}")
        return agent

    def _mask(self, event: Iterable[str]) -> int:
        m = 0
        for s in event:
            m |= 1 << self._state_index(s)
        return m

    def _unmask(self, mask: int) -> Event:
        return frozenset(self.states[i] for i in _bits(mask))

    def _group(self, group: Iterable[str]) -> tuple[str, ...]:
        members = sorted(set(group))
        if not members:
            raise InputError("agent group must be non-empty")
        for a in members:
            self._check_agent(a)
        return tuple(members)

    # -- possibility and belief --------------------------------------------

    def possibility_set(self, agent: str, state: str) -> Event:
        """All states the agent considers possible at ``state``."""
        self._check_agent(agent)
        return self._unmask(self._succ[agent][self._state_index(state)])

    def _belief_mask(self, agent: str, emask: int) -> int:
        key = (agent, emask)
        cached = self._belief_cache.get(key)
        if cached is not None:
            return cached
        out = 0
        inv = ~emask
        for idx, succ in enumerate(self._succ[agent]):
            if succ & inv == 0:
                out |= 1 << idx
        if len(self._belief_cache) < _BELIEF_CACHE_LIMIT:
            self._belief_cache[key] = out
        return out

    def belief(self, agent: str, event: Iterable[str]) -> Event:
        """States at which the agent's whole possibility set lies inside ``event``."""
        self._check_agent(agent)
        return self._unmask(self._belief_mask(agent, self._mask(event)))

    def _mutual_mask(self, group: tuple[str, ...], emask: int) -> int:
        out = self._full
        for agent in group:
            out &= self._belief_mask(agent, emask)
            if not out:
                break
        return out

    def mutual_belief(self, group: Iterable[str], event: Iterable[str]) -> Event:
        """Intersection of the group members' belief in ``event``."""
        return self._unmask(self._mutual_mask(self._group(group), self._mask(event)))

    # -- common belief -----------------------------------------------------

    def _common_belief_chain(self, group: tuple[str, ...], emask: int) -> list[int]:
        # Greatest fixpoint of X -> M(e) & M(X), descending from the full set.
        # Equals the intersection of all iterated mutual-belief stages but,
        # unlike iterating M directly, it cannot oscillate, and it shrinks
        # strictly until stable (so at most |states| shrinking steps).
        me = self._mutual_mask(group, emask)
        chain = [self._full]
        while True:
            nxt = me & self._mutual_mask(group, chain[-1])
            if nxt == chain[-1]:
                return chain
            chain.append(nxt)

    def common_belief_iterative(self, group: Iterable[str], event: Iterable[str]) -> Event:
        """Common belief as the limit of iterated mutual belief."""
        g = self._group(group)
        return self._unmask(self._common_belief_chain(g, self._mask(event))[-1])

    def _union_succ(self, group: tuple[str, ...]) -> list[int]:
        n = len(self.states)
        merged = [0] * n
        for agent in group:
            succ = self._succ[agent]
            for i in range(n):
                merged[i] |= succ[i]
        return merged

    def _reach_masks(self, group: tuple[str, ...]) -> list[int]:
        """For every state, the set of states reachable by group chains of length >= 1."""
        cached = self._component_cache.get(group)
        if cached is not None:
            return cached
        adj = self._union_succ(group)
        out: list[int] = []
        for start in range(len(self.states)):
            acc = adj[start]
            frontier = acc
            while frontier:
                step = 0
                for v in _bits(frontier):
                    step |= adj[v]
                frontier = step & ~acc
                acc |= frontier
            out.append(acc)
        self._component_cache[group] = out
        return out

    def component(self, group: Iterable[str], state: str) -> Event:
        """All states joined to ``state`` by a finite chain of group relations.

        The zero-length chain is admitted, so the state itself always belongs
        to its own component.
        """
        g = self._group(group)
        idx = self._state_index(state)
        return self._unmask(self._reach_masks(g)[idx] | (1 << idx))

    def component_successors(self, group: Iterable[str], state: str) -> Event:
        """Like :meth:`component` but requiring at least one relation step."""
        g = self._group(group)
        return self._unmask(self._reach_masks(g)[self._state_index(state)])

    def common_belief_component(self, group: Iterable[str], event: Iterable[str]) -> Event:
        """Common belief via reachability: states whose proper reach lies in the event.

        Uses chains of length >= 1; with the zero-length chain included the
        characterization would diverge from iterated mutual belief on
        structures that are not reflexive. The two methods agree exactly, on
        every structure (this is cross-checked in the test suite).
        """
        g = self._group(group)
        emask = self._mask(event)
        reach = self._reach_masks(g)
        inv = ~emask
        out = 0
        for idx in range(len(self.states)):
            if reach[idx] & inv == 0:
                out |= 1 << idx
        return self._unmask(out)

    # -- relation properties -------------------------------------------------

    def _agent_flags(self, agent: str) -> RelationFlags:
        succ = self._succ[agent]
        n = len(self.states)
        serial = all(succ[i] for i in range(n))
        reflexive = all(succ[i] >> i & 1 for i in range(n))
        transitive = True
        euclidean = True
        for i in range(n):
            si = succ[i]
            for j in _bits(si):
                if succ[j] & ~si:
                    transitive = False
                if si & ~succ[j]:
                    euclidean = False
            if not (transitive or euclidean):
                break
        return RelationFlags(serial, reflexive, transitive, euclidean)

    def relation_properties(self) -> PropertyReport:
        """Evaluate seriality, reflexivity, transitivity and euclideanness per agent."""
        flags = {agent: self._agent_flags(agent) for agent in self.agents}
        for f in flags.values():
            # reflexive + euclidean jointly entail transitive
            assert not (f.reflexive and f.euclidean) or f.transitive
        def every(prop: str) -> bool:
            return all(getattr(f, prop) for f in flags.values())

        if every("reflexive") and every("euclidean"):
            cls = CLASS_PARTITIONAL
        elif every("serial") and every("transitive") and every("euclidean"):
            cls = CLASS_BELIEF
        elif every("serial") and every("transitive"):
            cls = CLASS_KD4
        else:
            cls = CLASS_OTHER
        return PropertyReport(flags=flags, classification=cls)

    def is_partitional(self) -> bool:
        return self.relation_properties().classification == CLASS_PARTITIONAL

    # -- derived structures --------------------------------------------------

    def restricted_to(self, states: Iterable[str]) -> InformationStructure:
        """Substructure on the given states, keeping only relation pairs inside them."""
        kept = set(states)
        for s in kept:
            self._state_index(s)
        rels = {
            agent: [(u, v) for (u, v) in sorted(self._pairs[agent]) if u in kept and v in kept]
            for agent in self.agents
        }
        return InformationStructure(
            kept,
            self.agents,
            rels,
            allow_plus_in_names=any("+" in s for s in kept),
        )


def euclidean_counterexample(
    structure: InformationStructure, agent: str | None = None
) -> tuple[str, str, str, str] | None:
    """First (agent, w, u, v) with w->u and w->v but not u->v, or None."""
    agents = [structure._check_agent(agent)] if agent is not None else list(structure.agents)
    for a in agents:
        succ = structure._succ[a]
        for i, si in enumerate(succ):
            for j in _bits(si):
                gap = si & ~succ[j]
                if gap:
                    v = next(_bits(gap))
                    return (a, structure.states[i], structure.states[j], structure.states[v])
    return None


def negative_introspection_counterexample(
    structure: InformationStructure,
) -> tuple[str, Event, str] | None:
    """An (agent, event, state) witnessing a failure of negative introspection.

    At the returned state the agent does not believe the event, yet also does
    not believe that it does not believe it. Such a witness exists exactly
    when some relation fails to be euclidean, and one can always be built
    from a euclidean counterexample by taking the event to be the possibility
    set at the middle state.
    """
    ce = euclidean_counterexample(structure)
    if ce is None:
        return None
    agent, w, u, _ = ce
    event = structure.possibility_set(agent, u)
    return (agent, event, w)
