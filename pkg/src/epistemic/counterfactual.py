"""Construction of counterfactual structures from partitional ones.

For every agent and every event in that agent's union-closed decision domain,
the construction adds a full block of duplicate states, one per original
state. A duplicate for agent i built over event e points, for i, to e itself
when its base state lies in e (this is where i is "secretly more ignorant"),
and to i's original cell otherwise; for every other agent it points to that
agent's cell of the base state. No relation ever points into the duplicates,
so the added states are invisible to everyone and factual beliefs about the
original states are preserved.

The companion verifier re-checks the structural properties the construction
promises, returning witnesses for any failure, so third-party or mutated
structures can be audited with the same machinery.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InputError, NotFoundError, PreconditionError
from .partitions import gamma
from .structures import (
    CLASS_BELIEF,
    CLASS_KD4,
    Event,
    InformationStructure,
    PropertyReport,
    canonical_event_string,
)

CF_PREFIX = "cf"


def counterfactual_state_name(agent: str, base: str, event: Iterable[str]) -> str:
    """Deterministic wire name of a duplicate state: ``cf:<agent>:<base>:<event>``."""
    return f"{CF_PREFIX}:{agent}:{base}:{canonical_event_string(event)}"


@dataclass(frozen=True)
class CounterfactualLabel:
    """Provenance of one duplicate state: who it belongs to, what it duplicates, over which event."""

    agent: str
    base: str
    event: Event


class CounterfactualStructure:
    """An information structure over originals plus labelled duplicate states.

    ``actual`` is the set of original states; every other state must appear in
    ``labels``. The label map, not the generated names, is authoritative for
    provenance. Construction validates only the cheap structural facts (label
    coverage, no relation pointing at a duplicate), so deliberately damaged
    instances can still be built and then audited with
    :func:`verify_counterfactual`.
    """

    __slots__ = ("structure", "actual", "labels", "origin", "_by_triple")

    def __init__(
        self,
        structure: InformationStructure,
        actual: Iterable[str],
        labels: Mapping[str, CounterfactualLabel],
        origin: InformationStructure,
    ):
        self.structure = structure
        self.actual = frozenset(actual)
        self.labels = dict(labels)
        self.origin = origin

        state_set = set(structure.states)
        if not self.actual <= state_set:
            raise InputError("actual states must be states of the structure")
        if frozenset(origin.states) != self.actual:
            raise InputError("origin state set must equal the actual states")
        if origin.agents != structure.agents:
            raise InputError("origin and counterfactual structure must share the agent set")
        expected_lambda = state_set - self.actual
        if set(self.labels) != expected_lambda:
            raise InputError("labels must cover exactly the non-actual states")
        by_triple: dict[tuple[str, str, str], str] = {}
        for name, label in self.labels.items():
            if label.agent not in structure.agents:
                raise InputError(f"label for {name!r} names unknown agent {label.agent!r}")
            if label.base not in self.actual:
                raise InputError(f"label for {name!r} has non-actual base {label.base!r}")
            if not label.event or not label.event <= self.actual:
                raise InputError(f"label for {name!r} has an event outside the actual states")
            key = (label.agent, label.base, canonical_event_string(label.event))
            if key in by_triple:
                raise InputError(f"duplicate label triple for {name!r} and {by_triple[key]!r}")
            by_triple[key] = name
        self._by_triple = by_triple
        for agent in structure.agents:
            for src, dst in structure.relations[agent]:
                if dst not in self.actual:
                    raise InputError(
                        f"relation of agent {agent!r} points into the duplicates: ({src!r}, {dst!r})"
                    )

    @property
    def lambda_states(self) -> frozenset[str]:
        return frozenset(self.labels)

    def counterfactual_state(self, agent: str, base: str, event: Iterable[str]) -> str:
        """The unique duplicate with the given (agent, base, event) label."""
        key = (agent, base, canonical_event_string(event))
        try:
            return self._by_triple[key]
        except KeyError:
            raise NotFoundError(
                f"no counterfactual state for agent {agent!r}, base {base!r}, "
                f"event {canonical_event_string(event) or '(empty)'!s}"
            ) from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CounterfactualStructure):
            return NotImplemented
        return (
            self.structure == other.structure
            and self.actual == other.actual
            and self.labels == other.labels
            and self.origin == other.origin
        )

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"CounterfactualStructure({len(self.actual)} actual + "
            f"{len(self.labels)} counterfactual states, {len(self.structure.agents)} agents)"
        )


def build_counterfactual(
    source: InformationStructure, *, max_cells: int | None = None
) -> CounterfactualStructure:
    """Duplicate-and-rewire construction over a partitional structure.

    For each agent i and each event e in i's union-closed domain, one block of
    duplicates is created holding a copy of every original state. Relation
    pairs are added according to three disjoint rules: the block's own agent
    sees e from duplicates of states inside e and their original cell
    otherwise, and every other agent sees the cell of the base state. The
    result is deterministic; per-block work is independent and could be
    parallelized without changing the outcome.
    """
    if not source.is_partitional():
        raise PreconditionError("counterfactual construction requires a partitional structure")

    agents = source.agents
    cells: dict[str, dict[str, Event]] = {
        i: {w: source.possibility_set(i, w) for w in source.states} for i in agents
    }
    domains = {i: gamma(source, i, max_cells=max_cells) for i in agents}

    labels: dict[str, CounterfactualLabel] = {}
    for i in agents:
        for event in domains[i]:
            for w in source.states:
                name = counterfactual_state_name(i, w, event)
                if name in labels:
                    raise InputError(f"generated state name {name!r} collides across blocks")
                labels[name] = CounterfactualLabel(agent=i, base=w, event=event)
    if set(labels) & set(source.states):
        raise InputError("generated counterfactual names collide with original state names")

    relations: dict[str, set[tuple[str, str]]] = {
        i: set(source.relations[i]) for i in agents
    }
    for name, label in labels.items():
        for i in agents:
            if i == label.agent:
                # rules (a)/(b): exactly one applies, by membership of the base in the event
                targets = label.event if label.base in label.event else cells[i][label.base]
            else:
                targets = cells[i][label.base]
            assert targets, "every duplicate must reach at least one actual state"
            relations[i].update((name, t) for t in targets)

    combined = InformationStructure(
        list(source.states) + list(labels),
        agents,
        relations,
        allow_plus_in_names=True,
    )
    return CounterfactualStructure(
        structure=combined, actual=source.states, labels=labels, origin=source
    )


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named verification check.

    Advisory results document readings or extra diagnostics and never affect
    the overall verdict.
    """

    name: str
    passed: bool
    detail: str = ""
    advisory: bool = False


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]
    properties: PropertyReport

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.advisory)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed and not c.advisory)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _verification_groups(agents: tuple[str, ...], limit: int) -> list[tuple[str, ...]]:
    if len(agents) <= limit:
        out = []
        for r in range(1, len(agents) + 1):
            out.extend(itertools.combinations(agents, r))
        return out
    singletons = [(a,) for a in agents]
    return singletons + [agents]


def verify_counterfactual(
    source: InformationStructure,
    built: CounterfactualStructure,
    *,
    seed: int = 0,
    axiom_samples: int = 120,
    prop7_exhaustive_limit: int = 10,
    prop7_samples: int = 400,
    pair_sample_limit: int = 2500,
    group_limit: int = 8,
) -> VerificationReport:
    """Audit a counterfactual structure against the properties it should satisfy.

    Runs every structural check with an explicit witness on failure. Event
    quantified checks are exhaustive over subsets of the actual states up to
    ``prop7_exhaustive_limit`` of them, and seeded-random elsewhere. The
    include-self reading of reachability components is reported as an advisory
    discrepancy rather than a failure; the successors-only reading is the one
    verified.
    """
    if built.origin != source:
        raise InputError("verification requires the structure the counterfactual was built from")

    S = built.structure
    actual = built.actual
    agents = S.agents
    lam = sorted(built.labels)
    checks: list[CheckResult] = []
    rng = random.Random(seed)

    def add(name: str, passed: bool, detail: str = "", advisory: bool = False) -> None:
        checks.append(CheckResult(name=name, passed=passed, detail=detail, advisory=advisory))

    # ---- block bookkeeping -------------------------------------------------
    domains = {i: gamma(source, i) for i in agents}
    expected = {
        (i, w, canonical_event_string(e))
        for i in agents
        for e in domains[i]
        for w in source.states
    }
    got = {(l.agent, l.base, canonical_event_string(l.event)) for l in built.labels.values()}
    if got == expected:
        add("lambda_blocks_complete", True,
            f"{len(lam)} duplicates = sum over agents of |domain| x {len(actual)} originals")
    else:
        missing = sorted(expected - got)[:3]
        extra = sorted(got - expected)[:3]
        add("lambda_blocks_complete", False, f"missing {missing}, unexpected {extra}")

    bad_target = next(
        (
            (i, src, dst)
            for i in agents
            for (src, dst) in sorted(S.relations[i])
            if dst not in actual
        ),
        None,
    )
    add(
        "relations_target_actual",
        bad_target is None,
        "" if bad_target is None else f"agent {bad_target[0]} pair {bad_target[1:]} points at a duplicate",
    )

    restriction_ok = S.restricted_to(actual) == source
    add("restriction_matches_source", restriction_ok,
        "" if restriction_ok else "restricting to the actual states does not reproduce the source")

    # ---- seriality / transitivity (and belief nesting) ----------------------
    serial_witness = None
    transitive_witness = None
    for i in agents:
        for w in S.states:
            ps = S.possibility_set(i, w)
            if not ps and serial_witness is None:
                serial_witness = (i, w)
            for v in sorted(ps):
                if not S.possibility_set(i, v) <= ps and transitive_witness is None:
                    transitive_witness = (i, w, v)
    add("relations_serial", serial_witness is None,
        "" if serial_witness is None else f"agent {serial_witness[0]} has no successor at {serial_witness[1]}")
    add("belief_nesting", transitive_witness is None,
        "" if transitive_witness is None
        else f"agent {transitive_witness[0]}: possibility set at {transitive_witness[2]} "
             f"escapes the one at {transitive_witness[1]}")

    # ---- beliefs at actual states match the source ---------------------------
    mismatch = next(
        (
            (i, w)
            for i in agents
            for w in sorted(actual)
            if S.possibility_set(i, w) != source.possibility_set(i, w)
        ),
        None,
    )
    add("actual_beliefs_match_source", mismatch is None,
        "" if mismatch is None else f"agent {mismatch[0]} at {mismatch[1]}")

    # ---- reachability ---------------------------------------------------------
    groups = _verification_groups(agents, group_limit)
    reach_witness = None
    union_witness = None
    for g in groups:
        for w in S.states:
            reach = S.component_successors(g, w)
            if not reach <= actual and reach_witness is None:
                reach_witness = (g, w, sorted(reach - actual)[0])
            for i in g:
                covered = frozenset().union(*(S.possibility_set(i, v) for v in reach)) if reach else frozenset()
                if covered != reach and union_witness is None:
                    union_witness = (g, w, i)
    add("reach_stays_actual", reach_witness is None,
        "" if reach_witness is None
        else f"group {reach_witness[0]}: {reach_witness[2]} is reachable from {reach_witness[1]}")
    add("reach_union_identity", union_witness is None,
        "" if union_witness is None
        else f"group {union_witness[0]}, agent {union_witness[2]}, start {union_witness[1]}")
    add(
        "include_self_reading_discrepancy",
        not lam,
        "under the include-self reading every duplicate belongs to its own component, "
        "which then leaves the actual states; the successors-only reading above is the verified one",
        advisory=True,
    )

    # ---- beliefs land in (and exhaust) the decision domains -------------------
    domain_sets = {i: set(domains[i]) for i in agents}
    stray = next(
        (
            (i, w)
            for i in agents
            for w in S.states
            if S.possibility_set(i, w) not in domain_sets[i]
        ),
        None,
    )
    add("beliefs_in_decision_domain", stray is None,
        "" if stray is None
        else f"agent {stray[0]} at {stray[1]}: {canonical_event_string(S.possibility_set(stray[0], stray[1]))}")

    unrealized = None
    for i in agents:
        for e in domains[i]:
            for w in sorted(e):
                try:
                    name = built.counterfactual_state(i, w, e)
                except NotFoundError:
                    unrealized = (i, e, "missing duplicate")
                    break
                if S.possibility_set(i, name) != e:
                    unrealized = (i, e, f"belief at {name} differs")
                    break
            if unrealized:
                break
        if unrealized:
            break
    add("every_domain_event_realized", unrealized is None,
        "" if unrealized is None
        else f"agent {unrealized[0]}, event {canonical_event_string(unrealized[1])}: {unrealized[2]}")

    # ---- truth fails at every duplicate ---------------------------------------
    deluded = all(name not in S.possibility_set(i, name) for name in lam for i in agents)
    t_witness = ""
    if lam:
        i0 = agents[0]
        l0 = lam[0]
        t_witness = (
            f"e.g. agent {i0} at {l0} believes "
            f"{canonical_event_string(S.possibility_set(i0, l0))} which excludes {l0}"
        )
    add("truth_fails_at_duplicates", deluded and bool(lam), t_witness)

    # ---- sampled belief axioms -------------------------------------------------
    nbits = len(S.states)
    full = (1 << nbits) - 1
    k_wit = d_wit = four_wit = None
    for _ in range(axiom_samples):
        e = rng.getrandbits(nbits)
        f = rng.getrandbits(nbits)
        for i in agents:
            be = S._belief_mask(i, e)
            if S._belief_mask(i, (full ^ e) | f) & be & ~S._belief_mask(i, f):
                k_wit = k_wit or i
            if be & S._belief_mask(i, full ^ e):
                d_wit = d_wit or i
            if be & ~S._belief_mask(i, be):
                four_wit = four_wit or i
    add("axiom_K_sampled", k_wit is None, k_wit and f"agent {k_wit}" or "")
    add("axiom_D_sampled", d_wit is None, d_wit and f"agent {d_wit}" or "")
    add("axiom_4_sampled", four_wit is None, four_wit and f"agent {four_wit}" or "")

    # ---- secret-ignorance biconditional ----------------------------------------
    omega_sorted = sorted(actual)
    bel = {
        (i, w): S._mask(S.possibility_set(i, w)) for i in agents for w in S.states
    }
    pair_info = {}
    pair_info_gap = None
    for i in agents:
        for w, wp in itertools.product(omega_sorted, repeat=2):
            u = bel[(i, w)] | bel[(i, wp)]
            try:
                lam_name = built.counterfactual_state(i, w, S._unmask(u))
            except NotFoundError:
                pair_info_gap = (i, w, wp)
                break
            pair_info[(i, w, wp)] = (bel[(i, w)], bel[(i, wp)], bel[(i, lam_name)])
        if pair_info_gap:
            break

    def biconditional_holds(emask: int) -> tuple[bool, tuple | None]:
        for key, (bw, bwp, blam) in pair_info.items():
            if ((bw | bwp) & ~emask == 0) != (blam & ~emask == 0):
                return False, key
        return True, None

    omega_bits = [S._state_index(s) for s in omega_sorted]
    bi_witness = pair_info_gap  # a missing duplicate already falsifies the property
    if bi_witness is None and len(omega_bits) <= prop7_exhaustive_limit:
        for r in range(len(omega_bits) + 1):
            for combo in itertools.combinations(omega_bits, r):
                ok, key = biconditional_holds(sum(1 << b for b in combo))
                if not ok:
                    bi_witness = key
                    break
            if bi_witness:
                break
        scope = f"exhaustive over all {2 ** len(omega_bits)} actual-state events"
    else:
        scope = "actual-state events sampled (too many for exhaustion)"
    # the quantifier ranges over events of the full structure, so spot-check those too
    for _ in range(prop7_samples):
        if bi_witness:
            break
        ok, key = biconditional_holds(rng.getrandbits(nbits))
        if not ok:
            bi_witness = key
    add("secret_ignorance_biconditional", bi_witness is None,
        f"{scope}, plus {prop7_samples} random full-structure events"
        if bi_witness is None else f"fails for agent/base pair {bi_witness}")

    # ---- pairwise union realizability (informational) ---------------------------
    all_pairs = list(itertools.product(S.states, repeat=2))
    if len(all_pairs) > pair_sample_limit:
        all_pairs = rng.sample(all_pairs, pair_sample_limit)
        pair_scope = f"sampled {pair_sample_limit} state pairs"
    else:
        pair_scope = "all state pairs"
    union_real = True
    for i in agents:
        for w, wp in all_pairs:
            u = bel[(i, w)] | bel[(i, wp)]
            if not u:
                union_real = False  # empty beliefs have no realizing duplicate
                break
            base = sorted(S._unmask(u))[0]
            try:
                lam_name = built.counterfactual_state(i, base, S._unmask(u))
            except NotFoundError:
                union_real = False
                break
            if bel[(i, lam_name)] != u:
                union_real = False
                break
        if not union_real:
            break
    add("pairwise_union_realized", union_real, pair_scope, advisory=True)

    properties = S.relation_properties()
    add("classification_in_belief_family",
        properties.classification in (CLASS_BELIEF, CLASS_KD4),
        f"classified as {properties.classification}")

    return VerificationReport(checks=tuple(checks), properties=properties)
