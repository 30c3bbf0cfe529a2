"""Seeded random-structure generators shared across test modules."""

import random

from epistemic import InformationStructure, equivalence_pairs


def random_structure(rng: random.Random, max_states: int = 6, max_agents: int = 3) -> InformationStructure:
    """Arbitrary relations, arbitrary density."""
    n = rng.randint(1, max_states)
    m = rng.randint(1, max_agents)
    states = [f"s{k}" for k in range(n)]
    agents = [chr(ord("a") + k) for k in range(m)]
    relations = {}
    for agent in agents:
        density = rng.random()
        relations[agent] = [
            (u, v) for u in states for v in states if rng.random() < density
        ]
    return InformationStructure(states, agents, relations)


def random_cells(rng: random.Random, states: list[str], max_cells: int | None = None) -> list[list[str]]:
    shuffled = states[:]
    rng.shuffle(shuffled)
    upper = min(len(states), max_cells) if max_cells else len(states)
    k = rng.randint(1, upper)
    cuts = sorted(rng.sample(range(1, len(states)), k - 1)) if k > 1 else []
    bounds = [0] + cuts + [len(states)]
    return [shuffled[bounds[i]:bounds[i + 1]] for i in range(k)]


def random_partitional(
    rng: random.Random,
    max_states: int = 6,
    max_agents: int = 3,
    max_cells: int | None = None,
) -> InformationStructure:
    n = rng.randint(1, max_states)
    m = rng.randint(1, max_agents)
    states = [f"s{k}" for k in range(n)]
    agents = [chr(ord("a") + k) for k in range(m)]
    relations = {
        agent: equivalence_pairs(random_cells(rng, states, max_cells)) for agent in agents
    }
    return InformationStructure(states, agents, relations)


def random_belief_structure(rng: random.Random, max_states: int = 6, max_agents: int = 3) -> InformationStructure:
    """Serial, transitive and euclidean relations.

    Per agent: disjoint clusters over a subset of the states; cluster members
    point at their own cluster, every other state points at some cluster.
    """
    n = rng.randint(1, max_states)
    m = rng.randint(1, max_agents)
    states = [f"s{k}" for k in range(n)]
    agents = [chr(ord("a") + k) for k in range(m)]
    relations = {}
    for agent in agents:
        size = rng.randint(1, n)
        covered = rng.sample(states, size)
        clusters = random_cells(rng, covered)
        target = {}
        for cluster in clusters:
            for w in cluster:
                target[w] = cluster
        for w in states:
            if w not in target:
                target[w] = rng.choice(clusters)
        relations[agent] = [(w, v) for w in states for v in target[w]]
    return InformationStructure(states, agents, relations)


def random_event(rng: random.Random, structure: InformationStructure) -> frozenset[str]:
    return frozenset(s for s in structure.states if rng.random() < 0.5)
