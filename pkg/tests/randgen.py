"""Seeded random instances for the cross-check loops.

Plants are rejection-sampled to stay small enough for the brute-force
oracles: few defined events per state, a bounded labeled-state count, and
a bounded number of words up to the depths the checkers explore.
"""

import random

from destx import Plant, Policy, make_labeled
from destx.labeled import N, Y

EVENTS = ("a", "b", "c")


def lang_size_capped(plant: Plant, depth: int, cap: int) -> int | None:
    """Number of words of length <= depth, or None once it exceeds cap."""
    counts = {plant.initial: 1}
    total = 1
    for _ in range(depth):
        nxt: dict[str, int] = {}
        for q, c in counts.items():
            for e in plant.defined_events(q):
                q2 = plant.step(q, e)
                nxt[q2] = nxt.get(q2, 0) + c
        total += sum(nxt.values())
        if total > cap:
            return None
        if not nxt:
            break
        counts = nxt
    return total


def random_plant(
    rng: random.Random,
    max_states: int = 5,
    max_events: int = 3,
    max_per_state: int = 2,
    max_labeled: int = 14,
    check_depth: int = 5,
    word_cap: int = 3000,
) -> Plant:
    """One random partial DFA meeting the size constraints."""
    while True:
        n = rng.randint(2, max_states)
        k = rng.randint(1, max_events)
        states = [f"q{i}" for i in range(n)]
        events = list(EVENTS[:k])
        trans = {}
        n_edges = rng.randint(1, min(n * max_per_state, n + 2))
        for _ in range(n_edges):
            q = rng.choice(states)
            e = rng.choice(events)
            trans[(q, e)] = rng.choice(states)
        per_state = {}
        for (q, _e) in trans:
            per_state[q] = per_state.get(q, 0) + 1
        if any(c > max_per_state for c in per_state.values()):
            continue
        labeled = sum(2 ** per_state.get(q, 0) for q in states)
        if labeled > max_labeled:
            continue
        plant = Plant(states, events, trans, "q0")
        if lang_size_capped(plant, check_depth + labeled, word_cap) is None:
            continue
        return plant


def random_policy(rng: random.Random, plant: Plant) -> Policy:
    """Memoryless policy: one random label vector per plant state."""
    versions = {}
    for q in sorted(plant.states):
        decisions = {e: rng.choice((Y, N)) for e in sorted(plant.defined_events(q))}
        versions[q] = make_labeled(q, decisions)
    trans = {
        (versions[q], e): versions[q2] for q, e, q2 in plant.transitions()
    }
    return Policy(plant, versions[plant.initial], trans)


def flip_to_suppress(rng: random.Random, plant: Plant, policy: Policy):
    """Copy of a memoryless policy with one Y label turned to N, or None if
    the policy already suppresses everything."""
    versions = {x.base: x for x in policy.states}
    flippable = [
        (q, e) for q, x in versions.items() for e in x.events() if x.label(e) == Y
    ]
    if not flippable:
        return None
    q0, e0 = rng.choice(flippable)
    new_versions = {}
    for q, x in versions.items():
        decisions = {e: x.label(e) for e in x.events()}
        if q == q0:
            decisions[e0] = N
        new_versions[q] = make_labeled(q, decisions)
    trans = {
        (new_versions[q], e): new_versions[q2]
        for q, e, q2 in plant.transitions()
    }
    return Policy(plant, new_versions[plant.initial], trans)
