"""Feasible-estimate pruning and greedy schedule extraction.

Stage one cuts every observer state whose estimate violates the property,
then repeatedly removes states that lost a transition the full observer
had: a receiver sitting in such a state could be forced into a violating
estimate by the next transmission.  What survives is the largest observer
fragment within which every transmission choice keeps the property.

Stage two walks one initial fragment and commits to a single successor per
(state, event), preferring successors that let the policy suppress more,
measured by how many members carry a suppressed move staying in the set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Infeasible, UnknownInitial
from .labeled import N, LabeledSystem
from .observer import DynamicObserver, ObserverState
from .properties import ISProperty


class PrunedObserver(DynamicObserver):
    """Observer fragment remembering the full observer it came from."""

    def __init__(self, sys, states, initials, trans, full: DynamicObserver):
        super().__init__(sys, states, initials, trans)
        self.full = full

    @property
    def is_empty(self) -> bool:
        return not self.initials


def _restrict_reachable(sys, keep_states, keep_initials, trans, full) -> PrunedObserver:
    keep = set(keep_states)
    initials = [z for z in keep_initials if z in keep]
    live = set(initials)
    work = list(initials)
    cut: dict[tuple[ObserverState, str], tuple[ObserverState, ...]] = {}
    while work:
        z = work.pop()
        for e in sorted(sys.plant.alphabet):
            targets = tuple(t for t in trans.get((z, e), ()) if t in keep)
            if not targets:
                continue
            cut[(z, e)] = targets
            for t in targets:
                if t not in live:
                    live.add(t)
                    work.append(t)
    return PrunedObserver(sys, live, initials, cut, full)


def prune_violating(obs: DynamicObserver, prop: ISProperty) -> PrunedObserver:
    """Drop estimate states that violate the property, re-trim to reachable."""
    keep = [z for z in obs.states if prop.holds(z.underlying())]
    return _restrict_reachable(obs.sys, keep, obs.initials, obs.trans, obs)


def is_consistent(full: DynamicObserver, pruned: DynamicObserver, z: ObserverState) -> bool:
    """A state is consistent when pruning removed none of its events outright.

    If the full observer could continue on some event but every surviving
    successor is gone, the plant can force the receiver out of the pruned
    fragment, so z cannot be kept.
    """
    for e in full.sys.plant.alphabet:
        if full.successors(z, e) and not pruned.successors(z, e):
            return False
    return True


def consistency_fixpoint(full: DynamicObserver, g0: PrunedObserver) -> PrunedObserver:
    """Remove inconsistent states in waves until stable.

    Reachability is recomputed after every wave since deletions can strand
    whole branches.  The result may be empty; that is the synthesis-level
    "no feasible policy" signal, reported by callers as Infeasible.
    """
    cur = g0
    while True:
        bad = [z for z in cur.states if not is_consistent(full, cur, z)]
        if not bad:
            return cur
        keep = set(cur.states) - set(bad)
        cur = _restrict_reachable(full.sys, keep, cur.initials, cur.trans, full)


def synthesize_gstar(obs: DynamicObserver, prop: ISProperty) -> PrunedObserver:
    return consistency_fixpoint(obs, prune_violating(obs, prop))


@dataclass
class SubAutomaton:
    """The fragment reachable from one surviving initial state."""

    root: ObserverState
    states: tuple[ObserverState, ...]
    trans: dict[tuple[ObserverState, str], tuple[ObserverState, ...]]


def split_sub_automata(gstar: PrunedObserver) -> list[SubAutomaton]:
    subs = []
    for root in gstar.initials:
        seen = {root}
        work = [root]
        trans: dict[tuple[ObserverState, str], tuple[ObserverState, ...]] = {}
        while work:
            z = work.pop()
            for e in sorted(gstar.sys.plant.alphabet):
                targets = gstar.successors(z, e)
                if not targets:
                    continue
                trans[(z, e)] = targets
                for t in targets:
                    if t not in seen:
                        seen.add(t)
                        work.append(t)
        states = tuple(sorted(seen, key=ObserverState.sort_key))
        subs.append(SubAutomaton(root, states, trans))
    subs.sort(key=lambda s: s.root.sort_key())
    return subs


def count_nontransmitted(sys: LabeledSystem, z: ObserverState, mode: str = "default") -> int:
    """How many members of `z` own a transition that stays inside `z`.

    Default mode requires the event to be suppressed at the member, which is
    what makes the count a proxy for "events the receiver will not see".
    The unlabeled mode ignores the label and is kept for comparison.
    """
    n = 0
    for v in z.members:
        for e, lab in v.bits:
            if mode == "default" and lab != N:
                continue
            if any(w in z.member_set for w in sys.successors(v, e)):
                n += 1
                break
    return n


@dataclass
class DeterministicSchedule:
    """One committed successor per (estimate, event), rooted at one initial."""

    initial: ObserverState
    states: tuple[ObserverState, ...]
    trans: dict[tuple[ObserverState, str], ObserverState]


def extract_min_transmit(
    gstar: PrunedObserver,
    pin_initial: ObserverState | None = None,
    nz_mode: str = "default",
) -> DeterministicSchedule:
    """Greedy suppression-maximizing walk of one sub-automaton.

    The sub-automaton with the highest summed member count is chosen (or the
    pinned one); within it, each (state, event) commits to the successor
    with the highest count.  All ties break toward the canonically smallest
    candidate, so the result is a pure function of its inputs.
    """
    if gstar.is_empty:
        raise Infeasible("no estimate survives pruning; the property cannot be enforced")
    sys = gstar.sys
    subs = split_sub_automata(gstar)
    if pin_initial is not None:
        subs = [s for s in subs if s.root == pin_initial]
        if not subs:
            raise UnknownInitial(f"{pin_initial.render()} is not a surviving initial estimate")

    def score(sub: SubAutomaton) -> int:
        return sum(count_nontransmitted(sys, z, nz_mode) for z in sub.states)

    best = subs[0]
    best_score = score(best)
    for sub in subs[1:]:
        s = score(sub)
        if s > best_score:
            best, best_score = sub, s

    sched: dict[tuple[ObserverState, str], ObserverState] = {}
    seen = {best.root}
    queue = [best.root]
    while queue:
        z = queue.pop(0)
        for e in sorted(sys.plant.alphabet):
            cands = best.trans.get((z, e), ())
            if not cands:
                continue
            pick = sorted(
                cands,
                key=lambda t: (-count_nontransmitted(sys, t, nz_mode), t.sort_key()),
            )[0]
            sched[(z, e)] = pick
            if pick not in seen:
                seen.add(pick)
                queue.append(pick)
    return DeterministicSchedule(
        best.root, tuple(sorted(seen, key=ObserverState.sort_key)), sched
    )
