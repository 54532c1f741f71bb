"""Receiver-side estimate automaton over the decision-labeled system.

The receiver never sees suppressed events, so after each transmitted event
its estimate is a set of labeled states that is closed under suppressed
moves.  Because each intermediate state may resolve its suppressed successor
to any decision version, one transmission can lead to several alternative
closed estimates; the observer built here keeps all of them and is therefore
nondeterministic over estimate sets.

A candidate estimate is admissible when it is the exact range of some
partial run tree: starting from the mandatory seed states, each tree node
follows any subset of its suppressed events and commits to a single decision
version of the plant successor per followed event.  Revisiting a state at a
different depth may commit differently.  On top of that the estimate must be
reach closed: every suppressed obligation of every member is answered by
some member.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import InstanceTooLarge, StateBudgetExceeded
from .labeled import N, Y, LabeledState, LabeledSystem
from .automata import Word

_FAMILY_LIMIT = 500_000


@dataclass(frozen=True)
class ObserverState:
    """An estimate: a canonically ordered set of labeled states."""

    members: tuple[LabeledState, ...]

    @staticmethod
    def of(states) -> "ObserverState":
        return ObserverState(tuple(sorted(set(states), key=LabeledState.sort_key)))

    @cached_property
    def member_set(self) -> frozenset[LabeledState]:
        return frozenset(self.members)

    def underlying(self) -> frozenset[str]:
        return frozenset(ls.base for ls in self.members)

    def render(self) -> str:
        return "(" + ",".join(ls.render() for ls in self.members) + ")"

    def sort_key(self):
        return (len(self.members), tuple(ls.sort_key() for ls in self.members))

    def __contains__(self, ls: LabeledState) -> bool:
        return ls in self.member_set

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return self.render()


def reach_closed(sys: LabeledSystem, members: frozenset[LabeledState]) -> bool:
    """Every suppressed event of every member must land inside the set."""
    for v in members:
        for e, lab in v.bits:
            if lab != N:
                continue
            if not any(w in members for w in sys.successors(v, e)):
                return False
    return True


def _n_universe(sys: LabeledSystem, seeds) -> frozenset[LabeledState]:
    """All labeled states touchable from the seeds along suppressed moves,
    landing on any decision version."""
    seen = set(seeds)
    work = list(seeds)
    while work:
        v = work.pop()
        for _e, opts in sys.suppressed_moves(v):
            for w in opts:
                if w not in seen:
                    seen.add(w)
                    work.append(w)
    return frozenset(seen)


def _union_choices(parts) -> set[frozenset]:
    """Distinct unions obtainable by picking one option from every part.

    Equivalent to unioning each tuple of itertools.product(*parts), but
    deduplicating after every part keeps the working set at the number of
    distinct unions instead of the raw product size.
    """
    acc: set[frozenset] = {frozenset()}
    for options in parts:
        opts = set(options)
        acc = {a | o for a in acc for o in opts}
    return acc


def _cover_families(sys: LabeledSystem, seeds) -> dict[LabeledState, frozenset[frozenset[LabeledState]]]:
    """Least fixpoint of the run-tree range families.

    fam[v] collects every set of labeled states that is the range of some
    finite partial run tree rooted at v.  The defining step: pick a subset E
    of v's suppressed events, pick one version w of the plant successor for
    each event in E, pick a range already known for w, and union them with
    {v}.  Results are memoized on the system since fam[v] only depends on
    the suppressed-reach universe of v.
    """
    universe = _n_universe(sys, seeds)
    pending = [v for v in universe if v not in sys._cover_cache]
    if not pending:
        return {v: sys._cover_cache[v] for v in universe}

    fam: dict[LabeledState, set[frozenset[LabeledState]]] = {
        v: set(sys._cover_cache.get(v, ())) for v in universe
    }
    changed = True
    while changed:
        changed = False
        total = 0
        for v in universe:
            if v in sys._cover_cache:
                total += len(fam[v])
                continue
            # per suppressed event: the ways to not follow it (empty) or to
            # follow it into one version with one of its known ranges
            per_event = []
            for _e, opts in sys.suppressed_moves(v):
                ways: set[frozenset[LabeledState]] = {frozenset()}
                for w in opts:
                    ways.update(fam[w])
                per_event.append(ways)
            for sub in _union_choices(per_event):
                rng = frozenset({v}) | sub
                if rng not in fam[v]:
                    fam[v].add(rng)
                    changed = True
            total += len(fam[v])
            if total > _FAMILY_LIMIT:
                raise StateBudgetExceeded(
                    f"estimate family exceeded {_FAMILY_LIMIT} sets while closing"
                )
    out = {}
    for v in universe:
        frozen = sys._cover_cache.get(v)
        if frozen is None:
            frozen = frozenset(fam[v])
            sys._cover_cache[v] = frozen
        out[v] = frozen
    return out


def closure_family(sys: LabeledSystem, seed: LabeledState) -> tuple[ObserverState, ...]:
    """All admissible closed estimates grown from a single seed state."""
    fam = _cover_families(sys, (seed,))
    good = [rng for rng in fam[seed] if reach_closed(sys, rng)]
    return tuple(sorted((ObserverState.of(r) for r in good), key=ObserverState.sort_key))


def non_conflicting(sys: LabeledSystem, seed: LabeledState, cand: frozenset[LabeledState]) -> bool:
    """Is `cand` exactly the range of some partial run tree from `seed`
    that never leaves `cand`?  Checked by the same fixpoint restricted to
    `cand`'s members."""
    if seed not in cand:
        return False
    fam: dict[LabeledState, set[frozenset[LabeledState]]] = {v: set() for v in cand}
    changed = True
    while changed:
        changed = False
        for v in cand:
            per_event = []
            for _e, opts in sys.suppressed_moves(v):
                ways: set[frozenset[LabeledState]] = {frozenset()}
                for w in opts:
                    if w in cand:
                        ways.update(fam[w])
                per_event.append(ways)
            for sub in _union_choices(per_event):
                rng = frozenset({v}) | sub
                if rng not in fam[v]:
                    fam[v].add(rng)
                    changed = True
    return cand in fam[seed]


def successor_cores(sys: LabeledSystem, z: ObserverState, e: str) -> tuple[frozenset[LabeledState], ...]:
    """Seed sets for the estimates after transmitting `e` from `z`.

    Only members that transmit `e` contribute; the receiver knows the event
    happened, so every contributing plant successor is a mandatory seed, in
    one decision version each.
    """
    bases = set()
    for v in z.members:
        if e in v._map and v.label(e) == Y:
            tgt = sys.plant.step(v.base, e)
            if tgt is not None:
                bases.add(tgt)
    if not bases:
        return ()
    pools = [sys.versions_of(b) for b in sorted(bases)]
    return tuple(frozenset(choice) for choice in itertools.product(*pools))


def observer_step(sys: LabeledSystem, z: ObserverState, e: str) -> tuple[ObserverState, ...]:
    """All admissible estimates after `z` transmits `e`."""
    out = set()
    for core in successor_cores(sys, z, e):
        fam = _cover_families(sys, core)
        for rng in _union_choices(fam[r] for r in core):
            if reach_closed(sys, rng):
                out.add(rng)
    return tuple(sorted((ObserverState.of(r) for r in out), key=ObserverState.sort_key))


class DynamicObserver:
    """Nondeterministic transition system over admissible estimates."""

    def __init__(self, sys: LabeledSystem, states, initials, trans):
        self.sys = sys
        self.states = tuple(sorted(states, key=ObserverState.sort_key))
        self.initials = tuple(sorted(initials, key=ObserverState.sort_key))
        self.trans: dict[tuple[ObserverState, str], tuple[ObserverState, ...]] = dict(trans)

    def successors(self, z: ObserverState, e: str) -> tuple[ObserverState, ...]:
        return self.trans.get((z, e), ())

    def states_after(self, word: Word) -> frozenset[ObserverState]:
        """All estimates compatible with an observed word, from any initial."""
        cur = set(self.initials)
        for e in word:
            cur = {z2 for z in cur for z2 in self.successors(z, e)}
            if not cur:
                break
        return frozenset(cur)

    @property
    def transition_count(self) -> int:
        return sum(len(v) for v in self.trans.values())

    def canonical_text(self) -> str:
        lines = [f"states {len(self.states)}"]
        for z in self.initials:
            lines.append(f"initial {z.render()}")
        for (z, e), targets in sorted(
            self.trans.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1])
        ):
            for z2 in targets:
                lines.append(f"trans {z.render()} {e} {z2.render()}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        ids = {z: f"n{i}" for i, z in enumerate(self.states)}
        lines = ["digraph observer {", "  rankdir=LR;"]
        for z in self.states:
            shape = "doublecircle" if z in self.initials else "circle"
            lines.append(f'  {ids[z]} [label="{z.render()}", shape={shape}];')
        for (z, e), targets in sorted(
            self.trans.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1])
        ):
            for z2 in targets:
                lines.append(f'  {ids[z]} -> {ids[z2]} [label="{e}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"DynamicObserver({len(self.states)} states, {self.transition_count} transitions)"


def build_observer(sys: LabeledSystem, state_budget: int = 100_000) -> DynamicObserver:
    """Explore every admissible estimate reachable from the initial ones."""
    initials: set[ObserverState] = set()
    for v in sys.initials:
        initials.update(closure_family(sys, v))
    states: set[ObserverState] = set(initials)
    trans: dict[tuple[ObserverState, str], tuple[ObserverState, ...]] = {}
    work = sorted(initials, key=ObserverState.sort_key)
    while work:
        z = work.pop(0)
        for e in sorted(sys.plant.alphabet):
            nxt = observer_step(sys, z, e)
            if not nxt:
                continue
            trans[(z, e)] = nxt
            for z2 in nxt:
                if z2 not in states:
                    states.add(z2)
                    if len(states) > state_budget:
                        raise StateBudgetExceeded(
                            f"observer exceeded {state_budget} states"
                        )
                    work.append(z2)
    return DynamicObserver(sys, states, initials, trans)


def closure_family_bruteforce(
    sys: LabeledSystem, seed: LabeledState, depth: int | None = None
) -> tuple[ObserverState, ...]:
    """Oracle for closure_family by exhaustive subset search.

    Enumerates every subset of the suppressed-reach universe containing the
    seed, keeps those that are reach closed and realizable as the range of a
    depth-bounded partial run tree.  The tree check explores depth-indexed
    range families directly instead of the production fixpoint.
    """
    universe = sorted(_n_universe(sys, (seed,)), key=LabeledState.sort_key)
    if len(universe) > 20:
        raise InstanceTooLarge(f"oracle universe has {len(universe)} states, cap is 20")
    if depth is None:
        depth = len(universe) * len(universe) + 1

    def plain_reach(inside: frozenset[LabeledState]) -> frozenset[LabeledState]:
        seen = {seed}
        work = [seed]
        while work:
            v = work.pop()
            for _e, opts in sys.suppressed_moves(v):
                for w in opts:
                    if w in inside and w not in seen:
                        seen.add(w)
                        work.append(w)
        return frozenset(seen)

    def ranges(v: LabeledState, d: int, inside: frozenset[LabeledState], memo) -> frozenset:
        key = (v, d)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if d == 0:
            out = frozenset({frozenset({v})})
        else:
            per_event = []
            for _e, opts in sys.suppressed_moves(v):
                ways: list[frozenset | None] = [None]
                for w in opts:
                    if w in inside:
                        ways.extend(ranges(w, d - 1, inside, memo))
                per_event.append(ways)
            acc = set()
            for combo in itertools.product(*per_event):
                acc.add(frozenset({v}).union(*(c for c in combo if c is not None)))
            out = frozenset(acc)
        memo[key] = out
        return out

    others = [v for v in universe if v != seed]
    found = []
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            cand = frozenset({seed, *extra})
            if not reach_closed(sys, cand):
                continue
            if plain_reach(cand) != cand:
                continue
            if cand in ranges(seed, depth, cand, {}):
                found.append(cand)
    return tuple(sorted((ObserverState.of(c) for c in found), key=ObserverState.sort_key))
