"""Decision-labeled view of a plant.

Every plant state is expanded into one version per assignment of a
transmit/suppress decision (Y or N) to each of its defined events.  A step
keeps the plant transition structure and is free to land on any decision
version of the target; the decision taken at the source of a step determines
whether that step is visible to the receiver.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from .automata import Nfa, Plant, Word
from .errors import AlphabetTooLarge, ParseError, UndefinedEvent, UnknownState

Y = "Y"
N = "N"


@dataclass(frozen=True)
class LabeledState:
    """A plant state together with one decision per defined event."""

    base: str
    bits: tuple[tuple[str, str], ...]  # ((event, decision), ...) sorted by event

    @cached_property
    def _map(self) -> dict[str, str]:
        return dict(self.bits)

    def label(self, e: str) -> str:
        try:
            return self._map[e]
        except KeyError:
            raise UndefinedEvent(f"event {e!r} is not defined at {self.base!r}") from None

    def events(self) -> tuple[str, ...]:
        return tuple(e for e, _ in self.bits)

    def render(self) -> str:
        return self.base + "".join(lab for _, lab in self.bits)

    def sort_key(self) -> tuple[str, str]:
        return (self.base, "".join(lab for _, lab in self.bits))

    def __repr__(self):
        return f"<{self.render()}>"


def make_labeled(base: str, decisions: dict[str, str]) -> LabeledState:
    bits = tuple(sorted(decisions.items()))
    for _e, lab in bits:
        if lab not in (Y, N):
            raise ParseError(f"decision must be Y or N, got {lab!r}")
    return LabeledState(base, bits)


def parse_labeled(text: str, plant: Plant) -> LabeledState:
    """Parse a rendering such as q0NNY back into a labeled state.

    The state name must be a declared plant state and the trailing letters
    must be one Y/N decision per defined event, in event order.
    """
    matches = []
    for q in plant.states:
        if not text.startswith(q):
            continue
        rest = text[len(q):]
        events = sorted(plant.defined_events(q))
        if len(rest) == len(events) and all(c in (Y, N) for c in rest):
            matches.append(LabeledState(q, tuple(zip(events, rest))))
    if not matches:
        raise ParseError(f"{text!r} is not a labeled state of this plant")
    if len(matches) > 1:
        raise ParseError(f"{text!r} is ambiguous: {[m.render() for m in matches]}")
    return matches[0]


class LabeledSystem:
    """All decision versions of a plant's states, with step helpers.

    Immutable after construction.  Holds internal memo tables for the
    closure computations in the observer module.
    """

    def __init__(self, plant: Plant, states: Sequence[LabeledState]):
        self.plant = plant
        self.states = tuple(sorted(states, key=LabeledState.sort_key))
        self._versions: dict[str, tuple[LabeledState, ...]] = {}
        for ls in self.states:
            self._versions.setdefault(ls.base, ())
            self._versions[ls.base] += (ls,)
        self.initials = self._versions[plant.initial]
        # caches used by the observer module
        self._cover_cache: dict = {}
        self._reach_cache: dict = {}

    def versions_of(self, q: str) -> tuple[LabeledState, ...]:
        try:
            return self._versions[q]
        except KeyError:
            raise UnknownState(f"unknown plant state {q!r}") from None

    def successors(self, ls: LabeledState, e: str) -> tuple[LabeledState, ...]:
        """All versions of the plant successor, or () when the move is undefined."""
        tgt = self.plant.step(ls.base, e)
        if tgt is None:
            return ()
        return self._versions[tgt]

    def suppressed_moves(self, ls: LabeledState) -> tuple[tuple[str, tuple[LabeledState, ...]], ...]:
        """Pairs (event, target versions) for the events `ls` suppresses."""
        out = []
        for e, lab in ls.bits:
            if lab == N:
                out.append((e, self._versions[self.plant.step(ls.base, e)]))
        return tuple(out)

    def to_nfa(self) -> Nfa:
        trans: dict[tuple[LabeledState, str], frozenset] = {}
        for ls in self.states:
            for e in ls.events():
                trans[(ls, e)] = frozenset(self.successors(ls, e))
        return Nfa(self.states, self.plant.alphabet, trans, frozenset(self.initials))

    def __repr__(self):
        return f"LabeledSystem({len(self.states)} states over {self.plant!r})"


def build_labeled_system(plant: Plant, max_events_per_state: int = 16) -> LabeledSystem:
    """Expand a plant into its decision-labeled system.

    A state defining k events contributes 2**k versions, so k is capped.
    """
    states: list[LabeledState] = []
    for q in sorted(plant.states):
        events = sorted(plant.defined_events(q))
        if len(events) > max_events_per_state:
            raise AlphabetTooLarge(
                f"state {q!r} defines {len(events)} events, bound is {max_events_per_state}"
            )
        for labs in itertools.product((N, Y), repeat=len(events)):
            states.append(LabeledState(q, tuple(zip(events, labs))))
    return LabeledSystem(plant, states)


def unobservable_reach(sys: LabeledSystem, seed: LabeledState) -> frozenset[LabeledState]:
    """States reachable from `seed` along suppressed steps only.

    Contains the seed itself.
    """
    cached = sys._reach_cache.get(seed)
    if cached is not None:
        return cached
    seen = {seed}
    work = [seed]
    while work:
        v = work.pop()
        for _e, opts in sys.suppressed_moves(v):
            for w in opts:
                if w not in seen:
                    seen.add(w)
                    work.append(w)
    out = frozenset(seen)
    sys._reach_cache[seed] = out
    return out


def observed_word(steps: Sequence[tuple[LabeledState, str]]) -> Word:
    """Project a run, given as (source version, event) steps, onto what is sent."""
    return tuple(e for src, e in steps if src.label(e) == Y)
