"""Information-state properties over receiver estimates.

A property maps a set of plant states (the underlying content of an
estimate) to true or false.  The one shipped here is pairwise
distinguishability: an estimate fails as soon as it contains both states of
a forbidden pair, i.e. the receiver can no longer tell them apart.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

from .automata import Plant
from .errors import ParseError, UnknownState
from .observer import ObserverState


@dataclass(frozen=True)
class DistinguishabilitySpec:
    """Pairs of plant states that must never be confused.

    Pairs are kept exactly as written; a set of states violates the
    specification when both components of any pair appear in it, so the
    verdict itself is insensitive to pair order.
    """

    pairs: frozenset[tuple[str, str]]

    @staticmethod
    def of(pairs: Iterable[tuple[str, str]]) -> "DistinguishabilitySpec":
        return DistinguishabilitySpec(frozenset((a, b) for a, b in pairs))

    def format(self) -> str:
        return "".join(f"pair {a} {b}\n" for a, b in sorted(self.pairs))

    @staticmethod
    def parse(text: str) -> "DistinguishabilitySpec":
        pairs = []
        for ln, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] != "pair" or len(parts) != 3:
                raise ParseError(f"line {ln}: expected 'pair <state> <state>', got {raw!r}")
            pairs.append((parts[1], parts[2]))
        return DistinguishabilitySpec.of(pairs)


@dataclass(frozen=True)
class ISProperty:
    """Predicate on sets of plant states, with a violation explainer."""

    name: str
    holds: Callable[[frozenset[str]], bool]
    explain: Callable[[frozenset[str]], str] = field(default=lambda s: "violated")

    def describe(self, content: frozenset[str]) -> str:
        if self.holds(content):
            return "ok"
        return self.explain(content)


def distinguishability(spec: DistinguishabilitySpec, plant: Plant) -> ISProperty:
    """Build the estimate predicate for a pair specification."""
    for a, b in spec.pairs:
        for q in (a, b):
            if q not in plant.states:
                raise UnknownState(f"pair mentions unknown state {q!r}")
    pairs = spec.pairs

    def holds(content: frozenset[str]) -> bool:
        return not any(a in content and b in content for a, b in pairs)

    def explain(content: frozenset[str]) -> str:
        bad = sorted((a, b) for a, b in pairs if a in content and b in content)
        inside = ",".join(sorted(content))
        culprits = " ".join(f"{a}~{b}" for a, b in bad)
        return f"estimate {{{inside}}} merges {culprits}"

    return ISProperty("distinguishability", holds, explain)


def underlying_states(z: ObserverState) -> frozenset[str]:
    return z.underlying()


def violating_states(prop: ISProperty, states: Iterable[ObserverState]) -> tuple[ObserverState, ...]:
    bad = [z for z in states if not prop.holds(z.underlying())]
    return tuple(sorted(bad, key=ObserverState.sort_key))


def load_pairs(path) -> DistinguishabilitySpec:
    with open(path, "r", encoding="utf-8") as fh:
        return DistinguishabilitySpec.parse(fh.read())
