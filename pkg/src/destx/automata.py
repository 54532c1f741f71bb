"""Finite-automaton core: deterministic plants, nondeterministic views, words.

A plant is a deterministic automaton with a partial transition function;
absence of an entry means the move is undefined, there are no sink states.
Event and state identifiers are plain strings and every canonical order used
by the toolkit is the lexicographic order on those strings.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from typing import Hashable

from .errors import ParseError

Word = tuple[str, ...]
EPSILON: Word = ()


def word(text: str) -> Word:
    """Split a whitespace-separated trace into a word."""
    return tuple(text.split())


def render_word(w: Iterable[str]) -> str:
    w = tuple(w)
    return " ".join(w) if w else "ε"


def project(w: Iterable[str], observable: Iterable[str]) -> Word:
    """Natural projection keeping only events in `observable`."""
    keep = frozenset(observable)
    return tuple(e for e in w if e in keep)


class Plant:
    """Deterministic plant with a partial transition map.

    Immutable after construction; all views returned to callers are
    frozen or freshly built.
    """

    def __init__(
        self,
        states: Iterable[str],
        alphabet: Iterable[str],
        trans: Mapping[tuple[str, str], str],
        initial: str,
    ):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.initial = initial
        self._trans = dict(trans)
        if not self.states:
            raise ParseError("a plant needs at least one state")
        if initial not in self.states:
            raise ParseError(f"initial state {initial!r} is not a declared state")
        for (q, e), p in self._trans.items():
            if q not in self.states or p not in self.states:
                raise ParseError(f"transition ({q},{e},{p}) uses an undeclared state")
            if e not in self.alphabet:
                raise ParseError(f"transition ({q},{e},{p}) uses an undeclared event")
        self._defined = {
            q: frozenset(e for (p, e) in self._trans if p == q) for q in self.states
        }

    def step(self, q: str, e: str) -> str | None:
        """Successor of `q` under `e`, or None when the move is undefined."""
        return self._trans.get((q, e))

    def run_word(self, q: str, w: Iterable[str]) -> str | None:
        """State reached from `q` along `w`, or None once any step is undefined."""
        cur: str | None = q
        for e in w:
            if cur is None:
                return None
            cur = self._trans.get((cur, e))
        return cur

    def defined_events(self, q: str) -> frozenset[str]:
        return self._defined[q]

    def transitions(self) -> tuple[tuple[str, str, str], ...]:
        return tuple(sorted((q, e, p) for (q, e), p in self._trans.items()))

    def words_upto(self, depth: int) -> list[Word]:
        """All generated words of length at most `depth`, canonically ordered.

        Always contains the empty word.
        """
        out: list[Word] = [EPSILON]
        layer: list[tuple[Word, str]] = [(EPSILON, self.initial)]
        for _ in range(depth):
            nxt: list[tuple[Word, str]] = []
            for w, q in layer:
                for e in sorted(self._defined[q]):
                    nxt.append((w + (e,), self._trans[(q, e)]))
            out.extend(w for w, _ in nxt)
            layer = nxt
            if not layer:
                break
        return out

    def to_nfa(self) -> "Nfa":
        trans = {
            (q, e): frozenset((p,)) for (q, e), p in self._trans.items()
        }
        return Nfa(self.states, self.alphabet, trans, frozenset((self.initial,)))

    def _key(self):
        return (self.states, self.alphabet, self.initial, tuple(sorted(self._trans.items())))

    def __eq__(self, other):
        return isinstance(other, Plant) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Plant(states={len(self.states)}, events={len(self.alphabet)}, initial={self.initial!r})"


class Nfa:
    """Nondeterministic automaton over arbitrary hashable nodes."""

    def __init__(
        self,
        states: Iterable[Hashable],
        alphabet: Iterable[str],
        trans: Mapping[tuple[Hashable, str], frozenset],
        initials: Iterable[Hashable],
    ):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.trans = {k: frozenset(v) for k, v in trans.items() if v}
        self.initials = frozenset(initials)

    def successors(self, node: Hashable, e: str) -> frozenset:
        return self.trans.get((node, e), frozenset())

    def step_set(self, nodes: Iterable[Hashable], e: str) -> frozenset:
        out = set()
        for n in nodes:
            out |= self.trans.get((n, e), frozenset())
        return frozenset(out)


def reachable(nfa: Nfa) -> frozenset:
    """Nodes reachable from the initial set."""
    seen = set(nfa.initials)
    work = list(nfa.initials)
    while work:
        n = work.pop()
        for (src, _e), dsts in nfa.trans.items():
            if src == n:
                for d in dsts:
                    if d not in seen:
                        seen.add(d)
                        work.append(d)
    return frozenset(seen)


def restrict(nfa: Nfa, keep: Iterable[Hashable]) -> Nfa:
    """Sub-automaton on `keep`, trimmed to the part reachable from the initials."""
    keep = frozenset(keep)
    trans = {
        (q, e): frozenset(d for d in dsts if d in keep)
        for (q, e), dsts in nfa.trans.items()
        if q in keep
    }
    cut = Nfa(nfa.states & keep, nfa.alphabet, trans, nfa.initials & keep)
    live = reachable(cut)
    trans2 = {
        (q, e): frozenset(d for d in dsts if d in live)
        for (q, e), dsts in cut.trans.items()
        if q in live
    }
    return Nfa(live, nfa.alphabet, trans2, cut.initials & live)


# ---------------------------------------------------------------------------
# plant text format
#
#   alphabet <e1> <e2> ...
#   states   <q1> <q2> ...
#   initial  <q>
#   trans    <src> <event> <dst>
#
# '#' starts a comment, blank lines are skipped, any other keyword is an error.
# ---------------------------------------------------------------------------

def parse_des(text: str) -> Plant:
    alphabet: list[str] = []
    states: list[str] = []
    initial: str | None = None
    trans: dict[tuple[str, str], str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kw, rest = tokens[0], tokens[1:]
        if kw == "alphabet":
            alphabet.extend(rest)
        elif kw == "states":
            states.extend(rest)
        elif kw == "initial":
            if len(rest) != 1:
                raise ParseError(f"line {lineno}: initial takes exactly one state")
            if initial is not None:
                raise ParseError(f"line {lineno}: duplicate initial line")
            initial = rest[0]
        elif kw == "trans":
            if len(rest) != 3:
                raise ParseError(f"line {lineno}: trans takes source, event, target")
            src, e, dst = rest
            if (src, e) in trans:
                raise ParseError(f"line {lineno}: duplicate transition for ({src},{e})")
            trans[(src, e)] = dst
        else:
            raise ParseError(f"line {lineno}: unknown keyword {kw!r}")
    if initial is None:
        raise ParseError("missing initial line")
    return Plant(states, alphabet, trans, initial)


def format_des(plant: Plant) -> str:
    lines = [
        "alphabet " + " ".join(sorted(plant.alphabet)),
        "states " + " ".join(sorted(plant.states)),
        f"initial {plant.initial}",
    ]
    lines.extend(f"trans {q} {e} {p}" for q, e, p in plant.transitions())
    return "\n".join(lines) + "\n"


def load_plant(path: str) -> Plant:
    with open(path, encoding="utf-8") as fh:
        return parse_des(fh.read())
