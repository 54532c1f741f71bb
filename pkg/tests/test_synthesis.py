"""Pruning, the consistency fixpoint, and minimum-transmission extraction."""

import pytest

from destx import (
    DeterministicSchedule,
    DistinguishabilitySpec,
    Infeasible,
    Plant,
    UnknownInitial,
    build_labeled_system,
    build_observer,
    consistency_fixpoint,
    count_nontransmitted,
    distinguishability,
    extract_min_transmit,
    is_consistent,
    parse_labeled,
    prune_violating,
    split_sub_automata,
    synthesize_gstar,
)
from destx.observer import ObserverState


def _os(plant, *renderings):
    return ObserverState.of(parse_labeled(r, plant) for r in renderings)


def test_prune_sizes(obs, g0, gstar):
    assert len(obs.states) == 101
    assert len(g0.states) == 18
    assert len(g0.initials) == 8
    assert len(gstar.states) == 16
    assert len(gstar.initials) == 6


def test_prune_drops_violations(g0, prop):
    for z in g0.states:
        assert prop.holds(z.underlying())


def test_consistency_drops_exactly_two(g0, gstar, plant):
    dropped = set(g0.states) - set(gstar.states)
    assert dropped == {
        _os(plant, "q0YYN", "q3Y"),
        _os(plant, "q0NYN", "q3Y", "q5"),
    }


def test_inconsistent_states_diagnosed(obs, g0, plant):
    assert not is_consistent(obs, g0, _os(plant, "q0YYN", "q3Y"))
    assert not is_consistent(obs, g0, _os(plant, "q0NYN", "q3Y", "q5"))
    assert is_consistent(obs, g0, _os(plant, "q0NNY", "q1Y", "q5"))


def test_fixpoint_idempotent(obs, gstar):
    again = consistency_fixpoint(obs, gstar)
    assert set(again.states) == set(gstar.states)
    assert set(again.initials) == set(gstar.initials)


def test_fixpoint_postcondition(obs, gstar, plant):
    # wherever the full observer can move, the pruned one still can
    for z in gstar.states:
        for e in sorted(plant.alphabet):
            if obs.successors(z, e):
                assert gstar.successors(z, e)
            assert set(gstar.successors(z, e)) <= set(obs.successors(z, e))


def test_gstar_initials(gstar):
    assert [z.render() for z in gstar.initials] == [
        "(q0YYY)",
        "(q0NYY,q5)",
        "(q0YNY,q1Y)",
        "(q0NNY,q1Y,q5)",
        "(q0YNN,q1Y,q3Y)",
        "(q0NNN,q1Y,q3Y,q5)",
    ]


def test_empty_spec_prunes_nothing(obs, plant):
    free = distinguishability(DistinguishabilitySpec.of([]), plant)
    g = synthesize_gstar(obs, free)
    assert set(g.states) == set(obs.states)
    assert set(g.initials) == set(obs.initials)


def test_infeasible_when_initial_always_violates():
    plant = Plant(["q0"], ["a"], {}, "q0")
    lsys = build_labeled_system(plant)
    obs = build_observer(lsys)
    prop = distinguishability(DistinguishabilitySpec.of([("q0", "q0")]), plant)
    g = synthesize_gstar(obs, prop)
    assert g.is_empty
    with pytest.raises(Infeasible):
        extract_min_transmit(g)


def test_split_sub_automata(gstar, lsys):
    subs = split_sub_automata(gstar)
    assert [s.root for s in subs] == list(gstar.initials)
    scores = [
        sum(count_nontransmitted(lsys, z) for z in s.states) for s in subs
    ]
    assert scores == [2, 3, 3, 3, 5, 5]
    assert [len(s.states) for s in subs] == [8, 7, 8, 7, 10, 9]
    for s in subs:
        assert set(s.states) <= set(gstar.states)
        assert s.root in s.states


def test_count_nontransmitted(lsys, plant):
    z0 = _os(plant, "q0NNY", "q1Y", "q5")
    # q0NNY owns both suppressed moves; members are counted once
    assert count_nontransmitted(lsys, z0) == 1
    assert count_nontransmitted(lsys, _os(plant, "q2Y")) == 0
    assert count_nontransmitted(lsys, _os(plant, "q3N", "q4N")) == 2
    assert count_nontransmitted(lsys, _os(plant, "q1Y", "q2N")) == 1
    assert count_nontransmitted(lsys, _os(plant, "q1Y", "q2N"), mode="unlabeled") == 2


def test_extract_default(gstar, plant):
    sched = extract_min_transmit(gstar)
    assert sched.initial.render() == "(q0YNN,q1Y,q3Y)"
    got = sorted(
        (z.render(), e, w.render()) for (z, e), w in sched.trans.items()
    )
    assert got == [
        ("(q0YNN,q1Y,q3Y)", "σ1", "(q5)"),
        ("(q0YNN,q1Y,q3Y)", "σ2", "(q2Y,q4N)"),
        ("(q1Y)", "σ2", "(q2Y)"),
        ("(q2Y)", "σ1", "(q1Y)"),
        ("(q2Y,q4N)", "σ1", "(q1Y)"),
    ]


def test_extract_pinned(gstar, plant, pinned_sched):
    assert pinned_sched.initial == _os(plant, "q0NNY", "q1Y", "q5")
    got = sorted(
        (z.render(), e, w.render()) for (z, e), w in pinned_sched.trans.items()
    )
    assert got == [
        ("(q0NNY,q1Y,q5)", "σ2", "(q2Y)"),
        ("(q0NNY,q1Y,q5)", "σ3", "(q3Y)"),
        ("(q1Y)", "σ2", "(q2Y)"),
        ("(q2Y)", "σ1", "(q1Y)"),
        ("(q3Y)", "σ2", "(q4N)"),
    ]
    assert {z.render() for z in pinned_sched.states} == {
        "(q0NNY,q1Y,q5)", "(q1Y)", "(q2Y)", "(q3Y)", "(q4N)",
    }


def test_extract_refines_gstar(gstar, prop):
    sched = extract_min_transmit(gstar)
    for z in sched.states:
        assert z in set(gstar.states)
        assert prop.holds(z.underlying())
    for (z, e), w in sched.trans.items():
        assert w in gstar.successors(z, e)


def test_extract_deterministic(gstar):
    assert extract_min_transmit(gstar) == extract_min_transmit(gstar)


def test_extract_unknown_pin(gstar, plant):
    with pytest.raises(UnknownInitial):
        extract_min_transmit(gstar, pin_initial=_os(plant, "q2Y"))


def test_single_branch_plant_schedule():
    plant = Plant(["a", "b"], ["go"], {("a", "go"): "b"}, "a")
    lsys = build_labeled_system(plant)
    obs = build_observer(lsys)
    free = distinguishability(DistinguishabilitySpec.of([]), plant)
    sched = extract_min_transmit(synthesize_gstar(obs, free))
    # suppressing the only event wins: one silent state, no transitions
    assert sched.trans == {}
    assert sched.initial.render() == "(aN,b)"
    assert isinstance(sched, DeterministicSchedule)
