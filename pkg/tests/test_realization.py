"""Ranking, schedule realization, policy files, and history projections."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from destx import (
    DeterministicSchedule,
    InstanceTooLarge,
    MissingSuccessor,
    ParseError,
    Plant,
    PolicyIncomplete,
    Policy,
    RankUndefined,
    WordNotInPlant,
    build_labeled_system,
    format_policy,
    make_labeled,
    parse_labeled,
    parse_policy,
    rank,
    realize_policy,
    transmitted_count,
    uniform_policy,
)
from destx.labeled import N, Y
from destx.observer import ObserverState
from randgen import random_plant, random_policy

plants = st.integers(0, 10**6).map(lambda s: random_plant(random.Random(s)))


def _os(plant, *renderings):
    return ObserverState.of(parse_labeled(r, plant) for r in renderings)


def test_rank_orders_by_suppressed_reach(lsys, plant):
    q2n, q2y = parse_labeled("q2N", plant), parse_labeled("q2Y", plant)
    assert rank(lsys, [q2y, q2n]) == (q2n, q2y)
    assert rank(lsys, [q2n, q2y]) == (q2n, q2y)
    q1n = parse_labeled("q1N", plant)
    assert rank(lsys, [q1n, q2n]) == (q1n, q2n)
    assert rank(lsys, [q2n]) == (q2n,)


def test_rank_undefined(lsys, plant):
    with pytest.raises(RankUndefined):
        rank(lsys, [parse_labeled("q1Y", plant), parse_labeled("q3Y", plant)])


def test_rank_cap():
    chain = Plant(
        [f"s{i}" for i in range(10)],
        ["e"],
        {(f"s{i}", "e"): f"s{i + 1}" for i in range(9)},
        "s0",
    )
    lsys = build_labeled_system(chain)
    big = [make_labeled(f"s{i}", {"e": N}) for i in range(9)]
    with pytest.raises(InstanceTooLarge):
        rank(lsys, big)


PINNED_TEXT = """initial q0NNY
label q0NNY σ1 N
label q0NNY σ2 N
label q0NNY σ3 Y
label q1Y σ2 Y
label q2Y σ1 Y
label q3Y σ2 Y
label q4N σ3 N
trans q0NNY σ1 q5
trans q0NNY σ2 q1Y
trans q0NNY σ3 q3Y
trans q1Y σ2 q2Y
trans q2Y σ1 q1Y
trans q3Y σ2 q4N
trans q4N σ3 q4N
"""


def test_realize_pinned(pinned_policy):
    assert format_policy(pinned_policy) == PINNED_TEXT
    assert pinned_policy.initial.render() == "q0NNY"
    assert len(pinned_policy.states) == 6


def test_realize_default(default_policy, plant):
    assert default_policy.initial.render() == "q0YNN"
    assert default_policy.label(parse_labeled("q0YNN", plant), "σ1") == Y
    assert default_policy.step(parse_labeled("q0YNN", plant), "σ2").render() == "q1Y"
    assert len(default_policy.states) == 6


def test_realize_multi_target_uses_rank_and_claims(lsys, plant):
    z0 = _os(plant, "q0NNY", "q1Y", "q5")
    zA = _os(plant, "q1N", "q2N", "q2Y")
    sched = DeterministicSchedule(
        z0,
        (z0, zA, _os(plant, "q1Y"), _os(plant, "q3Y"), _os(plant, "q4N")),
        {
            (z0, "σ2"): zA,
            (z0, "σ3"): _os(plant, "q3Y"),
            (zA, "σ1"): _os(plant, "q1Y"),
            (_os(plant, "q3Y"), "σ2"): _os(plant, "q4N"),
        },
    )
    pol = realize_policy(lsys, sched)
    step = lambda x, e: pol.step(parse_labeled(x, plant), e).render()
    # first visit to the q2 pair takes the rank head ...
    assert step("q1Y", "σ2") == "q2N"
    assert step("q2N", "σ1") == "q1N"
    # ... the second visit advances past the claimed version
    assert step("q1N", "σ2") == "q2Y"
    assert step("q2Y", "σ1") == "q1Y"
    assert len(pol.states) == 8


def test_realize_alternates_when_chain_exhausted():
    loop = Plant(["p"], ["a"], {("p", "a"): "p"}, "p")
    lsys = build_labeled_system(loop)
    pn = make_labeled("p", {"a": N})
    py = make_labeled("p", {"a": Y})
    z = ObserverState.of([pn, py])
    pol = realize_policy(lsys, DeterministicSchedule(z, (z,), {(z, "a"): z}))
    assert pol.initial == pn
    assert pol.step(pn, "a") == py
    assert pol.step(py, "a") == pn
    assert pol.projection(("a", "a", "a")) == ("a",)


def test_realize_missing_successor(lsys, plant):
    z0 = _os(plant, "q0NNY", "q1Y", "q5")
    # x0 transmits σ3 but the schedule has no move for it
    sched = DeterministicSchedule(z0, (z0,), {(z0, "σ2"): _os(plant, "q2Y")})
    with pytest.raises(MissingSuccessor):
        realize_policy(lsys, sched)
    # a successor that shares no version with the plant target is as bad
    sched = DeterministicSchedule(
        z0, (z0, _os(plant, "q2Y")),
        {(z0, "σ2"): _os(plant, "q2Y"), (z0, "σ3"): _os(plant, "q2Y")},
    )
    with pytest.raises(MissingSuccessor):
        realize_policy(lsys, sched)


def test_policy_validation(plant, lsys):
    q1y = parse_labeled("q1Y", plant)
    with pytest.raises(ParseError):
        Policy(plant, q1y, {})  # initial must sit on the plant's initial state
    q0 = parse_labeled("q0NNY", plant)
    with pytest.raises(ParseError):
        Policy(plant, q0, {(q0, "σ2"): parse_labeled("q3Y", plant)})  # wrong target


def test_policy_step_incomplete(plant):
    q0 = parse_labeled("q0NNY", plant)
    pol = Policy(plant, q0, {})
    with pytest.raises(PolicyIncomplete):
        pol.step(q0, "σ2")


def test_uniform_policies(plant):
    ay = uniform_policy(plant, Y)
    an = uniform_policy(plant, N)
    assert ay.projection(("σ2", "σ2", "σ1")) == ("σ2", "σ2", "σ1")
    assert an.projection(("σ2", "σ2", "σ1")) == ()
    assert len(ay.states) == 6
    assert all(x.label(e) == Y for x in ay.states for e in x.events())


def test_projection(pinned_policy, hand_policy):
    assert pinned_policy.projection(("σ2", "σ2")) == ("σ2",)
    assert pinned_policy.projection(("σ3", "σ2")) == ("σ3", "σ2")
    assert hand_policy.projection(("σ2", "σ2", "σ1", "σ2")) == ("σ2", "σ2")
    assert hand_policy.projection(()) == ()
    with pytest.raises(WordNotInPlant):
        pinned_policy.projection(("σ1", "σ1"))


def test_transmitted_count(pinned_policy, plant):
    assert transmitted_count(pinned_policy, ("σ3", "σ2")) == 2
    assert transmitted_count(pinned_policy, ("σ2", "σ2", "σ1", "σ2")) == 3
    assert transmitted_count(uniform_policy(plant, N), ("σ3", "σ2")) == 0


def test_format_parse_round_trip(pinned_policy, hand_policy, plant):
    for pol in (pinned_policy, hand_policy):
        text = format_policy(pol)
        again = parse_policy(text, plant)
        assert again == pol
        assert format_policy(again) == text


def test_parse_policy_rejects(plant):
    with pytest.raises(ParseError):
        parse_policy("label q0NNY σ1 N\n", plant)  # no initial
    base = "initial q0NNY\n"
    with pytest.raises(ParseError):
        # label line contradicting the state name
        parse_policy(base + "label q0NNY σ1 Y\n", plant)
    with pytest.raises(ParseError):
        # transition disagreeing with the plant
        parse_policy(base + "trans q0NNY σ2 q3Y\n", plant)
    with pytest.raises(ParseError):
        parse_policy(base + "trans q0NNY σ9 q1Y\n", plant)
    with pytest.raises(ParseError):
        parse_policy(base + "widget q0NNY\n", plant)


@given(plants, st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_policy_tracks_plant_random(plant, pseed):
    pol = random_policy(random.Random(pseed), plant)
    for s in plant.words_upto(4):
        x, q = pol.initial, plant.initial
        for e in s:
            assert x.base == q
            x, q = pol.step(x, e), plant.step(q, e)
        assert x.base == q
        assert len(pol.projection(s)) <= len(s)
