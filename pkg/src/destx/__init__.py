"""Sensor-scheduling synthesis for discrete-event systems.

Given a finite-state plant and a set of state pairs the receiver must always
be able to tell apart, the toolkit builds the space of feasible transmission
choices, prunes it down to the property-preserving core, extracts a concrete
per-history transmit/suppress policy, and independently verifies the result
by brute force.
"""

from .automata import EPSILON, Nfa, Plant, Word, format_des, load_plant, parse_des, project, reachable, render_word, restrict, word
from .errors import (
    AlphabetTooLarge,
    DestxError,
    Infeasible,
    InstanceTooLarge,
    MissingSuccessor,
    ParseError,
    PolicyIncomplete,
    RankUndefined,
    StateBudgetExceeded,
    UndefinedEvent,
    UnknownInitial,
    UnknownState,
    WordNotInPlant,
)
from .estimation import (
    CheckReport,
    Estimator,
    ProductObserverState,
    ProductState,
    TraceSession,
    build_product,
    check_estimate_agreement,
    check_property_satisfaction,
    check_tracker_containment,
    estimate_bruteforce,
    estimate_states,
    i2,
)
from .labeled import (
    LabeledState,
    LabeledSystem,
    build_labeled_system,
    make_labeled,
    observed_word,
    parse_labeled,
    unobservable_reach,
)
from .observer import (
    DynamicObserver,
    ObserverState,
    build_observer,
    closure_family,
    closure_family_bruteforce,
    non_conflicting,
    observer_step,
    reach_closed,
    successor_cores,
)
from .properties import (
    DistinguishabilitySpec,
    ISProperty,
    distinguishability,
    load_pairs,
    underlying_states,
    violating_states,
)
from .realization import (
    Policy,
    format_policy,
    load_policy,
    parse_policy,
    rank,
    realize_policy,
    transmitted_count,
    uniform_policy,
)
from .synthesis import (
    DeterministicSchedule,
    PrunedObserver,
    SubAutomaton,
    consistency_fixpoint,
    count_nontransmitted,
    extract_min_transmit,
    is_consistent,
    prune_violating,
    split_sub_automata,
    synthesize_gstar,
)

__all__ = [name for name in dir() if not name.startswith("_")]
