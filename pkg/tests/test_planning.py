from __future__ import annotations

import random
from itertools import combinations
from pathlib import Path

import pytest

from mutexcover.errors import PlanningError
from mutexcover.pddl import parse_pddl
from mutexcover.planning import (
    Action,
    MutexPair,
    StripsProblem,
    add_preserving_actions,
    eventual_fluent_mutexes,
    first_appearance_layers,
    mutex_graph_of,
)

from oracles import (
    graphplan_mutexes,
    random_strips,
    sequential_reachable_states,
    with_preserves,
)

FERRY = Path(__file__).resolve().parent.parent / "instances" / "ferry"


def ferry_problem():
    return parse_pddl(
        (FERRY / "domain.pddl").read_text(), (FERRY / "problem.pddl").read_text()
    )


def make_problem(fluents, actions_dict, init, goal=frozenset()):
    actions = tuple(
        Action(name, pre, add, delete)
        for name, (pre, add, delete) in sorted(actions_dict.items())
    )
    return StripsProblem(frozenset(fluents), actions, frozenset(init), frozenset(goal))


# expected ferry mutex edges (islands a, b, c)
def _ferry_expected_pairs():
    fa = [f"ferry_at(island_{x})" for x in "abc"]
    jm = [f"just_moved(ferry,island_{x})" for x in "abc"]
    car = [f"car_at(island_{x})" for x in "abc"]
    loading, onf = "loading(ferry)", "on_ferry(car)"
    pairs = set()
    for xs in (fa, jm, car):
        pairs.update(frozenset(p) for p in combinations(xs, 2))
    for i in range(3):
        for j in range(3):
            if i != j:
                pairs.add(frozenset((fa[i], jm[j])))
    pairs.update(frozenset((loading, j)) for j in jm)
    pairs.add(frozenset((loading, onf)))
    pairs.update(frozenset((c, onf)) for c in car)
    return pairs


def test_ferry_mutex_graph_exact():
    p = ferry_problem()
    pairs, graph_record = eventual_fluent_mutexes(p)
    got = {frozenset((mp.f, mp.g)) for mp in pairs}
    assert got == _ferry_expected_pairs()
    assert len(got) == 22
    g = mutex_graph_of(pairs, all_fluents=sorted(p.fluents))
    assert g.n == 11
    assert g.edge_count() == 22


def test_mutex_pair_normalizes_order():
    assert MutexPair("b", "a") == MutexPair("a", "b")
    assert MutexPair.of("z", "a").key() == ("a", "z")
    with pytest.raises(PlanningError):
        MutexPair("x", "x")


def test_add_preserving_actions_idempotent():
    p = ferry_problem()
    aug = add_preserving_actions(p)
    assert len(aug.actions) == len(p.actions) + len(p.fluents)
    again = add_preserving_actions(aug)
    assert len(again.actions) == len(aug.actions)
    pres = aug.action_by_name("preserve(loading(ferry))")
    assert pres.is_preserving
    assert pres.pre == pres.add == frozenset({"loading(ferry)"})
    assert pres.delete == frozenset()


def test_first_appearance_layers_ferry():
    p = add_preserving_actions(ferry_problem())
    fluent_layer, action_layer = first_appearance_layers(p)
    assert fluent_layer["car_at(island_a)"] == 0
    assert fluent_layer["ferry_at(island_a)"] == 0
    assert fluent_layer["loading(ferry)"] == 1
    assert fluent_layer["on_ferry(car)"] == 2
    assert fluent_layer["car_at(island_c)"] == 3
    # monotonicity: an action appears no earlier than its preconditions
    by_name = {a.name: a for a in p.actions}
    for name, layer in action_layer.items():
        assert layer >= max(
            (fluent_layer[f] for f in by_name[name].pre), default=0
        )


def test_unreachable_goal_diagnosed():
    p = make_problem(
        ["a", "b"],
        {"noop": (frozenset({"a"}), frozenset({"a"}), frozenset())},
        init={"a"},
        goal={"b"},
    )
    with pytest.raises(PlanningError, match="b"):
        first_appearance_layers(p)


def test_single_fluent_no_mutexes():
    p = make_problem(["a"], {}, init={"a"})
    pairs, _ = eventual_fluent_mutexes(p)
    assert pairs == set()


def test_shared_adder_prevents_mutex():
    # one action adds both f and g from init -> never mutex
    p = make_problem(
        ["s", "f", "g"],
        {"mk": (frozenset({"s"}), frozenset({"f", "g"}), frozenset())},
        init={"s"},
    )
    pairs, _ = eventual_fluent_mutexes(p)
    assert MutexPair("f", "g") not in pairs


def test_soundness_against_reachability_oracle():
    """No returned pair may ever co-hold in a sequentially reachable state."""
    rng = random.Random(2024)
    for _ in range(50):
        fluents, actions, init = random_strips(rng, rng.randint(3, 8), rng.randint(3, 10))
        p = make_problem(fluents, actions, init)
        pairs, _ = eventual_fluent_mutexes(p)
        states = sequential_reachable_states(
            fluents, list(actions.values()), init
        )
        for mp in pairs:
            for s in states:
                assert not (mp.f in s and mp.g in s), (mp, sorted(s), actions)


def test_graphplan_agreement():
    """Sequential-assumption mutexes equal the textbook graphplan set on
    small problems; any deviation must at least be sound."""
    rng = random.Random(99)
    deviations = 0
    for _ in range(50):
        fluents, actions, init = random_strips(rng, rng.randint(3, 10), rng.randint(3, 12))
        p = make_problem(fluents, actions, init)
        pairs, _ = eventual_fluent_mutexes(p)
        got = {frozenset((mp.f, mp.g)) for mp in pairs}
        want = graphplan_mutexes(fluents, with_preserves(actions, fluents), init)
        if got != want:
            deviations += 1
            states = sequential_reachable_states(fluents, list(actions.values()), init)
            for fs in got - want:
                f, g = sorted(fs)
                assert all(not (f in s and g in s) for s in states)
    assert deviations == 0, f"{deviations} deviations from graphplan"


def test_memory_contract_only_preserving_pairs_stored():
    p = ferry_problem()
    _, graph_record = eventual_fluent_mutexes(p)
    regular = {a.name for a in p.actions}
    for a, b in graph_record.stored_action_mutexes:
        assert a.startswith("preserve(") or b.startswith("preserve("), (a, b)
    # and the store stays linear-ish, far below all action pairs
    aug = len(p.actions) + len(p.fluents)
    assert len(graph_record.stored_action_mutexes) < aug * len(p.fluents)
    assert regular  # sanity


def test_stabilization_recorded():
    p = ferry_problem()
    _, graph_record = eventual_fluent_mutexes(p)
    assert graph_record.stabilized_layer >= 1
    # mutex sets shrink once the fluent set is stable
    layers = graph_record.fluent_mutex_by_layer
    stable_from = max(
        k for k in range(len(layers))
        if k == 0 or len(layers[k]) != len(layers[k - 1]) or layers[k] != layers[k - 1]
    )
    assert stable_from <= graph_record.stabilized_layer


def test_mutex_graph_of_empty():
    g = mutex_graph_of(set())
    assert g.n == 0
    assert g.edge_count() == 0


def test_mutex_graph_vertex_order_is_sorted_terms():
    pairs = {MutexPair("zeta", "alpha"), MutexPair("mid", "alpha")}
    g = mutex_graph_of(pairs)
    assert g.labels == ("alpha", "mid", "zeta")
    assert g.edge_count() == 2
