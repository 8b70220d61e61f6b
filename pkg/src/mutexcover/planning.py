"""STRIPS problem model, preserving actions, and eventual fluent mutexes.

Fluents are ground term strings (e.g. "car_at(island_a)"). The eventual
mutex generator runs a layered planning-graph fixpoint under the
sequential assumption: all non-preserving actions are treated as pairwise
mutex, so only pairs involving a preserving action are ever stored on the
action side. That keeps action-mutex memory linear in |actions| * |fluents|
instead of quadratic in |actions|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import PlanningError
from .graph import MutexGraph, build_graph

Fluent = str

PRESERVE_PREFIX = "preserve("


def preserve_name(fluent: Fluent) -> str:
    return f"preserve({fluent})"


@dataclass(frozen=True)
class Action:
    name: str
    pre: frozenset[Fluent]
    add: frozenset[Fluent]
    delete: frozenset[Fluent]
    is_preserving: bool = False


@dataclass(frozen=True)
class StripsProblem:
    fluents: frozenset[Fluent]
    actions: tuple[Action, ...]
    init: frozenset[Fluent]
    goal: frozenset[Fluent]

    def action_by_name(self, name: str) -> Action:
        for a in self.actions:
            if a.name == name:
                return a
        raise PlanningError(f"unknown action {name!r}")


@dataclass(frozen=True)
class MutexPair:
    f: Fluent
    g: Fluent

    def __post_init__(self):
        if self.f == self.g:
            raise PlanningError(f"a fluent is never mutex with itself: {self.f}")
        if self.f > self.g:
            lo, hi = self.g, self.f
            object.__setattr__(self, "f", lo)
            object.__setattr__(self, "g", hi)

    @staticmethod
    def of(a: Fluent, b: Fluent) -> "MutexPair":
        return MutexPair(*sorted((a, b)))

    def key(self) -> tuple[Fluent, Fluent]:
        return (self.f, self.g)


@dataclass
class PlanningGraph:
    """Record of one layered fixpoint run."""

    fluent_first_layer: dict[Fluent, int]
    action_first_layer: dict[str, int]
    fluent_mutex_by_layer: list[set[tuple[Fluent, Fluent]]]
    stabilized_layer: int
    # stored action-mutex pairs at stabilization; every pair involves a
    # preserving action (the memory contract of the sequential assumption)
    stored_action_mutexes: set[tuple[str, str]] = field(default_factory=set)


def add_preserving_actions(p: StripsProblem) -> StripsProblem:
    """Append one preserve(F) action per fluent; idempotent."""
    have = {a.name for a in p.actions}
    new = list(p.actions)
    for f in sorted(p.fluents):
        name = preserve_name(f)
        if name not in have:
            new.append(
                Action(name, frozenset({f}), frozenset({f}), frozenset(), is_preserving=True)
            )
    return StripsProblem(p.fluents, tuple(new), p.init, p.goal)


def first_appearance_layers(p: StripsProblem) -> tuple[dict[Fluent, int], dict[str, int]]:
    """First layers from the relaxed (delete- and mutex-free) planning graph.

    These gate grounding (validFluent/validAct). They are lower bounds on
    first occurrence under any execution semantics, so gating with them
    never excludes a real plan. Unreachable fluents/actions are absent
    from the maps.
    """
    fluent_layer: dict[Fluent, int] = {f: 0 for f in p.init}
    action_layer: dict[str, int] = {}
    layer = 0
    pending = [a for a in p.actions]
    while True:
        new_actions = [
            a
            for a in pending
            if a.name not in action_layer and all(f in fluent_layer for f in a.pre)
        ]
        changed = False
        for a in new_actions:
            action_layer[a.name] = layer
            changed = True
        for a in new_actions:
            for f in a.add:
                if f not in fluent_layer:
                    fluent_layer[f] = layer + 1
        if not changed:
            break
        layer += 1
    unreachable_goals = sorted(p.goal - fluent_layer.keys())
    if unreachable_goals:
        raise PlanningError(
            f"problem unsolvable: goal fluent(s) unreachable: {', '.join(unreachable_goals)}"
        )
    return fluent_layer, action_layer


def _interferes_with_preserving(f: Fluent, other: Action) -> bool:
    """preserve(f) structurally interferes with `other` iff other deletes f.

    preserve(f) has pre = add = {f} and no deletes, so the general
    interference clauses (delete other's precondition or add-effect, add
    what the other deletes) collapse to this single test.
    """
    return f in other.delete


def eventual_fluent_mutexes(p: StripsProblem) -> tuple[set[MutexPair], PlanningGraph]:
    """Stabilized always-mutex fluent pairs under the sequential assumption.

    Layered fixpoint: two fluents are mutex at layer k+1 iff no single
    action adds both and every pair of distinct applicable adders is mutex
    at layer k. Non-preserving actions are mutex by assumption; pairs
    involving a preserving action are mutex iff they interfere or their
    preconditions are fluent-mutex. Iterates until the fluent set and the
    mutex set are both unchanged across consecutive layers.
    """
    problem = add_preserving_actions(p)
    actions = problem.actions
    non_preserving = [a for a in actions if not a.is_preserving]

    present: set[Fluent] = set(problem.init)
    fluent_mutex: set[tuple[Fluent, Fluent]] = set()
    fluent_first: dict[Fluent, int] = {f: 0 for f in present}
    action_first: dict[str, int] = {}
    mutex_by_layer: list[set[tuple[Fluent, Fluent]]] = [set()]
    # stored action mutexes: preserving-action name -> set of other names
    preserving_mutex: dict[str, set[str]] = {}

    def pair(a: Fluent, b: Fluent) -> tuple[Fluent, Fluent]:
        return (a, b) if a < b else (b, a)

    def fluents_mutex(a: Fluent, b: Fluent) -> bool:
        return a != b and pair(a, b) in fluent_mutex

    def actions_mutex(a: Action, b: Action) -> bool:
        if not a.is_preserving and not b.is_preserving:
            return True  # sequential assumption
        pres, other = (a, b) if a.is_preserving else (b, a)
        return other.name in preserving_mutex.get(pres.name, ())

    layer = 0
    while True:
        # applicable actions: preconditions present and pairwise non-mutex
        applicable = [
            a
            for a in actions
            if all(f in present for f in a.pre)
            and not any(fluents_mutex(x, y) for x, y in combinations(a.pre, 2))
        ]
        for a in applicable:
            action_first.setdefault(a.name, layer)

        # action mutexes involving preserving actions, at this layer
        preserving_mutex = {}
        preserving = [a for a in applicable if a.is_preserving]
        for pres in preserving:
            (f,) = pres.pre
            entry: set[str] = set()
            for other in applicable:
                if other.name == pres.name:
                    continue
                if other.is_preserving:
                    (g,) = other.pre
                    if fluents_mutex(f, g):
                        entry.add(other.name)
                elif _interferes_with_preserving(f, other) or any(
                    fluents_mutex(f, q) for q in other.pre
                ):
                    entry.add(other.name)
            if entry:
                preserving_mutex[pres.name] = entry

        # next fluent layer
        adders: dict[Fluent, list[Action]] = {}
        for a in applicable:
            for f in a.add:
                adders.setdefault(f, []).append(a)
        next_present = set(adders)
        for f in next_present:
            fluent_first.setdefault(f, layer + 1)

        # candidate mutex pairs: pairs mutex at the previous layer plus all
        # pairs involving a newly appeared fluent (non-mutexness is stable)
        new_fluents = next_present - present
        candidates: set[tuple[Fluent, Fluent]] = {
            e for e in fluent_mutex if e[0] in next_present and e[1] in next_present
        }
        for f in new_fluents:
            for g in next_present:
                if f != g:
                    candidates.add(pair(f, g))

        next_mutex: set[tuple[Fluent, Fluent]] = set()
        for f, g in candidates:
            if any(g in a.add for a in adders[f]):
                continue  # a single action adds both
            if all(
                actions_mutex(a, b)
                for a in adders[f]
                for b in adders[g]
                if a.name != b.name
            ):
                next_mutex.add((f, g))

        mutex_by_layer.append(next_mutex)
        stabilized = next_present == present and next_mutex == fluent_mutex
        present = next_present
        fluent_mutex = next_mutex
        layer += 1
        if stabilized:
            break

    stored = {
        (pres, other) for pres, others in preserving_mutex.items() for other in others
    }
    graph_record = PlanningGraph(
        fluent_first_layer=fluent_first,
        action_first_layer=action_first,
        fluent_mutex_by_layer=mutex_by_layer,
        stabilized_layer=layer,
        stored_action_mutexes=stored,
    )
    pairs = {MutexPair.of(f, g) for f, g in fluent_mutex}
    return pairs, graph_record


def mutex_graph_of(
    pairs: set[MutexPair], all_fluents: frozenset[Fluent] | None = None
) -> MutexGraph:
    """Labeled mutex graph over the fluents of the pairs.

    Pass all_fluents to include isolated (pairless) fluents as vertices.
    """
    if all_fluents is not None:
        names = sorted(all_fluents)
    else:
        names = sorted({f for mp in pairs for f in (mp.f, mp.g)})
    index = {f: i for i, f in enumerate(names)}
    edges = [(index[mp.f], index[mp.g]) for mp in pairs]
    return build_graph(len(names), edges, labels=names)
