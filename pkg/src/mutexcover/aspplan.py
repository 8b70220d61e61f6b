"""SATPlan-style ASP planning programs and the makespan-increment driver.

The emitted program contains the goal rule, the disjunctive-support rule,
the precondition rule, a per-fluent cardinality encoding of action
mutexes, and the multiclique fluent-mutex constraints produced by
:mod:`mutexcover.encode`.  With ``naive=True`` the action and fluent
mutexes are emitted as pairwise constraints over ``mutexAct/2`` and
``mutex/2`` facts instead.

The solver is an external subprocess: it receives a program file path as
its last argument and reports models on stdout in the conventional
answer-set format (``Answer: N`` followed by a line of atoms, then
``SATISFIABLE``/``UNSATISFIABLE``).
"""

from __future__ import annotations

import shlex
import subprocess
import sys
import tempfile
from dataclasses import dataclass, field

from .cover import Covering
from .encode import emit_multiclique_program
from .errors import NoPlanError, PlanningError, SolverError
from .planning import (
    Action,
    MutexPair,
    StripsProblem,
    add_preserving_actions,
    first_appearance_layers,
    preserve_name,
)

DEFAULT_SOLVER = f"{sys.executable} -m mutexcover.refsolver"

RULE_GOAL = "holds(F,K) :- goal(F); finalStep(K)."
RULE_SUPPORT = "happens(A,K-1) : add(A,F), validAct(A,K-1) :- holds(F,K); step(K); K > 0."
RULE_PRECONDITION = "holds(F,K) :- pre(A,F); happens(A,K); validFluent(F,K)."

SMART_MUTEX_RULES = [
    "used_preserved(F,K) :- happens(A,K); pre(A,F); not del(A,F).",
    "deleted_unused(F,K) :- happens(A,K); del(A,F); not pre(A,F).",
    ":- {used_preserved(F,K); deleted_unused(F,K); "
    "happens(A,K) : pre(A,F), del(A,F)} > 1; valid_at(F,K).",
    "deleted(F,K) :- happens(A,K); del(A,F).",
    ":- holds(F,K); deleted(F,K-1).",
]

NAIVE_MUTEX_RULES = [
    ":- mutexAct(A,B); happens(A,K); happens(B,K).",
    ":- mutex(F,G); holds(F,K); holds(G,K).",
]

PRESERVE_SCHEMA = [
    "action(preserve(F)) :- fluent(F).",
    "pre(preserve(F),F) :- fluent(F).",
    "add(preserve(F),F) :- fluent(F).",
]


@dataclass
class PlanProgram:
    """A complete planning program for one makespan."""

    facts: list[str]
    rules: list[str]
    mutex_rules: list[str]
    makespan: int

    def text(self) -> str:
        parts = self.facts + self.rules + self.mutex_rules + ["#show happens/2."]
        return "\n".join(parts) + "\n"


@dataclass
class Plan:
    """Non-preserving action names per layer."""

    steps: list[frozenset[str]]
    makespan: int

    def action_count(self) -> int:
        return sum(len(s) for s in self.steps)


@dataclass
class Violation:
    condition: str  # one of "a", "b", "c", "d"
    layer: int
    detail: str

    def __str__(self) -> str:
        return f"condition ({self.condition}) violated at layer {self.layer}: {self.detail}"


def interfering_pairs(actions) -> set[tuple[str, str]]:
    """Statically conflicting action pairs: one deletes what the other
    needs or produces."""
    pairs = set()
    acts = list(actions)
    for i, a in enumerate(acts):
        for b in acts[i + 1 :]:
            if (a.delete & (b.pre | b.add)) or (b.delete & (a.pre | a.add)):
                pairs.add((a.name, b.name) if a.name <= b.name else (b.name, a.name))
    return pairs


def emit_plan_program(
    p: StripsProblem,
    covering: Covering,
    makespan: int,
    naive: bool = False,
    pairs: set[MutexPair] | None = None,
) -> PlanProgram:
    """Build the full program for the given makespan.

    ``covering`` supplies the fluent-mutex constraints (its source graph
    must be labeled with fluent terms); ``pairs`` is required in naive
    mode to ground ``mutex/2`` facts.
    """
    aug = add_preserving_actions(p)
    fluent_layer, action_layer = first_appearance_layers(aug)
    goal_layer = max((fluent_layer[f] for f in p.goal), default=0)
    if makespan < goal_layer:
        raise PlanningError(
            f"makespan {makespan} is below the first layer {goal_layer} "
            f"at which all goals are reachable"
        )

    facts: list[str] = [f"step(0..{makespan}).", f"finalStep({makespan})."]
    for f in sorted(p.fluents):
        facts.append(f"fluent({f}).")
    for f in sorted(p.goal):
        facts.append(f"goal({f}).")
    for a in sorted(p.actions, key=lambda a: a.name):
        facts.append(f"action({a.name}).")
        for f in sorted(a.pre):
            facts.append(f"pre({a.name},{f}).")
        for f in sorted(a.add):
            facts.append(f"add({a.name},{f}).")
        for f in sorted(a.delete):
            facts.append(f"del({a.name},{f}).")
    for a in sorted(aug.actions, key=lambda a: a.name):
        first = action_layer.get(a.name)
        if first is None:
            continue
        for k in range(first, makespan):
            facts.append(f"validAct({a.name},{k}).")
    for f in sorted(p.fluents):
        first = fluent_layer.get(f)
        if first is None:
            continue
        for k in range(first, makespan + 1):
            facts.append(f"validFluent({f},{k}).")
        for k in range(first, makespan):
            facts.append(f"valid_at({f},{k}).")

    rules = PRESERVE_SCHEMA + [RULE_GOAL, RULE_SUPPORT, RULE_PRECONDITION]
    if naive:
        if pairs is None:
            raise PlanningError("naive mode requires the fluent mutex pair set")
        mutex_rules = list(NAIVE_MUTEX_RULES)
        for x, y in sorted(interfering_pairs(aug.actions)):
            facts.append(f"mutexAct({x},{y}).")
        for mp in sorted(pairs, key=lambda m: (m.f, m.g)):
            facts.append(f"mutex({mp.f},{mp.g}).")
    else:
        rules = rules + SMART_MUTEX_RULES
        constraint_rules, _ = emit_multiclique_program(covering)
        mutex_rules = [r.text for r in constraint_rules]
    return PlanProgram(facts, rules, mutex_rules, makespan)


def _split_args(term: str) -> list[str]:
    """Top-level comma split of 'a,b(c,d),e'."""
    out, depth, cur = [], 0, []
    for ch in term:
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur.append(ch)
    out.append("".join(cur))
    return out


def parse_happens_atoms(text: str) -> list[tuple[str, int]]:
    """Extract (action-name, layer) from happens/2 atoms in a model line."""
    out = []
    i = 0
    while True:
        i = text.find("happens(", i)
        if i < 0:
            break
        depth = 0
        j = i + len("happens(") - 1
        while j < len(text):
            if text[j] == "(":
                depth += 1
            elif text[j] == ")":
                depth -= 1
                if depth == 0:
                    break
            j += 1
        inner = text[i + len("happens(") : j]
        args = _split_args(inner)
        if len(args) == 2:
            out.append((args[0], int(args[1])))
        i = j + 1
    return out


def extract_plan(model_text: str, makespan: int) -> Plan:
    """Build a Plan from a model's happens atoms, dropping preserving
    actions."""
    steps: list[set[str]] = [set() for _ in range(makespan)]
    for name, k in parse_happens_atoms(model_text):
        if name.startswith("preserve("):
            continue
        if not 0 <= k < makespan:
            raise SolverError(f"model contains happens({name},{k}) outside 0..{makespan - 1}")
        steps[k].add(name)
    return Plan([frozenset(s) for s in steps], makespan)


@dataclass
class SolveResult:
    satisfiable: bool
    models: list[str] = field(default_factory=list)


def run_solver(program_text: str, solver_cmd: str = DEFAULT_SOLVER, extra_args: list[str] | None = None) -> SolveResult:
    """Run the solver subprocess on a program and parse its verdict."""
    with tempfile.NamedTemporaryFile("w", suffix=".lp", delete=False) as fh:
        fh.write(program_text)
        path = fh.name
    cmd = shlex.split(solver_cmd) + (extra_args or []) + [path]
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=600)
    except FileNotFoundError as exc:
        raise SolverError(f"solver command not found: {cmd[0]}") from exc
    except subprocess.TimeoutExpired as exc:
        raise SolverError(f"solver timed out: {' '.join(cmd)}") from exc
    out = proc.stdout
    models = []
    lines = out.splitlines()
    for i, line in enumerate(lines):
        if line.startswith("Answer:") and i + 1 < len(lines):
            models.append(lines[i + 1].strip())
    if "UNSATISFIABLE" in out:
        return SolveResult(False)
    if "SATISFIABLE" in out or models:
        if not models:
            raise SolverError("solver reported SATISFIABLE but printed no model")
        return SolveResult(True, models)
    raise SolverError(
        f"unrecognized solver output (exit {proc.returncode}): "
        f"{out[:500]!r} stderr={proc.stderr[:200]!r}"
    )


def validate_plan(p: StripsProblem, plan: Plan) -> Violation | None:
    """Check a plan against the parallel-plan semantics.

    Per layer k: (a) preconditions hold; (b) for each fluent, at most one
    of {user-not-deleter exists, deleter-not-user exists, each
    user-and-deleter action} — preserving actions reconstructed for
    fluents that persist; (c) a fluent holds at k+1 only if added (or
    preserved) and not deleted at k; (d) goals hold at the end.
    Returns None if valid, else the first Violation.
    """
    state = set(p.init)
    for k, step in enumerate(plan.steps):
        actions = []
        for name in sorted(step):
            try:
                actions.append(p.action_by_name(name))
            except PlanningError:
                return Violation("a", k, f"unknown action {name}")
        for a in actions:
            missing = a.pre - state
            if missing:
                return Violation(
                    "a", k, f"{a.name} requires {sorted(missing)} which do not hold"
                )
        adds = set().union(*(a.add for a in actions)) if actions else set()
        dels = set().union(*(a.delete for a in actions)) if actions else set()
        next_state = (state | adds) - dels
        preserved = (state & next_state) - adds
        # per-fluent cardinality check, preserving actions included
        for f in sorted(state | adds | dels):
            users = [a.name for a in actions if f in a.pre and f not in a.delete]
            if f in preserved:
                users.append(preserve_name(f))
            deleters = [a.name for a in actions if f in a.delete and f not in a.pre]
            both = [a.name for a in actions if f in a.pre and f in a.delete]
            count = (1 if users else 0) + (1 if deleters else 0) + len(both)
            if count > 1:
                return Violation(
                    "b",
                    k,
                    f"fluent {f}: conflicting occurrences "
                    f"users={users} deleters={deleters} both={both}",
                )
        for f in sorted(next_state):
            if f in dels:
                return Violation("c", k, f"{f} holds at {k + 1} but was deleted at {k}")
            if f not in adds and f not in state:
                return Violation("c", k, f"{f} holds at {k + 1} without support at {k}")
        state = next_state
    missing = p.goal - state
    if missing:
        return Violation(
            "d", plan.makespan, f"goals {sorted(missing)} do not hold at the final layer"
        )
    return None


def solve_loop(
    p: StripsProblem,
    covering: Covering,
    solver_cmd: str = DEFAULT_SOLVER,
    max_makespan: int = 50,
    naive: bool = False,
    pairs: set[MutexPair] | None = None,
) -> Plan:
    """Solve at increasing makespans until a plan is found.

    Starts at the first layer where all goals are valid, increments on
    UNSAT, and validates the extracted plan before returning it.
    """
    aug = add_preserving_actions(p)
    fluent_layer, _ = first_appearance_layers(aug)
    k = max((fluent_layer[f] for f in p.goal), default=0)
    while k <= max_makespan:
        program = emit_plan_program(p, covering, k, naive=naive, pairs=pairs)
        result = run_solver(program.text(), solver_cmd)
        if result.satisfiable:
            plan = extract_plan(result.models[0], k)
            violation = validate_plan(p, plan)
            if violation is not None:
                raise PlanningError(f"solver returned an invalid plan: {violation}")
            return plan
        k += 1
    raise NoPlanError(f"no plan within makespan cap {max_makespan}")
