"""Reference answer-set solver for the planning programs this package emits.

This is not a general ASP solver: it recognizes exactly the program
class produced by :func:`mutexcover.aspplan.emit_plan_program` (facts,
the goal/support/precondition rules, either the per-fluent cardinality
action-mutex encoding or the pairwise ``mutexAct``/``mutex`` form, and
the fluent-mutex constraint rules of :mod:`mutexcover.encode`) and
searches for its stable models directly: a model is a choice, per layer,
of supporting actions for the fluents needed at the next layer, subject
to the program's constraints.

Invoke as ``python3 -m mutexcover.refsolver [--models N] <file>``.
Output follows the conventional answer-set solver format (``Answer: i``
lines followed by the model's shown atoms, then ``SATISFIABLE`` or
``UNSATISFIABLE``); exit status 10 = satisfiable, 20 = unsatisfiable,
1 = malformed program.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from itertools import product

_FACT_RE = re.compile(r"^(?P<name>[a-z][A-Za-z0-9_]*)\((?P<args>.*)\)\.$")
_STEP_RE = re.compile(r"^step\(0\.\.(?P<k>\d+)\)\.$")
_BINARY_RE = re.compile(r"^:- holds\((?P<a>.+),T\); holds\((?P<b>.+),T\)\.$")
_DEFINE_RE = re.compile(
    r"^partitionHolds\(part\((?P<i>\d+),(?P<j>\d+)\),T\) :- holds\((?P<sym>.+),T\)\.$"
)
_CARD_RE = re.compile(r"^:- \{(?P<body>.+)\} > 1; step\(T\)\.$")
_ELEM_HOLDS_RE = re.compile(r"^holds\((?P<sym>.+),T\)$")
_ELEM_PART_RE = re.compile(r"^partitionHolds\(part\((?P<i>\d+),(?P<j>\d+)\),T\)$")

# rule shapes accepted verbatim (whitespace-normalized)
_KNOWN_RULES = {
    "action(preserve(F)) :- fluent(F).",
    "pre(preserve(F),F) :- fluent(F).",
    "add(preserve(F),F) :- fluent(F).",
    "holds(F,K) :- goal(F); finalStep(K).",
    "happens(A,K-1) : add(A,F), validAct(A,K-1) :- holds(F,K); step(K); K > 0.",
    "holds(F,K) :- pre(A,F); happens(A,K); validFluent(F,K).",
    "used_preserved(F,K) :- happens(A,K); pre(A,F); not del(A,F).",
    "deleted_unused(F,K) :- happens(A,K); del(A,F); not pre(A,F).",
    ":- {used_preserved(F,K); deleted_unused(F,K); "
    "happens(A,K) : pre(A,F), del(A,F)} > 1; valid_at(F,K).",
    "deleted(F,K) :- happens(A,K); del(A,F).",
    ":- holds(F,K); deleted(F,K-1).",
    ":- mutexAct(A,B); happens(A,K); happens(B,K).",
    ":- mutex(F,G); holds(F,K); holds(G,K).",
    "#show happens/2.",
}


class ProgramError(Exception):
    pass


def _split_args(term: str) -> list[str]:
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
    return [a.strip() for a in out]


@dataclass
class Program:
    makespan: int = 0
    fluents: set[str] = field(default_factory=set)
    goal: set[str] = field(default_factory=set)
    pre: dict[str, set[str]] = field(default_factory=dict)
    add: dict[str, set[str]] = field(default_factory=dict)
    delete: dict[str, set[str]] = field(default_factory=dict)
    valid_act: dict[int, set[str]] = field(default_factory=dict)
    valid_fluent: dict[int, set[str]] = field(default_factory=dict)
    valid_at: dict[int, set[str]] = field(default_factory=dict)
    mutex_act: set[tuple[str, str]] = field(default_factory=set)
    mutex: list[tuple[str, str]] = field(default_factory=list)
    smart: bool = False
    # fluent-mutex constraints from the multiclique encoding
    binaries: list[tuple[str, str]] = field(default_factory=list)
    part_members: dict[tuple[int, int], set[str]] = field(default_factory=dict)
    cards: list[list[tuple[str, object]]] = field(default_factory=list)


def parse_program(text: str) -> Program:
    p = Program()
    preserve_schema_seen = 0
    for raw in text.splitlines():
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        line = re.sub(r"\s+", " ", line)
        if line in _KNOWN_RULES:
            if line.startswith(("action(preserve", "pre(preserve", "add(preserve")):
                preserve_schema_seen += 1
            if "used_preserved" in line or "valid_at" in line:
                p.smart = True
            continue
        m = _STEP_RE.match(line)
        if m:
            p.makespan = int(m.group("k"))
            continue
        m = _DEFINE_RE.match(line)
        if m:
            key = (int(m.group("i")), int(m.group("j")))
            p.part_members.setdefault(key, set()).add(m.group("sym"))
            continue
        m = _CARD_RE.match(line)
        if m:
            elems: list[tuple[str, object]] = []
            for chunk in m.group("body").split("; "):
                em = _ELEM_HOLDS_RE.match(chunk)
                if em:
                    elems.append(("holds", em.group("sym")))
                    continue
                em = _ELEM_PART_RE.match(chunk)
                if em:
                    elems.append(("part", (int(em.group("i")), int(em.group("j")))))
                    continue
                raise ProgramError(f"unrecognized cardinality element {chunk!r}")
            p.cards.append(elems)
            continue
        m = _BINARY_RE.match(line)
        if m:
            p.binaries.append((m.group("a"), m.group("b")))
            continue
        m = _FACT_RE.match(line)
        if m:
            name, args = m.group("name"), _split_args(m.group("args"))
            if name == "fluent":
                p.fluents.add(args[0])
            elif name == "goal":
                p.goal.add(args[0])
            elif name == "action":
                p.pre.setdefault(args[0], set())
                p.add.setdefault(args[0], set())
                p.delete.setdefault(args[0], set())
            elif name == "pre":
                p.pre.setdefault(args[0], set()).add(args[1])
            elif name == "add":
                p.add.setdefault(args[0], set()).add(args[1])
            elif name == "del":
                p.delete.setdefault(args[0], set()).add(args[1])
            elif name == "validAct":
                p.valid_act.setdefault(int(args[1]), set()).add(args[0])
            elif name == "validFluent":
                p.valid_fluent.setdefault(int(args[1]), set()).add(args[0])
            elif name == "valid_at":
                p.valid_at.setdefault(int(args[1]), set()).add(args[0])
            elif name == "mutexAct":
                p.mutex_act.add((args[0], args[1]))
                p.mutex_act.add((args[1], args[0]))
            elif name == "mutex":
                p.mutex.append((args[0], args[1]))
            elif name == "finalStep":
                p.makespan = int(args[0])
            else:
                raise ProgramError(f"unrecognized fact {line!r}")
            continue
        raise ProgramError(f"unrecognized statement {line!r}")
    if preserve_schema_seen == 3:
        for f in p.fluents:
            name = f"preserve({f})"
            p.pre[name] = {f}
            p.add[name] = {f}
            p.delete[name] = set()
    return p


def _holds_ok(p: Program, held: set[str]) -> bool:
    """Fluent-mutex constraints over one layer's holds set."""
    for a, b in p.binaries:
        if a in held and b in held:
            return False
    for elems in p.cards:
        count = 0
        for kind, payload in elems:
            if kind == "holds":
                count += payload in held
            else:
                count += bool(p.part_members.get(payload, set()) & held)
            if count > 1:
                return False
    for f, g in p.mutex:
        if f in held and g in held:
            return False
    return True


def _happens_ok(p: Program, k: int, acts: frozenset[str]) -> bool:
    """Action-mutex constraints over the actions chosen at layer k."""
    if p.smart:
        touched = set()
        for a in acts:
            touched |= p.pre[a] | p.delete[a]
        for f in touched & p.valid_at.get(k, set()):
            users = any(f in p.pre[a] and f not in p.delete[a] for a in acts)
            deleters = any(f in p.delete[a] and f not in p.pre[a] for a in acts)
            both = sum(1 for a in acts if f in p.pre[a] and f in p.delete[a])
            if users + deleters + both > 1:
                return False
        return True
    acts_list = sorted(acts)
    for i, a in enumerate(acts_list):
        for b in acts_list[i + 1 :]:
            if (a, b) in p.mutex_act:
                return False
    return True


def solve(p: Program, max_models: int = 1) -> list[dict]:
    """Backward search for stable models.

    Returns up to max_models models (0 = all), each as
    {"happens": {(action, layer)}, "holds": {(fluent, layer)}}.
    Models are support-founded; when enumerating all, non-minimal ones
    are filtered out afterwards.
    """
    models: list[dict] = []
    failed: set[tuple[int, frozenset[str]]] = set()

    def dfs(k: int, needed: frozenset[str], suffix: list[tuple[int, frozenset[str]]],
            holds: list[tuple[int, frozenset[str]]]) -> bool:
        if not _holds_ok(p, set(needed)):
            return False
        if k == 0:
            model = {
                "happens": {(a, kk) for kk, acts in suffix for a in acts},
                "holds": {(f, kk) for kk, fs in holds for f in fs} | {(f, 0) for f in needed},
            }
            models.append(model)
            return max_models != 0 and len(models) >= max_models
        key = (k, needed)
        if key in failed:
            return False
        prev_valid = p.valid_act.get(k - 1, set())
        supporters = []
        for f in sorted(needed):
            supp = sorted(a for a in prev_valid if f in p.add.get(a, ()))
            if not supp:
                failed.add(key)
                return False
            supporters.append(supp)
        before = len(models)
        seen: set[frozenset[str]] = set()
        for choice in product(*supporters):
            acts = frozenset(choice)
            if acts in seen:
                continue
            seen.add(acts)
            if not _happens_ok(p, k - 1, acts):
                continue
            if p.smart and any(f in p.delete[a] for a in acts for f in needed):
                continue  # :- holds(F,K); deleted(F,K-1).
            new_needed = frozenset(
                f
                for a in acts
                for f in p.pre[a]
                if f in p.valid_fluent.get(k - 1, set())
            )
            done = dfs(
                k - 1,
                new_needed,
                suffix + [(k - 1, acts)],
                holds + [(k, needed)],
            )
            if done:
                return True
        if len(models) == before:
            failed.add(key)
        return False

    dfs(p.makespan, frozenset(p.goal), [], [])
    if max_models == 0:
        models = _minimal_only(models)
    return models


def _minimal_only(models: list[dict]) -> list[dict]:
    atom_sets = [frozenset(m["happens"]) | frozenset(("h",) + a for a in m["holds"]) for m in models]
    keep = []
    for i, m in enumerate(models):
        if not any(j != i and atom_sets[j] < atom_sets[i] for j in range(len(models))):
            keep.append(m)
    # deduplicate identical atom sets
    out, seen = [], set()
    for m in keep:
        key = (frozenset(m["happens"]), frozenset(m["holds"]))
        if key not in seen:
            seen.add(key)
            out.append(m)
    return out


def format_model(model: dict) -> str:
    atoms = sorted(model["happens"], key=lambda x: (x[1], x[0]))
    return " ".join(f"happens({a},{k})" for a, k in atoms)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="mutexcover.refsolver", description=__doc__)
    parser.add_argument("--models", type=int, default=1, help="models to compute (0 = all)")
    parser.add_argument("file", help="program file")
    args = parser.parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as fh:
            program = parse_program(fh.read())
        models = solve(program, args.models)
    except (ProgramError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print("mutexcover refsolver")
    print("Solving...")
    if not models:
        print("UNSATISFIABLE")
        return 20
    for i, model in enumerate(models, start=1):
        print(f"Answer: {i}")
        print(format_model(model))
    print("SATISFIABLE")
    print(f"Models       : {len(models)}")
    return 10


if __name__ == "__main__":
    sys.exit(main())
