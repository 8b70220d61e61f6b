"""PDDL 1.2 STRIPS-subset parser and grounder.

Supported requirements: :strips and :typing (single-inheritance type
hierarchies; `either` accepted in typed lists). Preconditions and goals
are positive conjunctions. Action schemata are grounded exhaustively over
typed constants by default; pass neededness=True to prune to the
delete-free reachable fluents and actions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

from .errors import PddlError
from .planning import Action, StripsProblem

SUPPORTED_REQUIREMENTS = {":strips", ":typing"}

_TOKEN_RE = re.compile(r"\(|\)|;[^\n]*|[^\s();]+")


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for m in _TOKEN_RE.finditer(line):
            t = m.group(0)
            if t.startswith(";"):
                break
            toks.append(_Tok(t.lower(), lineno, m.start() + 1))
    return toks


def _parse_sexpr(toks: list[_Tok]):
    """One s-expression from the token stream; returns (tree, rest)."""
    if not toks:
        raise PddlError("unexpected end of input")
    head = toks[0]
    if head.text == ")":
        raise PddlError("unexpected ')'", head.line, head.col)
    if head.text != "(":
        return head, toks[1:]
    items = []
    rest = toks[1:]
    while True:
        if not rest:
            raise PddlError("unclosed '('", head.line, head.col)
        if rest[0].text == ")":
            return items, rest[1:]
        item, rest = _parse_sexpr(rest)
        items.append(item)


def _parse_all(text: str):
    toks = _tokenize(text)
    tree, rest = _parse_sexpr(toks)
    if rest:
        raise PddlError("trailing tokens after top-level form", rest[0].line, rest[0].col)
    return tree


def _txt(node) -> str:
    if not isinstance(node, _Tok):
        raise PddlError("expected a symbol, found a list")
    return node.text


def _parse_typed_list(nodes) -> list[tuple[str, str]]:
    """Typed list `a b - t c d - (either t1 t2)` -> [(name, type), ...].

    `either` keeps only the first alternative; untyped entries get type
    'object'.
    """
    out = []
    pending: list[_Tok] = []
    i = 0
    while i < len(nodes):
        node = nodes[i]
        if isinstance(node, _Tok) and node.text == "-":
            if i + 1 >= len(nodes):
                raise PddlError("dangling '-' in typed list", node.line, node.col)
            tnode = nodes[i + 1]
            if isinstance(tnode, list):
                if not tnode or _txt(tnode[0]) != "either":
                    raise PddlError("expected type or (either ...) after '-'")
                tname = _txt(tnode[1])
            else:
                tname = tnode.text
            for p in pending:
                out.append((p.text, tname))
            pending = []
            i += 2
        else:
            pending.append(node)
            i += 1
    for p in pending:
        out.append((p.text, "object"))
    return out


def _as_atom(node) -> tuple[str, ...]:
    if not isinstance(node, list) or not node:
        raise PddlError("expected an atom '(pred args...)'")
    return tuple(_txt(x) for x in node)


def _conjunction(node, what: str) -> list[tuple[str, ...]]:
    """(and a b c) or a single atom -> list of positive atoms."""
    if isinstance(node, list) and node and isinstance(node[0], _Tok) and node[0].text == "and":
        items = node[1:]
    else:
        items = [node]
    atoms = []
    for item in items:
        if isinstance(item, list) and item and isinstance(item[0], _Tok) and item[0].text == "not":
            raise PddlError(
                f"negative {what} are not supported (requirement "
                f":negative-preconditions is not in the supported subset)"
            )
        atoms.append(_as_atom(item))
    return atoms


@dataclass
class _Schema:
    name: str
    params: list[tuple[str, str]]
    pre: list[tuple[str, ...]]
    add: list[tuple[str, ...]]
    delete: list[tuple[str, ...]]


@dataclass
class Domain:
    name: str
    types: dict[str, str]  # type -> parent
    predicates: dict[str, list[str]]  # name -> parameter types
    constants: list[tuple[str, str]]
    schemata: list[_Schema]

    def is_subtype(self, t: str, ancestor: str) -> bool:
        if ancestor == "object":
            return True
        while True:
            if t == ancestor:
                return True
            parent = self.types.get(t)
            if parent is None or parent == t:
                return False
            t = parent


def parse_domain(text: str) -> Domain:
    tree = _parse_all(text)
    if not isinstance(tree, list) or _txt(tree[0]) != "define":
        raise PddlError("domain file must start with (define (domain ...))")
    name = None
    types: dict[str, str] = {"object": "object"}
    predicates: dict[str, list[str]] = {}
    constants: list[tuple[str, str]] = []
    schemata: list[_Schema] = []
    for section in tree[1:]:
        if not isinstance(section, list) or not section:
            raise PddlError("malformed domain section")
        head = _txt(section[0])
        if head == "domain":
            name = _txt(section[1])
        elif head == ":requirements":
            for req in section[1:]:
                r = _txt(req)
                if r not in SUPPORTED_REQUIREMENTS:
                    raise PddlError(
                        f"unsupported requirement {r} (supported: :strips, :typing)",
                        req.line,
                        req.col,
                    )
        elif head == ":types":
            for t, parent in _parse_typed_list(section[1:]):
                types[t] = parent
        elif head == ":constants":
            constants.extend(_parse_typed_list(section[1:]))
        elif head == ":predicates":
            for p in section[1:]:
                atom = p
                if not isinstance(atom, list) or not atom:
                    raise PddlError("malformed predicate declaration")
                pname = _txt(atom[0])
                ptypes = [t for _, t in _parse_typed_list(atom[1:])]
                predicates[pname] = ptypes
        elif head == ":action":
            schemata.append(_parse_action(section))
        else:
            raise PddlError(f"unsupported domain section {head}")
    if name is None:
        raise PddlError("missing (domain <name>)")
    return Domain(name, types, predicates, constants, schemata)


def _parse_action(section) -> _Schema:
    name = _txt(section[1])
    params: list[tuple[str, str]] = []
    pre: list[tuple[str, ...]] = []
    add: list[tuple[str, ...]] = []
    delete: list[tuple[str, ...]] = []
    i = 2
    while i < len(section):
        key = _txt(section[i])
        value = section[i + 1] if i + 1 < len(section) else None
        if value is None:
            raise PddlError(f"action {name}: missing value for {key}")
        if key == ":parameters":
            params = _parse_typed_list(value)
        elif key == ":precondition":
            pre = _conjunction(value, "preconditions")
        elif key == ":effect":
            items = (
                value[1:]
                if isinstance(value, list) and value and isinstance(value[0], _Tok) and value[0].text == "and"
                else [value]
            )
            for item in items:
                if (
                    isinstance(item, list)
                    and item
                    and isinstance(item[0], _Tok)
                    and item[0].text == "not"
                ):
                    delete.append(_as_atom(item[1]))
                else:
                    add.append(_as_atom(item))
        else:
            raise PddlError(f"action {name}: unsupported key {key}")
        i += 2
    return _Schema(name, params, pre, add, delete)


@dataclass
class Problem:
    name: str
    objects: list[tuple[str, str]]
    init: list[tuple[str, ...]]
    goal: list[tuple[str, ...]]


def parse_problem(text: str) -> Problem:
    tree = _parse_all(text)
    if not isinstance(tree, list) or _txt(tree[0]) != "define":
        raise PddlError("problem file must start with (define (problem ...))")
    name = None
    objects: list[tuple[str, str]] = []
    init: list[tuple[str, ...]] = []
    goal: list[tuple[str, ...]] = []
    for section in tree[1:]:
        head = _txt(section[0])
        if head == "problem":
            name = _txt(section[1])
        elif head == ":domain":
            pass
        elif head == ":requirements":
            for req in section[1:]:
                r = _txt(req)
                if r not in SUPPORTED_REQUIREMENTS:
                    raise PddlError(f"unsupported requirement {r}", req.line, req.col)
        elif head == ":objects":
            objects.extend(_parse_typed_list(section[1:]))
        elif head == ":init":
            init = [_as_atom(a) for a in section[1:]]
        elif head == ":goal":
            goal = _conjunction(section[1], "goals")
        else:
            raise PddlError(f"unsupported problem section {head}")
    if name is None:
        raise PddlError("missing (problem <name>)")
    return Problem(name, objects, init, goal)


def _term(atom: tuple[str, ...]) -> str:
    pred = atom[0].replace("-", "_")
    if len(atom) == 1:
        return pred
    return f"{pred}({','.join(a.replace('-', '_') for a in atom[1:])})"


def ground(domain: Domain, problem: Problem, neededness: bool = False) -> StripsProblem:
    """Ground all schemata over typed constants and build a StripsProblem."""
    objects = list(domain.constants) + list(problem.objects)
    by_type: dict[str, list[str]] = {}
    for obj, t in objects:
        if t not in domain.types and t != "object":
            raise PddlError(f"object {obj} has undeclared type {t}")
        by_type.setdefault(t, []).append(obj)

    def objects_of(t: str) -> list[str]:
        return sorted(
            obj for obj, ot in objects if domain.is_subtype(ot, t)
        )

    # fluent universe: every ground instance of every predicate
    fluents: set[str] = set()
    for pname, ptypes in domain.predicates.items():
        pools = [objects_of(t) for t in ptypes]
        for combo in product(*pools):
            fluents.add(_term((pname,) + combo))

    def ground_atoms(atoms, binding, schema_name) -> frozenset[str]:
        out = set()
        for atom in atoms:
            pred = atom[0]
            if pred not in domain.predicates:
                raise PddlError(f"{schema_name}: unknown predicate {pred}")
            if len(atom) - 1 != len(domain.predicates[pred]):
                raise PddlError(
                    f"{schema_name}: predicate {pred} expects "
                    f"{len(domain.predicates[pred])} arguments, got {len(atom) - 1}"
                )
            args = tuple(binding.get(a, a) for a in atom[1:])
            out.add(_term((pred,) + args))
        return frozenset(out)

    actions: list[Action] = []
    for schema in domain.schemata:
        pools = [objects_of(t) for _, t in schema.params]
        names = [v for v, _ in schema.params]
        for combo in product(*pools):
            binding = dict(zip(names, combo))
            pre = ground_atoms(schema.pre, binding, schema.name)
            add = ground_atoms(schema.add, binding, schema.name)
            delete = ground_atoms(schema.delete, binding, schema.name)
            # delete-then-add convention: an atom both added and deleted
            # stays added
            delete = delete - add
            gname = _term((schema.name,) + combo)
            actions.append(Action(gname, pre, add, delete))

    init = set()
    for atom in problem.init:
        term = _term(atom)
        if term not in fluents:
            raise PddlError(f"init atom {term} is not a declared fluent")
        init.add(term)
    goal = set()
    for atom in problem.goal:
        term = _term(atom)
        if term not in fluents:
            raise PddlError(f"goal atom {term} is not a declared fluent")
        goal.add(term)

    if neededness:
        reachable = set(init)
        kept: list[Action] = []
        changed = True
        while changed:
            changed = False
            for a in actions:
                if a not in kept and a.pre <= reachable:
                    kept.append(a)
                    new = a.add - reachable
                    if new:
                        reachable |= new
                    changed = True
        fluents = reachable | goal
        actions = [
            Action(a.name, a.pre, a.add & fluents, a.delete & fluents)
            for a in kept
        ]

    return StripsProblem(
        fluents=frozenset(fluents),
        actions=tuple(sorted(actions, key=lambda a: a.name)),
        init=frozenset(init),
        goal=frozenset(goal),
    )


def parse_pddl(domain_text: str, problem_text: str, neededness: bool = False) -> StripsProblem:
    """Parse and ground a domain/problem pair."""
    return ground(parse_domain(domain_text), parse_problem(problem_text), neededness)
