"""Compile coverings into ASP constraint programs and size metrics.

Programs are layer-parameterized over a variable T ranging over step/1;
rule and literal counts describe one layer's grounding. Guard atoms
(step(T)) are excluded from literal counts, so a binary constraint is
exactly 2 literals and a multiclique costs sum over partitions p of
(1 if |p| = 1 else 2*|p| + 1).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

from .cover import Covering, Multiclique
from .errors import EncodingError, InputError
from .graph import MutexGraph


@dataclass(frozen=True)
class AspRule:
    text: str
    literal_count: int


@dataclass(frozen=True)
class EncodingStats:
    rules: int
    literals: int
    edges_covered: int

    def as_json(self, edges: int) -> str:
        return json.dumps(
            {
                "edges": edges,
                "rules": self.rules,
                "literals": self.literals,
                "edges_covered": self.edges_covered,
            }
        )

    def as_csv_row(self, instance: str, edges: int) -> str:
        return f"{instance},{edges},{self.rules},{self.literals},{self.edges_covered}"


def default_symbols(n: int) -> list[str]:
    return [f"v{v}" for v in range(n)]


def _symbols_for(g: MutexGraph, symbols: Sequence[str] | None) -> list[str]:
    if symbols is not None:
        syms = list(symbols)
    elif g.labels is not None:
        syms = list(g.labels)
    else:
        syms = default_symbols(g.n)
    if len(syms) != g.n:
        raise EncodingError(f"expected {g.n} symbols, got {len(syms)}")
    for v, s in enumerate(syms):
        if not s:
            raise EncodingError(f"vertex {v} has no symbol")
    return syms


def _sorted_members(p: frozenset[int], syms: list[str]) -> list[int]:
    return sorted(p, key=lambda v: syms[v])


def multiclique_rules_for(mc: Multiclique, index: int, syms: list[str]) -> list[AspRule]:
    """ASP rules for one multiclique: defining rules, then the constraint.

    A multiclique of exactly two singleton partitions degenerates to the
    plain binary constraint form.
    """
    parts = mc.partitions
    if len(parts) == 2 and all(len(p) == 1 for p in parts):
        (u,), (v,) = (tuple(p) for p in parts)
        return [AspRule(f":- holds({syms[u]},T); holds({syms[v]},T).", 2)]
    rules = []
    elements = []
    for j, p in enumerate(parts):
        if len(p) == 1:
            (v,) = tuple(p)
            elements.append(f"holds({syms[v]},T)")
        else:
            atom = f"partitionHolds(part({index},{j}),T)"
            for v in _sorted_members(p, syms):
                rules.append(AspRule(f"{atom} :- holds({syms[v]},T).", 2))
            elements.append(atom)
    body = "; ".join(elements)
    rules.append(AspRule(f":- {{{body}}} > 1; step(T).", len(elements)))
    return rules


def emit_multiclique_program(
    c: Covering, symbols: Sequence[str] | None = None
) -> tuple[list[AspRule], EncodingStats]:
    """Program for a covering: per multiclique, defining rules + constraint."""
    syms = _symbols_for(c.source, symbols)
    rules: list[AspRule] = []
    for i, mc in enumerate(c.multicliques):
        rules.extend(multiclique_rules_for(mc, i, syms))
    stats = EncodingStats(
        rules=len(rules),
        literals=sum(r.literal_count for r in rules),
        edges_covered=len(c.covered),
    )
    return rules, stats


def emit_naive_program(
    g: MutexGraph, symbols: Sequence[str] | None = None
) -> tuple[list[AspRule], EncodingStats]:
    """One binary constraint per edge: |E| rules, 2|E| literals."""
    syms = _symbols_for(g, symbols)
    rules = [
        AspRule(f":- holds({syms[u]},T); holds({syms[v]},T).", 2) for u, v in g.edges()
    ]
    stats = EncodingStats(
        rules=len(rules),
        literals=2 * len(rules),
        edges_covered=g.edge_count(),
    )
    return rules, stats


def biclique_sat_stats(c: Covering) -> EncodingStats:
    """SAT literal accounting for a biclique covering.

    Each biclique (C, C') costs |C| + |C'| binary clauses through one
    auxiliary variable, i.e. 2*(|C| + |C'|) literals.
    """
    clauses = 0
    for mc in c.multicliques:
        if len(mc.partitions) != 2:
            raise InputError(
                "biclique SAT accounting requires exactly 2 partitions per multiclique"
            )
        clauses += sum(len(p) for p in mc.partitions)
    return EncodingStats(rules=clauses, literals=2 * clauses, edges_covered=len(c.covered))


def program_text(rules: list[AspRule]) -> str:
    return "\n".join(r.text for r in rules) + ("\n" if rules else "")


# -- exhaustive model enumeration (semantic-equivalence oracle) ----------

_BINARY_RE = re.compile(r"^:- holds\((?P<a>[^;]+),T\); holds\((?P<b>[^;]+),T\)\.$")
_DEFINE_RE = re.compile(
    r"^partitionHolds\(part\((?P<i>\d+),(?P<j>\d+)\),T\) :- holds\((?P<sym>.+),T\)\.$"
)
_CARD_RE = re.compile(r"^:- \{(?P<body>.+)\} > 1; step\(T\)\.$")
_ELEM_HOLDS_RE = re.compile(r"^holds\((?P<sym>.+),T\)$")
_ELEM_PART_RE = re.compile(r"^partitionHolds\(part\((?P<i>\d+),(?P<j>\d+)\),T\)$")


def enumerate_constraint_models(
    program: list[AspRule], n: int, symbols: Sequence[str] | None = None
) -> set[frozenset[int]]:
    """All holds-assignments over one layer satisfying the constraints.

    Exhaustive over 2^n subsets; partitionHolds atoms are evaluated via
    their defining rules. Only the rule shapes this module emits are
    accepted.
    """
    if n > 15:
        raise InputError(f"exhaustive enumeration limited to n <= 15, got {n}")
    syms = symbols if symbols is not None else default_symbols(n)
    sym_to_id = {s: v for v, s in enumerate(syms)}

    part_members: dict[tuple[int, int], set[int]] = {}
    binaries: list[tuple[int, int]] = []
    cardinalities: list[list[tuple[str, object]]] = []

    for rule in program:
        text = rule.text.strip()
        m = _DEFINE_RE.match(text)
        if m:
            key = (int(m.group("i")), int(m.group("j")))
            part_members.setdefault(key, set()).add(sym_to_id[m.group("sym")])
            continue
        m = _BINARY_RE.match(text)
        if m:
            binaries.append((sym_to_id[m.group("a")], sym_to_id[m.group("b")]))
            continue
        m = _CARD_RE.match(text)
        if m:
            elems: list[tuple[str, object]] = []
            for chunk in m.group("body").split("; "):
                em = _ELEM_HOLDS_RE.match(chunk)
                if em:
                    elems.append(("holds", sym_to_id[em.group("sym")]))
                    continue
                em = _ELEM_PART_RE.match(chunk)
                if em:
                    elems.append(("part", (int(em.group("i")), int(em.group("j")))))
                    continue
                raise InputError(f"unrecognized cardinality element {chunk!r}")
            cardinalities.append(elems)
            continue
        raise InputError(f"unrecognized rule shape {text!r}")

    models: set[frozenset[int]] = set()
    for bits in range(1 << n):
        held = {v for v in range(n) if bits >> v & 1}
        ok = True
        for a, b in binaries:
            if a in held and b in held:
                ok = False
                break
        if ok:
            for elems in cardinalities:
                count = 0
                for kind, payload in elems:
                    if kind == "holds":
                        count += payload in held
                    else:
                        count += bool(part_members.get(payload, set()) & held)
                if count > 1:
                    ok = False
                    break
        if ok:
            models.add(frozenset(held))
    return models
