from __future__ import annotations

import json
import random

import pytest

from mutexcover.cover import Covering, Multiclique, find_cover, naive_cover
from mutexcover.encode import (
    biclique_sat_stats,
    default_symbols,
    emit_multiclique_program,
    emit_naive_program,
    enumerate_constraint_models,
    multiclique_rules_for,
    program_text,
)
from mutexcover.errors import EncodingError, InputError
from mutexcover.graph import build_graph

from oracles import independent_sets

EX_EDGES = [(0, 1), (0, 2), (0, 4), (1, 2), (1, 4), (2, 3), (2, 4), (3, 4)]


def ex_graph():
    return build_graph(5, EX_EDGES, labels=list("abcde"))


def random_graph(rng, n, density):
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density
    ]
    return build_graph(n, edges)


def test_binary_multiclique_rule():
    mc = Multiclique((frozenset({0}), frozenset({1})))
    rules = multiclique_rules_for(mc, 0, ["f", "g"])
    assert len(rules) == 1
    assert rules[0].text == ":- holds(f,T); holds(g,T)."
    assert rules[0].literal_count == 2


def test_multipartite_rule_shapes_and_counts():
    mc = Multiclique((frozenset({0, 1, 3}), frozenset({2}), frozenset({4})))
    rules = multiclique_rules_for(mc, 2, list("abcde"))
    # 3 defining rules for the size-3 partition + 1 cardinality constraint
    assert len(rules) == 4
    assert sum(r.literal_count for r in rules) == 3 * 2 + 3
    assert rules[-1].text.startswith(":- {")
    assert rules[-1].text.endswith("> 1; step(T).")
    assert "partitionHolds(part(2,0),T)" in rules[0].text


def test_naive_program_counts():
    g = ex_graph()
    rules, stats = emit_naive_program(g)
    assert stats.rules == 8
    assert stats.literals == 16
    assert stats.edges_covered == 8
    assert all(r.text.startswith(":- holds(") for r in rules)


def test_multiclique_program_uses_labels():
    g = ex_graph()
    rules, stats = emit_multiclique_program(find_cover(g, 1.0))
    text = program_text(rules)
    assert "holds(a,T)" in text or "holds(b,T)" in text
    assert stats.edges_covered == 8


def test_symbol_count_mismatch_rejected():
    g = ex_graph()
    with pytest.raises(EncodingError):
        emit_multiclique_program(find_cover(g, 1.0), symbols=["x", "y"])


def test_stats_serialization():
    g = ex_graph()
    _, stats = emit_naive_program(g)
    payload = json.loads(stats.as_json(g.edge_count()))
    assert payload == {
        "edges": 8,
        "rules": 8,
        "literals": 16,
        "edges_covered": 8,
    }
    assert stats.as_csv_row("ex", 8) == "ex,8,8,16,8"


def test_biclique_sat_stats_accounting():
    c = Covering(
        [Multiclique((frozenset({0, 1}), frozenset({2, 3})))],
        ex_graph(),
        {(0, 2), (0, 3), (1, 2), (1, 3)},
    )
    stats = biclique_sat_stats(c)
    assert stats.rules == 4  # |C| + |C'| clauses
    assert stats.literals == 8
    with pytest.raises(InputError):
        biclique_sat_stats(
            Covering([Multiclique((frozenset({0}),))], ex_graph(), set())
        )


def test_models_equal_independent_sets_example():
    g = ex_graph()
    rules, _ = emit_multiclique_program(find_cover(g, 1.0), symbols=default_symbols(5))
    models = enumerate_constraint_models(rules, 5)
    want = independent_sets(5, set(EX_EDGES))
    assert models == want


def test_models_equal_naive_models_random():
    """Multiclique and naive encodings accept exactly the same holds sets."""
    rng = random.Random(1234)
    for _ in range(60):
        n = rng.randint(1, 10)
        g = random_graph(rng, n, rng.uniform(0.1, 0.9))
        syms = default_symbols(n)
        mc_rules, _ = emit_multiclique_program(find_cover(g, 1.0), symbols=syms) \
            if g.edge_count() else ([], None)
        naive_rules, _ = emit_naive_program(g, symbols=syms)
        got = enumerate_constraint_models(mc_rules, n)
        want = enumerate_constraint_models(naive_rules, n)
        assert got == want == independent_sets(n, set(g.edges()))


def test_partial_coverage_program_is_superset():
    """Covering only part of the edges can only admit more models."""
    rng = random.Random(77)
    for _ in range(20):
        g = random_graph(rng, 9, 0.5)
        if g.edge_count() < 4:
            continue
        full_rules, _ = emit_multiclique_program(find_cover(g, 1.0))
        part_rules, _ = emit_multiclique_program(find_cover(g, 0.5))
        full = enumerate_constraint_models(full_rules, g.n)
        part = enumerate_constraint_models(part_rules, g.n)
        assert full <= part


def test_enumeration_size_cap():
    g = build_graph(16, [])
    rules, _ = emit_naive_program(g)
    with pytest.raises(InputError):
        enumerate_constraint_models(rules, 16)
