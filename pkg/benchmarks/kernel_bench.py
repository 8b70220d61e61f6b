#!/usr/bin/env python3
"""Benchmark the covering kernel backends (pure Python vs compiled).

Runs find_cover on a range of random graphs with each available backend,
checks that both produce identical coverings, and prints a timing table.

Usage: python3 benchmarks/kernel_bench.py [--seed N] [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import time

from mutexcover import cover, kernel
from mutexcover.encode import emit_multiclique_program
from mutexcover.graph import build_graph

CASES = [
    ("sparse-200", 200, 0.05),
    ("medium-200", 200, 0.25),
    ("dense-200", 200, 0.60),
    ("sparse-500", 500, 0.02),
    ("medium-500", 500, 0.10),
]


def union_of_multicliques(rng: random.Random, n: int, k: int) -> "tuple[str, object]":
    edges = set()
    for _ in range(k):
        verts = rng.sample(range(n), 80)
        parts = [verts[i * 20 : (i + 1) * 20] for i in range(4)]
        for i in range(4):
            for j in range(i + 1, 4):
                for u in parts[i]:
                    for v in parts[j]:
                        edges.add((u, v) if u < v else (v, u))
    return build_graph(n, edges)


def run_backend(name: str, g, repeat: int):
    backend = kernel.get_backend(name)
    original = cover.kernel.grow_vertex_set
    cover.kernel.grow_vertex_set = backend.grow_vertex_set
    try:
        best = float("inf")
        covering = None
        for _ in range(repeat):
            t0 = time.perf_counter()
            covering = cover.find_cover(g, 1.0)
            best = min(best, time.perf_counter() - t0)
        return best, covering
    finally:
        cover.kernel.grow_vertex_set = original


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = kernel.available_backends()
    print(f"available backends: {', '.join(backends)} (default: {kernel.BACKEND})")
    if len(backends) < 2:
        print("compiled backend not built; timing the pure backend only")

    rng = random.Random(args.seed)
    graphs = []
    for name, n, density in CASES:
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < density
        ]
        graphs.append((name, build_graph(n, edges)))
    graphs.append(("multiclique-400", union_of_multicliques(rng, 400, 8)))

    header = f"{'instance':<18}{'|V|':>6}{'|E|':>8}{'Lit':>8}"
    for b in backends:
        header += f"{b + ' (s)':>14}"
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    mismatches = 0
    for name, g in graphs:
        times = {}
        coverings = {}
        for b in backends:
            times[b], coverings[b] = run_backend(b, g, args.repeat)
        first = coverings[backends[0]]
        _, stats = emit_multiclique_program(first)
        row = f"{name:<18}{g.n:>6}{g.edge_count():>8}{stats.literals:>8}"
        for b in backends:
            row += f"{times[b]:>14.4f}"
        if len(backends) == 2:
            agree = (
                coverings["python"].multicliques == coverings["cython"].multicliques
            )
            if not agree:
                mismatches += 1
            row += f"{times['python'] / times['cython']:>9.2f}x"
            row += "" if agree else "  RESULTS DIFFER"
        print(row)

    if mismatches:
        print(f"\n{mismatches} instance(s) where backends disagreed")
        return 1
    if len(backends) == 2:
        print("\nbackends produced identical coverings on every instance")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
