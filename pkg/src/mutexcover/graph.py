"""Undirected mutex graphs over dense integer vertex ids.

Vertices are 0..n-1; an optional symbol table maps ids to fluent terms.
Only the primitives the covering algorithm consumes are provided:
complement, induced subgraph, connected components, plus a text format.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import InputError

Edge = tuple[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    """Canonical (min, max) orientation of an undirected edge."""
    if u == v:
        raise InputError(f"self-loop ({u},{v}) is not a valid edge")
    return (u, v) if u < v else (v, u)


class MutexGraph:
    """Immutable undirected graph with per-vertex neighbor sets.

    Adjacency is symmetric and irreflexive; neighbor iteration is
    always in ascending id order.
    """

    __slots__ = ("n", "_adj", "labels")

    def __init__(self, n: int, edges: Iterable[Edge], labels: Sequence[str] | None = None):
        if n < 0:
            raise InputError(f"vertex count must be non-negative, got {n}")
        adj: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = e
            if not (0 <= u < n) or not (0 <= v < n):
                raise InputError(f"edge ({u},{v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise InputError(f"self-loop ({u},{v}) rejected")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self._adj = tuple(frozenset(s) for s in adj)
        if labels is not None and len(labels) != n:
            raise InputError(f"expected {n} labels, got {len(labels)}")
        self.labels = tuple(labels) if labels is not None else None

    # -- basic accessors ------------------------------------------------

    def neighbors(self, v: int) -> list[int]:
        return sorted(self._adj[v])

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[Edge]:
        """All edges, ascending by (u, v)."""
        return [(u, v) for u in range(self.n) for v in sorted(self._adj[u]) if u < v]

    def edge_count(self) -> int:
        return sum(len(s) for s in self._adj) // 2

    def label_of(self, v: int) -> str | None:
        return self.labels[v] if self.labels is not None else None

    def adjacency_masks(self) -> list[int]:
        """Per-vertex neighbor sets as int bitmasks (bit v = neighbor v)."""
        masks = [0] * self.n
        for u in range(self.n):
            m = 0
            for v in self._adj[u]:
                m |= 1 << v
            masks[u] = m
        return masks

    def __eq__(self, other):
        return (
            isinstance(other, MutexGraph)
            and self.n == other.n
            and self._adj == other._adj
        )

    def __hash__(self):
        return hash((self.n, self._adj))

    def __repr__(self):
        return f"MutexGraph(n={self.n}, m={self.edge_count()})"


def build_graph(n: int, edges: Iterable[Edge], labels: Sequence[str] | None = None) -> MutexGraph:
    """Build a graph, deduplicating edges and rejecting bad endpoints."""
    return MutexGraph(n, edges, labels)


def complement(g: MutexGraph) -> MutexGraph:
    """Graph with edge (u,v) iff u != v and (u,v) is not in g.

    Materializes all non-edges; intended for small (induced) graphs only.
    """
    edges = [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if v not in g.neighbor_set(u)
    ]
    return MutexGraph(g.n, edges, g.labels)


def induced_subgraph(g: MutexGraph, vs: Iterable[int]) -> tuple[MutexGraph, list[int]]:
    """Subgraph on vs, re-indexed 0..|vs|-1.

    Returns (subgraph, mapping) where mapping[new_id] = original id,
    ascending. Labels are carried over.
    """
    vs = set(vs)
    for v in vs:
        if not (0 <= v < g.n):
            raise InputError(f"unknown vertex {v}")
    mapping = sorted(vs)
    index = {v: i for i, v in enumerate(mapping)}
    edges = [
        (index[u], index[v])
        for u in mapping
        for v in g.neighbor_set(u)
        if v in vs and u < v
    ]
    labels = [g.labels[v] for v in mapping] if g.labels is not None else None
    return MutexGraph(len(mapping), edges, labels), mapping


def connected_components(g: MutexGraph) -> list[list[int]]:
    """Connected components, ordered by smallest member; members ascending."""
    seen = [False] * g.n
    components = []
    for start in range(g.n):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.neighbor_set(v):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        components.append(sorted(comp))
    return components


# -- text format --------------------------------------------------------
#
#   # comment
#   p <n> <m>
#   e <u> <v>      (m lines, 0-based ids)
#   l <v> <symbol> (optional)


def write_graph(g: MutexGraph) -> str:
    """Canonical text serialization (edges ascending by (u, v))."""
    lines = [f"p {g.n} {g.edge_count()}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    if g.labels is not None:
        lines.extend(f"l {v} {g.labels[v]}" for v in range(g.n))
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> MutexGraph:
    """Parse the text format; accepts e/l lines in any order after p."""
    n = None
    declared_m = None
    edges: list[Edge] = []
    label_map: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "p":
                if n is not None:
                    raise InputError(f"line {lineno}: duplicate header")
                n, declared_m = int(parts[1]), int(parts[2])
            elif kind == "e":
                edges.append((int(parts[1]), int(parts[2])))
            elif kind == "l":
                label_map[int(parts[1])] = parts[2]
            else:
                raise InputError(f"line {lineno}: unknown record {kind!r}")
        except (IndexError, ValueError) as exc:
            raise InputError(f"line {lineno}: malformed record {line!r}") from exc
    if n is None:
        raise InputError("missing 'p <n> <m>' header")
    if declared_m is not None and declared_m != len(edges):
        raise InputError(f"header declares {declared_m} edges, found {len(edges)}")
    labels = None
    if label_map:
        labels = [label_map.get(v, f"v{v}") for v in range(n)]
    return MutexGraph(n, edges, labels)
