"""Coxeter diagrams: parsing, finite-type recognition, Euler characteristics.

File format, one directive per line, ``#`` starts a comment::

    vertices N
    edge i j m        # 1-based vertices, m an integer >= 3 or the word inf

Pairs that are not listed carry the label 2 (commuting generators).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .arith_kernel import SymbolicVolume
from .covolume import gauss_bonnet
from .errors import BudgetExceeded, DuplicateEdge, LabelOutOfRange, ParseError

INF = math.inf
MAX_VERTICES = 24


@dataclass
class CoxeterGraph:
    vertex_count: int
    edges: dict[frozenset, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        for pair, m in self.edges.items():
            if len(pair) != 2:
                raise ValueError(f"edge {sorted(pair)} is a self-loop")
            if not all(0 <= v < self.vertex_count for v in pair):
                raise ValueError(f"edge {sorted(pair)} leaves the vertex range")
            if not (m == INF or (int(m) == m and m >= 3)):
                raise ValueError(f"edge label {m} must be an integer >= 3 or inf")

    def label(self, i: int, j: int) -> float:
        return self.edges.get(frozenset((i, j)), 2)

    def neighbours(self, i: int) -> list[int]:
        return [j for j in range(self.vertex_count) if j != i and self.label(i, j) != 2]

    def with_edge(self, i: int, j: int, m: float) -> "CoxeterGraph":
        edges = dict(self.edges)
        edges[frozenset((i, j))] = m
        return CoxeterGraph(self.vertex_count, edges)

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int, float]]) -> "CoxeterGraph":
        """Build from 0-based (i, j, m) triples."""
        return cls(vertex_count, {frozenset((i, j)): m for i, j, m in edges})

    def disjoint_union(self, other: "CoxeterGraph") -> "CoxeterGraph":
        k = self.vertex_count
        edges = dict(self.edges)
        for pair, m in other.edges.items():
            edges[frozenset(v + k for v in pair)] = m
        return CoxeterGraph(k + other.vertex_count, edges)


def parse_graph(text: str) -> CoxeterGraph:
    count = None
    edges: dict[frozenset, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if count is None:
            if parts[0] != "vertices" or len(parts) != 2:
                raise ParseError("expected 'vertices N' as the first directive", lineno)
            try:
                count = int(parts[1])
            except ValueError:
                raise ParseError(f"vertex count {parts[1]!r} is not an integer", lineno) from None
            if count < 0:
                raise ParseError("vertex count must be non-negative", lineno)
            continue
        if parts[0] != "edge" or len(parts) != 4:
            raise ParseError(f"expected 'edge i j m', got {line!r}", lineno)
        try:
            i, j = int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(f"vertex labels must be integers in {line!r}", lineno) from None
        for v in (i, j):
            if not 1 <= v <= count:
                raise LabelOutOfRange(f"vertex {v} is outside 1..{count}", lineno)
        if i == j:
            raise ParseError(f"self-loop at vertex {i}", lineno)
        token = parts[3]
        if token == "inf":
            m = INF
        else:
            try:
                m = int(token)
            except ValueError:
                raise ParseError(f"edge label {token!r} is neither an integer nor inf", lineno) from None
            if m < 3:
                raise LabelOutOfRange(f"edge label {m} must be >= 3 (omit the edge for 2)", lineno)
        pair = frozenset((i - 1, j - 1))
        if pair in edges:
            raise DuplicateEdge(f"edge {i} {j} appears twice", lineno)
        edges[pair] = m
    if count is None:
        raise ParseError("missing 'vertices N' directive")
    return CoxeterGraph(count, edges)


def format_graph(graph: CoxeterGraph) -> str:
    lines = [f"vertices {graph.vertex_count}"]
    for pair, m in sorted(graph.edges.items(), key=lambda kv: sorted(kv[0])):
        i, j = sorted(pair)
        lines.append(f"edge {i + 1} {j + 1} {'inf' if m == INF else int(m)}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# finite types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteTypeComponent:
    type_tag: str
    order: int
    vertices: tuple[int, ...] = ()


_EXCEPTIONAL_ORDERS = {
    "E6": 51840,
    "E7": 2903040,
    "E8": 696729600,
    "F4": 1152,
    "H3": 120,
    "H4": 14400,
}


def _components(graph: CoxeterGraph, vertices: Iterable[int]) -> list[list[int]]:
    remaining = set(vertices)
    out = []
    while remaining:
        start = min(remaining)
        stack, comp = [start], []
        remaining.discard(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in list(remaining):
                if graph.label(v, w) != 2:
                    remaining.discard(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def _path_order(graph: CoxeterGraph, comp: list[int]) -> list[int] | None:
    ends = [v for v in comp if len([w for w in comp if w != v and graph.label(v, w) != 2]) == 1]
    if len(ends) != 2:
        return None
    path = [min(ends)]
    prev = None
    while len(path) < len(comp):
        v = path[-1]
        nxt = [w for w in comp if w != v and w != prev and graph.label(v, w) != 2]
        if len(nxt) != 1:
            return None
        prev = v
        path.append(nxt[0])
    return path


def _classify_component(graph: CoxeterGraph, comp: list[int]) -> tuple[str, int] | None:
    k = len(comp)
    if k == 1:
        return "A1", 2
    labels = [graph.label(i, j) for a, i in enumerate(comp) for j in comp[a + 1 :]]
    if INF in labels:
        return None
    edges = [m for m in labels if m != 2]
    if len(edges) != k - 1:  # finite diagrams are trees
        return None
    if k == 2:
        m = int(edges[0])
        return ("A2", 6) if m == 3 else (f"I2({m})", 2 * m)
    degree = {v: len([w for w in comp if w != v and graph.label(v, w) != 2]) for v in comp}
    if max(degree.values()) > 3:
        return None
    branches = [v for v in comp if degree[v] == 3]
    if len(branches) > 1:
        return None
    if branches:
        if any(m != 3 for m in edges):
            return None
        centre = branches[0]
        arms = []
        for start in (w for w in comp if w != centre and graph.label(centre, w) != 2):
            length, prev, v = 1, centre, start
            while True:
                nxt = [w for w in comp if w not in (v, prev) and graph.label(v, w) != 2]
                if not nxt:
                    break
                prev, v = v, nxt[0]
                length += 1
            arms.append(length)
        arms.sort()
        if arms[0] == 1 and arms[1] == 1:
            return f"D{k}", 2 ** (k - 1) * math.factorial(k)
        if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
            tag = f"E{k}"
            return tag, _EXCEPTIONAL_ORDERS[tag]
        return None
    path = _path_order(graph, comp)
    if path is None:
        return None
    seq = [int(graph.label(path[i], path[i + 1])) for i in range(k - 1)]
    big = [(i, m) for i, m in enumerate(seq) if m != 3]
    if not big:
        return f"A{k}", math.factorial(k + 1)
    if len(big) > 1:
        return None
    pos, m = big[0]
    at_end = pos in (0, k - 2)
    if m == 4 and at_end:
        return f"B{k}", 2**k * math.factorial(k)
    if m == 4 and k == 4 and pos == 1:
        return "F4", 1152
    if m == 5 and at_end and k in (3, 4):
        tag = f"H{k}"
        return tag, _EXCEPTIONAL_ORDERS[tag]
    return None


def classify_finite(graph: CoxeterGraph, vertices: Iterable[int] | None = None):
    """Finite-type decomposition of the induced subgraph, or None when infinite."""
    verts = range(graph.vertex_count) if vertices is None else vertices
    out = []
    for comp in _components(graph, verts):
        found = _classify_component(graph, comp)
        if found is None:
            return None
        out.append(FiniteTypeComponent(found[0], found[1], tuple(comp)))
    return out


def group_order(graph: CoxeterGraph, vertices: Iterable[int] | None = None) -> int | None:
    comps = classify_finite(graph, vertices)
    if comps is None:
        return None
    return math.prod(c.order for c in comps)


def cosine_matrix(graph: CoxeterGraph, vertices: Iterable[int] | None = None) -> np.ndarray:
    """Matrix with entries -cos(pi/m_ij) (and -1 for inf, 1 on the diagonal)."""
    verts = list(range(graph.vertex_count) if vertices is None else vertices)
    G = np.eye(len(verts))
    for a, i in enumerate(verts):
        for b, j in enumerate(verts):
            if a != b:
                m = graph.label(i, j)
                G[a, b] = -1.0 if m == INF else -math.cos(math.pi / m)
    return G


def chiswell_chi(graph: CoxeterGraph) -> Fraction:
    """sum over vertex subsets with finite Coxeter group of (-1)^|subset| / |group|.

    Subsets are grown in increasing vertex order; a subset with an infinite
    group has no finite supersets, so that branch is cut.
    """
    if graph.vertex_count > MAX_VERTICES:
        raise BudgetExceeded(
            f"{graph.vertex_count} vertices exceeds the subset-enumeration limit {MAX_VERTICES}"
        )
    total = Fraction(1)  # empty subset
    stack: list[tuple[int, ...]] = [()]
    while stack:
        subset = stack.pop()
        start = subset[-1] + 1 if subset else 0
        for v in range(start, graph.vertex_count):
            grown = subset + (v,)
            order = group_order(graph, grown)
            if order is None:
                continue
            total += Fraction((-1) ** len(grown), order)
            stack.append(grown)
    return total


def gauss_bonnet_volume(graph: CoxeterGraph, n: int) -> SymbolicVolume:
    if n % 2:
        raise ValueError("gauss_bonnet_volume needs even n")
    chi = chiswell_chi(graph)
    if graph.vertex_count == 0:
        warnings.warn(
            "the graph has no generators, so the group is trivial and not a lattice",
            stacklevel=2,
        )
    return gauss_bonnet(chi, n)
