import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lorentz_covol.coxeter import (
    INF,
    CoxeterGraph,
    chiswell_chi,
    classify_finite,
    cosine_matrix,
    format_graph,
    gauss_bonnet_volume,
    group_order,
    parse_graph,
)
from lorentz_covol.arith_kernel import SymbolicVolume
from lorentz_covol.errors import BudgetExceeded, DuplicateEdge, LabelOutOfRange, ParseError


def path(labels):
    return CoxeterGraph.from_edges(len(labels) + 1, [(i, i + 1, m) for i, m in enumerate(labels) if m != 2])


def reflection_group_order(graph, limit=20000):
    """Size of the group generated by the geometric reflections, by breadth-first search."""
    G = cosine_matrix(graph)
    k = graph.vertex_count
    gens = []
    for i in range(k):
        s = np.eye(k)
        s[i, :] -= 2 * G[i, :]
        gens.append(s)
    key = lambda M: tuple(np.round(M, 6).ravel())
    seen = {key(np.eye(k))}
    frontier = [np.eye(k)]
    while frontier:
        nxt = []
        for M in frontier:
            for s in gens:
                P = M @ s
                kp = key(P)
                if kp not in seen:
                    seen.add(kp)
                    nxt.append(P)
                    if len(seen) > limit:
                        return None
        frontier = nxt
    return len(seen)


FINITE = {
    "A3": path([3, 3]),
    "B3": path([4, 3]),
    "H3": path([5, 3]),
    "A4": path([3, 3, 3]),
    "B4": path([3, 3, 4]),
    "F4": path([3, 4, 3]),
    "H4": path([5, 3, 3]),
    "I2(5)": path([5]),
    "I2(8)": path([8]),
    "A2": path([3]),
    "D4": CoxeterGraph.from_edges(4, [(0, 1, 3), (0, 2, 3), (0, 3, 3)]),
    "A1xA1": path([2]),
}


@pytest.mark.parametrize("name", sorted(FINITE))
def test_group_order_matches_generated_group(name):
    g = FINITE[name]
    assert group_order(g) == reflection_group_order(g)


@pytest.mark.parametrize(
    "graph, tag",
    [
        (path([3, 3, 3, 3]), "A5"),
        (path([4, 3, 3, 3]), "B5"),
        (CoxeterGraph.from_edges(6, [(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (2, 5, 3)]), "E6"),
        (CoxeterGraph.from_edges(8, [(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (4, 5, 3), (5, 6, 3), (4, 7, 3)]), "E8"),
        (path([6]), "I2(6)"),
    ],
)
def test_classify_tags(graph, tag):
    comps = classify_finite(graph)
    assert [c.type_tag for c in comps] == [tag]


@pytest.mark.parametrize(
    "graph",
    [
        path([INF]),
        path([4, 4]),
        path([6, 3]),
        CoxeterGraph.from_edges(3, [(0, 1, 3), (1, 2, 3), (0, 2, 3)]),
        path([3, 5, 3]),
    ],
)
def test_infinite_groups(graph):
    assert classify_finite(graph) is None
    assert group_order(graph) is None


graphs = st.integers(2, 4).flatmap(
    lambda k: st.lists(st.sampled_from([2, 2, 3, 4, 5, 6]), min_size=k * (k - 1) // 2, max_size=k * (k - 1) // 2).map(
        lambda labels: CoxeterGraph.from_edges(
            k, [(i, j, m) for (i, j), m in zip([(i, j) for i in range(k) for j in range(i + 1, k)], labels) if m != 2]
        )
    )
)


@given(graphs)
@settings(max_examples=300, deadline=None)
def test_finite_exactly_when_cosine_matrix_positive_definite(graph):
    eig = np.linalg.eigvalsh(cosine_matrix(graph))
    assert (classify_finite(graph) is not None) == (eig.min() > 1e-9)


@pytest.mark.parametrize("name", sorted(FINITE))
def test_chiswell_of_finite_group_is_reciprocal_order(name):
    g = FINITE[name]
    assert chiswell_chi(g) == Fraction(1, group_order(g))


@given(graphs, graphs)
@settings(max_examples=50, deadline=None)
def test_chiswell_multiplicative_on_disjoint_union(g, h):
    assert chiswell_chi(g.disjoint_union(h)) == chiswell_chi(g) * chiswell_chi(h)


def test_triangle_246():
    g = parse_graph("vertices 3\nedge 1 2 4\nedge 2 3 6\n")
    assert chiswell_chi(g) == Fraction(-1, 24)
    assert gauss_bonnet_volume(g, 2) == SymbolicVolume(Fraction(1, 12), 1)


@pytest.mark.parametrize("p, q, r", [(2, 3, 7), (2, 4, 5), (3, 3, 4), (2, 5, 5)])
def test_triangle_gauss_bonnet_is_angle_defect(p, q, r):
    # area of a hyperbolic triangle with angles pi/p, pi/q, pi/r
    g = CoxeterGraph.from_edges(3, [(0, 1, p), (1, 2, q), (0, 2, r)] if p != 2 else [(1, 2, q), (0, 2, r)])
    area = gauss_bonnet_volume(g, 2).numeric(20).value
    defect = math.pi * (1 - 1 / p - 1 / q - 1 / r)
    assert abs(float(area) - defect) < 1e-12


def test_empty_graph_warns():
    with pytest.warns(UserWarning):
        gauss_bonnet_volume(CoxeterGraph(0), 2)


def test_vertex_limit():
    with pytest.raises(BudgetExceeded):
        chiswell_chi(CoxeterGraph(25))


def test_parse_format_round_trip():
    text = "vertices 4\nedge 1 2 3\nedge 2 3 inf\nedge 3 4 5\n"
    g = parse_graph(text)
    assert format_graph(g) == text
    assert g.label(1, 2) == INF and g.label(0, 3) == 2


@pytest.mark.parametrize(
    "text, exc, line",
    [
        ("edge 1 2 3", ParseError, 1),
        ("vertices 3\nedge 1 4 3", LabelOutOfRange, 2),
        ("vertices 3\n# c\nedge 1 2 1", LabelOutOfRange, 3),
        ("vertices 3\nedge 1 2 3\nedge 2 1 4", DuplicateEdge, 3),
        ("vertices 3\nedge 1 1 3", ParseError, 2),
        ("vertices 3\nedge 1 2 x", ParseError, 2),
        ("vertices 3\nnode 1", ParseError, 2),
        ("", ParseError, None),
    ],
)
def test_parse_errors(text, exc, line):
    with pytest.raises(exc) as info:
        parse_graph(text)
    assert info.value.line == line
