import itertools
from fractions import Fraction

import numpy as np
import pytest

from contextlab._internal import graphbounds as gb
from contextlab._internal.error import DimensionError, GraphBudgetError, LinearProgramError
from contextlab._internal.scenario import fully_contextual_c_scenario, kcbs_twin_scenario

KCBS = kcbs_twin_scenario()
C4 = fully_contextual_c_scenario()

C4_EDGES = [
    (0, 1), (0, 2), (0, 8), (0, 9), (1, 2), (1, 4), (1, 5), (1, 7), (2, 3), (2, 4), (3, 4),
    (3, 7), (3, 9), (4, 5), (5, 6), (5, 9), (6, 7), (6, 8), (6, 9), (7, 8), (8, 9),
]


def random_graph(n, p, rng):
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    return gb.OrthogonalityGraph(n, edges)


def naive_independence_number(g):
    best = 0
    for mask in range(1 << g.n_vertices):
        members = [v for v in range(g.n_vertices) if mask >> v & 1]
        if len(members) <= best:
            continue
        if all(not g.has_edge(a, b) for a, b in itertools.combinations(members, 2)):
            best = len(members)
    return best


def test_graph_validation():
    with pytest.raises(DimensionError):
        gb.OrthogonalityGraph(3, [(1, 1)])
    with pytest.raises(DimensionError):
        gb.OrthogonalityGraph(3, [(0, 3)])
    g = gb.OrthogonalityGraph(3, [(2, 0), (0, 2)])
    assert g.sorted_edges() == [(0, 2)]


def test_c4_orthogonality_graph():
    g = gb.build_graph(C4.vectors)
    assert g.sorted_edges() == C4_EDGES


def test_kcbs_graph_contains_every_context():
    g = gb.build_graph(KCBS.vectors)
    for ctx in KCBS.contexts:
        for a, b in itertools.combinations(ctx, 2):
            assert g.has_edge(a, b)
    cliques = gb.maximal_cliques(g)
    for ctx in KCBS.contexts:
        assert any(set(ctx) <= set(q) for q in cliques)


def test_identical_vectors_are_not_adjacent():
    g = gb.build_graph([C4.vectors[0], C4.vectors[0]])
    assert g.sorted_edges() == []


def test_build_graph_rejects_mixed_dimensions():
    with pytest.raises(DimensionError):
        gb.build_graph([C4.vectors[0], KCBS.vectors[0]])
    with pytest.raises(DimensionError):
        gb.build_graph(C4.vectors, tol=0)


@pytest.mark.parametrize("graph, alpha, alpha_star", [
    (gb.pentagon_graph(), 2, Fraction(5, 2)),
    (gb.build_graph(C4.vectors), 3, Fraction(7, 2)),
    (gb.build_graph(KCBS.vectors), 2, Fraction(5, 2)),
], ids=['pentagon', 'c4', 'kcbs-twin'])
def test_bound_hierarchy(graph, alpha, alpha_star):
    assert gb.independence_number(graph) == alpha
    value, weights = gb.fractional_packing(graph)
    assert value == alpha_star
    assert sum(weights) == value
    assert abs(gb.fractional_packing_number(graph) - float(alpha_star)) < 1e-9


def test_packing_weights_respect_every_clique():
    g = gb.build_graph(C4.vectors)
    cliques = gb.maximal_cliques(g)
    value, weights = gb.fractional_packing(g, cliques)
    for q in cliques:
        assert sum(weights[v] for v in q) <= 1
    assert all(0 <= w <= 1 for w in weights)


def test_maximal_cliques_fixtures():
    assert gb.maximal_cliques(gb.pentagon_graph()) == [[0, 1], [0, 4], [1, 2], [2, 3], [3, 4]]
    assert gb.maximal_cliques(gb.complete_graph(4)) == [[0, 1, 2, 3]]
    assert gb.maximal_cliques(gb.OrthogonalityGraph(3)) == [[0], [1], [2]]


def test_c4_maximal_cliques():
    assert gb.maximal_cliques(gb.build_graph(C4.vectors)) == [
        [0, 1, 2], [0, 8, 9], [1, 2, 4], [1, 4, 5], [1, 7], [2, 3, 4], [3, 7], [3, 9],
        [5, 6, 9], [6, 7, 8], [6, 8, 9],
    ]


@pytest.mark.parametrize("n", [1, 4, 7])
def test_edgeless_graph(n):
    g = gb.OrthogonalityGraph(n)
    assert gb.independence_number(g) == n
    assert gb.fractional_packing_number(g) == n


def test_empty_graph():
    g = gb.OrthogonalityGraph(0)
    assert gb.independence_number(g) == 0
    assert gb.fractional_packing_number(g) == 0


def test_independence_number_matches_subset_scan():
    rng = np.random.default_rng(7)
    for n in (5, 8, 11, 14, 16):
        for p in (0.2, 0.5, 0.8):
            g = random_graph(n, p, rng)
            assert gb.independence_number(g) == naive_independence_number(g)


def test_sandwich_on_random_graphs():
    rng = np.random.default_rng(8)
    for _ in range(50):
        g = random_graph(int(rng.integers(1, 13)), rng.uniform(0.1, 0.9), rng)
        assert gb.independence_number(g) <= gb.fractional_packing_number(g) + 1e-9


def test_vertex_budget():
    with pytest.raises(GraphBudgetError):
        gb.independence_number(gb.OrthogonalityGraph(gb.MAX_VERTICES + 1))
    with pytest.raises(GraphBudgetError):
        gb.maximal_cliques(gb.OrthogonalityGraph(gb.MAX_VERTICES + 1))


def test_simplex_reports_unbounded():
    tableau = gb.SimplexTableau([[1, -1]], [1], [1, 1])
    assert tableau.solve() == 'unbounded'
    with pytest.raises(LinearProgramError):
        gb.SimplexTableau([[1]], [-1], [1])


def test_simplex_small_program():
    # max x + y  s.t.  x + 2y <= 4, 3x + y <= 6
    tableau = gb.SimplexTableau([[1, 2], [3, 1]], [4, 6], [1, 1])
    assert tableau.solve() == 'optimal'
    assert tableau.value == Fraction(14, 5)
    assert tableau.primal_solution() == [Fraction(8, 5), Fraction(6, 5)]


def test_bound_report_json():
    report = gb.bound_report(gb.build_graph(C4.vectors))
    out = report.to_json()
    assert out['alpha'] == 3
    assert out['alpha_star'] == 3.5
    assert len(out['cliques']) == 11


def test_extra_edges():
    g = gb.build_graph(C4.vectors)
    assert gb.extra_edges(g, C4.contexts) == []
    assert gb.extra_edges(gb.pentagon_graph(), [[0, 1], [1, 2]]) == [(0, 4), (2, 3), (3, 4)]
