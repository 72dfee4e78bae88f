from __future__ import annotations

import json
import math
import random
from collections import Counter
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURE_A
from ircnet.corpus import filter_irc
from ircnet.gender import CATEGORIES, Category, partition_corpus
from ircnet.graph import CountryNetwork, induce_bipartite, project_one_mode
from ircnet.taxonomy import (
    Disconnected,
    DistanceMatrix,
    SpanningTree,
    diameter_table,
    single_link_mst,
    to_distances,
    tree_metrics,
)
from oracles import brute_force_mst_total, floyd_warshall_diameter, greedy_forest_total, random_connected_graph

EXPECTED = json.loads((FIXTURE_A / "expected.json").read_text(encoding="utf-8"))


def _mst(nodes, edges):
    return single_link_mst(to_distances(CountryNetwork.from_edges(nodes, edges)))


def star(n):
    nodes = [f"N{i:02d}" for i in range(n)]
    return SpanningTree(tuple(nodes), tuple((nodes[0], x, Fraction(1)) for x in nodes[1:]))


def path(n):
    nodes = [f"N{i:02d}" for i in range(n)]
    return SpanningTree(tuple(nodes), tuple((nodes[i], nodes[i + 1], Fraction(1)) for i in range(n - 1)))


def _fixture_net(fx, registry, lexicon=None, category=Category.TOTAL):
    reg = registry.with_selection(["USA", "Germany", "France"])
    c = filter_irc(fx, registry)
    if lexicon is not None:
        c = partition_corpus(c, lexicon)[category]
    return project_one_mode(induce_bipartite(c, reg))


# --- distances ------------------------------------------------------------------


def test_reciprocal_distances():
    dm = to_distances(CountryNetwork.from_edges("ABC", [("A", "B", 1), ("A", "C", 4)]))
    assert dm.get("A", "B") == 1 and dm.get("A", "C") == Fraction(1, 4) == 0.25
    assert dm.get("B", "C") == math.inf
    assert dm.get("A", "A") == 0
    for i in range(dm.n):
        for j in range(dm.n):
            assert dm.d[i][j] == dm.d[j][i]


def test_fixture_a_distance_matrix(fx, registry):
    dm = to_distances(_fixture_net(fx, registry))
    exp = EXPECTED["distances_2021_Total"]
    assert list(dm.nodes) == exp["nodes"]
    assert [[Fraction(v) for v in row] for row in exp["d"]] == [list(row) for row in dm.d]


# --- single link ------------------------------------------------------------------


def test_two_nodes():
    tree, dend = _mst("AB", [("A", "B", 4)])
    assert tree.edges == (("A", "B", Fraction(1, 4)),)
    assert len(dend.merges) == 1 and dend.thr == Fraction(1, 4)


def test_three_node_line():
    tree, dend = _mst("ABC", [("A", "B", 3), ("B", "C", 2)])
    assert tree.edge_set() == {("A", "B"), ("B", "C")}
    assert dend.distances == [Fraction(1, 3), Fraction(1, 2)]
    assert dend.thr == Fraction(1, 2)
    # all three spanning trees of the triangle closure, scored by hand
    assert brute_force_mst_total(list("ABC"), [("A", "B", 3), ("B", "C", 2)]) == tree.total_distance


def test_merge_records_clusters():
    _, dend = _mst("ABCD", [("A", "B", 5), ("C", "D", 4), ("B", "C", 1)])
    m = dend.merges
    assert (m[0].left, m[0].right, m[0].edge) == (("A",), ("B",), ("A", "B"))
    assert (m[1].left, m[1].right) == (("C",), ("D",))
    assert {m[2].left, m[2].right} == {("A", "B"), ("C", "D")} and m[2].edge == ("B", "C")


def test_tie_break_prefers_smaller_name_pair():
    tree, _ = _mst("ABC", [("A", "B", 2), ("A", "C", 2), ("B", "C", 2)])
    assert [e[:2] for e in tree.edges] == [("A", "B"), ("A", "C")]


def test_fixture_a_total_tree(fx, registry):
    tree, dend = single_link_mst(to_distances(_fixture_net(fx, registry)))
    exp = EXPECTED["mst_2021_Total"]
    assert [[a, b, str(d)] for a, b, d in tree.edges] == exp["edges"]
    assert str(dend.thr) == exp["thr"]
    m = tree_metrics(tree)
    assert (m.diameter, m.leaves) == (exp["diameter"], exp["leaves"])


def test_fixture_a_female_tree_tie(fx, fx_lexicon, registry):
    tree, dend = single_link_mst(to_distances(_fixture_net(fx, registry, fx_lexicon, Category.FEMALE)))
    assert [[a, b, str(d)] for a, b, d in tree.edges] == EXPECTED["mst_2021_Female"]["edges"]


def test_disconnected_carries_components():
    with pytest.raises(Disconnected) as info:
        _mst("ABCD", [("A", "B", 1), ("C", "D", 2)])
    assert info.value.components == [frozenset("AB"), frozenset("CD")]


def test_isolated_node_is_disconnected():
    with pytest.raises(Disconnected) as info:
        _mst("ABC", [("A", "B", 1)])
    assert info.value.components == [frozenset("AB"), frozenset("C")]


def test_needs_two_nodes():
    with pytest.raises(ValueError):
        single_link_mst(DistanceMatrix(("A",), ((Fraction(0),),)))


def test_rejects_asymmetric_matrix():
    d = ((Fraction(0), Fraction(1)), (Fraction(1, 2), Fraction(0)))
    with pytest.raises(ValueError):
        single_link_mst(DistanceMatrix(("A", "B"), d))


@pytest.mark.parametrize("seed", range(30))
def test_optimal_against_brute_force(seed):
    rng = random.Random(seed)
    nodes, edges = random_connected_graph(rng, rng.randint(2, 6))
    tree, _ = _mst(nodes, edges)
    assert tree.total_distance == brute_force_mst_total(nodes, edges)


@pytest.mark.parametrize("seed", range(30))
def test_matches_greedy_forest_and_scipy(seed):
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import minimum_spanning_tree

    rng = random.Random(1000 + seed)
    nodes, edges = random_connected_graph(rng, rng.randint(2, 12))
    tree, _ = _mst(nodes, edges)
    total, _ = greedy_forest_total(nodes, edges)
    assert tree.total_distance == total
    idx = {n: i for i, n in enumerate(nodes)}
    m = [[0.0] * len(nodes) for _ in nodes]
    for a, b, w in edges:
        m[idx[a]][idx[b]] = 1.0 / w
    assert math.isclose(minimum_spanning_tree(csr_matrix(m)).sum(), float(total))


_graphs = st.builds(
    lambda seed, n, dens: random_connected_graph(random.Random(seed), n, density=dens),
    st.integers(0, 2**32),
    st.integers(2, 12),
    st.floats(0, 1),
)


@settings(max_examples=200, deadline=None)
@given(_graphs)
def test_duality_and_bounds(graph):
    nodes, edges = graph
    tree, dend = _mst(nodes, edges)
    n = len(nodes)
    assert len(tree.edges) == len(dend.merges) == n - 1
    assert Counter(dend.distances) == Counter(d for *_, d in tree.edges)
    assert dend.distances == sorted(dend.distances)
    assert dend.thr == max(d for *_, d in tree.edges)
    g = nx.Graph()
    g.add_nodes_from(nodes)
    g.add_edges_from((a, b) for a, b, _ in tree.edges)
    assert nx.is_tree(g)
    m = tree_metrics(tree)
    assert m.diameter == floyd_warshall_diameter(nodes, tree.edges)
    if n > 2:
        assert 2 <= m.diameter <= n - 1
        assert 2 <= m.leaves <= n - 1


@settings(max_examples=100, deadline=None)
@given(_graphs, st.integers(1, 50))
def test_scale_covariance(graph, k):
    nodes, edges = graph
    tree, dend = _mst(nodes, edges)
    tree_k, dend_k = _mst(nodes, [(a, b, w * k) for a, b, w in edges])
    assert tree_k.edge_set() == tree.edge_set()
    assert [d * k for d in dend_k.distances] == dend.distances
    assert dend_k.thr == dend.thr / k


@settings(max_examples=100, deadline=None)
@given(_graphs, st.randoms(use_true_random=False))
def test_deterministic_under_edge_order(graph, rnd):
    nodes, edges = graph
    shuffled = edges[:]
    rnd.shuffle(shuffled)
    a = _mst(nodes, edges)
    b = _mst(list(reversed(nodes)), shuffled)
    assert a == b


# --- metrics ----------------------------------------------------------------------


def test_star_five():
    m = tree_metrics(star(5))
    assert (m.diameter, m.leaves, m.star_ratio, m.leaf_ratio) == (2, 4, 0.5, 1.0)


def test_path_five():
    m = tree_metrics(path(5))
    assert (m.diameter, m.leaves, m.star_ratio, m.leaf_ratio) == (4, 2, 1.0, 0.5)


def test_two_node_tree():
    m = tree_metrics(path(2))
    assert (m.n, m.diameter, m.leaves) == (2, 1, 2)


@pytest.mark.parametrize(
    "tree",
    [
        SpanningTree(("A", "B", "C"), (("A", "B", Fraction(1)),)),
        SpanningTree(("A", "B", "C", "D"), (("A", "B", Fraction(1)), ("B", "A", Fraction(1)), ("C", "D", Fraction(1)))),
        SpanningTree(("A",), ()),
    ],
)
def test_invalid_trees(tree):
    with pytest.raises(ValueError):
        tree_metrics(tree)


# --- table ------------------------------------------------------------------------


def test_table_single_path_cell():
    table = diameter_table({(2021, Category.TOTAL): path(14)})
    assert table.rows() == [
        ["Authorship Category", "2021"],
        ["Total", "13"],
        ["Female", "—"],
        ["OnlyFemale", "—"],
        ["OnlyMale", "—"],
        ["Male", "—"],
    ]


def test_table_format_and_ordering():
    trees = {
        (2021, Category.TOTAL): path(14),
        (2021, Category.ONLY_FEMALE): path(8),
        (2020, Category.ONLY_FEMALE): None,
        (2011, Category.MALE): star(50),
    }
    table = diameter_table(trees, years=[2021, 2011, 2020])
    assert table.years == (2011, 2020, 2021)
    assert [r[0] for r in table.rows()[1:]] == [c.value for c in CATEGORIES]
    assert table.to_csv().splitlines()[:2] == ["Authorship Category,2011,2020,2021", "Total,—,—,13"]
    md = table.to_markdown().splitlines()
    assert md[0] == "| Authorship Category | 2011 | 2020 | 2021 |"
    assert md[4] == "| OnlyFemale | — | — | 7 |"
    assert md[6] == "| Male | 2 | — | — |"


def test_table_category_subset():
    table = diameter_table({(2021, Category.MALE): path(3)}, categories=[Category.MALE, Category.TOTAL])
    assert [r[0] for r in table.rows()[1:]] == ["Total", "Male"]
