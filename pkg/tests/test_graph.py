from __future__ import annotations

import json
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURE_A
from helpers import corpus_of, paper
from ircnet.corpus import filter_irc
from ircnet.gender import Category, partition_corpus
from ircnet.graph import (
    BipartiteNetwork,
    CountryNetwork,
    EmptySelection,
    components,
    degree_distribution,
    induce_bipartite,
    project_one_mode,
)
from ircnet.registry import load_registry
from oracles import shared_paper_counts

EXPECTED = json.loads((FIXTURE_A / "expected.json").read_text(encoding="utf-8"))
FX_SEL = ("USA", "Germany", "France")


def _triangle(extra=()):
    return CountryNetwork.from_edges(["A", "B", "C", *extra], [("A", "B", 1), ("B", "C", 1), ("A", "C", 1)])


def test_one_paper_two_edges(registry):
    bip = induce_bipartite(corpus_of(paper("p", 2021, ["Germany", "USA"])), registry)
    assert sorted(bip.edges) == [("Germany", "p"), ("USA", "p")]


def test_same_country_authors_give_one_edge(registry):
    bip = induce_bipartite(corpus_of(paper("p", 2021, ["Germany", "Germany"])), registry)
    assert bip.edges == [("Germany", "p")]


def test_papers_without_selected_country_are_omitted(registry):
    reg = registry.with_selection(["Germany", "USA"])
    c = corpus_of(paper("p", 2021, ["Germany", "USA"]), paper("q", 2021, ["France", "Spain"]))
    bip = induce_bipartite(c, reg)
    assert bip.papers == ("p",) and bip.omitted == 1
    assert bip.countries == ("Germany", "USA")


def test_empty_selection(registry):
    with pytest.raises(EmptySelection):
        induce_bipartite(corpus_of(), registry.with_selection([]))


def test_bipartite_edges_cross_partitions(fx, registry):
    bip = induce_bipartite(fx, registry)
    for c, p in bip.edges:
        assert c in bip.countries and p in bip.papers


def test_fixture_a_incidence(fx, registry):
    reg = registry.with_selection(FX_SEL)
    bip = induce_bipartite(filter_irc(fx, registry), reg)
    assert {p: sorted(cs) for p, cs in bip.incidence.items()} == EXPECTED["incidence_2021"]


def test_projection_counts_shared_papers(registry):
    c = corpus_of(paper("a", 2021, ["Germany", "USA"]), paper("b", 2021, ["USA", "Germany"]))
    net = project_one_mode(induce_bipartite(c, registry.with_selection(["Germany", "USA"])))
    assert net.edges() == [("Germany", "USA", 2)]


def test_three_country_paper_is_a_triangle(registry):
    reg = registry.with_selection(["Germany", "USA", "France"])
    net = project_one_mode(induce_bipartite(corpus_of(paper("a", 2021, ["Germany", "USA", "France"])), reg))
    assert net.edges() == [("France", "Germany", 1), ("France", "USA", 1), ("Germany", "USA", 1)]


def test_fixture_a_weights(fx, registry):
    reg = registry.with_selection(FX_SEL)
    net = project_one_mode(induce_bipartite(filter_irc(fx, registry), reg))
    assert [list(e) for e in net.edges()] == EXPECTED["weights_2021_Total"]
    assert list(degree_distribution(net).histogram) == EXPECTED["degree_histogram_2021_Total"]


def test_isolated_countries_stay(registry):
    reg = registry.with_selection(["Germany", "USA", "Malta"])
    net = project_one_mode(induce_bipartite(corpus_of(paper("a", 2021, ["Germany", "USA"])), reg))
    assert net.nodes == ("Germany", "Malta", "USA")
    assert net.neighbors("Malta") == ()


def test_network_validation():
    with pytest.raises(ValueError):
        CountryNetwork(("A", "B"), {("B", "A"): 1})
    with pytest.raises(ValueError):
        CountryNetwork(("A",), {("A", "A"): 1})
    with pytest.raises(ValueError):
        CountryNetwork(("A", "B"), {("A", "B"): 0})
    with pytest.raises(ValueError):
        CountryNetwork(("A",), {("A", "B"): 1})


def test_network_symmetric_lookup():
    net = CountryNetwork.from_edges(["B", "A"], [("B", "A", 3)])
    assert net.weight("A", "B") == net.weight("B", "A") == 3
    assert net.weight("A", "A") == 0


def test_degree_triangle():
    dd = degree_distribution(_triangle())
    assert dd.degrees == {"A": 2, "B": 2, "C": 2}
    assert dd.histogram == (0, 0, 3)


def test_degree_star():
    net = CountryNetwork.from_edges("HABCD", [("H", x, 1) for x in "ABCD"])
    dd = degree_distribution(net)
    assert dd.degrees["H"] == 4 and all(dd.degrees[x] == 1 for x in "ABCD")
    assert dd.histogram == (0, 4, 0, 0, 1)


def test_components_triangle():
    assert components(_triangle()) == [frozenset("ABC")]
    assert components(_triangle(extra=["D"])) == [frozenset("ABC"), frozenset("D")]


def test_fixture_a_only_female_components(fx, fx_lexicon, registry):
    reg = registry.with_selection(FX_SEL)
    parts = partition_corpus(filter_irc(fx, registry), fx_lexicon)
    net = project_one_mode(induce_bipartite(parts[Category.ONLY_FEMALE], reg))
    assert [sorted(c) for c in components(net)] == EXPECTED["components_2021_OnlyFemale"]


def _random_papers(rng, n_papers, countries):
    return {f"p{i:03d}": tuple(rng.sample(countries, rng.randint(1, min(5, len(countries))))) for i in range(n_papers)}


@pytest.mark.parametrize("seed", range(10))
def test_projection_matches_pair_scan(seed):
    rng = random.Random(seed)
    countries = [f"C{i:02d}" for i in range(rng.randint(2, 20))]
    papers = _random_papers(rng, rng.randint(0, 500), countries)
    net = project_one_mode(BipartiteNetwork(tuple(countries), papers))
    assert net.weights == shared_paper_counts(papers)
    assert sum(net.weights.values()) == sum(comb(len(cs), 2) for cs in papers.values())


_papers = st.dictionaries(
    st.text("abcdefgh", min_size=1, max_size=4),
    st.sets(st.sampled_from(["A", "B", "C", "D", "E", "F"]), min_size=1).map(tuple),
    max_size=40,
)


@settings(max_examples=200, deadline=None)
@given(_papers, st.randoms(use_true_random=False))
def test_projection_properties(papers, rnd):
    countries = ("A", "B", "C", "D", "E", "F")
    net = project_one_mode(BipartiteNetwork(countries, papers))
    assert sum(net.weights.values()) == sum(comb(len(cs), 2) for cs in papers.values())
    items = list(papers.items())
    rnd.shuffle(items)
    assert project_one_mode(BipartiteNetwork(countries, dict(items))).weights == net.weights
    dd = degree_distribution(net)
    assert sum(dd.degrees.values()) == 2 * len(net.weights)
    comps = components(net)
    assert sorted(n for c in comps for n in c) == sorted(net.nodes)
    for a, b in net.weights:
        assert next(c for c in comps if a in c) is next(c for c in comps if b in c)


def test_random_corpus_projection_matches_oracle():
    from ircnet.synth import random_corpus

    registry = load_registry()
    c = filter_irc(random_corpus(500, 3), registry)
    bip = induce_bipartite(c, registry)
    assert project_one_mode(bip).weights == shared_paper_counts(bip.incidence)
