"""Country-paper bipartite networks and their weighted one-mode projection."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations

from .corpus import Corpus, record_countries
from .registry import CountryRegistry


class EmptySelection(ValueError):
    pass


@dataclass(frozen=True)
class BipartiteNetwork:
    """Country and paper partitions; ``incidence`` maps paper id to its countries.

    ``omitted`` counts papers dropped because none of their authors resolved
    to a selected country.
    """

    countries: tuple[str, ...]
    incidence: dict[str, tuple[str, ...]]
    eu: frozenset[str] = frozenset()
    omitted: int = 0

    @property
    def papers(self) -> tuple[str, ...]:
        return tuple(self.incidence)

    @property
    def edges(self) -> list[tuple[str, str]]:
        return [(c, p) for p, cs in self.incidence.items() for c in cs]


@dataclass(frozen=True)
class CountryNetwork:
    """Undirected weighted country graph.

    ``weights`` is keyed by name pairs stored smaller-name-first; isolated
    countries appear in ``nodes`` only.
    """

    nodes: tuple[str, ...]
    weights: dict[tuple[str, str], int]
    eu: frozenset[str] = frozenset()
    _adj: dict[str, tuple[str, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        known = set(self.nodes)
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for (a, b), w in self.weights.items():
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if not a < b:
                raise ValueError(f"edge {(a, b)} not in canonical order")
            if a not in known or b not in known:
                raise ValueError(f"edge {(a, b)} references an unknown node")
            if w < 1:
                raise ValueError(f"edge {(a, b)} has non-positive weight {w}")
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "_adj", {n: tuple(sorted(v)) for n, v in adj.items()})

    @classmethod
    def from_edges(cls, nodes, edges, eu=frozenset()) -> CountryNetwork:
        """Build from ``(a, b, weight)`` triples in any orientation."""
        weights = {}
        for a, b, w in edges:
            key = (a, b) if a < b else (b, a)
            weights[key] = weights.get(key, 0) + w
        return cls(tuple(sorted(nodes)), dict(sorted(weights.items())), frozenset(eu))

    def weight(self, a: str, b: str) -> int:
        return self.weights.get((a, b) if a < b else (b, a), 0)

    def neighbors(self, node: str) -> tuple[str, ...]:
        return self._adj[node]

    def edges(self) -> list[tuple[str, str, int]]:
        return [(a, b, w) for (a, b), w in sorted(self.weights.items())]

    def scaled(self, factor: int) -> CountryNetwork:
        return CountryNetwork(self.nodes, {k: w * factor for k, w in self.weights.items()}, self.eu)


@dataclass(frozen=True)
class DegreeDistribution:
    degrees: dict[str, int]
    histogram: tuple[int, ...]  # histogram[k] = nodes of degree k, k = 0..N-1


def induce_bipartite(corpus: Corpus, registry: CountryRegistry) -> BipartiteNetwork:
    selection = registry.selection
    if not selection:
        raise EmptySelection("registry selection is empty")
    selected = set(selection)
    incidence: dict[str, tuple[str, ...]] = {}
    omitted = 0
    for r in corpus.records:
        cs = tuple(c for c in record_countries(r, registry) if c in selected)
        if cs:
            incidence[r.id] = cs
        else:
            omitted += 1
    eu = frozenset(c for c in selection if registry.is_eu(c))
    return BipartiteNetwork(tuple(sorted(selection)), incidence, eu, omitted)


def project_one_mode(bip: BipartiteNetwork) -> CountryNetwork:
    """Link two countries iff they share a paper; weight = number of shared papers."""
    counts: Counter[tuple[str, str]] = Counter()
    for cs in bip.incidence.values():
        counts.update(combinations(sorted(set(cs)), 2))
    return CountryNetwork(tuple(sorted(bip.countries)), dict(sorted(counts.items())), bip.eu)


def degree_distribution(net: CountryNetwork) -> DegreeDistribution:
    degrees = {n: len(net.neighbors(n)) for n in net.nodes}
    hist = [0] * max(len(net.nodes), 1)
    for d in degrees.values():
        hist[d] += 1
    return DegreeDistribution(degrees, tuple(hist))


def components(net: CountryNetwork) -> list[frozenset[str]]:
    """Connected components, ordered by their alphabetically first member."""
    seen: set[str] = set()
    out = []
    for start in net.nodes:
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in net.neighbors(u):
                if v not in comp:
                    comp.add(v)
                    queue.append(v)
        seen |= comp
        out.append(frozenset(comp))
    return sorted(out, key=min)
