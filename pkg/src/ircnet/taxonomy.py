"""Distance matrices, single-link spanning trees and tree-motif coefficients.

Distances are exact: ``d = Fraction(1, w)``. Missing links carry
``math.inf``, which compares greater than every finite distance and never
takes part in a merge.

Single-link agglomeration repeatedly merges the two clusters whose closest
members are nearest. Equal distances are common (``1/w`` over integers), so
each candidate merge is keyed by ``(distance, a, b)`` where ``(a, b)`` is the
realizing country pair in name order; the smallest key wins. The edges that
realize the merges form the minimal spanning tree.
"""

from __future__ import annotations

import csv
import io
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .gender import CATEGORIES, Category
from .graph import CountryNetwork

Distance = Union[Fraction, float]
INF = math.inf
MISSING_CELL = "—"


class Disconnected(Exception):
    """No spanning tree exists; ``components`` partitions the nodes."""

    def __init__(self, components: list[frozenset[str]]):
        self.components = components
        sizes = ", ".join(str(len(c)) for c in components)
        super().__init__(f"network is disconnected into {len(components)} components (sizes {sizes})")


@dataclass(frozen=True)
class DistanceMatrix:
    nodes: tuple[str, ...]
    d: tuple[tuple[Distance, ...], ...]

    @property
    def n(self) -> int:
        return len(self.nodes)

    def get(self, a: str, b: str) -> Distance:
        i, j = self.nodes.index(a), self.nodes.index(b)
        return self.d[i][j]


@dataclass(frozen=True)
class Merge:
    left: tuple[str, ...]
    right: tuple[str, ...]
    distance: Fraction
    edge: tuple[str, str]


@dataclass(frozen=True)
class Dendrogram:
    merges: tuple[Merge, ...]

    @property
    def distances(self) -> list[Fraction]:
        return [m.distance for m in self.merges]

    @property
    def thr(self) -> Fraction | None:
        return self.merges[-1].distance if self.merges else None


@dataclass(frozen=True)
class SpanningTree:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, Fraction], ...]

    @property
    def total_distance(self) -> Fraction:
        return sum((e[2] for e in self.edges), Fraction(0))

    def edge_set(self) -> frozenset[tuple[str, str]]:
        return frozenset((a, b) for a, b, _ in self.edges)

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for a, b, _ in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def degrees(self) -> dict[str, int]:
        return {n: len(v) for n, v in self.adjacency().items()}


@dataclass(frozen=True)
class TreeMetrics:
    n: int
    leaves: int
    diameter: int
    star_ratio: float  # diameter / (n - 1); 1.0 is a pure path
    leaf_ratio: float  # leaves / (n - 1); 1.0 is a pure star


def to_distances(net: CountryNetwork) -> DistanceMatrix:
    idx = {name: i for i, name in enumerate(net.nodes)}
    n = len(net.nodes)
    rows: list[list[Distance]] = [[INF] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = Fraction(0)
    for (a, b), w in net.weights.items():
        if w < 1:
            raise ValueError(f"weight {w} on {(a, b)} is below 1")
        i, j = idx[a], idx[b]
        rows[i][j] = rows[j][i] = Fraction(1, w)
    return DistanceMatrix(net.nodes, tuple(tuple(r) for r in rows))


def single_link_mst(dm: DistanceMatrix) -> tuple[SpanningTree, Dendrogram]:
    """Agglomerate singletons by single linkage; the merge edges form the MST.

    Raises :class:`Disconnected` when clusters remain but no finite distance
    joins any two of them.
    """
    n = dm.n
    if n < 2:
        raise ValueError("single-link clustering needs at least two nodes")
    names = dm.nodes
    order = sorted(range(n), key=lambda i: names[i])
    pos = [0] * n
    for p, i in enumerate(order):
        pos[i] = p

    finite = sorted({dm.d[i][j] for i in range(n) for j in range(i + 1, n) if dm.d[i][j] != INF})
    rank = {v: r for r, v in enumerate(finite)}

    # best[c][k]: smallest (rank, pos_a, pos_b) over edges between clusters c and k
    best: dict[int, dict[int, tuple[int, int, int]]] = {i: {} for i in range(n)}
    for i in range(n):
        row = dm.d[i]
        for j in range(i + 1, n):
            v = row[j]
            if v == INF:
                continue
            if v <= 0 or v != dm.d[j][i]:
                raise ValueError(f"invalid distance between {names[i]!r} and {names[j]!r}")
            a, b = (pos[i], pos[j]) if pos[i] < pos[j] else (pos[j], pos[i])
            best[i][j] = best[j][i] = (rank[v], a, b)

    members = {i: [i] for i in range(n)}
    owner = list(range(n))
    merges: list[Merge] = []
    edges: list[tuple[str, str, Fraction]] = []
    for _ in range(n - 1):
        key = min((min(row.values()) for row in best.values() if row), default=None)
        if key is None:
            comps = [frozenset(names[m] for m in ms) for ms in members.values()]
            raise Disconnected(sorted(comps, key=min))
        r, pa, pb = key
        a, b = order[pa], order[pb]
        ca, cb = owner[a], owner[b]
        dist = finite[r]
        merges.append(
            Merge(
                tuple(sorted(names[m] for m in members[ca])),
                tuple(sorted(names[m] for m in members[cb])),
                dist,
                (names[a], names[b]),
            )
        )
        edges.append((names[a], names[b], dist))

        # fold cb into ca; single linkage keeps the smaller key per neighbour
        row_a, row_b = best[ca], best.pop(cb)
        del row_a[cb]
        for k, v in row_b.items():
            if k == ca:
                continue
            other = best[k]
            del other[cb]
            cur = row_a.get(k)
            if cur is None or v < cur:
                row_a[k] = other[ca] = v
        for m in members[cb]:
            owner[m] = ca
        members[ca].extend(members.pop(cb))

    return SpanningTree(names, tuple(edges)), Dendrogram(tuple(merges))


def _validate_tree(tree: SpanningTree) -> dict[str, list[str]]:
    n = len(tree.nodes)
    if n < 2:
        raise ValueError("tree metrics need at least two nodes")
    if len(tree.edges) != n - 1:
        raise ValueError(f"a tree on {n} nodes has {n - 1} edges, got {len(tree.edges)}")
    adj = tree.adjacency()
    if len(_bfs_hops(adj, tree.nodes[0])) != n:
        raise ValueError("edges do not span the nodes")
    return adj


def _bfs_hops(adj: Mapping[str, Sequence[str]], start: str) -> dict[str, int]:
    hops = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in hops:
                hops[v] = hops[u] + 1
                queue.append(v)
    return hops


def tree_metrics(tree: SpanningTree) -> TreeMetrics:
    """Leaf count and hop diameter (BFS from every node) with their ratios."""
    adj = _validate_tree(tree)
    n = len(tree.nodes)
    leaves = sum(1 for v in adj.values() if len(v) == 1)
    diameter = max(max(_bfs_hops(adj, s).values()) for s in tree.nodes)
    return TreeMetrics(n, leaves, diameter, diameter / (n - 1), leaves / (n - 1))


@dataclass(frozen=True)
class DiameterTable:
    years: tuple[int, ...]
    categories: tuple[Category, ...]
    cells: dict[tuple[int, Category], int | None]

    def rows(self) -> list[list[str]]:
        out = [["Authorship Category", *(str(y) for y in self.years)]]
        for c in self.categories:
            row = [c.value]
            for y in self.years:
                v = self.cells.get((y, c))
                row.append(MISSING_CELL if v is None else str(v))
            out.append(row)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(self.rows())
        return buf.getvalue()

    def to_markdown(self) -> str:
        rows = self.rows()
        lines = ["| " + " | ".join(rows[0]) + " |", "|" + "---|" * len(rows[0])]
        lines += ["| " + " | ".join(r) + " |" for r in rows[1:]]
        return "\n".join(lines) + "\n"


def diameter_table(
    trees: Mapping[tuple[int, Category], SpanningTree | None],
    years: Iterable[int] | None = None,
    categories: Iterable[Category] = CATEGORIES,
) -> DiameterTable:
    """Hop diameters by category (rows) and year (columns); ``None`` trees render as a dash."""
    cats = tuple(c for c in CATEGORIES if c in set(categories))
    yrs = tuple(sorted(set(years) if years is not None else {y for y, _ in trees}))
    cells: dict[tuple[int, Category], int | None] = {}
    for y in yrs:
        for c in cats:
            t = trees.get((y, c))
            cells[(y, c)] = None if t is None else tree_metrics(t).diameter
    return DiameterTable(yrs, cats, cells)
