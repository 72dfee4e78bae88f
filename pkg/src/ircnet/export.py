"""GraphML, DOT and CSV serialization for country networks and spanning trees.

Output is deterministic: nodes in name order, edges in canonical
``(a, b)`` order for networks and merge order for trees, fixed attribute
keys, ``\\n`` line endings. Files are written through a temporary file and
renamed into place.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Iterable
from xml.sax.saxutils import escape, quoteattr

from .graph import CountryNetwork
from .taxonomy import SpanningTree

NETWORK_FORMATS = {".graphml": "graphml", ".dot": "dot", ".gv": "dot", ".csv": "csv"}


class ExportError(OSError):
    pass


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fp:
                fp.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc


def _fmt_distance(d: Fraction) -> str:
    return repr(float(d))


def _graphml(
    nodes: Iterable[str],
    eu: frozenset[str],
    edges: Iterable[tuple[str, str, int, Fraction | None]],
    extra_node: dict[str, dict[str, int]] | None = None,
) -> str:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns"'
        ' xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance"'
        ' xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns'
        ' http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">',
        '  <key id="name" for="node" attr.name="name" attr.type="string"/>',
        '  <key id="is_eu" for="node" attr.name="is_eu" attr.type="boolean"/>',
    ]
    if extra_node:
        out.append('  <key id="degree" for="node" attr.name="degree" attr.type="int"/>')
    out.append('  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>')
    edges = list(edges)
    with_distance = any(e[3] is not None for e in edges)
    if with_distance:
        out.append('  <key id="distance" for="edge" attr.name="distance" attr.type="double"/>')
    out.append('  <graph id="G" edgedefault="undirected">')
    for n in nodes:
        data = f'<data key="name">{escape(n)}</data><data key="is_eu">{"true" if n in eu else "false"}</data>'
        if extra_node:
            data += f'<data key="degree">{extra_node["degree"][n]}</data>'
        out.append(f"    <node id={quoteattr(n)}>{data}</node>")
    for a, b, w, d in edges:
        data = f'<data key="weight">{w}</data>'
        if d is not None:
            data += f'<data key="distance">{_fmt_distance(d)}</data>'
        out.append(f"    <edge source={quoteattr(a)} target={quoteattr(b)}>{data}</edge>")
    out += ["  </graph>", "</graphml>", ""]
    return "\n".join(out)


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot(
    name: str,
    nodes: Iterable[str],
    eu: frozenset[str],
    edges: Iterable[tuple[str, str, int, Fraction | None]],
    degrees: dict[str, int] | None = None,
) -> str:
    out = [f"graph {_dot_id(name)} {{"]
    for n in nodes:
        attrs = f'is_eu={"true" if n in eu else "false"}'
        if degrees is not None:
            attrs += f", degree={degrees[n]}"
        out.append(f"  {_dot_id(n)} [{attrs}];")
    for a, b, w, d in edges:
        attrs = f"weight={w}"
        if d is not None:
            attrs += f', distance="{_fmt_distance(d)}"'
        out.append(f"  {_dot_id(a)} -- {_dot_id(b)} [{attrs}];")
    out += ["}", ""]
    return "\n".join(out)


def _csv(header: list[str], rows: Iterable[Iterable[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _net_edges(net: CountryNetwork):
    return [(a, b, w, None) for a, b, w in net.edges()]


def _tree_edges(tree: SpanningTree):
    out = []
    for a, b, d in tree.edges:
        inv = 1 / d
        if inv.denominator != 1:
            raise ValueError(f"tree edge {(a, b)} distance {d} is not the inverse of an integer weight")
        out.append((a, b, inv.numerator, d))
    return out


def network_graphml(net: CountryNetwork) -> str:
    return _graphml(net.nodes, net.eu, _net_edges(net))


def network_dot(net: CountryNetwork, name: str = "network") -> str:
    return _dot(name, net.nodes, net.eu, _net_edges(net))


def network_csv(net: CountryNetwork) -> str:
    return _csv(["country_a", "country_b", "weight"], net.edges())


def tree_graphml(tree: SpanningTree, eu: frozenset[str] = frozenset()) -> str:
    return _graphml(sorted(tree.nodes), eu, _tree_edges(tree), {"degree": tree.degrees()})


def tree_dot(tree: SpanningTree, eu: frozenset[str] = frozenset(), name: str = "mst") -> str:
    return _dot(name, sorted(tree.nodes), eu, _tree_edges(tree), tree.degrees())


def tree_csv(tree: SpanningTree) -> str:
    return _csv(
        ["country_a", "country_b", "weight", "distance"],
        [(a, b, w, str(d)) for a, b, w, d in _tree_edges(tree)],
    )


def _format_for(path: Path) -> str:
    fmt = NETWORK_FORMATS.get(path.suffix.lower())
    if fmt is None:
        raise ValueError(f"cannot infer export format from {path.name!r}; use .graphml, .dot or .csv")
    return fmt


def export_network(net: CountryNetwork, path: str | Path, name: str = "network") -> None:
    path = Path(path)
    fmt = _format_for(path)
    text = {"graphml": network_graphml, "csv": network_csv}.get(fmt, lambda n: network_dot(n, name))(net)
    write_atomic(path, text)


def export_tree(tree: SpanningTree, path: str | Path, eu: frozenset[str] = frozenset(), name: str = "mst") -> None:
    path = Path(path)
    fmt = _format_for(path)
    if fmt == "graphml":
        text = tree_graphml(tree, eu)
    elif fmt == "dot":
        text = tree_dot(tree, eu, name)
    else:
        text = tree_csv(tree)
    write_atomic(path, text)
