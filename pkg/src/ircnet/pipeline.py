"""End-to-end run: records -> categories -> networks -> spanning trees -> reports.

A run is driven by a :class:`PipelineConfig` (JSON file, CLI flags override
keys) and produces a :class:`RunManifest` plus export files under
``output_dir``::

    manifest.json
    diameters.csv / diameters.md
    networks/<year>_<Category>.{graphml,dot,csv}
    trees/<year>_<Category>.{graphml,dot,csv}        (connected slices only)
    networks/<year>_<group>_<Category>.*              (topic split, if configured)

Disconnected slices are recorded in the manifest with their components and
do not stop the run.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from . import __version__
from .corpus import (
    Corpus,
    EmptyCorpus,
    TopicQuery,
    UnknownFormat,
    UnreadableSource,
    country_means,
    covid_split,
    filter_irc_counts,
    ingest_path,
    load_topic_query,
    paused_gc,
    rank_countries,
    subsample,
)
from .export import (
    ExportError,
    network_csv,
    network_dot,
    network_graphml,
    tree_csv,
    tree_dot,
    tree_graphml,
    write_atomic,
)
from .gender import CATEGORIES, Category, GenderLexicon, coverage_stats, load_lexicon, partition_corpus
from .graph import components, degree_distribution, induce_bipartite, project_one_mode
from .registry import CountryRegistry, load_registry
from .taxonomy import Disconnected, SpanningTree, diameter_table, single_link_mst, to_distances, tree_metrics

ALL_FORMATS = ("graphml", "dot", "csv", "md")
BUNDLED = "bundled"


class ConfigInvalid(ValueError):
    pass


class DataError(RuntimeError):
    pass


def parse_years(value: Any) -> tuple[int, int]:
    """Accept ``"2011:2022"``, ``"2021"``, ``[2011, 2022]`` or ``2021``."""
    try:
        if isinstance(value, bool):
            raise TypeError
        if isinstance(value, int):
            return value, value
        if isinstance(value, str):
            parts = value.split(":")
            if len(parts) == 1:
                return int(parts[0]), int(parts[0])
            if len(parts) == 2:
                return int(parts[0]), int(parts[1])
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return int(value[0]), int(value[1])
    except (TypeError, ValueError):
        pass
    raise ConfigInvalid(f"years must look like 'A:B' or [A, B], got {value!r}")


def parse_categories(value: Any) -> tuple[Category, ...]:
    if value is None or value == "all":
        return CATEGORIES
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    try:
        wanted = {Category(v.strip()) for v in value}
    except (ValueError, TypeError, AttributeError):
        raise ConfigInvalid(f"unknown category in {value!r}; expected any of {[c.value for c in CATEGORIES]}") from None
    if not wanted:
        raise ConfigInvalid("categories must not be empty")
    return tuple(c for c in CATEGORIES if c in wanted)


def _int_list(value: Any, name: str) -> tuple[int, ...]:
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    try:
        return tuple(sorted({int(v) for v in value}))
    except (TypeError, ValueError):
        raise ConfigInvalid(f"{name} must be a list of years, got {value!r}") from None


@dataclass(frozen=True)
class PipelineConfig:
    input: str
    format: str = "jsonl"
    registry: str | None = None
    lexicon: str | None = None
    years: tuple[int, int] = (2011, 2022)
    top_k: int | None = 50
    categories: tuple[Category, ...] = CATEGORIES
    topic_query: str | None = None
    topic_years: tuple[int, ...] = (2020, 2021)
    topic_categories: tuple[Category, ...] = (Category.ONLY_FEMALE, Category.ONLY_MALE)
    rank_before_filter: bool = False
    sample: int | None = None
    seed: int | None = None
    formats: tuple[str, ...] = ALL_FORMATS
    output_dir: str = "ircnet-out"
    base_dir: str = field(default=".", compare=False)

    KEYS = (
        "input", "format", "registry", "lexicon", "years", "top_k", "categories", "topic_query",
        "topic_years", "topic_categories", "rank_before_filter", "sample", "seed", "formats", "output_dir",
    )

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], base_dir: str | Path = ".") -> PipelineConfig:
        unknown = sorted(set(data) - set(cls.KEYS))
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {unknown}")
        if not data.get("input"):
            raise ConfigInvalid("config needs 'input'")
        kw: dict[str, Any] = {"input": str(data["input"]), "base_dir": str(base_dir)}
        for key in ("format", "registry", "lexicon", "topic_query", "output_dir"):
            if data.get(key) is not None:
                kw[key] = str(data[key])
        if "years" in data:
            kw["years"] = parse_years(data["years"])
        if "top_k" in data:
            top_k = data["top_k"]
            if top_k is not None and (isinstance(top_k, bool) or not isinstance(top_k, int)):
                raise ConfigInvalid(f"top_k must be an integer or null, got {top_k!r}")
            kw["top_k"] = top_k
        if "categories" in data:
            kw["categories"] = parse_categories(data["categories"])
        if "topic_categories" in data:
            kw["topic_categories"] = parse_categories(data["topic_categories"])
        if "topic_years" in data:
            kw["topic_years"] = _int_list(data["topic_years"], "topic_years")
        if "rank_before_filter" in data:
            kw["rank_before_filter"] = bool(data["rank_before_filter"])
        for key in ("sample", "seed"):
            if data.get(key) is not None:
                if isinstance(data[key], bool) or not isinstance(data[key], int):
                    raise ConfigInvalid(f"{key} must be an integer")
                kw[key] = data[key]
        if "formats" in data:
            fmts = data["formats"]
            if isinstance(fmts, str):
                fmts = [f for f in fmts.split(",") if f.strip()]
            kw["formats"] = tuple(f for f in ALL_FORMATS if f in set(fmts))
            bad = set(fmts) - set(ALL_FORMATS)
            if bad:
                raise ConfigInvalid(f"unknown formats {sorted(bad)}")
        return cls(**kw)

    @classmethod
    def load(cls, path: str | Path, overrides: Mapping[str, Any] | None = None) -> PipelineConfig:
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigInvalid("config must be a JSON object")
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_dict(data, base_dir=path.parent)

    def resolve(self, p: str) -> Path:
        path = Path(p)
        return path if path.is_absolute() else Path(self.base_dir) / path

    @property
    def year_list(self) -> list[int]:
        return list(range(self.years[0], self.years[1] + 1))

    def validate(self) -> None:
        start, end = self.years
        if start > end:
            raise ConfigInvalid(f"year range {start}:{end} is empty")
        if self.top_k is not None and self.top_k < 2:
            raise ConfigInvalid("top_k must be at least 2")
        if self.format.replace("-", "_") not in ("jsonl", "wos_tab"):
            raise ConfigInvalid(f"unknown input format {self.format!r}")
        if self.sample is not None and (self.seed is None or self.sample < 1):
            raise ConfigInvalid("sample needs a positive size and an explicit seed")
        gendered = [c for c in (*self.categories, *(self.topic_categories if self.topic_query else ())) if c is not Category.TOTAL]
        if gendered and not self.lexicon:
            raise ConfigInvalid("gendered categories need a lexicon")
        files = [self.input, self.registry, self.lexicon]
        if self.topic_query and self.topic_query != BUNDLED:
            files.append(self.topic_query)
        for f in files:
            if f is None:
                continue
            p = self.resolve(f)
            if not p.is_file() or not os.access(p, os.R_OK):
                raise ConfigInvalid(f"file not readable: {f}")

    def echo(self) -> dict[str, Any]:
        return {
            "input": self.input,
            "format": self.format,
            "registry": self.registry or BUNDLED,
            "lexicon": self.lexicon,
            "years": f"{self.years[0]}:{self.years[1]}",
            "top_k": self.top_k,
            "categories": [c.value for c in self.categories],
            "topic_query": self.topic_query,
            "topic_years": list(self.topic_years) if self.topic_query else None,
            "topic_categories": [c.value for c in self.topic_categories] if self.topic_query else None,
            "rank_before_filter": self.rank_before_filter,
            "sample": self.sample,
            "seed": self.seed,
            "formats": list(self.formats),
        }


@dataclass
class RunManifest:
    data: dict[str, Any]

    @property
    def partial(self) -> bool:
        return self.data["status"] != "ok"

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"


@dataclass
class SliceResult:
    key: str
    year: int
    category: Category
    group: str | None
    papers: int
    network: Any
    omitted: int
    tree: SpanningTree | None = None
    dendrogram: Any = None
    comps: list = field(default_factory=list)


def _frac(x: Fraction | None) -> str | None:
    return None if x is None else str(x)


def build_slice(corpus: Corpus, registry: CountryRegistry, year: int, category: Category, group: str | None = None) -> SliceResult:
    """Network, components and (when connected) spanning tree for one corpus slice."""
    bip = induce_bipartite(corpus, registry)
    net = project_one_mode(bip)
    key = f"{year}_{category.value}" if group is None else f"{year}_{group}_{category.value}"
    res = SliceResult(key, year, category, group, len(corpus), net, bip.omitted)
    res.comps = components(net)
    if len(net.nodes) >= 2:
        try:
            res.tree, res.dendrogram = single_link_mst(to_distances(net))
        except Disconnected as exc:
            res.comps = exc.components
    return res


def _slice_entry(res: SliceResult) -> dict[str, Any]:
    net = res.network
    entry: dict[str, Any] = {
        "key": res.key,
        "year": res.year,
        "category": res.category.value,
    }
    if res.group is not None:
        entry["group"] = res.group
    entry.update(
        {
            "papers": res.papers,
            "papers_without_selected_country": res.omitted,
            "nodes": len(net.nodes),
            "edges": len(net.weights),
            "total_weight": sum(net.weights.values()),
            "degree_histogram": list(degree_distribution(net).histogram),
            "connected": res.tree is not None,
            "components": [sorted(c) for c in res.comps],
        }
    )
    if res.tree is not None:
        m = tree_metrics(res.tree)
        entry["tree"] = {
            "edges": [[a, b, str(d)] for a, b, d in res.tree.edges],
            "total_distance": str(res.tree.total_distance),
            "thr": _frac(res.dendrogram.thr),
            "merge_sizes": [[len(mg.left), len(mg.right)] for mg in res.dendrogram.merges],
            "metrics": {
                "n": m.n,
                "leaves": m.leaves,
                "diameter": m.diameter,
                "star_ratio": m.star_ratio,
                "leaf_ratio": m.leaf_ratio,
            },
        }
    else:
        entry["tree"] = None
    return entry


def _emit_slice(res: SliceResult, out: Path, formats: tuple[str, ...], written: list[str], errors: list[str]) -> None:
    net = res.network
    jobs = []
    if "graphml" in formats:
        jobs.append((f"networks/{res.key}.graphml", lambda: network_graphml(net)))
    if "dot" in formats:
        jobs.append((f"networks/{res.key}.dot", lambda: network_dot(net, res.key)))
    if "csv" in formats:
        jobs.append((f"networks/{res.key}.csv", lambda: network_csv(net)))
    if res.tree is not None:
        tree, eu = res.tree, net.eu
        if "graphml" in formats:
            jobs.append((f"trees/{res.key}.graphml", lambda: tree_graphml(tree, eu)))
        if "dot" in formats:
            jobs.append((f"trees/{res.key}.dot", lambda: tree_dot(tree, eu, f"mst_{res.key}")))
        if "csv" in formats:
            jobs.append((f"trees/{res.key}.csv", lambda: tree_csv(tree)))
    for rel, render in jobs:
        try:
            write_atomic(out / rel, render())
            written.append(rel)
        except ExportError as exc:
            errors.append(str(exc))


def _load_inputs(config: PipelineConfig) -> tuple[CountryRegistry, GenderLexicon | None, TopicQuery | None]:
    try:
        registry = load_registry(config.resolve(config.registry) if config.registry else None)
        lexicon = load_lexicon(config.resolve(config.lexicon)) if config.lexicon else None
        query = None
        if config.topic_query:
            query = load_topic_query(None if config.topic_query == BUNDLED else config.resolve(config.topic_query))
    except (OSError, ValueError) as exc:
        raise ConfigInvalid(str(exc)) from exc
    return registry, lexicon, query


def run_pipeline(config: PipelineConfig, output_dir: str | Path | None = None) -> RunManifest:
    """Execute the whole pipeline and write exports plus ``manifest.json``.

    Raises :class:`ConfigInvalid` for configuration problems and
    :class:`DataError` when the input cannot be read at all. Per-file write
    failures are collected in the manifest and the run continues.
    """
    with paused_gc():
        return _run(config, output_dir)


def _run(config: PipelineConfig, output_dir: str | Path | None) -> RunManifest:
    config.validate()
    out = Path(output_dir) if output_dir is not None else config.resolve(config.output_dir)
    registry, lexicon, query = _load_inputs(config)

    try:
        ingested, parse_errors = ingest_path(config.resolve(config.input), config.format)
    except (UnreadableSource, UnknownFormat) as exc:
        raise DataError(str(exc)) from exc
    rows = len(ingested) + len(parse_errors)
    corpus = ingested
    if config.sample is not None:
        corpus = subsample(corpus, config.sample, config.seed)  # type: ignore[arg-type]

    filtered, reasons = filter_irc_counts(corpus, registry)
    years = config.year_list
    in_range = filtered.restrict_years(years)

    if config.top_k is not None:
        ranking_base = corpus.restrict_years(years) if config.rank_before_filter else in_range
        try:
            means = country_means(ranking_base, registry)
        except EmptyCorpus as exc:
            raise DataError(f"no records to rank countries on: {exc}") from exc
        registry = registry.with_selection(rank_countries(means)[: config.top_k])
    else:
        means = country_means(in_range, registry) if len(in_range) else {}
    if len(registry.selection) < 2:
        raise DataError(f"need at least two network countries, selected {list(registry.selection)}")

    by_year = {y: in_range.restrict_years([y]) for y in years}
    results: list[SliceResult] = []
    category_counts: dict[str, dict[str, int]] = {}
    trees: dict[tuple[int, Category], SpanningTree | None] = {}
    for y in years:
        parts = partition_corpus(by_year[y], lexicon) if lexicon else {Category.TOTAL: by_year[y]}
        category_counts[str(y)] = {c.value: len(parts[c]) for c in CATEGORIES if c in parts}
        for c in config.categories:
            res = build_slice(parts[c], registry, y, c)
            results.append(res)
            trees[(y, c)] = res.tree

    topic: dict[str, Any] | None = None
    if query is not None:
        topic_years = [y for y in config.topic_years if y in by_year]
        topic = {"terms": list(query.terms), "years": {}}
        if topic_years:
            covid, non_covid = covid_split(in_range, query, topic_years)
            for y in topic_years:
                groups = {"covid": covid.restrict_years([y]), "non_covid": non_covid.restrict_years([y])}
                topic["years"][str(y)] = {g: len(cg) for g, cg in groups.items()}
                for g, cg in groups.items():
                    parts = partition_corpus(cg, lexicon) if lexicon else {Category.TOTAL: cg}
                    for c in config.topic_categories:
                        results.append(build_slice(parts[c], registry, y, c, group=g))

    written: list[str] = []
    errors: list[str] = []
    for res in results:
        _emit_slice(res, out, config.formats, written, errors)

    table = diameter_table(trees, years=years, categories=config.categories)
    if "csv" in config.formats:
        try:
            write_atomic(out / "diameters.csv", table.to_csv())
            written.append("diameters.csv")
        except ExportError as exc:
            errors.append(str(exc))
    if "md" in config.formats:
        try:
            write_atomic(out / "diameters.md", table.to_markdown())
            written.append("diameters.md")
        except ExportError as exc:
            errors.append(str(exc))

    slices = [_slice_entry(r) for r in results]
    disconnected = [s["key"] for s in slices if not s["connected"]]
    data: dict[str, Any] = {
        "tool": {"name": "ircnet", "version": __version__},
        "config": config.echo(),
        "status": "ok" if not disconnected and not errors else "partial",
        "stages": {
            "ingest": {
                "rows": rows,
                "records": len(ingested),
                "parse_errors": len(parse_errors),
                "subsample_dropped": len(ingested) - len(corpus),
            },
            "filter_irc": {"input": len(corpus), "kept": len(filtered), "dropped": reasons},
            "years": {"input": len(filtered), "kept": len(in_range), "dropped_out_of_range": len(filtered) - len(in_range)},
        },
        "parse_errors": [str(e) for e in parse_errors[:100]],
        "selection": {
            "ranked_on": None if config.top_k is None else ("ingested" if config.rank_before_filter else "filtered"),
            "countries": list(registry.selection),
            "mean_articles_per_year": {c: str(means.get(c, Fraction(0))) for c in registry.selection},
        },
        "gender_coverage": coverage_stats(in_range, lexicon) if lexicon else None,
        "categories": category_counts,
        "slices": slices,
        "disconnected": disconnected,
        "topic_split": topic,
        "diameters": {"years": list(table.years), "rows": table.rows()[1:]},
        "exports": sorted(written) + ["manifest.json"],
        "errors": errors,
    }
    manifest = RunManifest(data)
    try:
        write_atomic(out / "manifest.json", manifest.to_json())
    except ExportError as exc:
        data["errors"].append(str(exc))
        data["status"] = "partial"
    return manifest
