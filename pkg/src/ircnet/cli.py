"""Command-line interface: ``ircnet <subcommand>``.

Exit codes: 0 success, 1 configuration error, 2 data error, 3 partial
result (some slice disconnected or an export failed; outputs still written).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .corpus import (
    Corpus,
    EmptyCorpus,
    UnknownFormat,
    UnreadableSource,
    annual_counts,
    covid_split,
    filter_irc,
    format_split_counts,
    ingest_path,
    load_topic_query,
    select_top_countries,
    write_jsonl,
)
from .export import ExportError, export_network, export_tree, write_atomic
from .gender import CATEGORIES, Category, coverage_stats, format_lexicon, load_lexicon, merge_lexicons, partition_corpus
from .graph import EmptySelection, induce_bipartite, project_one_mode
from .namdict import load_namdict
from .pipeline import ConfigInvalid, DataError, PipelineConfig, build_slice, parse_categories, parse_years, run_pipeline
from .registry import RegistryError, load_registry
from .synth import fixture_a, fixture_a_lexicon, random_corpus, synth_lexicon
from .taxonomy import diameter_table, tree_metrics

log = logging.getLogger("ircnet")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_PARTIAL = 0, 1, 2, 3


def _write_corpus(corpus: Corpus, path: str) -> None:
    import io

    buf = io.StringIO()
    write_jsonl(corpus, buf)
    write_atomic(path, buf.getvalue())


def _load(args) -> Corpus:
    corpus, errors = ingest_path(args.input, getattr(args, "format", "jsonl"))
    for e in errors[:20]:
        log.warning("%s: %s", args.input, e)
    if len(errors) > 20:
        log.warning("%s: %d more parse errors", args.input, len(errors) - 20)
    return corpus


def _selection(args, corpus: Corpus):
    registry = load_registry(args.registry)
    filtered = filter_irc(corpus, registry)
    if args.top_k:
        registry = select_top_countries(filtered, args.top_k, registry)
    return registry, filtered


def _category_corpus(args, corpus: Corpus, category: Category) -> Corpus:
    if category is Category.TOTAL:
        return corpus
    if not args.lexicon:
        raise ConfigInvalid(f"category {category.value} needs --lexicon")
    return partition_corpus(corpus, load_lexicon(args.lexicon))[category]


def cmd_ingest(args) -> int:
    corpus, errors = ingest_path(args.input, args.format, sample=args.sample, seed=args.seed)
    _write_corpus(corpus, args.out)
    for note in corpus.provenance:
        print(note)
    for e in errors:
        print(f"parse error {e}", file=sys.stderr)
    return EXIT_OK


def cmd_filter(args) -> int:
    corpus = _load(args)
    out = filter_irc(corpus, load_registry(args.registry))
    _write_corpus(out, args.out)
    print(out.provenance[-1])
    return EXIT_OK


def cmd_covid_split(args) -> int:
    corpus = _load(args)
    years = [int(y) for y in args.years.split(",") if y.strip()]
    query = load_topic_query(args.terms)
    covid, non_covid = covid_split(corpus, query, years)
    if args.out_dir:
        _write_corpus(covid, str(Path(args.out_dir) / "covid.jsonl"))
        _write_corpus(non_covid, str(Path(args.out_dir) / "non_covid.jsonl"))
    for y in years:
        print(format_split_counts(covid, non_covid, y))
    return EXIT_OK


def cmd_gender(args) -> int:
    corpus = _load(args)
    lexicon = load_lexicon(args.lexicon)
    if args.report == "coverage":
        print(json.dumps(coverage_stats(corpus, lexicon), indent=2))
    else:
        parts = partition_corpus(corpus, lexicon)
        table: dict[str, dict[str, int]] = {}
        for y in corpus.years:
            table[str(y)] = {c.value: sum(1 for r in parts[c] if r.year == y) for c in CATEGORIES}
        print(json.dumps(table, indent=2))
    return EXIT_OK


def cmd_lexicon(args) -> int:
    sources = [load_namdict(p, args.encoding) for p in args.namdict]
    sources += [load_lexicon(p) for p in args.merge]
    if not sources:
        raise ConfigInvalid("give at least one --namdict or --merge source")
    lex = merge_lexicons(*sources)
    write_atomic(args.out, format_lexicon(lex))
    print(f"{len(lex)} names written to {args.out}")
    return EXIT_OK


def cmd_network(args) -> int:
    corpus = _load(args)
    registry, filtered = _selection(args, corpus)
    category = Category(args.category)
    sub = _category_corpus(args, filtered.restrict_years([args.year]), category)
    net = project_one_mode(induce_bipartite(sub, registry))
    export_network(net, args.out, name=f"{args.year}_{category.value}")
    print(f"{len(net.nodes)} nodes, {len(net.weights)} edges, {len(sub)} papers -> {args.out}")
    return EXIT_OK


def cmd_mst(args) -> int:
    corpus = _load(args)
    registry, filtered = _selection(args, corpus)
    category = Category(args.category)
    sub = _category_corpus(args, filtered.restrict_years([args.year]), category)
    res = build_slice(sub, registry, args.year, category)
    if res.tree is None:
        print(f"disconnected: {len(res.comps)} components", file=sys.stderr)
        for comp in res.comps:
            print("  " + ", ".join(sorted(comp)), file=sys.stderr)
        return EXIT_PARTIAL
    export_tree(res.tree, args.out, eu=res.network.eu, name=f"mst_{res.key}")
    if args.metrics:
        m = tree_metrics(res.tree)
        print(json.dumps({"n": m.n, "leaves": m.leaves, "diameter": m.diameter,
                          "star_ratio": m.star_ratio, "leaf_ratio": m.leaf_ratio,
                          "thr": str(res.dendrogram.thr)}, indent=2))
    return EXIT_OK


def cmd_report(args) -> int:
    corpus = _load(args)
    registry, filtered = _selection(args, corpus)
    if args.kind == "counts":
        counts = annual_counts(filtered, registry)
        lines = ["year,country,articles"] + [f"{y},{c},{n}" for (y, c), n in counts.items()]
        text = "\n".join(lines) + "\n"
        if args.out:
            write_atomic(args.out, text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    start, end = parse_years(args.years)
    categories = parse_categories(args.categories)
    trees = {}
    for y in range(start, end + 1):
        year_corpus = filtered.restrict_years([y])
        for c in categories:
            res = build_slice(_category_corpus(args, year_corpus, c), registry, y, c)
            trees[(y, c)] = res.tree
    table = diameter_table(trees, years=range(start, end + 1), categories=categories)
    text = table.to_markdown() if args.out and args.out.endswith(".md") else table.to_csv()
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_PARTIAL if any(t is None for t in trees.values()) else EXIT_OK


def cmd_run(args) -> int:
    path = args.config or os.environ.get("IRCNET_CONFIG")
    overrides = {
        "input": args.input, "format": args.format, "registry": args.registry, "lexicon": args.lexicon,
        "years": args.years, "top_k": args.top_k, "categories": args.categories,
        "topic_query": args.topic_query, "sample": args.sample, "seed": args.seed,
    }
    if path:
        config = PipelineConfig.load(path, overrides)
    else:
        config = PipelineConfig.from_dict({k: v for k, v in overrides.items() if v is not None})
    manifest = run_pipeline(config, output_dir=args.out_dir)
    d = manifest.data
    print(f"status={d['status']} slices={len(d['slices'])} disconnected={len(d['disconnected'])} exports={len(d['exports'])}")
    return EXIT_PARTIAL if manifest.partial else EXIT_OK


def cmd_synth(args) -> int:
    out = Path(args.out)
    if args.kind == "fixture-a":
        corpus, lexicon = fixture_a(), fixture_a_lexicon()
    else:
        corpus = random_corpus(args.records, args.seed, fully_gendered=args.fully_gendered)
        lexicon = synth_lexicon()
    _write_corpus(corpus, str(out / "records.jsonl"))
    write_atomic(out / "lexicon.tsv", format_lexicon(lexicon))
    print(f"{len(corpus)} records -> {out / 'records.jsonl'}")
    return EXIT_OK


def _add_input(p: argparse.ArgumentParser, fmt: bool = False) -> None:
    p.add_argument("--input", required=True, help="canonical JSONL corpus")
    if fmt:
        p.add_argument("--format", default="jsonl", choices=["jsonl", "wos-tab"])


def _add_selection(p: argparse.ArgumentParser) -> None:
    p.add_argument("--registry", help="registry TSV (default: bundled 50 countries)")
    p.add_argument("--top-k", type=int, help="rank countries on the filtered corpus and keep the top K")
    p.add_argument("--lexicon", help="gender lexicon TSV (needed for gendered categories)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ircnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ircnet {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a JSONL or WoS tab-delimited export into canonical JSONL")
    _add_input(p, fmt=True)
    p.add_argument("--sample", type=int, help="records per year to keep")
    p.add_argument("--seed", type=int, help="seed for --sample (required with it)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("filter", help="keep international collaborations with an EU author")
    _add_input(p)
    p.add_argument("--registry")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("covid-split", help="split years into topic-matching and other records")
    _add_input(p)
    p.add_argument("--years", required=True, help="comma-separated, e.g. 2020,2021")
    p.add_argument("--terms", help="one phrase per line (default: bundled COVID-19 query)")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_covid_split)

    p = sub.add_parser("gender", help="gender coverage or category counts")
    _add_input(p)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--report", choices=["coverage", "categories"], default="coverage")
    p.set_defaults(func=cmd_gender)

    p = sub.add_parser("lexicon", help="build a lexicon TSV from nam_dict-style files and/or TSV lexicons")
    p.add_argument("--namdict", action="append", default=[])
    p.add_argument("--merge", action="append", default=[])
    p.add_argument("--encoding", default="latin-1", help="encoding of --namdict files")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_lexicon)

    for name, helptext in (("network", "export one weighted country network"), ("mst", "export one spanning tree")):
        p = sub.add_parser(name, help=helptext)
        _add_input(p)
        _add_selection(p)
        p.add_argument("--year", type=int, required=True)
        p.add_argument("--category", default="Total", choices=[c.value for c in CATEGORIES])
        p.add_argument("--out", required=True, help=".graphml, .dot or .csv")
        if name == "mst":
            p.add_argument("--metrics", action="store_true", help="print leaves, diameter and ratios")
            p.set_defaults(func=cmd_mst)
        else:
            p.set_defaults(func=cmd_network)

    p = sub.add_parser("report", help="diameter table or annual country counts")
    p.add_argument("kind", choices=["diameters", "counts"])
    _add_input(p)
    _add_selection(p)
    p.add_argument("--years", default="2011:2022")
    p.add_argument("--categories", default="all")
    p.add_argument("--out", help=".csv or .md (default: CSV on stdout)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("run", help="full pipeline from a JSON config (IRCNET_CONFIG is the default path)")
    p.add_argument("--config")
    p.add_argument("--input")
    p.add_argument("--format")
    p.add_argument("--registry")
    p.add_argument("--lexicon")
    p.add_argument("--years")
    p.add_argument("--top-k", type=int)
    p.add_argument("--categories")
    p.add_argument("--topic-query", help="terms file, or 'bundled' for the COVID-19 query")
    p.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", help="overrides output_dir")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("synth", help="write FIXTURE-A or a seeded random corpus with its lexicon")
    p.add_argument("--kind", choices=["fixture-a", "random"], default="fixture-a")
    p.add_argument("--records", type=int, default=60_000)
    p.add_argument("--seed", type=int, default=2011)
    p.add_argument("--fully-gendered", action="store_true")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigInvalid, RegistryError, ValueError) as exc:
        if isinstance(exc, (EmptyCorpus, EmptySelection, UnknownFormat)):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DATA
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, UnreadableSource) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ExportError as exc:
        print(f"write error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
