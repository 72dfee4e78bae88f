"""Bibliographic records and the corpus-level operations on them.

A :class:`Corpus` is an immutable tuple of :class:`BibRecord` plus a list of
provenance notes. Every operation that drops or splits records returns a new
corpus with a note appended, so a run can always account for its records.
"""

from __future__ import annotations

import gc
import io
import json
import random
import re
from collections import Counter, defaultdict
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import IO, Any, Iterable, Iterator

from .registry import CountryRegistry, load_registry

MIN_YEAR = 1999
MAX_YEAR = 2100
MAX_AUTHORS = 10
FORMATS = ("jsonl", "wos_tab")
TEXT_FIELDS = ("title", "abstract", "keywords", "keywords_plus")


@contextmanager
def paused_gc():
    """Suspend cyclic GC while allocating many long-lived objects."""
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


class UnreadableSource(Exception):
    pass


class UnknownFormat(ValueError):
    pass


class EmptyCorpus(ValueError):
    pass


@dataclass(frozen=True)
class ParseError:
    row: int
    message: str

    def __str__(self) -> str:
        return f"row {self.row}: {self.message}"


@dataclass(frozen=True)
class AuthorEntry:
    given_name: str
    family_name: str
    affiliation_countries: tuple[str, ...] = ()


@dataclass(frozen=True)
class BibRecord:
    id: str
    year: int
    authors: tuple[AuthorEntry, ...]
    doc_type: str = ""
    title: str = ""
    abstract: str = ""
    keywords: tuple[str, ...] = ()
    keywords_plus: tuple[str, ...] = ()


@dataclass(frozen=True)
class Corpus:
    records: tuple[BibRecord, ...] = ()
    provenance: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[BibRecord]:
        return iter(self.records)

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    @property
    def years(self) -> list[int]:
        return sorted({r.year for r in self.records})

    def derive(self, records: Iterable[BibRecord], note: str) -> Corpus:
        return Corpus(tuple(records), self.provenance + (note,))

    def restrict_years(self, years: Iterable[int]) -> Corpus:
        wanted = set(years)
        kept = [r for r in self.records if r.year in wanted]
        span = ",".join(str(y) for y in sorted(wanted))
        return self.derive(kept, f"restrict_years: years={span} kept={len(kept)} dropped={len(self) - len(kept)}")


@dataclass(frozen=True)
class TopicQuery:
    """Phrase query over record text fields.

    Matching is case-insensitive and phrase-level: a term must not be glued
    to surrounding letters or digits, and internal spaces match any run of
    whitespace. Keyword lists are joined with ``;`` so a phrase never spans
    two keywords.
    """

    terms: tuple[str, ...]
    match_fields: frozenset[str] = frozenset(TEXT_FIELDS)
    _pattern: re.Pattern = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        terms = tuple(t.strip() for t in self.terms if t.strip())
        if not terms:
            raise ValueError("topic query needs at least one term")
        bad = set(self.match_fields) - set(TEXT_FIELDS)
        if bad or not self.match_fields:
            raise ValueError(f"match_fields must be a non-empty subset of {TEXT_FIELDS}, got {sorted(self.match_fields)}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "match_fields", frozenset(self.match_fields))
        alts = []
        for term in terms:
            words = [re.escape(w) for w in term.casefold().split()]
            alts.append(r"\s+".join(words))
        pattern = r"(?<![^\W_])(?:" + "|".join(alts) + r")(?![^\W_])"
        object.__setattr__(self, "_pattern", re.compile(pattern))


def load_topic_query(path: str | Path | None = None, match_fields: Iterable[str] = TEXT_FIELDS) -> TopicQuery:
    """Read one term per line; ``None`` loads the bundled COVID-19 query."""
    if path is None:
        text = resources.files("ircnet").joinpath("data/covid_terms.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    terms = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    return TopicQuery(tuple(terms), frozenset(match_fields))


COVID_QUERY = load_topic_query()


# --- ingestion -------------------------------------------------------------


def _as_text_list(value: Any, name: str) -> tuple[str, ...]:
    if value is None:
        return ()
    if isinstance(value, str):
        return tuple(v.strip() for v in value.split(";") if v.strip())
    if type(value) is list:
        out = tuple(value)
        if all(type(v) is str for v in out):
            return out
    raise ValueError(f"{name} must be a list of strings")


def record_from_dict(obj: Any) -> BibRecord:
    """Build a record from one decoded JSONL object; raises ValueError."""
    if not isinstance(obj, dict):
        raise ValueError("record must be a JSON object")
    rid = obj.get("id")
    if not isinstance(rid, str) or not rid:
        raise ValueError("missing or empty 'id'")
    year = obj.get("year")
    if isinstance(year, bool) or not isinstance(year, int):
        raise ValueError(f"'year' must be an integer, got {year!r}")
    if not MIN_YEAR <= year <= MAX_YEAR:
        raise ValueError(f"'year' {year} outside {MIN_YEAR}-{MAX_YEAR}")
    raw_authors = obj.get("authors")
    if not isinstance(raw_authors, list) or not raw_authors:
        raise ValueError("'authors' must be a non-empty list")
    authors = []
    for a in raw_authors:
        if not isinstance(a, dict):
            raise ValueError("author must be an object")
        given = a.get("given_name") or ""
        family = a.get("family_name") or ""
        if not isinstance(given, str) or not isinstance(family, str):
            raise ValueError("author names must be strings")
        countries = _as_text_list(a.get("affiliation_countries"), "affiliation_countries")
        authors.append(AuthorEntry(given, family, countries))
    for name in ("doc_type", "title", "abstract"):
        if not isinstance(obj.get(name) or "", str):
            raise ValueError(f"'{name}' must be a string")
    return BibRecord(
        id=rid,
        year=year,
        authors=tuple(authors),
        doc_type=obj.get("doc_type") or "",
        title=obj.get("title") or "",
        abstract=obj.get("abstract") or "",
        keywords=_as_text_list(obj.get("keywords"), "keywords"),
        keywords_plus=_as_text_list(obj.get("keywords_plus"), "keywords_plus"),
    )


def record_to_dict(record: BibRecord) -> dict[str, Any]:
    return {
        "id": record.id,
        "year": record.year,
        "doc_type": record.doc_type,
        "title": record.title,
        "abstract": record.abstract,
        "keywords": list(record.keywords),
        "keywords_plus": list(record.keywords_plus),
        "authors": [
            {
                "given_name": a.given_name,
                "family_name": a.family_name,
                "affiliation_countries": list(a.affiliation_countries),
            }
            for a in record.authors
        ],
    }


def write_jsonl(corpus: Corpus, fp: IO[str]) -> None:
    for r in corpus.records:
        fp.write(json.dumps(record_to_dict(r), ensure_ascii=False))
        fp.write("\n")


def _read_jsonl(text: str) -> tuple[list[tuple[int, BibRecord]], list[ParseError], int]:
    records: list[tuple[int, BibRecord]] = []
    errors: list[ParseError] = []
    rows = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        rows += 1
        try:
            records.append((lineno, record_from_dict(json.loads(line))))
        except (ValueError, TypeError) as exc:
            errors.append(ParseError(lineno, str(exc)))
    return records, errors, rows


def ingest(
    source: bytes | IO[bytes],
    format: str = "jsonl",
    sample: int | None = None,
    seed: int | None = None,
    source_name: str = "<stream>",
) -> tuple[Corpus, list[ParseError]]:
    """Decode a record stream into a corpus plus the rows that failed to parse.

    ``format`` is ``jsonl`` or ``wos_tab`` (``wos-tab`` is accepted too).
    Duplicate ids are reported as parse errors and the later row is
    skipped. ``sample`` draws a seeded per-year subsample and requires
    ``seed``.
    """
    fmt = format.replace("-", "_")
    if fmt not in FORMATS:
        raise UnknownFormat(f"unknown format {format!r}; expected one of {', '.join(FORMATS)}")
    if sample is not None and seed is None:
        raise ValueError("sampling requires an explicit seed")
    try:
        data = source if isinstance(source, (bytes, bytearray)) else source.read()
        text = bytes(data).decode("utf-8-sig")
    except (OSError, UnicodeDecodeError) as exc:
        raise UnreadableSource(f"{source_name}: {exc}") from exc

    with paused_gc():
        if fmt == "jsonl":
            records, errors, rows = _read_jsonl(text)
        else:
            from .wos import read_wos_tab

            records, errors, rows = read_wos_tab(io.StringIO(text))

    seen: set[str] = set()
    unique: list[BibRecord] = []
    for row, r in records:
        if r.id in seen:
            errors.append(ParseError(row, f"duplicate id {r.id!r} skipped"))
            continue
        seen.add(r.id)
        unique.append(r)
    errors.sort(key=lambda e: e.row)

    corpus = Corpus(
        tuple(unique),
        (f"ingest: source={source_name} format={fmt} rows={rows} records={len(unique)} parse_errors={len(errors)}",),
    )
    if sample is not None:
        corpus = subsample(corpus, sample, seed)  # type: ignore[arg-type]
    return corpus, errors


def ingest_path(path: str | Path, format: str = "jsonl", sample: int | None = None, seed: int | None = None):
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise UnreadableSource(f"{path}: {exc}") from exc
    return ingest(data, format, sample=sample, seed=seed, source_name=path.name)


def subsample(corpus: Corpus, n: int, seed: int) -> Corpus:
    """Keep at most ``n`` records per year, drawn with ``random.Random(seed)``.

    Years are visited in ascending order and candidates are sorted by id
    before sampling, so the draw does not depend on input order.
    """
    if n < 1:
        raise ValueError("sample size must be >= 1")
    rng = random.Random(seed)
    by_year: dict[int, list[BibRecord]] = defaultdict(list)
    for r in corpus.records:
        by_year[r.year].append(r)
    chosen: set[str] = set()
    for year in sorted(by_year):
        pool = sorted(by_year[year], key=lambda r: r.id)
        picked = pool if len(pool) <= n else rng.sample(pool, n)
        chosen.update(r.id for r in picked)
    kept = [r for r in corpus.records if r.id in chosen]
    return corpus.derive(kept, f"subsample: n={n}/year seed={seed} kept={len(kept)} dropped={len(corpus) - len(kept)}")


# --- countries ---------------------------------------------------------------


def resolve_country(author: AuthorEntry, registry: CountryRegistry) -> str | None:
    """First affiliation country that the registry recognizes, else None."""
    for raw in author.affiliation_countries:
        name = registry.canonical(raw)
        if name is not None:
            return name
    return None


def record_countries(record: BibRecord, registry: CountryRegistry) -> tuple[str, ...]:
    """Distinct resolved author countries in author order."""
    hit = registry._records.get(record.id)
    if hit is not None and hit[0] is record:
        return hit[1]
    out: list[str] = []
    for a in record.authors:
        c = resolve_country(a, registry)
        if c is not None and c not in out:
            out.append(c)
    countries = tuple(out)
    registry._records[record.id] = (record, countries)
    return countries


def irc_drop_reason(record: BibRecord, registry: CountryRegistry) -> str | None:
    """Why a record fails the international-collaboration filter, or None."""
    if len(record.authors) > MAX_AUTHORS:
        return "too_many_authors"
    countries = record_countries(record, registry)
    if len(countries) < 2:
        return "single_country"
    if not any(registry.is_eu(c) for c in countries):
        return "no_eu_country"
    return None


def filter_irc(corpus: Corpus, registry: CountryRegistry) -> Corpus:
    """Keep co-authored articles spanning two or more countries, one of them EU."""
    return filter_irc_counts(corpus, registry)[0]


def filter_irc_counts(corpus: Corpus, registry: CountryRegistry) -> tuple[Corpus, dict[str, int]]:
    """:func:`filter_irc` plus the number of records dropped per reason."""
    if not registry.eu_names:
        raise ValueError("registry has no EU-flagged entries")
    kept = []
    reasons: Counter[str] = Counter()
    for r in corpus.records:
        why = irc_drop_reason(r, registry)
        if why is None:
            kept.append(r)
        else:
            reasons[why] += 1
    counts = {k: reasons[k] for k in ("too_many_authors", "single_country", "no_eu_country")}
    detail = " ".join(f"{k}={v}" for k, v in counts.items())
    return corpus.derive(kept, f"filter_irc: kept={len(kept)} dropped={len(corpus) - len(kept)} {detail}"), counts


# --- topics ------------------------------------------------------------------


def _field_text(record: BibRecord, name: str) -> str:
    value = getattr(record, name)
    if isinstance(value, tuple):
        return "; ".join(value)
    return value


def match_topic(record: BibRecord, query: TopicQuery) -> bool:
    for name in TEXT_FIELDS:
        if name in query.match_fields:
            text = _field_text(record, name)
            if text and query._pattern.search(text.casefold()):
                return True
    return False


def covid_split(corpus: Corpus, query: TopicQuery, years: Iterable[int]) -> tuple[Corpus, Corpus]:
    """Partition the records of ``years`` into topic matches and the rest."""
    wanted = set(years)
    if not wanted:
        raise ValueError("covid_split needs at least one year")
    hit, miss = [], []
    for r in corpus.records:
        if r.year in wanted:
            (hit if match_topic(r, query) else miss).append(r)
    span = ",".join(str(y) for y in sorted(wanted))
    return (
        corpus.derive(hit, f"covid_split: years={span} group=covid n={len(hit)}"),
        corpus.derive(miss, f"covid_split: years={span} group=non_covid n={len(miss)}"),
    )


def format_split_counts(covid: Corpus, non_covid: Corpus, year: int) -> str:
    c = sum(1 for r in covid if r.year == year)
    n = sum(1 for r in non_covid if r.year == year)
    return f"{year}: CovidPapers N={c:,}, NonCovidPapers N={n:,}"


# --- country ranking ---------------------------------------------------------


def annual_counts(corpus: Corpus, registry: CountryRegistry) -> dict[tuple[int, str], int]:
    """Articles per (year, country); a record counts once for each of its countries."""
    counts: Counter[tuple[int, str]] = Counter()
    for r in corpus.records:
        for c in record_countries(r, registry):
            counts[(r.year, c)] += 1
    return dict(sorted(counts.items()))


def country_means(corpus: Corpus, registry: CountryRegistry) -> dict[str, Fraction]:
    """Mean articles per year for every country present, over the corpus year span."""
    if not corpus.records:
        raise EmptyCorpus("cannot rank countries of an empty corpus")
    years = [r.year for r in corpus.records]
    span = max(years) - min(years) + 1
    totals: Counter[str] = Counter()
    for (_, country), n in annual_counts(corpus, registry).items():
        totals[country] += n
    return {c: Fraction(n, span) for c, n in totals.items()}


def select_top_countries(corpus: Corpus, k: int, registry: CountryRegistry | None = None) -> CountryRegistry:
    """Registry whose selection is the ``k`` countries with the highest yearly mean.

    Ties on the mean are broken by ascending name. The returned selection is
    in rank order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    registry = registry or load_registry()
    return registry.with_selection(rank_countries(country_means(corpus, registry))[:k])


def rank_countries(means: dict[str, Fraction]) -> list[str]:
    """Countries by descending mean, ties by ascending name."""
    return sorted(means, key=lambda c: (-means[c], c))
