"""Author gender from given names, and gendered authorship categories.

An article's authors are labelled through a :class:`GenderLexicon`. Only
*resolved* articles (every author female or male) enter the gendered
categories; anything with a unisex or unknown author counts toward
``Total`` alone. That keeps the two identities

    |Female| + |OnlyMale| == |Total|  and  |Male| + |OnlyFemale| == |Total|

exact on fully resolved corpora, and :func:`coverage_stats` reports how many
articles the rule set aside.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import BibRecord, Corpus


class GenderLabel(str, enum.Enum):
    FEMALE = "female"
    MALE = "male"
    UNISEX = "unisex"
    UNKNOWN = "unknown"


class Category(str, enum.Enum):
    # declaration order is the reporting order
    TOTAL = "Total"
    FEMALE = "Female"
    ONLY_FEMALE = "OnlyFemale"
    ONLY_MALE = "OnlyMale"
    MALE = "Male"


CATEGORIES: tuple[Category, ...] = tuple(Category)


class TooFewAuthors(ValueError):
    pass


class LexiconError(ValueError):
    pass


def normalize_name(name: str) -> str:
    return name.strip().casefold()


@dataclass(frozen=True)
class GenderLexicon:
    entries: Mapping[str, GenderLabel]
    _memo: dict[str, GenderLabel] = field(default_factory=dict, init=False, repr=False, compare=False)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, GenderLabel | str]) -> GenderLexicon:
        return cls({normalize_name(k): GenderLabel(v) for k, v in mapping.items()})

    def lookup(self, name: str) -> GenderLabel:
        return self.entries.get(normalize_name(name), GenderLabel.UNKNOWN)

    def __len__(self) -> int:
        return len(self.entries)


def merge_lexicons(*lexicons: GenderLexicon) -> GenderLexicon:
    """Union of lexicons; a name labelled differently by two sources becomes unisex."""
    merged: dict[str, GenderLabel] = {}
    for lex in lexicons:
        for name, label in lex.entries.items():
            prev = merged.get(name)
            if prev is None or prev == label or prev == GenderLabel.UNKNOWN:
                merged[name] = label
            elif label != GenderLabel.UNKNOWN:
                merged[name] = GenderLabel.UNISEX
    return GenderLexicon(merged)


def parse_lexicon(lines: Iterable[str]) -> GenderLexicon:
    """Read ``name<TAB>label`` lines (``#`` comments allowed)."""
    out: dict[str, GenderLabel] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"line {lineno}: expected name<TAB>label, got {line!r}")
        try:
            label = GenderLabel(parts[1].strip().lower())
        except ValueError:
            raise LexiconError(f"line {lineno}: unknown label {parts[1]!r}") from None
        name = normalize_name(parts[0])
        if name in out and out[name] != label:
            raise LexiconError(f"line {lineno}: conflicting labels for {name!r}")
        out[name] = label
    return GenderLexicon(out)


def load_lexicon(path: str | Path) -> GenderLexicon:
    return parse_lexicon(Path(path).read_text(encoding="utf-8").splitlines())


def format_lexicon(lexicon: GenderLexicon) -> str:
    return "".join(f"{name}\t{lexicon.entries[name].value}\n" for name in sorted(lexicon.entries))


_SEGMENTS = re.compile(r"[.\-]+")


def is_initials(token: str) -> bool:
    """True for tokens such as ``J.``, ``J`` or ``J.-P.``."""
    parts = [p for p in _SEGMENTS.split(token) if p]
    return all(len(p) == 1 for p in parts)


def infer_gender(given_name: str, lexicon: GenderLexicon) -> GenderLabel:
    """Label of the first given-name token; initials and misses are unknown."""
    memo = lexicon._memo
    label = memo.get(given_name)
    if label is None:
        tokens = given_name.split()
        if not tokens or is_initials(tokens[0]):
            label = GenderLabel.UNKNOWN
        else:
            label = lexicon.lookup(tokens[0])
        memo[given_name] = label
    return label


@dataclass(frozen=True)
class AuthorshipProfile:
    record_id: str
    labels: tuple[GenderLabel, ...]

    @property
    def resolved(self) -> bool:
        return all(lb in (GenderLabel.FEMALE, GenderLabel.MALE) for lb in self.labels)


def profile(record: BibRecord, lexicon: GenderLexicon) -> AuthorshipProfile:
    return AuthorshipProfile(record.id, tuple(infer_gender(a.given_name, lexicon) for a in record.authors))


def categorize(prof: AuthorshipProfile) -> frozenset[Category]:
    if len(prof.labels) < 2:
        raise TooFewAuthors(f"record {prof.record_id!r} has {len(prof.labels)} author(s); categories need two")
    if not prof.resolved:
        return frozenset({Category.TOTAL})
    cats = {Category.TOTAL}
    has_f = GenderLabel.FEMALE in prof.labels
    has_m = GenderLabel.MALE in prof.labels
    if has_f:
        cats.add(Category.FEMALE)
        if not has_m:
            cats.add(Category.ONLY_FEMALE)
    if has_m:
        cats.add(Category.MALE)
        if not has_f:
            cats.add(Category.ONLY_MALE)
    return frozenset(cats)


def partition_corpus(corpus: Corpus, lexicon: GenderLexicon) -> dict[Category, Corpus]:
    """One sub-corpus per category; ``Total`` is the input itself.

    Single-author records cannot be categorized and stay in ``Total`` only;
    the count is noted in the provenance of each gendered sub-corpus.
    """
    members: dict[Category, list[BibRecord]] = {c: [] for c in CATEGORIES if c is not Category.TOTAL}
    solo = 0
    for r in corpus.records:
        if len(r.authors) < 2:
            solo += 1
            continue
        for c in categorize(profile(r, lexicon)):
            if c is not Category.TOTAL:
                members[c].append(r)
    out = {Category.TOTAL: corpus}
    for c, recs in members.items():
        out[c] = corpus.derive(recs, f"partition: category={c.value} n={len(recs)} single_author_skipped={solo}")
    return {c: out[c] for c in CATEGORIES}


def coverage_stats(corpus: Corpus, lexicon: GenderLexicon) -> dict:
    """Share of resolved articles plus author counts per label."""
    per_label: Counter[str] = Counter({lb.value: 0 for lb in GenderLabel})
    resolved = 0
    for r in corpus.records:
        prof = profile(r, lexicon)
        per_label.update(lb.value for lb in prof.labels)
        resolved += prof.resolved
    n = len(corpus)
    return {
        "records": n,
        "resolved": resolved,
        "resolved_share": 1.0 if n == 0 else resolved / n,
        "per_label": {lb.value: per_label[lb.value] for lb in GenderLabel},
    }
