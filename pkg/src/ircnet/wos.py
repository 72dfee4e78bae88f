"""Web of Science tab-delimited export adapter.

Maps the export's field tags onto :class:`~ircnet.corpus.BibRecord`:

=====  ===========================================
UT     record id
PY     year
DT     document type
AF     full author names (``Family, Given``), ``;``-separated; AU if AF empty
C1     address blocks ``[Au1; Au2] Inst, City, Country; ...``
TI/AB  title / abstract
DE/ID  author keywords / Keywords Plus
=====  ===========================================

The country of an address is its last comma-separated component, with US
state/ZIP prefixes ("CA 94305 USA") stripped. Addresses without an author
bracket apply to every author.
"""

from __future__ import annotations

import csv
import re
import sys
from typing import IO

from .corpus import MAX_YEAR, MIN_YEAR, AuthorEntry, BibRecord, ParseError

_BLOCK = re.compile(r"\[([^\]]*)\]\s*([^\[]*)")
_US_TAIL = re.compile(r"\b(USA)\.?$")


def address_country(address: str) -> str:
    """Country string of one WoS address line."""
    tail = address.strip().rstrip(".").rsplit(",", 1)[-1].strip()
    m = _US_TAIL.search(tail)
    if m:
        return m.group(1)
    return tail


def _split_name(full: str) -> tuple[str, str]:
    if "," in full:
        family, given = full.split(",", 1)
        return given.strip(), family.strip()
    parts = full.split()
    if len(parts) <= 1:
        return "", full.strip()
    return " ".join(parts[1:]), parts[0]


def _norm(name: str) -> str:
    return " ".join(name.replace(",", " ").split()).casefold()


def parse_addresses(c1: str, authors: list[str]) -> list[list[str]]:
    """Ordered, de-duplicated countries per author from a C1 field."""
    per_author: list[list[str]] = [[] for _ in authors]
    index = {}
    for i, a in enumerate(authors):
        index.setdefault(_norm(a), i)
    blocks = _BLOCK.findall(c1)
    if blocks:
        for names, addr in blocks:
            country = address_country(addr.strip().rstrip(";"))
            for raw in names.split(";"):
                i = index.get(_norm(raw))
                if i is not None and country and country not in per_author[i]:
                    per_author[i].append(country)
    else:
        for addr in c1.split(";"):
            country = address_country(addr) if addr.strip() else ""
            if country:
                for countries in per_author:
                    if country not in countries:
                        countries.append(country)
    return per_author


def _list_field(value: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in value.split(";") if v.strip())


def read_wos_tab(fp: IO[str]) -> tuple[list[tuple[int, BibRecord]], list[ParseError], int]:
    """Parse a tab-delimited export into (row, record) pairs, errors and row count."""
    csv.field_size_limit(min(sys.maxsize, 2**31 - 1))
    reader = csv.reader(fp, delimiter="\t", quoting=csv.QUOTE_NONE)
    try:
        header = next(reader)
    except StopIteration:
        return [], [], 0
    cols = {name.strip(): i for i, name in enumerate(header) if name.strip()}
    out: list[tuple[int, BibRecord]] = []
    errors: list[ParseError] = []
    rows = 0
    missing = [t for t in ("UT", "PY") if t not in cols]
    for lineno, row in enumerate(reader, 2):
        if not any(cell.strip() for cell in row):
            continue
        rows += 1
        if missing:
            errors.append(ParseError(lineno, f"header lacks required tags {missing}"))
            continue

        def get(tag: str) -> str:
            i = cols.get(tag)
            return row[i].strip() if i is not None and i < len(row) else ""

        try:
            rid = get("UT")
            if not rid:
                raise ValueError("empty UT")
            try:
                year = int(get("PY"))
            except ValueError:
                raise ValueError(f"bad PY {get('PY')!r}") from None
            if not MIN_YEAR <= year <= MAX_YEAR:
                raise ValueError(f"PY {year} outside {MIN_YEAR}-{MAX_YEAR}")
            names = list(_list_field(get("AF") or get("AU")))
            if not names:
                raise ValueError("no authors (AF/AU empty)")
            countries = parse_addresses(get("C1"), names)
            authors = []
            for full, cs in zip(names, countries):
                given, family = _split_name(full)
                authors.append(AuthorEntry(given, family, tuple(cs)))
            out.append(
                (
                    lineno,
                    BibRecord(
                        id=rid,
                        year=year,
                        authors=tuple(authors),
                        doc_type=get("DT"),
                        title=get("TI"),
                        abstract=get("AB"),
                        keywords=_list_field(get("DE")),
                        keywords_plus=_list_field(get("ID")),
                    ),
                )
            )
        except ValueError as exc:
            errors.append(ParseError(lineno, str(exc)))
    return out, errors, rows
