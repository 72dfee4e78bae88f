from __future__ import annotations

from ircnet.corpus import AuthorEntry, BibRecord, Corpus


def author(given="Maria", *countries, family="Doe"):
    return AuthorEntry(given, family, tuple(countries))


def record(rid, year=2021, *authors, title="", abstract="", keywords=(), keywords_plus=()):
    return BibRecord(rid, year, tuple(authors), "Article", title, abstract, tuple(keywords), tuple(keywords_plus))


def corpus_of(*records):
    return Corpus(tuple(records), ("test",))


def paper(rid, year, countries, names=None):
    """Record whose i-th author sits in countries[i]; names default to male pool."""
    names = names or ["Thomas"] * len(countries)
    return record(rid, year, *(author(n, c) for n, c in zip(names, countries)))
