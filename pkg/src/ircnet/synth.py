"""Synthetic corpora: the six-record FIXTURE-A and a seeded random generator.

FIXTURE-A (countries Germany, USA, France; years 2020-2021):

====  ====  ===============================  ======================  =====
id    year  authors (country)                categories              note
====  ====  ===============================  ======================  =====
A1    2021  Maria (Germany), Anna (USA)      Total Female OnlyFemale COVID
A2    2021  Thomas (Germany), Emily (USA),   Total Female Male
            Pierre (France)
A3    2021  John (USA), Lukas (Germany)      Total Male OnlyMale
A4    2021  Michael (USA), Claire (France)   Total Female Male
A5    2020  Stefan, Laura (Germany)          single country, dropped
A6    2020  Sophie, Camille (France)         single country, dropped
====  ====  ===============================  ======================  =====
"""

from __future__ import annotations

import random
from typing import Sequence

from .corpus import AuthorEntry, BibRecord, Corpus
from .gender import GenderLabel, GenderLexicon
from .registry import CountryRegistry, load_registry

FEMALE_NAMES = (
    "Maria", "Anna", "Sophie", "Claire", "Emily", "Laura", "Camille", "Elena", "Ines", "Julia",
    "Marta", "Sara", "Hanna", "Chiara", "Ingrid", "Agnieszka", "Katarzyna", "Olga", "Yuki", "Mei",
    "Fatima", "Ana", "Beatriz", "Lucia", "Eva", "Nora", "Helena", "Ewa", "Zsofia", "Ioana",
)
MALE_NAMES = (
    "Thomas", "John", "Pierre", "Michael", "Lukas", "Stefan", "Marco", "Javier", "Pedro", "Jan",
    "Piotr", "Lars", "Henrik", "Giorgos", "Hiroshi", "Wei", "Ahmed", "Carlos", "Diego", "David",
    "Paulo", "Mikhail", "Tomas", "Andras", "Matteo", "Erik", "Jonas", "Kenji", "Rafael", "Luis",
)
UNISEX_NAMES = ("Andrea", "Kim", "Sasha", "Jean", "Robin")
FAMILY_NAMES = (
    "Schmidt", "Smith", "Martin", "Rossi", "Garcia", "Silva", "Nowak", "Jensen", "Wang", "Kim",
    "Muller", "Brown", "Dubois", "Bianchi", "Lopez", "Costa", "Kowalski", "Larsen", "Li", "Tanaka",
)


def synth_lexicon() -> GenderLexicon:
    entries = {n: GenderLabel.FEMALE for n in FEMALE_NAMES}
    entries.update({n: GenderLabel.MALE for n in MALE_NAMES})
    entries.update({n: GenderLabel.UNISEX for n in UNISEX_NAMES})
    return GenderLexicon.from_mapping(entries)


def _a(given: str, family: str, *countries: str) -> AuthorEntry:
    return AuthorEntry(given, family, tuple(countries))


def fixture_a() -> Corpus:
    records = (
        BibRecord(
            "A1", 2021, (_a("Maria", "Schmidt", "Germany"), _a("Anna", "Smith", "USA")), "Article",
            "Impacts of COVID-19 on cross-border trade", "Lockdown effects on exports.",
            ("trade", "pandemic"), ("GLOBALIZATION",),
        ),
        BibRecord(
            "A2", 2021,
            (_a("Thomas", "Muller", "Germany"), _a("Emily", "Brown", "USA", "Germany"), _a("Pierre", "Dubois", "France")),
            "Article", "Gender gaps in coauthorship", "Survey of research teams.", ("gender", "collaboration"), (),
        ),
        BibRecord(
            "A3", 2021, (_a("John", "Smith", "USA"), _a("Lukas", "Muller", "Atlantis", "Germany")), "Article",
            "Labour mobility of economists", "Panel evidence.", ("mobility",), ("MIGRATION",),
        ),
        BibRecord(
            "A4", 2021, (_a("Michael", "Brown", "USA"), _a("Claire", "Martin", "France")), "Review",
            "Housing markets after the financial crisis", "A review.", ("housing",), (),
        ),
        BibRecord(
            "A5", 2020, (_a("Stefan", "Schmidt", "Germany"), _a("Laura", "Rossi", "Germany")), "Article",
            "Regional inequality in Germany", "", ("inequality",), (),
        ),
        BibRecord(
            "A6", 2020, (_a("Sophie", "Dubois", "France"), _a("Camille", "Martin", "France")), "Article",
            "French school choice", "", ("education",), (),
        ),
    )
    return Corpus(records, ("synth: fixture-a",))


def fixture_a_lexicon() -> GenderLexicon:
    names = {
        "Maria": "female", "Anna": "female", "Emily": "female", "Claire": "female", "Laura": "female",
        "Sophie": "female", "Camille": "female", "Thomas": "male", "Pierre": "male", "John": "male",
        "Lukas": "male", "Michael": "male", "Stefan": "male", "Andrea": "unisex",
    }
    return GenderLexicon.from_mapping(names)


def random_corpus(
    n_records: int,
    seed: int,
    registry: CountryRegistry | None = None,
    years: Sequence[int] = tuple(range(2011, 2023)),
    fully_gendered: bool = False,
    max_authors: int = 12,
    covid_share: float = 0.25,
) -> Corpus:
    """Seeded corpus over the registry's selected countries.

    Country popularity follows a rank-based power law, about one record in
    twenty has no EU author, and a few exceed ten authors, so every filter
    branch is exercised. With ``fully_gendered`` all given names come from
    the female/male pools; otherwise some are unisex or initials.
    """
    rng = random.Random(seed)
    registry = registry or load_registry()
    countries = list(registry.selection)
    eu = [c for c in countries if registry.is_eu(c)]
    weights = [1.0 / (i + 1) ** 0.9 for i in range(len(countries))]
    eu_weights = [weights[countries.index(c)] for c in eu]
    records = []
    for i in range(n_records):
        year = years[i % len(years)]
        n_auth = rng.choice((2, 2, 2, 3, 3, 3, 4, 4, 5, 6, 7, 8, 9, 10)) if rng.random() > 0.02 else rng.randint(11, max_authors)
        k = min(n_auth, len(countries), rng.choice((1, 2, 2, 2, 3, 3, 4)))
        picked: list[str] = []
        if eu and rng.random() > 0.05:
            picked.append(rng.choices(eu, eu_weights)[0])
        while len(picked) < k:
            c = rng.choices(countries, weights)[0]
            if c not in picked:
                picked.append(c)
        rng.shuffle(picked)
        authors = []
        for j in range(n_auth):
            country = picked[j] if j < len(picked) else rng.choice(picked)
            r = rng.random()
            if fully_gendered:
                given = rng.choice(FEMALE_NAMES if r < 0.4 else MALE_NAMES)
            elif r < 0.35:
                given = rng.choice(FEMALE_NAMES)
            elif r < 0.9:
                given = rng.choice(MALE_NAMES)
            elif r < 0.95:
                given = rng.choice(UNISEX_NAMES)
            else:
                given = rng.choice("ABCDEFGHJKLMNPRST") + "."
            affs = (country,) if rng.random() > 0.1 else (country, rng.choice(countries))
            authors.append(AuthorEntry(given, rng.choice(FAMILY_NAMES), affs))
        topic = "COVID-19 and " if year >= 2020 and rng.random() < covid_share else ""
        records.append(
            BibRecord(
                f"S{seed}-{i:06d}", year, tuple(authors), "Article",
                f"{topic}Study {i} of international collaboration", "", ("collaboration",), (),
            )
        )
    return Corpus(tuple(records), (f"synth: random n={n_records} seed={seed}",))
