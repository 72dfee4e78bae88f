"""Country registry: canonical country names, EU flags and the network node set."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

# Source spellings seen in address fields, mapped to canonical registry names.
# Keys are case-folded.
ALIASES: dict[str, str] = {
    "united states": "USA",
    "united states of america": "USA",
    "u.s.a.": "USA",
    "peoples r china": "PR China",
    "people's republic of china": "PR China",
    "china": "PR China",
    "northern ireland": "North Ireland",
    "n ireland": "North Ireland",
    "korea": "South Korea",
    "republic of korea": "South Korea",
    "south korea": "South Korea",
    "czechia": "Czech Republic",
    "russian federation": "Russia",
    "turkiye": "Turkey",
    "türkiye": "Turkey",
    "the netherlands": "Netherlands",
    "netherlands": "Netherlands",
    "slovak republic": "Slovakia",
}


class RegistryError(ValueError):
    pass


@dataclass(frozen=True)
class CountryEntry:
    name: str
    is_eu: bool


@dataclass(frozen=True)
class CountryRegistry:
    """Known countries plus the ordered subset used as network nodes.

    ``selection`` keeps rank order when produced by
    :func:`ircnet.corpus.select_top_countries`; lookups go through
    :meth:`canonical`, which accepts exact names and :data:`ALIASES`.
    """

    entries: tuple[CountryEntry, ...]
    selection: tuple[str, ...]
    _lookup: dict[str, str] = field(init=False, repr=False, compare=False)
    _eu: frozenset[str] = field(init=False, repr=False, compare=False)
    _memo: dict[str, str | None] = field(init=False, repr=False, compare=False)
    # record id -> (record, resolved countries); see ircnet.corpus.record_countries
    _records: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise RegistryError(f"duplicate registry entries: {dupes}")
        known = set(names)
        missing = [s for s in self.selection if s not in known]
        if missing:
            raise RegistryError(f"selection names not in registry: {missing}")
        if len(set(self.selection)) != len(self.selection):
            raise RegistryError("duplicate names in selection")
        lookup = {n.casefold(): n for n in names}
        for alias, canon in ALIASES.items():
            if canon in known:
                lookup.setdefault(alias, canon)
        object.__setattr__(self, "_lookup", lookup)
        object.__setattr__(self, "_eu", frozenset(e.name for e in self.entries if e.is_eu))
        object.__setattr__(self, "_memo", {})
        object.__setattr__(self, "_records", {})

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    @property
    def eu_names(self) -> frozenset[str]:
        return self._eu

    def is_eu(self, name: str) -> bool:
        return name in self._eu

    def canonical(self, raw: str) -> str | None:
        """Canonical registry name for a source spelling, or None."""
        try:
            return self._memo[raw]
        except KeyError:
            pass
        name = self._lookup.get(" ".join(raw.split()).casefold()) if raw else None
        self._memo[raw] = name
        return name

    def with_selection(self, selection: Iterable[str]) -> CountryRegistry:
        out = CountryRegistry(self.entries, tuple(selection))
        # resolution does not depend on the selection, so the caches carry over
        object.__setattr__(out, "_memo", self._memo)
        object.__setattr__(out, "_records", self._records)
        return out


def parse_registry(lines: Iterable[str]) -> CountryRegistry:
    """Parse ``name<TAB>eu|noneu[<TAB>noselect]`` lines.

    Blank lines and ``#`` comments are skipped. Entries flagged ``noselect``
    are recognized during country resolution but are not network nodes.
    """
    entries: list[CountryEntry] = []
    selection: list[str] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2 or len(parts) > 3:
            raise RegistryError(f"line {lineno}: expected name<TAB>eu|noneu, got {line!r}")
        name, flag = parts[0].strip(), parts[1].strip().lower()
        if flag not in ("eu", "noneu"):
            raise RegistryError(f"line {lineno}: EU flag must be 'eu' or 'noneu', got {flag!r}")
        select = True
        if len(parts) == 3:
            marker = parts[2].strip().lower()
            if marker not in ("select", "noselect"):
                raise RegistryError(f"line {lineno}: unknown marker {marker!r}")
            select = marker == "select"
        entries.append(CountryEntry(name, flag == "eu"))
        if select:
            selection.append(name)
    return CountryRegistry(tuple(entries), tuple(selection))


def load_registry(path: str | Path | None = None) -> CountryRegistry:
    """Load a registry file; ``None`` loads the bundled 50-country default."""
    if path is None:
        text = resources.files("ircnet").joinpath("data/countries.tsv").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_registry(text.splitlines())


def format_registry(registry: CountryRegistry) -> str:
    selected = set(registry.selection)
    out = []
    for e in registry.entries:
        row = f"{e.name}\t{'eu' if e.is_eu else 'noneu'}"
        if e.name not in selected:
            row += "\tnoselect"
        out.append(row)
    return "\n".join(out) + "\n"
