"""Convert a nam_dict-style first-name dictionary into a lexicon.

Each dictionary line starts with a gender code in columns 1-2 followed by
the name from column 4; frequency columns follow past column 30. Codes are
collapsed as:

    M, 1M, ?M  -> male      (male, male if first part, mostly male)
    F, 1F, ?F  -> female
    ?          -> unisex
    =          -> skipped   (spelling-equivalence lines)

A name listed with more than one collapsed label becomes unisex. ``+``
inside a name joins compound parts and is rewritten as ``-``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .gender import GenderLabel, GenderLexicon, normalize_name

CODES = {
    "M": GenderLabel.MALE,
    "1M": GenderLabel.MALE,
    "?M": GenderLabel.MALE,
    "F": GenderLabel.FEMALE,
    "1F": GenderLabel.FEMALE,
    "?F": GenderLabel.FEMALE,
    "?": GenderLabel.UNISEX,
}

NAME_START = 3
NAME_END = 29


def convert_namdict(lines: Iterable[str]) -> GenderLexicon:
    out: dict[str, GenderLabel] = {}
    for raw in lines:
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        code = line[:2].strip()
        if code == "=":
            continue
        label = CODES.get(code)
        if label is None:
            continue
        if len(line) > NAME_END:
            name = line[NAME_START:NAME_END].strip()
        else:
            name = line[NAME_START:].strip()
        if not name:
            continue
        name = normalize_name(name.replace("+", "-"))
        prev = out.get(name)
        out[name] = label if prev is None or prev == label else GenderLabel.UNISEX
    return GenderLexicon(out)


def load_namdict(path: str | Path, encoding: str = "latin-1") -> GenderLexicon:
    return convert_namdict(Path(path).read_text(encoding=encoding).splitlines())
