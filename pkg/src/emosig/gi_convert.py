"""Converter stub for user-supplied General Inquirer spreadsheets.

The classic GI spreadsheet has one row per entry with the word in the first
column (sense-tagged entries look like "ABOUT#1") and one column per
category where any non-empty cell marks membership. This converter folds
sense tags together, lowercases, drops multi-word entries, and emits the
canonical lexicon JSON this package loads. The GI resource itself is not
redistributed here; bring your own copy.
"""
from __future__ import annotations

import csv
from pathlib import Path

from .errors import ConfigError
from .lexicon import DEFAULT_NEGATION_WINDOW, DEFAULT_NEGATORS, Lexicon

# Spreadsheet columns that are annotations, not categories.
NON_CATEGORY_COLUMNS = {"entry", "source", "defined", "othtags", "definition"}


def convert_gi_spreadsheet(
    path: str | Path,
    *,
    delimiter: str | None = None,
    category_suffix: str = "_GI",
) -> Lexicon:
    """Build a Lexicon from a GI spreadsheet export (CSV or TSV)."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8", errors="replace")
    except OSError as exc:
        raise ConfigError(f"cannot read GI spreadsheet {p}: {exc}") from exc
    sep = delimiter or ("\t" if p.suffix.lower() in {".tsv", ".txt"} else ",")
    reader = csv.reader(text.splitlines(), delimiter=sep)
    rows = list(reader)
    if not rows:
        raise ConfigError(f"{p}: empty spreadsheet")
    header = rows[0]
    if not header or not header[0]:
        raise ConfigError(f"{p}: missing header row")
    category_columns = [
        (i, name.strip())
        for i, name in enumerate(header[1:], start=1)
        if name.strip() and name.strip().lower() not in NON_CATEGORY_COLUMNS
    ]
    if not category_columns:
        raise ConfigError(f"{p}: no category columns found")
    categories: dict[str, set[str]] = {}
    for row in rows[1:]:
        if not row or not row[0].strip():
            continue
        word = row[0].split("#", 1)[0].strip().lower()
        if not word or any(ch.isspace() for ch in word):
            continue
        for index, name in category_columns:
            if index < len(row) and row[index].strip():
                label = name if name.endswith(category_suffix) else name + category_suffix
                categories.setdefault(label, set()).add(word)
    if not categories:
        raise ConfigError(f"{p}: no category memberships found")
    return Lexicon.build(
        categories, negators=DEFAULT_NEGATORS, negation_window=DEFAULT_NEGATION_WINDOW
    )


def convert_to_json(path: str | Path, out_path: str | Path, **kwargs) -> None:
    """Convert a GI spreadsheet and write the canonical lexicon JSON."""
    lexicon = convert_gi_spreadsheet(path, **kwargs)
    Path(out_path).write_text(lexicon.to_canonical_json(), encoding="utf-8")
