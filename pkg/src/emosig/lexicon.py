"""General-Inquirer-style category lexicon: loading, validation, lookup.

A lexicon maps category names (e.g. "Hostile_GI") to sets of lowercase
single-token words, and carries the negator word list used for negation
scoping during feature extraction. Instances are immutable after
construction and safe to share across threads.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ConfigError, LexiconFormatError, LexiconValidationError

DEFAULT_NEGATORS = frozenset({"not", "no", "never", "none", "cannot", "n't", "without"})
DEFAULT_NEGATION_WINDOW = 3


@dataclass(frozen=True)
class Lexicon:
    """Immutable category lexicon.

    ``categories`` iterates in ascending lexicographic name order; all words
    are lowercase, non-empty and contain no whitespace. Use :meth:`build` or
    :func:`load_lexicon` rather than the raw constructor so these invariants
    actually hold.
    """

    categories: dict[str, frozenset[str]]
    negators: frozenset[str]
    negation_window: int
    _word_index: dict[str, tuple[str, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        index: dict[str, list[str]] = {}
        for name in self.categories:  # already sorted by build()
            for word in self.categories[name]:
                index.setdefault(word, []).append(name)
        frozen = {w: tuple(sorted(names)) for w, names in index.items()}
        object.__setattr__(self, "_word_index", frozen)

    @classmethod
    def build(
        cls,
        categories: Mapping[str, Iterable[str]],
        negators: Iterable[str] = DEFAULT_NEGATORS,
        negation_window: int = DEFAULT_NEGATION_WINDOW,
    ) -> "Lexicon":
        """Validate, normalize and construct a Lexicon.

        Words are lowercased and de-duplicated; multi-word entries are
        rejected because downstream matching is strictly token-level.
        """
        if negation_window < 1:
            raise LexiconValidationError(
                f"negation_window must be >= 1, got {negation_window}"
            )
        clean: dict[str, frozenset[str]] = {}
        for raw_name in categories:
            name = raw_name.strip()
            if not name:
                raise LexiconValidationError("empty category name")
            if "\t" in name or "\n" in name:
                raise LexiconValidationError(f"category name contains control whitespace: {name!r}")
            if name in clean:
                raise LexiconValidationError(f"duplicate category name: {name!r}")
            words = set()
            for raw_word in categories[raw_name]:
                word = raw_word.strip().lower()
                if not word:
                    raise LexiconValidationError(f"empty word in category {name!r}")
                if any(ch.isspace() for ch in word):
                    raise LexiconValidationError(
                        f"multi-word entry {raw_word!r} in category {name!r} is not allowed"
                    )
                words.add(word)
            if not words:
                raise LexiconValidationError(f"category {name!r} has no words")
            clean[name] = frozenset(words)
        ordered = {name: clean[name] for name in sorted(clean)}
        neg = frozenset(w.strip().lower() for w in negators if w.strip())
        return cls(categories=ordered, negators=neg, negation_window=negation_window)

    @property
    def category_names(self) -> tuple[str, ...]:
        return tuple(self.categories)

    def categories_of(self, word: str) -> frozenset[str]:
        """Every category containing ``word`` (case-insensitive); empty if none."""
        return frozenset(self._word_index.get(word.lower(), ()))

    def to_canonical_json(self) -> str:
        """Serialize with sorted keys and sorted word lists (round-trip stable)."""
        payload = {
            "categories": {name: sorted(words) for name, words in self.categories.items()},
            "negation_window": self.negation_window,
            "negators": sorted(self.negators),
        }
        return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def categories_of(lexicon: Lexicon, word: str) -> frozenset[str]:
    """Module-level alias for :meth:`Lexicon.categories_of`."""
    return lexicon.categories_of(word)


def _reject_duplicate_keys(pairs):
    obj = {}
    for key, value in pairs:
        if key in obj:
            raise LexiconValidationError(f"duplicate category name: {key!r}")
        obj[key] = value
    return obj


def _load_json(path: Path) -> Lexicon:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read lexicon file {path}: {exc}") from exc
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise LexiconFormatError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict) or "categories" not in data:
        raise LexiconFormatError(f"{path}: expected an object with a 'categories' key")
    categories = data["categories"]
    if not isinstance(categories, dict):
        raise LexiconFormatError(f"{path}: 'categories' must be an object")
    for name, words in categories.items():
        if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
            raise LexiconFormatError(f"{path}: category {name!r} must map to a list of strings")
    negators = data.get("negators", sorted(DEFAULT_NEGATORS))
    window = data.get("negation_window", DEFAULT_NEGATION_WINDOW)
    if not isinstance(window, int):
        raise LexiconFormatError(f"{path}: 'negation_window' must be an integer")
    return Lexicon.build(categories, negators=negators, negation_window=window)


def _load_tsv(path: Path) -> Lexicon:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read lexicon file {path}: {exc}") from exc
    categories: dict[str, set[str]] = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconFormatError(
                f"{path}:{lineno}: expected 'word<TAB>category', got {len(parts)} fields"
            )
        word, category = parts[0].strip(), parts[1].strip()
        if not category:
            raise LexiconValidationError(f"{path}:{lineno}: empty category field")
        if not word:
            raise LexiconValidationError(f"{path}:{lineno}: empty word field")
        categories.setdefault(category, set()).add(word)
    negators: Iterable[str] = DEFAULT_NEGATORS
    sibling = path.parent / "negators.txt"
    if sibling.exists():
        negators = [ln.strip() for ln in sibling.read_text(encoding="utf-8").splitlines() if ln.strip()]
    return Lexicon.build(categories, negators=negators)


def load_lexicon(path: str | Path, format: str | None = None) -> Lexicon:
    """Load a lexicon from ``path`` in the given format ("json" or "tsv").

    When ``format`` is None it is inferred from the file extension.
    Loading the same bytes always yields structurally equal lexicons with
    identical category iteration order.
    """
    p = Path(path)
    fmt = format or ("tsv" if p.suffix.lower() in {".tsv", ".txt"} else "json")
    if fmt == "json":
        return _load_json(p)
    if fmt == "tsv":
        return _load_tsv(p)
    raise ConfigError(f"unknown lexicon format {fmt!r} (expected 'json' or 'tsv')")


def loads_lexicon(text: str) -> Lexicon:
    """Parse a lexicon from a JSON string (used for round-trip checks)."""
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise LexiconFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return Lexicon.build(
        data["categories"],
        negators=data.get("negators", sorted(DEFAULT_NEGATORS)),
        negation_window=data.get("negation_window", DEFAULT_NEGATION_WINDOW),
    )
