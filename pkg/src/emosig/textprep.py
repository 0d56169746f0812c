"""Text normalization and deterministic tokenization.

Normalization applies, in order: emoticon replacement (longest match first),
hashtag handling, whole-token slang expansion, lowercasing. The slang stage
rebuilds the string with single spaces, so normalized output is always
single-spaced and trimmed. With the shipped resource maps the whole
transform is idempotent.

Tokenization splits on Unicode whitespace, peels leading/trailing
punctuation characters into their own tokens, and splits the "n't"
contraction suffix into a standalone token so contracted negatives are
visible to negation scoping.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import ConfigError

HASHTAG_MODES = ("strip_and_split", "strip_only", "keep")

_HASHTAG_RE = re.compile(r"#(\w+)")
_CAMEL_LOWER_UPPER = re.compile(r"(?<=[a-z])(?=[A-Z])")
_CAMEL_ACRONYM = re.compile(r"(?<=[A-Z])(?=[A-Z][a-z])")
_LETTER_DIGIT = re.compile(r"(?<=[^\W\d_])(?=\d)")
_DIGIT_LETTER = re.compile(r"(?<=\d)(?=[^\W\d_])")


@dataclass(frozen=True)
class NormalizationConfig:
    lowercase: bool = True
    hashtag_mode: str = "strip_and_split"
    emoticon_map: dict[str, str] = field(default_factory=dict)
    slang_map: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.hashtag_mode not in HASHTAG_MODES:
            raise ConfigError(
                f"hashtag_mode must be one of {HASHTAG_MODES}, got {self.hashtag_mode!r}"
            )
        for label, mapping in (("emoticon", self.emoticon_map), ("slang", self.slang_map)):
            for key, value in mapping.items():
                if not key:
                    raise ConfigError(f"empty {label} key")
                if "\t" in value or "\n" in value:
                    raise ConfigError(f"{label} replacement for {key!r} contains tab/newline")

    @classmethod
    def default(cls) -> "NormalizationConfig":
        """Config backed by the packaged emoticon and slang resource files."""
        from .resources import resource_path

        return cls(
            emoticon_map=load_token_map(resource_path("emoticons.tsv")),
            slang_map=load_token_map(resource_path("slang.tsv")),
        )


@dataclass(frozen=True)
class TokenizedText:
    tokens: tuple[str, ...]
    source: str

    def __len__(self) -> int:
        return len(self.tokens)


def load_token_map(path: str | Path) -> dict[str, str]:
    """Read a key<TAB>replacement TSV into an ordered dict."""
    p = Path(path)
    try:
        lines = p.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read token map {p}: {exc}") from exc
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ConfigError(f"{p}:{lineno}: expected 'key<TAB>replacement'")
        mapping[parts[0]] = parts[1]
    return mapping


def _replace_emoticons(text: str, mapping: Mapping[str, str]) -> str:
    if not mapping:
        return text
    # Longest alternative first => longest match wins at each position.
    keys = sorted(mapping, key=lambda k: (-len(k), k))
    pattern = re.compile("|".join(re.escape(k) for k in keys))
    return pattern.sub(lambda m: mapping[m.group(0)], text)


def _split_hashtag_body(body: str) -> str:
    out = _CAMEL_ACRONYM.sub(" ", _CAMEL_LOWER_UPPER.sub(" ", body))
    out = _DIGIT_LETTER.sub(" ", _LETTER_DIGIT.sub(" ", out))
    return out.replace("_", " ")


def _handle_hashtags(text: str, mode: str) -> str:
    if mode == "keep":
        return text
    if mode == "strip_only":
        return _HASHTAG_RE.sub(lambda m: m.group(1), text)
    return _HASHTAG_RE.sub(lambda m: _split_hashtag_body(m.group(1)), text)


def _expand_slang(text: str, mapping: Mapping[str, str]) -> str:
    lowered = {k.lower(): v for k, v in mapping.items()}
    return " ".join(lowered.get(tok.lower(), tok) for tok in text.split())


def normalize(text: str, config: NormalizationConfig) -> str:
    """Normalize raw text; idempotent for well-formed replacement maps."""
    out = _replace_emoticons(text, config.emoticon_map)
    out = _handle_hashtags(out, config.hashtag_mode)
    out = _expand_slang(out, config.slang_map)
    if config.lowercase:
        out = out.lower()
    return out


def _split_core(core: str) -> list[str]:
    # Recurse into the contraction stem: its tail may itself be punctuation
    # (e.g. "a,n't"), and the fixpoint property needs that peeled too.
    if len(core) > 3 and core.lower().endswith("n't"):
        return _split_chunk(core[:-3]) + [core[-3:]]
    return [core]


def _split_chunk(chunk: str) -> list[str]:
    lead: list[str] = []
    trail: list[str] = []
    core = chunk
    while core and not core[0].isalnum():
        lead.append(core[0])
        core = core[1:]
    while core and not core[-1].isalnum():
        trail.append(core[-1])
        core = core[:-1]
    trail.reverse()
    parts = _split_core(core) if core else []
    return lead + parts + trail


def tokenize(text: str) -> TokenizedText:
    """Split on whitespace, peel edge punctuation, split "n't" contractions."""
    tokens: list[str] = []
    for chunk in text.split():
        tokens.extend(_split_chunk(chunk))
    return TokenizedText(tokens=tuple(tokens), source=text)
