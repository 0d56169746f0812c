"""Bridge for external neural training pipelines.

Exposes emosig feature extraction over plain Python types (dicts, lists,
floats) so downstream ML stacks can consume GI features without touching
the pipeline machinery. A session snapshots a lexicon plus an optional
signature set at open time and is immutable afterwards; every output is
produced by the same code paths as the main package, so results match the
CLI byte for byte on identical inputs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from emosig.errors import ConfigError
from emosig.features import extract as _extract
from emosig.features import signature_projection as _signature_projection
from emosig.features import token_vectors as _token_vectors
from emosig.lexicon import Lexicon, load_lexicon
from emosig.signatures import EmotionSignature
from emosig.textprep import NormalizationConfig, normalize, tokenize

__version__ = "0.1.0"

__all__ = [
    "BridgeSession",
    "open_session",
    "extract",
    "token_vectors",
    "signature_projection",
]


class BridgeError(ConfigError):
    """Session construction or misuse errors."""


@dataclass(frozen=True)
class BridgeSession:
    """Immutable handle over a loaded lexicon, signatures, and text config."""

    lexicon: Lexicon
    signatures: tuple[EmotionSignature, ...]
    normalization: NormalizationConfig | None
    content_tokens_only: bool

    def _tokenized(self, text: str):
        if not isinstance(text, str):
            raise BridgeError(f"text must be a string, got {type(text).__name__}")
        if self.normalization is not None:
            text = normalize(text, self.normalization)
        return tokenize(text)

    def extract(self, text: str) -> dict:
        """Category frequencies plus token_count, as a plain dict."""
        fv = _extract(
            self._tokenized(text),
            self.lexicon,
            content_tokens_only=self.content_tokens_only,
        )
        return fv.to_json_dict()

    def token_vectors(self, text: str) -> list[list[int]]:
        """Per-token binary GI rows; negated tokens come back as all zeros."""
        return [
            list(vec.effective_bits())
            for vec in _token_vectors(self._tokenized(text), self.lexicon)
        ]

    def signature_projection(self, text: str) -> list[float]:
        """Frequencies over the loaded signatures' category union."""
        if not self.signatures:
            raise BridgeError(
                "session was opened without signatures; pass signature_paths to open_session"
            )
        fv = _extract(
            self._tokenized(text),
            self.lexicon,
            content_tokens_only=self.content_tokens_only,
        )
        return _signature_projection(fv, self.signatures)


def _load_signature(path: Path) -> EmotionSignature:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise BridgeError(f"cannot read signature file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BridgeError(f"{path}: invalid JSON: {exc.msg}") from exc
    return EmotionSignature.from_json_dict(data)


def open_session(
    lexicon_path: str | Path,
    signature_paths: Iterable[str | Path] = (),
    *,
    normalization: NormalizationConfig | str | None = None,
    content_tokens_only: bool = False,
) -> BridgeSession:
    """Load a lexicon (and optionally signatures) into an immutable session.

    ``normalization`` may be None (raw text), "default" (the packaged
    emoticon/slang/hashtag config), or a NormalizationConfig.
    """
    lexicon = load_lexicon(lexicon_path)
    signatures = tuple(_load_signature(Path(p)) for p in signature_paths)
    if normalization == "default":
        config: NormalizationConfig | None = NormalizationConfig.default()
    elif normalization is None or isinstance(normalization, NormalizationConfig):
        config = normalization
    else:
        raise BridgeError(
            "normalization must be None, 'default', or a NormalizationConfig"
        )
    return BridgeSession(
        lexicon=lexicon,
        signatures=signatures,
        normalization=config,
        content_tokens_only=content_tokens_only,
    )


def extract(session: BridgeSession, text: str) -> dict:
    return session.extract(text)


def token_vectors(session: BridgeSession, text: str) -> list[list[int]]:
    return session.token_vectors(text)


def signature_projection(session: BridgeSession, text: str) -> list[float]:
    return session.signature_projection(text)
