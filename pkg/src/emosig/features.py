"""Per-text normalized category frequencies and per-token binary GI vectors.

A token is *negated* when any negator word occurs within the preceding
``negation_window`` tokens; negated tokens contribute to no category.
Frequencies divide by the total token count, punctuation included, unless
``content_tokens_only`` is set (then punctuation-only tokens neither match
nor count in the denominator).

Everything here is pure and deterministic: identical inputs give identical
outputs regardless of call order or threading.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .lexicon import Lexicon
from .textprep import TokenizedText

if TYPE_CHECKING:  # pragma: no cover - typing only, avoids an import cycle
    from .signatures import EmotionSignature


@dataclass(frozen=True)
class FeatureVector:
    """Nonzero category frequencies for one text; absent categories are zero."""

    values: dict[str, float]
    token_count: int

    def value(self, category: str) -> float:
        return self.values.get(category, 0.0)

    def to_json_dict(self) -> dict:
        out: dict = dict(self.values)
        out["token_count"] = self.token_count
        return out


@dataclass(frozen=True)
class TokenGIVector:
    """Binary category membership for one token, one bit per lexicon category."""

    bits: tuple[int, ...]
    negated: bool

    def effective_bits(self) -> tuple[int, ...]:
        """Bits as consumers must read them: all zero when the token is negated."""
        if self.negated:
            return tuple(0 for _ in self.bits)
        return self.bits


def is_content_token(token: str) -> bool:
    return any(ch.isalnum() for ch in token)


def negation_flags(tokens: Sequence[str], lexicon: Lexicon) -> list[bool]:
    """True at position i when a negator occurs in the preceding window."""
    negators = lexicon.negators
    window = lexicon.negation_window
    lowered = [t.lower() for t in tokens]
    flags = []
    for i in range(len(tokens)):
        start = max(0, i - window)
        flags.append(any(lowered[j] in negators for j in range(start, i)))
    return flags


def extract(
    text: TokenizedText, lexicon: Lexicon, *, content_tokens_only: bool = False
) -> FeatureVector:
    """SEANCE-style normalized frequency of each lexicon category in ``text``."""
    tokens = text.tokens
    negated = negation_flags(tokens, lexicon)
    eligible = [
        not content_tokens_only or is_content_token(tok) for tok in tokens
    ]
    denom = sum(eligible)
    if denom == 0:
        return FeatureVector(values={}, token_count=0)
    counts: dict[str, int] = {}
    for i, tok in enumerate(tokens):
        if negated[i] or not eligible[i]:
            continue
        for cat in lexicon.categories_of(tok):
            counts[cat] = counts.get(cat, 0) + 1
    values = {
        name: counts[name] / denom for name in lexicon.category_names if name in counts
    }
    return FeatureVector(values=values, token_count=denom)


def token_vectors(text: TokenizedText, lexicon: Lexicon) -> list[TokenGIVector]:
    """One binary vector per token, in lexicon category order."""
    names = lexicon.category_names
    negated = negation_flags(text.tokens, lexicon)
    out = []
    for i, tok in enumerate(text.tokens):
        member = lexicon.categories_of(tok)
        bits = tuple(1 if name in member else 0 for name in names)
        out.append(TokenGIVector(bits=bits, negated=negated[i]))
    return out


def signature_category_union(signatures: Sequence["EmotionSignature"]) -> tuple[str, ...]:
    """Sorted union of every category appearing in any signature."""
    union: set[str] = set()
    for sig in signatures:
        union.update(fw.category for fw in sig.features)
    return tuple(sorted(union))


def signature_projection(
    fv: FeatureVector, signatures: Sequence["EmotionSignature"]
) -> list[float]:
    """Dense vector of ``fv`` frequencies over the signatures' category union.

    The dimension is fixed by the signature set, independent of the input
    text, so the result can feed a fixed-width classifier input.
    """
    if not signatures:
        raise ValueError("signature_projection requires at least one signature")
    union = signature_category_union(signatures)
    return [fv.value(cat) for cat in union]


def signature_emotion_scores(
    fv: FeatureVector, signatures: Sequence["EmotionSignature"]
) -> list[float]:
    """Per-emotion aggregate of the projection: one scalar per signature.

    Entry k is the total frequency mass ``fv`` puts on the categories of
    the k-th signature (signatures ordered by emotion name). This is the
    collapsed alternative to the per-category union form.
    """
    if not signatures:
        raise ValueError("signature_emotion_scores requires at least one signature")
    ordered = sorted(signatures, key=lambda sig: sig.emotion)
    return [
        sum(fv.value(fw.category) for fw in sig.features) for sig in ordered
    ]
