"""Per-emotion linguistic signatures and cross-dataset consolidation.

A signature keeps the top decile (by mean normalized frequency, ceil
rounding) of the categories that fired at all for a label group. Ties are
broken ascending by category name so results are identical across runs and
platforms. Consolidation keeps categories present in at least half of an
emotion's per-dataset signatures; the alternative reading of "half of the
texts" is available as :func:`consolidate_over_texts`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

from .corpus import LabelGroup
from .errors import SignatureError
from .features import extract
from .lexicon import Lexicon
from .textprep import tokenize

CONSOLIDATED_ID = "CONSOLIDATED"
DEFAULT_RETAIN_FRACTION = 0.10
DEFAULT_MIN_PRESENCE = 0.50


@dataclass(frozen=True)
class FeatureWeight:
    category: str
    weight: float


@dataclass(frozen=True)
class EmotionSignature:
    emotion: str
    dataset_id: str
    features: tuple[FeatureWeight, ...]
    provenance: tuple[str, ...]

    def category_set(self) -> frozenset[str]:
        return frozenset(fw.category for fw in self.features)

    def to_json_dict(self) -> dict:
        return {
            "emotion": self.emotion,
            "dataset_id": self.dataset_id,
            "provenance": list(self.provenance),
            "features": [
                {"category": fw.category, "weight": round(fw.weight, 6)}
                for fw in self.features
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, ensure_ascii=False, indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, data: dict) -> "EmotionSignature":
        return cls(
            emotion=data["emotion"],
            dataset_id=data["dataset_id"],
            features=tuple(
                FeatureWeight(category=f["category"], weight=float(f["weight"]))
                for f in data["features"]
            ),
            provenance=tuple(data["provenance"]),
        )


def _ranked(weights: dict[str, float]) -> list[FeatureWeight]:
    return [
        FeatureWeight(category=name, weight=weights[name])
        for name in sorted(weights, key=lambda n: (-weights[n], n))
    ]


def retention_count(nonzero_categories: int, retain_fraction: float) -> int:
    return math.ceil(retain_fraction * nonzero_categories)


def build_signature(
    group: LabelGroup,
    lexicon: Lexicon,
    *,
    retain_fraction: float = DEFAULT_RETAIN_FRACTION,
    content_tokens_only: bool = False,
) -> EmotionSignature:
    """Top-decile signature for one (emotion, dataset) group."""
    if not 0 < retain_fraction <= 1:
        raise SignatureError(f"retain_fraction must be in (0, 1], got {retain_fraction}")
    if not group.texts:
        raise SignatureError(f"empty group for emotion {group.emotion!r}")
    sums: dict[str, float] = {}
    for text in group.texts:
        fv = extract(tokenize(text), lexicon, content_tokens_only=content_tokens_only)
        for category, value in fv.values.items():
            sums[category] = sums.get(category, 0.0) + value
    if not sums:
        raise SignatureError(
            f"no signal: no text in group {group.emotion!r}/{group.dataset_id!r} "
            "matches any lexicon category"
        )
    n_texts = len(group.texts)
    weights = {category: total / n_texts for category, total in sums.items()}
    keep = retention_count(len(weights), retain_fraction)
    features = tuple(_ranked(weights)[:keep])
    return EmotionSignature(
        emotion=group.emotion,
        dataset_id=group.dataset_id,
        features=features,
        provenance=(group.dataset_id,),
    )


def consolidate(
    signatures: Sequence[EmotionSignature],
    *,
    min_presence: float = DEFAULT_MIN_PRESENCE,
) -> EmotionSignature:
    """Merge one emotion's per-dataset signatures by the presence rule.

    A category survives when it appears in at least ``min_presence`` of the
    input signatures (exactly half qualifies at the default). Its weight is
    the mean of its weights over the signatures where it appears.
    """
    if not signatures:
        raise SignatureError("consolidate needs at least one signature")
    emotions = {sig.emotion for sig in signatures}
    if len(emotions) != 1:
        raise SignatureError(
            "consolidate got mixed emotions: " + ", ".join(sorted(emotions))
        )
    n = len(signatures)
    counts: dict[str, int] = {}
    sums: dict[str, float] = {}
    for sig in signatures:
        for fw in sig.features:
            counts[fw.category] = counts.get(fw.category, 0) + 1
            sums[fw.category] = sums.get(fw.category, 0.0) + fw.weight
    kept = {
        category: sums[category] / counts[category]
        for category, count in counts.items()
        if count / n >= min_presence
    }
    if not kept:
        raise SignatureError(
            f"no category meets the {min_presence:.0%} presence threshold "
            f"for emotion {signatures[0].emotion!r}"
        )
    provenance = sorted({ds for sig in signatures for ds in sig.provenance})
    return EmotionSignature(
        emotion=signatures[0].emotion,
        dataset_id=CONSOLIDATED_ID,
        features=tuple(_ranked(kept)),
        provenance=tuple(provenance),
    )


def consolidate_over_texts(
    emotion: str,
    groups: Sequence[LabelGroup],
    lexicon: Lexicon,
    *,
    min_presence: float = DEFAULT_MIN_PRESENCE,
    retain_fraction: float = DEFAULT_RETAIN_FRACTION,
    content_tokens_only: bool = False,
) -> EmotionSignature:
    """Alternative presence-rule reading: fraction of individual texts.

    Candidate categories are the union of the per-dataset signatures; a
    candidate survives when it fires in at least ``min_presence`` of the
    emotion's texts pooled across datasets, weighted by its mean frequency
    over that pool.
    """
    if not groups:
        raise SignatureError(f"no groups supplied for emotion {emotion!r}")
    if any(g.emotion != emotion for g in groups):
        raise SignatureError("all groups must carry the requested emotion")
    per_dataset = [
        build_signature(
            g, lexicon, retain_fraction=retain_fraction, content_tokens_only=content_tokens_only
        )
        for g in groups
    ]
    candidates = sorted({fw.category for sig in per_dataset for fw in sig.features})
    pooled = [
        extract(tokenize(text), lexicon, content_tokens_only=content_tokens_only)
        for g in groups
        for text in g.texts
    ]
    total = len(pooled)
    kept: dict[str, float] = {}
    for category in candidates:
        present = sum(1 for fv in pooled if fv.value(category) > 0)
        if present / total >= min_presence:
            kept[category] = sum(fv.value(category) for fv in pooled) / total
    if not kept:
        raise SignatureError(
            f"no category meets the {min_presence:.0%} text-presence threshold "
            f"for emotion {emotion!r}"
        )
    provenance = sorted({g.dataset_id for g in groups})
    return EmotionSignature(
        emotion=emotion,
        dataset_id=CONSOLIDATED_ID,
        features=tuple(_ranked(kept)),
        provenance=tuple(provenance),
    )
