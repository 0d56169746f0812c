"""Signature comparison: Jaccard matrix, strong pairs, universal and unique features.

Thresholds are strict: a pair is "strong" only when J exceeds the strong
threshold, and a feature is "universal" only when its occurrence fraction
exceeds the universal threshold.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .errors import AnalysisError
from .signatures import EmotionSignature

DEFAULT_STRONG_THRESHOLD = 0.7
DEFAULT_UNIVERSAL_THRESHOLD = 0.9


def jaccard(a: EmotionSignature, b: EmotionSignature) -> float:
    """|A intersect B| / |A union B| over the category sets; weights ignored."""
    set_a, set_b = a.category_set(), b.category_set()
    if not set_a or not set_b:
        raise AnalysisError("jaccard requires non-empty signatures")
    union = set_a | set_b
    return len(set_a & set_b) / len(union)


@dataclass(frozen=True)
class SimilarityMatrix:
    labels: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def pair_count(self) -> int:
        n = len(self.labels)
        return n * (n - 1) // 2

    def pairs(self) -> list[tuple[str, str, float]]:
        """Upper-triangle pairs in label order."""
        out = []
        for i in range(len(self.labels)):
            for j in range(i + 1, len(self.labels)):
                out.append((self.labels[i], self.labels[j], self.values[i][j]))
        return out

    def to_csv(self) -> str:
        lines = ["emotion," + ",".join(self.labels)]
        for label, row in zip(self.labels, self.values):
            lines.append(label + "," + ",".join(f"{v:.4f}" for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {"labels": list(self.labels), "values": [list(row) for row in self.values]}
        return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def similarity_matrix(signatures: Sequence[EmotionSignature]) -> SimilarityMatrix:
    """All pairwise Jaccard coefficients, labels sorted ascending."""
    if len(signatures) < 2:
        raise AnalysisError("need at least 2 signatures to build a similarity matrix")
    by_emotion: dict[str, EmotionSignature] = {}
    for sig in signatures:
        if sig.emotion in by_emotion:
            raise AnalysisError(f"duplicate emotion in signature set: {sig.emotion!r}")
        by_emotion[sig.emotion] = sig
    labels = tuple(sorted(by_emotion))
    n = len(labels)
    values = [[1.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            coeff = jaccard(by_emotion[labels[i]], by_emotion[labels[j]])
            values[i][j] = coeff
            values[j][i] = coeff
    return SimilarityMatrix(labels=labels, values=tuple(tuple(row) for row in values))


@dataclass(frozen=True)
class OverlapReport:
    strong_threshold: float
    universal_threshold: float
    strong_pairs: tuple[tuple[str, str, float], ...]
    universal_features: tuple[tuple[str, float], ...]
    unique_features: tuple[tuple[str, str], ...]

    def to_json_dict(self) -> dict:
        return {
            "strong_threshold": self.strong_threshold,
            "universal_threshold": self.universal_threshold,
            "strong_pairs": [
                {"a": a, "b": b, "jaccard": j} for a, b, j in self.strong_pairs
            ],
            "universal_features": [
                {"category": c, "fraction": f} for c, f in self.universal_features
            ],
            "unique_features": [
                {"category": c, "emotion": e} for c, e in self.unique_features
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, ensure_ascii=False, indent=2) + "\n"

    def summary(self) -> str:
        lines = [
            f"strong pairs (J > {self.strong_threshold}): {len(self.strong_pairs)}",
            f"universal features (fraction > {self.universal_threshold}): "
            + (", ".join(c for c, _ in self.universal_features) or "none"),
            f"unique features: "
            + (", ".join(f"{c} ({e})" for c, e in self.unique_features) or "none"),
        ]
        return "\n".join(lines)


def overlap_report(
    signatures: Sequence[EmotionSignature],
    strong_threshold: float = DEFAULT_STRONG_THRESHOLD,
    universal_threshold: float = DEFAULT_UNIVERSAL_THRESHOLD,
) -> OverlapReport:
    """Strong pairs, universal features, and per-emotion unique features."""
    matrix = similarity_matrix(signatures)
    by_emotion = {sig.emotion: sig for sig in signatures}
    strong = [
        (a, b, j) for a, b, j in matrix.pairs() if j > strong_threshold
    ]
    strong.sort(key=lambda t: (-t[2], t[0], t[1]))

    occurrences: dict[str, list[str]] = {}
    for emotion in matrix.labels:
        for category in sorted(by_emotion[emotion].category_set()):
            occurrences.setdefault(category, []).append(emotion)
    n = len(matrix.labels)
    universal = [
        (category, len(emotions) / n)
        for category, emotions in occurrences.items()
        if len(emotions) / n > universal_threshold
    ]
    universal.sort(key=lambda t: (-t[1], t[0]))
    unique = [
        (category, emotions[0])
        for category, emotions in sorted(occurrences.items())
        if len(emotions) == 1
    ]
    return OverlapReport(
        strong_threshold=strong_threshold,
        universal_threshold=universal_threshold,
        strong_pairs=tuple(strong),
        universal_features=tuple(universal),
        unique_features=tuple(unique),
    )
