"""Multi-label / single-label classification metrics.

Per-label precision, recall and F1 use the 0/0 := 0 convention; macro
values are unweighted means over the label space. Multi-label predictions
threshold sigmoid scores at 0.5 (>= counts as positive); single-label
predictions take the argmax (first index on ties).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

TASK_MODES = ("multi_label", "single_label")


@dataclass(frozen=True)
class LabelScores:
    f1: float
    precision: float
    recall: float


@dataclass(frozen=True)
class SeedStat:
    mean: float
    std: float


@dataclass(frozen=True)
class EvalResult:
    macro_f1: float
    macro_precision: float
    macro_recall: float
    per_label: dict[str, LabelScores]
    seed_stats: dict[str, SeedStat] | None = None

    def to_json_dict(self) -> dict:
        out: dict = {
            "macro_f1": self.macro_f1,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "per_label": {
                label: {"f1": s.f1, "precision": s.precision, "recall": s.recall}
                for label, s in self.per_label.items()
            },
        }
        if self.seed_stats is not None:
            out["seed_stats"] = {
                metric: {"mean": st.mean, "std": st.std}
                for metric, st in self.seed_stats.items()
            }
        return out


def _prf(tp: int, fp: int, fn: int) -> LabelScores:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return LabelScores(f1=f1, precision=precision, recall=recall)


def _binarize(scores: Sequence[Sequence[float]], task_mode: str) -> list[list[int]]:
    out = []
    for row in scores:
        if task_mode == "multi_label":
            out.append([1 if float(v) >= 0.5 else 0 for v in row])
        else:
            values = [float(v) for v in row]
            best = values.index(max(values))
            out.append([1 if j == best else 0 for j in range(len(values))])
    return out


def evaluate(
    scores: Sequence[Sequence[float]],
    gold: Sequence[Sequence[int]],
    labels: Sequence[str],
    task_mode: str = "multi_label",
) -> EvalResult:
    """Score predictions against gold binary rows over ``labels``."""
    if task_mode not in TASK_MODES:
        raise ValueError(f"task_mode must be one of {TASK_MODES}, got {task_mode!r}")
    if len(scores) != len(gold):
        raise ValueError(f"{len(scores)} prediction rows vs {len(gold)} gold rows")
    width = len(labels)
    for name, rows in (("scores", scores), ("gold", gold)):
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(
                    f"{name} row {i} has width {len(row)}, label space has {width}"
                )
    if task_mode == "single_label":
        for i, row in enumerate(gold):
            if sum(int(v) for v in row) != 1:
                raise ValueError(f"single_label gold row {i} must have exactly one positive")
    predictions = _binarize(scores, task_mode)
    per_label: dict[str, LabelScores] = {}
    for j, label in enumerate(labels):
        tp = fp = fn = 0
        for pred_row, gold_row in zip(predictions, gold):
            predicted, actual = pred_row[j], int(gold_row[j])
            if predicted and actual:
                tp += 1
            elif predicted and not actual:
                fp += 1
            elif not predicted and actual:
                fn += 1
        per_label[label] = _prf(tp, fp, fn)
    n = len(labels)
    return EvalResult(
        macro_f1=sum(s.f1 for s in per_label.values()) / n,
        macro_precision=sum(s.precision for s in per_label.values()) / n,
        macro_recall=sum(s.recall for s in per_label.values()) / n,
        per_label=per_label,
    )


def aggregate_over_seeds(results: dict[int, EvalResult]) -> EvalResult:
    """Mean per-label scores plus mean/std seed statistics for the macro metrics."""
    if not results:
        raise ValueError("no per-seed results to aggregate")
    runs = [results[seed] for seed in sorted(results)]
    labels = list(runs[0].per_label)
    k = len(runs)
    per_label = {}
    for label in labels:
        per_label[label] = LabelScores(
            f1=sum(r.per_label[label].f1 for r in runs) / k,
            precision=sum(r.per_label[label].precision for r in runs) / k,
            recall=sum(r.per_label[label].recall for r in runs) / k,
        )
    seed_stats = {}
    for metric in ("macro_f1", "macro_precision", "macro_recall"):
        values = [getattr(r, metric) for r in runs]
        mean = sum(values) / k
        std = math.sqrt(sum((v - mean) ** 2 for v in values) / k)
        seed_stats[metric] = SeedStat(mean=mean, std=std)
    n = len(labels)
    return EvalResult(
        macro_f1=sum(s.f1 for s in per_label.values()) / n,
        macro_precision=sum(s.precision for s in per_label.values()) / n,
        macro_recall=sum(s.recall for s in per_label.values()) / n,
        per_label=per_label,
        seed_stats=seed_stats,
    )
