"""Training loop: seeded runs, AdamW, early stopping on validation macro-F1.

Runs are bitwise reproducible for a fixed (seed, data, config): parameter
init comes from per-seed generators, shuffling from a per-seed
random.Random, dropout from the globally seeded torch RNG, and all math is
single-threaded float64 on CPU.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import torch
import torch.nn.functional as F

from ..corpus import LabelGroup
from ..errors import SignatureError, TrainingError
from ..features import extract, signature_projection, token_vectors
from ..lexicon import Lexicon
from ..signatures import EmotionSignature, build_signature
from ..textprep import TokenizedText, tokenize
from .encoder import CLS_ID, DTYPE, ToyEncoderConfig, build_vocab, encode_tokens
from .layers import MODEL_KINDS, build_model
from .metrics import TASK_MODES, EvalResult, aggregate_over_seeds, evaluate

DEFAULT_SEEDS = (1, 2, 10, 21, 42)


@dataclass(frozen=True)
class LabeledText:
    text: str
    labels: frozenset[str]


@dataclass
class SplitCorpus:
    labels: tuple[str, ...]
    train: list[LabeledText]
    val: list[LabeledText]
    test: list[LabeledText]

    def split(self, name: str) -> list[LabeledText]:
        return {"train": self.train, "val": self.val, "test": self.test}[name]


@dataclass(frozen=True)
class TrainConfig:
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    learning_rate: float = 1e-5
    patience: int = 3
    dropout_early_fusion: float = 0.3
    max_epochs: int = 10
    batch_size: int = 32
    task_mode: str = "multi_label"
    weight_decay: float = 0.01
    embed_dim: int = 32
    layers: int = 1
    heads: int = 2
    max_seq: int = 64

    def __post_init__(self) -> None:
        if not self.seeds:
            raise TrainingError("seeds must be non-empty")
        if self.patience < 1:
            raise TrainingError("patience must be >= 1")
        if self.task_mode not in TASK_MODES:
            raise TrainingError(f"task_mode must be one of {TASK_MODES}")
        if self.learning_rate <= 0:
            raise TrainingError("learning_rate must be positive")
        if self.max_epochs < 1 or self.batch_size < 1:
            raise TrainingError("max_epochs and batch_size must be >= 1")

    def to_json_dict(self) -> dict:
        return {
            "seeds": list(self.seeds),
            "learning_rate": self.learning_rate,
            "patience": self.patience,
            "dropout_early_fusion": self.dropout_early_fusion,
            "max_epochs": self.max_epochs,
            "batch_size": self.batch_size,
            "task_mode": self.task_mode,
            "weight_decay": self.weight_decay,
            "embed_dim": self.embed_dim,
            "layers": self.layers,
            "heads": self.heads,
            "max_seq": self.max_seq,
        }


@dataclass(frozen=True)
class EpochStat:
    epoch: int
    train_loss: float
    val_macro_f1: float


class EarlyStopping:
    """Stop after ``patience`` consecutive epochs without strict improvement."""

    def __init__(self, patience: int):
        self.patience = patience
        self.best = float("-inf")
        self.best_epoch = 0
        self.stale = 0
        self.should_stop = False

    def update(self, epoch: int, value: float) -> bool:
        """Record one epoch's monitored value; True when it improved."""
        if value > self.best:
            self.best = value
            self.best_epoch = epoch
            self.stale = 0
            return True
        self.stale += 1
        if self.stale >= self.patience:
            self.should_stop = True
        return False


@dataclass
class SeedRun:
    seed: int
    result: EvalResult
    best_epoch: int
    history: list[EpochStat]
    model: torch.nn.Module


@dataclass
class TrainResult:
    model_kind: str
    labels: tuple[str, ...]
    per_seed: dict[int, SeedRun]
    aggregate: EvalResult
    signatures: list[EmotionSignature] = field(default_factory=list)

    def history_rows(self) -> list[tuple[str, int, int, float, float]]:
        rows = []
        for seed in sorted(self.per_seed):
            for stat in self.per_seed[seed].history:
                rows.append(
                    (self.model_kind, seed, stat.epoch, stat.train_loss, stat.val_macro_f1)
                )
        return rows


@dataclass
class _Prepared:
    vocab: dict[str, int]
    width: int
    gi_dim: int
    s_dim: int
    num_labels: int
    labels: tuple[str, ...]
    ids: dict[str, torch.Tensor]
    mask: dict[str, torch.Tensor]
    gold_float: dict[str, torch.Tensor]
    gold_rows: dict[str, list[list[int]]]
    gold_index: dict[str, torch.Tensor]
    s_vectors: dict[str, torch.Tensor]
    gi_bits: dict[str, torch.Tensor]
    signatures: list[EmotionSignature]


def _train_signatures(
    corpus: SplitCorpus, lexicon: Lexicon
) -> list[EmotionSignature]:
    """Per-label signatures derived from the training split only."""
    signatures = []
    for label in corpus.labels:
        texts = tuple(lt.text for lt in corpus.train if label in lt.labels)
        group = LabelGroup(emotion=label, dataset_id="train", texts=texts)
        try:
            signatures.append(build_signature(group, lexicon))
        except SignatureError as exc:
            raise TrainingError(f"cannot build training signature for {label!r}: {exc}") from exc
    return signatures


def _gi_matrix(
    tokenized: TokenizedText, lexicon: Lexicon, width: int, gi_dim: int
) -> list[list[float]]:
    """Token GI rows aligned with encoded ids: CLS row zero, negated rows zero."""
    rows = [[0.0] * gi_dim]
    for vec in token_vectors(tokenized, lexicon)[: width - 1]:
        rows.append([float(b) for b in vec.effective_bits()])
    while len(rows) < width:
        rows.append([0.0] * gi_dim)
    return rows


def _prepare(
    model_kind: str, corpus: SplitCorpus, cfg: TrainConfig, lexicon: Lexicon
) -> _Prepared:
    for name in ("train", "val", "test"):
        if not corpus.split(name):
            raise TrainingError(f"empty {name} split")
    labels = corpus.labels
    num_labels = len(labels)
    label_index = {label: i for i, label in enumerate(labels)}
    tokenized = {
        name: [tokenize(lt.text) for lt in corpus.split(name)]
        for name in ("train", "val", "test")
    }
    vocab = build_vocab([t.tokens for t in tokenized["train"]])
    enc_cfg_probe = ToyEncoderConfig(
        vocab=vocab, embed_dim=cfg.embed_dim, layers=cfg.layers,
        heads=cfg.heads, max_seq=cfg.max_seq, seed=0,
    )
    encoded = {
        name: [encode_tokens(t.tokens, enc_cfg_probe) for t in items]
        for name, items in tokenized.items()
    }
    width = max(len(row) for rows in encoded.values() for row in rows)

    signatures: list[EmotionSignature] = []
    if model_kind == "lex_enhance":
        signatures = _train_signatures(corpus, lexicon)

    ids: dict[str, torch.Tensor] = {}
    mask: dict[str, torch.Tensor] = {}
    gold_float: dict[str, torch.Tensor] = {}
    gold_rows: dict[str, list[list[int]]] = {}
    gold_index: dict[str, torch.Tensor] = {}
    s_vectors: dict[str, torch.Tensor] = {}
    gi_bits: dict[str, torch.Tensor] = {}
    gi_dim = len(lexicon.category_names)
    for name in ("train", "val", "test"):
        items = corpus.split(name)
        id_rows, mask_rows, g_rows = [], [], []
        for lt, enc in zip(items, encoded[name]):
            padded = enc + [0] * (width - len(enc))
            id_rows.append(padded)
            mask_rows.append([True] * len(enc) + [False] * (width - len(enc)))
            row = [0] * num_labels
            for label in lt.labels:
                if label not in label_index:
                    raise TrainingError(f"label {label!r} outside corpus label space")
                row[label_index[label]] = 1
            g_rows.append(row)
        ids[name] = torch.tensor(id_rows, dtype=torch.long)
        mask[name] = torch.tensor(mask_rows, dtype=torch.bool)
        gold_rows[name] = g_rows
        gold_float[name] = torch.tensor(g_rows, dtype=DTYPE)
        if cfg.task_mode == "single_label":
            for i, row in enumerate(g_rows):
                if sum(row) != 1:
                    raise TrainingError(
                        f"single_label mode needs exactly one label per text ({name} row {i})"
                    )
            gold_index[name] = torch.tensor([row.index(1) for row in g_rows], dtype=torch.long)
        if model_kind == "lex_enhance":
            s_rows = [
                signature_projection(extract(t, lexicon), signatures)
                for t in tokenized[name]
            ]
            s_vectors[name] = torch.tensor(s_rows, dtype=DTYPE)
        if model_kind == "early_fusion":
            gi_rows = [_gi_matrix(t, lexicon, width, gi_dim) for t in tokenized[name]]
            gi_bits[name] = torch.tensor(gi_rows, dtype=DTYPE)

    s_dim = s_vectors["train"].shape[1] if model_kind == "lex_enhance" else 0
    return _Prepared(
        vocab=vocab, width=width, gi_dim=gi_dim, s_dim=s_dim,
        num_labels=num_labels, labels=labels, ids=ids, mask=mask,
        gold_float=gold_float, gold_rows=gold_rows, gold_index=gold_index,
        s_vectors=s_vectors, gi_bits=gi_bits, signatures=signatures,
    )


def _forward(
    model: torch.nn.Module, kind: str, prepared: _Prepared, split: str, idx: list[int]
) -> torch.Tensor:
    sel = torch.tensor(idx, dtype=torch.long)
    ids = prepared.ids[split][sel]
    pad = prepared.mask[split][sel]
    if kind == "baseline":
        return model(ids, pad)
    if kind == "lex_enhance":
        return model(ids, pad, prepared.s_vectors[split][sel])
    return model(ids, pad, prepared.gi_bits[split][sel])


def _score_split(
    model: torch.nn.Module, kind: str, prepared: _Prepared, split: str, cfg: TrainConfig
) -> EvalResult:
    model.eval()
    n = prepared.ids[split].shape[0]
    with torch.no_grad():
        chunks = []
        for start in range(0, n, cfg.batch_size):
            idx = list(range(start, min(start + cfg.batch_size, n)))
            chunks.append(_forward(model, kind, prepared, split, idx))
        logits = torch.cat(chunks, dim=0)
        scores = torch.sigmoid(logits) if cfg.task_mode == "multi_label" else logits
    return evaluate(
        scores.tolist(), prepared.gold_rows[split], prepared.labels, cfg.task_mode
    )


def _loss(
    logits: torch.Tensor, prepared: _Prepared, split: str, idx: list[int], cfg: TrainConfig
) -> torch.Tensor:
    sel = torch.tensor(idx, dtype=torch.long)
    if cfg.task_mode == "multi_label":
        return F.binary_cross_entropy_with_logits(logits, prepared.gold_float[split][sel])
    return F.cross_entropy(logits, prepared.gold_index[split][sel])


def _run_seed(
    seed: int, kind: str, prepared: _Prepared, cfg: TrainConfig
) -> SeedRun:
    torch.manual_seed(seed)
    enc_cfg = ToyEncoderConfig(
        vocab=prepared.vocab, embed_dim=cfg.embed_dim, layers=cfg.layers,
        heads=cfg.heads, max_seq=cfg.max_seq, seed=seed,
    )
    model = build_model(
        kind, enc_cfg, prepared.num_labels,
        s_dim=prepared.s_dim, gi_dim=prepared.gi_dim,
        early_fusion_dropout=cfg.dropout_early_fusion,
    )
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=cfg.learning_rate, weight_decay=cfg.weight_decay
    )
    shuffler = random.Random(seed)
    n_train = prepared.ids["train"].shape[0]
    stopper = EarlyStopping(cfg.patience)
    best_state: dict[str, torch.Tensor] = {}
    history: list[EpochStat] = []
    for epoch in range(1, cfg.max_epochs + 1):
        model.train()
        order = list(range(n_train))
        shuffler.shuffle(order)
        total_loss, batches = 0.0, 0
        for start in range(0, n_train, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            logits = _forward(model, kind, prepared, "train", idx)
            loss = _loss(logits, prepared, "train", idx, cfg)
            if not torch.isfinite(loss):
                raise TrainingError(
                    f"non-finite loss (seed {seed}, epoch {epoch}, batch {batches})"
                )
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total_loss += float(loss.detach())
            batches += 1
        val = _score_split(model, kind, prepared, "val", cfg)
        history.append(EpochStat(epoch, total_loss / batches, val.macro_f1))
        if stopper.update(epoch, val.macro_f1):
            best_state = {k: v.detach().clone() for k, v in model.state_dict().items()}
        elif stopper.should_stop:
            break
    model.load_state_dict(best_state)
    result = _score_split(model, kind, prepared, "test", cfg)
    return SeedRun(
        seed=seed,
        result=result,
        best_epoch=stopper.best_epoch,
        history=history,
        model=model,
    )


def train(
    model_kind: str, corpus: SplitCorpus, cfg: TrainConfig, lexicon: Lexicon
) -> TrainResult:
    """Train one model kind over all configured seeds and aggregate results."""
    if model_kind not in MODEL_KINDS:
        raise TrainingError(f"unknown model kind {model_kind!r}")
    previous_threads = torch.get_num_threads()
    torch.set_num_threads(1)
    try:
        prepared = _prepare(model_kind, corpus, cfg, lexicon)
        per_seed = {
            seed: _run_seed(seed, model_kind, prepared, cfg) for seed in cfg.seeds
        }
    finally:
        torch.set_num_threads(previous_threads)
    aggregate = aggregate_over_seeds({s: run.result for s, run in per_seed.items()})
    return TrainResult(
        model_kind=model_kind,
        labels=prepared.labels,
        per_seed=per_seed,
        aggregate=aggregate,
        signatures=prepared.signatures,
    )
