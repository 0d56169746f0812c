"""The two lexical fusion mechanisms and the three reference models.

EarlyFusion injects projected, gated token-level GI vectors additively into
token embeddings: fused_i = E_i + alpha * (g_i * p_i) with
p_i = GELU(W_p x_i) (exact GELU, bias-free projection) and
g_i = sigmoid(W_g [E_i ; p_i] + b_g). alpha starts at 0, so a freshly
initialized early-fusion model is forward-identical to the baseline built
from the same seed.

LexEnhance concatenates the pooled CLS representation with a sentence-level
signature frequency vector before dropout and a linear classifier.
"""
from __future__ import annotations

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..errors import TrainingError
from .encoder import DTYPE, TinyTransformer, ToyEncoderConfig, init_parameters

MODEL_KINDS = ("baseline", "lex_enhance", "early_fusion")

BASELINE_DROPOUT = 0.2
LEX_ENHANCE_DROPOUT = 0.2
EARLY_FUSION_DROPOUT = 0.3

# Offset keeping fusion-layer init draws out of the encoder/classifier stream,
# so baseline and early-fusion share weights exactly at the same seed.
FUSION_SEED_OFFSET = 1000003


class EarlyFusionLayer(nn.Module):
    def __init__(self, gi_dim: int, embed_dim: int):
        super().__init__()
        self.gi_dim = gi_dim
        self.embed_dim = embed_dim
        self.project = nn.Linear(gi_dim, embed_dim, bias=False, dtype=DTYPE)
        self.gate = nn.Linear(2 * embed_dim, embed_dim, dtype=DTYPE)
        self.alpha = nn.Parameter(torch.zeros((), dtype=DTYPE))

    def forward(self, embeddings: torch.Tensor, gi_bits: torch.Tensor) -> torch.Tensor:
        if embeddings.shape[:-1] != gi_bits.shape[:-1]:
            raise TrainingError(
                f"row mismatch: embeddings {tuple(embeddings.shape)} vs GI {tuple(gi_bits.shape)}"
            )
        if gi_bits.shape[-1] != self.gi_dim:
            raise TrainingError(
                f"GI width {gi_bits.shape[-1]} does not match layer gi_dim {self.gi_dim}"
            )
        if embeddings.shape[-1] != self.embed_dim:
            raise TrainingError(
                f"embedding width {embeddings.shape[-1]} does not match layer embed_dim {self.embed_dim}"
            )
        projected = F.gelu(self.project(gi_bits))
        gate = torch.sigmoid(self.gate(torch.cat([embeddings, projected], dim=-1)))
        return embeddings + self.alpha * (gate * projected)


def early_fuse(
    embeddings: torch.Tensor, gi_bits: torch.Tensor, layer: EarlyFusionLayer
) -> torch.Tensor:
    """Functional form of the early-fusion injection."""
    return layer(embeddings, gi_bits)


class LexEnhanceHead(nn.Module):
    def __init__(
        self, embed_dim: int, s_dim: int, num_labels: int, dropout_rate: float = LEX_ENHANCE_DROPOUT
    ):
        super().__init__()
        self.embed_dim = embed_dim
        self.s_dim = s_dim
        self.dropout = nn.Dropout(dropout_rate)
        self.classifier = nn.Linear(embed_dim + s_dim, num_labels, dtype=DTYPE)

    def forward(self, h_cls: torch.Tensor, s: torch.Tensor) -> torch.Tensor:
        if h_cls.shape[-1] != self.embed_dim or s.shape[-1] != self.s_dim:
            raise TrainingError(
                f"head expects widths ({self.embed_dim}, {self.s_dim}), "
                f"got ({h_cls.shape[-1]}, {s.shape[-1]})"
            )
        joint = torch.cat([h_cls, s], dim=-1)
        return self.classifier(self.dropout(joint))


def lex_enhance_forward(
    h_cls: torch.Tensor, s: torch.Tensor, head: LexEnhanceHead, training: bool
) -> torch.Tensor:
    """Run the head with dropout active only when ``training`` is set."""
    was_training = head.training
    head.train(training)
    try:
        return head(h_cls, s)
    finally:
        head.train(was_training)


class BaselineModel(nn.Module):
    def __init__(self, cfg: ToyEncoderConfig, num_labels: int):
        super().__init__()
        self.encoder = TinyTransformer(cfg)
        self.dropout = nn.Dropout(BASELINE_DROPOUT)
        self.classifier = nn.Linear(cfg.embed_dim, num_labels, dtype=DTYPE)

    def forward(self, ids: torch.Tensor, pad_mask: torch.Tensor) -> torch.Tensor:
        h_cls = self.encoder(ids, pad_mask)[:, 0, :]
        return self.classifier(self.dropout(h_cls))


class LexEnhanceModel(nn.Module):
    def __init__(self, cfg: ToyEncoderConfig, num_labels: int, s_dim: int):
        super().__init__()
        self.encoder = TinyTransformer(cfg)
        self.head = LexEnhanceHead(cfg.embed_dim, s_dim, num_labels)

    def forward(
        self, ids: torch.Tensor, pad_mask: torch.Tensor, s: torch.Tensor
    ) -> torch.Tensor:
        h_cls = self.encoder(ids, pad_mask)[:, 0, :]
        return self.head(h_cls, s)


class EarlyFusionModel(nn.Module):
    def __init__(
        self,
        cfg: ToyEncoderConfig,
        num_labels: int,
        gi_dim: int,
        dropout_rate: float = EARLY_FUSION_DROPOUT,
    ):
        super().__init__()
        self.encoder = TinyTransformer(cfg)
        self.dropout = nn.Dropout(dropout_rate)
        self.classifier = nn.Linear(cfg.embed_dim, num_labels, dtype=DTYPE)
        self.fusion = EarlyFusionLayer(gi_dim, cfg.embed_dim)

    def forward(
        self, ids: torch.Tensor, pad_mask: torch.Tensor, gi_bits: torch.Tensor
    ) -> torch.Tensor:
        embeddings = self.encoder.embed_tokens(ids)
        fused = self.fusion(embeddings, gi_bits)
        h_cls = self.encoder.forward_embedded(fused, pad_mask)[:, 0, :]
        return self.classifier(self.dropout(h_cls))


def build_model(
    kind: str,
    cfg: ToyEncoderConfig,
    num_labels: int,
    *,
    s_dim: int = 0,
    gi_dim: int = 0,
    early_fusion_dropout: float = EARLY_FUSION_DROPOUT,
) -> nn.Module:
    """Construct and deterministically initialize one of the three models.

    The encoder and classifier draws come from the config seed; the
    early-fusion layer draws come from an offset stream so they never
    perturb the shared weights.
    """
    if kind not in MODEL_KINDS:
        raise TrainingError(f"unknown model kind {kind!r}, expected one of {MODEL_KINDS}")
    shared_gen = torch.Generator().manual_seed(cfg.seed)
    if kind == "baseline":
        model: nn.Module = BaselineModel(cfg, num_labels)
        init_parameters(model, shared_gen)
        return model
    if kind == "lex_enhance":
        if s_dim < 1:
            raise TrainingError("lex_enhance requires s_dim >= 1")
        model = LexEnhanceModel(cfg, num_labels, s_dim)
        init_parameters(model, shared_gen)
        return model
    if gi_dim < 1:
        raise TrainingError("early_fusion requires gi_dim >= 1")
    model = EarlyFusionModel(cfg, num_labels, gi_dim, dropout_rate=early_fusion_dropout)
    init_parameters(model.encoder, shared_gen)
    init_parameters(model.classifier, shared_gen)
    fusion_gen = torch.Generator().manual_seed(cfg.seed + FUSION_SEED_OFFSET)
    init_parameters(model.fusion, fusion_gen)
    return model
