"""Tiny deterministic transformer encoder used as a stand-in for a pretrained LM.

Everything runs in float64 on CPU. Parameter initialization draws from an
explicit torch.Generator in module construction order, so two models built
from the same config and seed are bitwise identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..errors import TrainingError

DTYPE = torch.float64

PAD_TOKEN = "<pad>"
CLS_TOKEN = "<cls>"
UNK_TOKEN = "<unk>"
PAD_ID, CLS_ID, UNK_ID = 0, 1, 2
RESERVED_TOKENS = (PAD_TOKEN, CLS_TOKEN, UNK_TOKEN)

INIT_STD = 0.02


@dataclass(frozen=True)
class ToyEncoderConfig:
    vocab: dict[str, int]
    embed_dim: int = 32
    layers: int = 1
    heads: int = 2
    max_seq: int = 64
    seed: int = 0

    def __post_init__(self) -> None:
        if self.embed_dim % self.heads != 0:
            raise TrainingError(
                f"embed_dim {self.embed_dim} must be divisible by heads {self.heads}"
            )
        for token, index in zip(RESERVED_TOKENS, (PAD_ID, CLS_ID, UNK_ID)):
            if self.vocab.get(token) != index:
                raise TrainingError(f"vocab must reserve {token!r} at index {index}")

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)


def build_vocab(token_lists: list[tuple[str, ...]]) -> dict[str, int]:
    """Word-level vocabulary from the training corpus, reserved slots first.

    Tokens are ordered by descending frequency then token string, which makes
    the index assignment independent of input ordering quirks.
    """
    counts: dict[str, int] = {}
    for tokens in token_lists:
        for tok in tokens:
            counts[tok] = counts.get(tok, 0) + 1
    vocab = {PAD_TOKEN: PAD_ID, CLS_TOKEN: CLS_ID, UNK_TOKEN: UNK_ID}
    for tok in sorted(counts, key=lambda t: (-counts[t], t)):
        vocab[tok] = len(vocab)
    return vocab


def encode_tokens(tokens: tuple[str, ...], cfg: ToyEncoderConfig) -> list[int]:
    """[CLS] + token ids, truncated to max_seq."""
    ids = [CLS_ID]
    for tok in tokens[: cfg.max_seq - 1]:
        ids.append(cfg.vocab.get(tok, UNK_ID))
    return ids


class SelfAttention(nn.Module):
    def __init__(self, dim: int, heads: int):
        super().__init__()
        self.heads = heads
        self.head_dim = dim // heads
        self.query = nn.Linear(dim, dim, dtype=DTYPE)
        self.key = nn.Linear(dim, dim, dtype=DTYPE)
        self.value = nn.Linear(dim, dim, dtype=DTYPE)
        self.out = nn.Linear(dim, dim, dtype=DTYPE)

    def forward(self, x: torch.Tensor, pad_mask: torch.Tensor) -> torch.Tensor:
        batch, seq, dim = x.shape
        def split(t):
            return t.view(batch, seq, self.heads, self.head_dim).transpose(1, 2)

        q, k, v = split(self.query(x)), split(self.key(x)), split(self.value(x))
        scores = (q @ k.transpose(-2, -1)) / math.sqrt(self.head_dim)
        blocked = ~pad_mask[:, None, None, :]
        scores = scores.masked_fill(blocked, float("-inf"))
        attn = torch.softmax(scores, dim=-1)
        ctx = (attn @ v).transpose(1, 2).reshape(batch, seq, dim)
        return self.out(ctx)


class EncoderBlock(nn.Module):
    def __init__(self, dim: int, heads: int):
        super().__init__()
        self.attention = SelfAttention(dim, heads)
        self.norm1 = nn.LayerNorm(dim, dtype=DTYPE)
        self.ff_in = nn.Linear(dim, 4 * dim, dtype=DTYPE)
        self.ff_out = nn.Linear(4 * dim, dim, dtype=DTYPE)
        self.norm2 = nn.LayerNorm(dim, dtype=DTYPE)

    def forward(self, x: torch.Tensor, pad_mask: torch.Tensor) -> torch.Tensor:
        x = self.norm1(x + self.attention(x, pad_mask))
        x = self.norm2(x + self.ff_out(F.gelu(self.ff_in(x))))
        return x


class TinyTransformer(nn.Module):
    """Word embeddings + learned positions + post-LN transformer blocks."""

    def __init__(self, cfg: ToyEncoderConfig):
        super().__init__()
        self.cfg = cfg
        self.tok_emb = nn.Embedding(cfg.vocab_size, cfg.embed_dim, dtype=DTYPE)
        self.pos_emb = nn.Embedding(cfg.max_seq, cfg.embed_dim, dtype=DTYPE)
        self.blocks = nn.ModuleList(
            EncoderBlock(cfg.embed_dim, cfg.heads) for _ in range(cfg.layers)
        )

    def embed_tokens(self, ids: torch.Tensor) -> torch.Tensor:
        """Raw word embeddings, the injection site for early fusion."""
        return self.tok_emb(ids)

    def forward_embedded(
        self, embeddings: torch.Tensor, pad_mask: torch.Tensor
    ) -> torch.Tensor:
        seq = embeddings.shape[1]
        positions = torch.arange(seq, device=embeddings.device)
        x = embeddings + self.pos_emb(positions)[None, :, :]
        for block in self.blocks:
            x = block(x, pad_mask)
        return x

    def forward(self, ids: torch.Tensor, pad_mask: torch.Tensor) -> torch.Tensor:
        return self.forward_embedded(self.embed_tokens(ids), pad_mask)


def init_parameters(module: nn.Module, generator: torch.Generator) -> None:
    """Deterministic init: N(0, 0.02) matrices, unit LayerNorm scales, zero biases.

    Walks parameters in registration order so identical architectures seeded
    alike receive identical draws.
    """
    for name, param in module.named_parameters():
        with torch.no_grad():
            if name.endswith("alpha"):
                param.zero_()
            elif param.dim() >= 2:
                draw = torch.randn(param.shape, generator=generator, dtype=DTYPE)
                param.copy_(draw * INIT_STD)
            elif "norm" in name and name.endswith("weight"):
                param.fill_(1.0)
            else:
                param.zero_()
