"""Gradient verification for the fusion layers against finite differences.

Autograd supplies the analytic gradients; the oracle is an independent
central-difference sweep over every scalar parameter at float64. The error
for a parameter tensor is ||analytic - numeric|| / (||analytic|| + ||numeric||),
and the check reports the max over tensors.
"""
from __future__ import annotations

from typing import Callable

import torch
import torch.nn.functional as F

from ..errors import TrainingError
from .layers import EarlyFusionLayer, LexEnhanceHead

DEFAULT_STEP = 1e-5
CHECK_KINDS = ("early_fusion", "lex_enhance")


def _randn(shape, generator) -> torch.Tensor:
    return torch.randn(shape, generator=generator, dtype=torch.float64)


def _bernoulli(shape, generator) -> torch.Tensor:
    return (torch.rand(shape, generator=generator, dtype=torch.float64) < 0.5).to(torch.float64)


def _randomize(module: torch.nn.Module, generator) -> None:
    with torch.no_grad():
        for param in module.parameters():
            param.copy_(_randn(param.shape, generator))


def _early_fusion_case(
    generator, gi_dim: int, embed_dim: int, num_labels: int, n_tokens: int
) -> tuple[torch.nn.Module, Callable[[], torch.Tensor]]:
    layer = EarlyFusionLayer(gi_dim, embed_dim)
    _randomize(layer, generator)
    embeddings = _randn((n_tokens, embed_dim), generator)
    gi = _bernoulli((n_tokens, gi_dim), generator)
    readout_w = _randn((embed_dim, num_labels), generator)
    readout_b = _randn((num_labels,), generator)
    targets = _bernoulli((num_labels,), generator)

    def loss_fn() -> torch.Tensor:
        fused = layer(embeddings, gi)
        logits = fused.mean(dim=0) @ readout_w + readout_b
        return F.binary_cross_entropy_with_logits(logits, targets)

    return layer, loss_fn


def _lex_enhance_case(
    generator, embed_dim: int, s_dim: int, num_labels: int
) -> tuple[torch.nn.Module, Callable[[], torch.Tensor]]:
    head = LexEnhanceHead(embed_dim, s_dim, num_labels)
    head.eval()  # finite differences need a noise-free forward
    _randomize(head, generator)
    h_cls = _randn((embed_dim,), generator)
    s = torch.rand((s_dim,), generator=generator, dtype=torch.float64)
    targets = _bernoulli((num_labels,), generator)

    def loss_fn() -> torch.Tensor:
        return F.binary_cross_entropy_with_logits(head(h_cls, s), targets)

    return head, loss_fn


def _numeric_gradient(
    param: torch.Tensor, loss_fn: Callable[[], torch.Tensor], step: float
) -> torch.Tensor:
    grad = torch.zeros_like(param)
    flat = param.data.view(-1)
    grad_flat = grad.view(-1)
    with torch.no_grad():
        for i in range(flat.numel()):
            original = flat[i].item()
            flat[i] = original + step
            loss_plus = loss_fn().item()
            flat[i] = original - step
            loss_minus = loss_fn().item()
            flat[i] = original
            grad_flat[i] = (loss_plus - loss_minus) / (2 * step)
    return grad


def grad_check(
    model_kind: str,
    *,
    seed: int = 0,
    step: float = DEFAULT_STEP,
    embed_dim: int = 8,
    gi_dim: int = 6,
    s_dim: int = 5,
    num_labels: int = 4,
    n_tokens: int = 3,
) -> float:
    """Max relative gradient error for one random parameter draw."""
    if model_kind not in CHECK_KINDS:
        raise TrainingError(f"grad_check supports {CHECK_KINDS}, got {model_kind!r}")
    generator = torch.Generator().manual_seed(seed)
    if model_kind == "early_fusion":
        module, loss_fn = _early_fusion_case(generator, gi_dim, embed_dim, num_labels, n_tokens)
    else:
        module, loss_fn = _lex_enhance_case(generator, embed_dim, s_dim, num_labels)

    params = list(module.parameters())
    loss = loss_fn()
    analytic = torch.autograd.grad(loss, params)
    worst = 0.0
    for param, grad in zip(params, analytic):
        numeric = _numeric_gradient(param, loss_fn, step)
        denom = max(float(grad.norm() + numeric.norm()), 1e-12)
        rel = float((grad - numeric).norm()) / denom
        worst = max(worst, rel)
    return worst


def max_grad_check_error(
    model_kind: str, draws: int = 20, *, base_seed: int = 0, step: float = DEFAULT_STEP
) -> float:
    """Worst error over ``draws`` independent random parameter draws."""
    return max(
        grad_check(model_kind, seed=base_seed + i, step=step) for i in range(draws)
    )
