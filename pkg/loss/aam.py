"""
Additive angular margin softmax, single-center and sub-center forms.

Forward and hand-derived backward in float64. Embeddings and sub-centers are
renormalised on every call and gradients flow back through both normalisations,
so the returned gradients are with respect to the raw arrays passed in.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .aggregate import normalize_rows, softmax_weights
from .bank import SubCenterBank

# arccos input is clamped to [-1 + EPS, 1 - EPS]
CLAMP_EPS = 1e-7


@dataclass(frozen=True)
class LossConfig:
    """Margin m (radians), scale s, temperature T, sub-centers per class C."""
    margin: float = 0.4
    scale: float = 30.0
    temperature: float = 1.0
    subcenters: int = 1

    def __post_init__(self):
        if not (0.0 <= self.margin < math.pi / 2):
            raise ValueError(f"margin must be in [0, pi/2), got {self.margin}")
        if not self.scale > 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")
        if not self.temperature > 0:
            raise ValueError("invalid temperature")
        if int(self.subcenters) != self.subcenters or self.subcenters < 1:
            raise ValueError(f"subcenters must be an integer >= 1, got {self.subcenters}")


@dataclass
class LossOutput:
    """Mean loss over the batch plus gradients w.r.t. the raw inputs."""
    loss: float
    grad_embeddings: np.ndarray  # (B, L)
    grad_weights: np.ndarray  # (N, C, L)
    per_example_target_angle: np.ndarray  # (B,) radians
    logits: np.ndarray = field(default=None, repr=False)  # (B, N) scaled, margin applied
    aggregated: np.ndarray = field(default=None, repr=False)  # (B, N) aggregated cosines


def _check_batch(embeddings, labels, bank: SubCenterBank) -> tuple[np.ndarray, np.ndarray]:
    emb = np.asarray(embeddings, dtype=np.float64)
    if emb.ndim == 1:
        emb = emb[None, :]
    if emb.ndim != 2 or emb.shape[0] == 0:
        raise ValueError("embeddings must be a non-empty (B, L) array")
    if emb.shape[1] != bank.dim:
        raise ValueError(f"embedding dim {emb.shape[1]} does not match bank dim {bank.dim}")
    if not np.all(np.isfinite(emb)):
        raise ValueError("embeddings contain non-finite values")
    lab = np.asarray(labels)
    if lab.ndim == 0:
        lab = lab[None]
    if lab.shape != (emb.shape[0],):
        raise ValueError(f"expected {emb.shape[0]} labels, got shape {lab.shape}")
    if not np.issubdtype(lab.dtype, np.integer):
        if not np.all(np.equal(np.mod(lab, 1), 0)):
            raise ValueError("labels must be integers")
        lab = lab.astype(np.int64)
    if np.any(lab < 0) or np.any(lab >= bank.num_classes):
        raise ValueError(f"label out of range [0, {bank.num_classes})")
    return emb, lab.astype(np.int64)


def _margin_softmax(agg: np.ndarray, labels: np.ndarray, cfg: LossConfig):
    """
    Margin softmax over aggregated cosines (B, N).
    Returns (per-example loss, dloss/dagg, target angle, logits).
    """
    b = agg.shape[0]
    rows = np.arange(b)
    u = np.clip(agg, -1.0 + CLAMP_EPS, 1.0 - CLAMP_EPS)
    inside = (agg > -1.0 + CLAMP_EPS) & (agg < 1.0 - CLAMP_EPS)

    target_u = u[rows, labels]
    target_angle = np.arccos(target_u)
    shifted = target_angle + cfg.margin
    # past G + m = pi the target logit continues linearly as u - m sin(m)
    wrapped = shifted > math.pi

    logits = cfg.scale * u
    logits[rows, labels] = cfg.scale * np.where(
        wrapped, target_u - cfg.margin * math.sin(cfg.margin), np.cos(shifted)
    )

    top = logits.max(axis=1, keepdims=True)
    lse = top[:, 0] + np.log(np.exp(logits - top).sum(axis=1))
    per_example = lse - logits[rows, labels]

    q = np.exp(logits - lse[:, None])
    q[rows, labels] -= 1.0

    # dz/du: s off-target and on the linear branch; s * sin(G + m) / sqrt(1 - u^2) on target
    dz_du = np.full_like(u, cfg.scale)
    dz_du[rows, labels] = np.where(
        wrapped, cfg.scale, cfg.scale * np.sin(shifted) / np.sqrt(1.0 - target_u * target_u)
    )
    g_agg = q * dz_du * inside
    return per_example, g_agg, target_angle, logits


def _unnormalize_grad(g_unit: np.ndarray, unit: np.ndarray, norms: np.ndarray) -> np.ndarray:
    """Backprop through v / ||v|| along the last axis."""
    radial = np.sum(g_unit * unit, axis=-1, keepdims=True)
    return (g_unit - unit * radial) / norms


def aam_softmax_loss(embeddings, labels, bank: SubCenterBank, cfg: LossConfig) -> LossOutput:
    """Single-center AAM-Softmax. Bank must have exactly one sub-center per class."""
    if bank.num_subcenters != 1:
        raise ValueError(f"aam_softmax_loss needs a single-center bank, got C={bank.num_subcenters}")
    emb, lab = _check_batch(embeddings, labels, bank)
    x, x_norms = normalize_rows(emb)
    w, w_norms = normalize_rows(bank.weights)
    centers = w[:, 0, :]

    cos = x @ centers.T
    per_example, g_cos, target_angle, logits = _margin_softmax(cos, lab, cfg)

    b = emb.shape[0]
    g_cos = g_cos / b
    g_x = g_cos @ centers
    g_w = (g_cos.T @ x)[:, None, :]
    return LossOutput(
        loss=float(per_example.mean()),
        grad_embeddings=_unnormalize_grad(g_x, x, x_norms),
        grad_weights=_unnormalize_grad(g_w, w, w_norms),
        per_example_target_angle=target_angle,
        logits=logits,
        aggregated=cos,
    )


def subcenter_loss(embeddings, labels, bank: SubCenterBank, cfg: LossConfig) -> LossOutput:
    """
    Sub-center AAM-Softmax: each class angle is arccos of the softmax(sim / T)
    weighted sum of that class's sub-center similarities; margin on the target
    class only, after aggregation.
    """
    if cfg.subcenters != bank.num_subcenters:
        raise ValueError(
            f"config subcenters={cfg.subcenters} does not match bank C={bank.num_subcenters}"
        )
    emb, lab = _check_batch(embeddings, labels, bank)
    x, x_norms = normalize_rows(emb)
    w, w_norms = normalize_rows(bank.weights)

    sims = np.einsum("bl,ncl->bnc", x, w)
    p = softmax_weights(sims, cfg.temperature)
    agg = np.sum(p * sims, axis=2)
    per_example, g_agg, target_angle, logits = _margin_softmax(agg, lab, cfg)

    b = emb.shape[0]
    # d agg / d sim_c = p_c * (1 + (sim_c - agg) / T)
    g_sims = (g_agg / b)[:, :, None] * p * (1.0 + (sims - agg[:, :, None]) / cfg.temperature)
    g_x = np.einsum("bnc,ncl->bl", g_sims, w)
    g_w = np.einsum("bnc,bl->ncl", g_sims, x)
    return LossOutput(
        loss=float(per_example.mean()),
        grad_embeddings=_unnormalize_grad(g_x, x, x_norms),
        grad_weights=_unnormalize_grad(g_w, w, w_norms),
        per_example_target_angle=target_angle,
        logits=logits,
        aggregated=agg,
    )
