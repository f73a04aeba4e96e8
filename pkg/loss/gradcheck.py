"""Central-difference check of the hand-derived loss gradients."""
from __future__ import annotations

import numpy as np
from loguru import logger

from .aam import LossConfig, aam_softmax_loss, subcenter_loss
from .bank import SubCenterBank


def _loss_fn(bank: SubCenterBank, cfg: LossConfig):
    if bank.num_subcenters == 1 and cfg.subcenters == 1:
        return aam_softmax_loss
    return subcenter_loss


def loss_backward_check(
    embeddings,
    labels,
    bank: SubCenterBank,
    cfg: LossConfig,
    h: float = 1e-5,
    max_coords: int | None = None,
    seed: int = 0,
    abs_floor: float = 1e-8,
) -> float:
    """
    Max over parameters of |analytic - numeric| / (|analytic| + |numeric| + 1e-12).

    Both the embeddings and the bank weights are perturbed. With max_coords set, a
    seeded random subset of coordinates is checked instead of all of them.
    Coordinates with |analytic - numeric| <= abs_floor count as agreeing: central
    differences of an O(1) loss cannot resolve below that.
    """
    if not (1e-6 <= h <= 1e-4):
        raise ValueError(f"step h must be in [1e-6, 1e-4], got {h}")
    fn = _loss_fn(bank, cfg)
    emb = np.array(embeddings, dtype=np.float64)
    weights = bank.weights.copy()
    out = fn(emb, labels, SubCenterBank(weights), cfg)

    params = [("embeddings", emb, out.grad_embeddings), ("weights", weights, out.grad_weights)]
    sizes = [p.size for _, p, _ in params]
    total = sum(sizes)
    if max_coords is not None and max_coords < total:
        rng = np.random.default_rng(seed)
        picked = np.sort(rng.choice(total, size=max_coords, replace=False))
    else:
        picked = np.arange(total)

    worst = 0.0
    for flat in picked:
        which = 0 if flat < sizes[0] else 1
        idx = flat if which == 0 else flat - sizes[0]
        name, arr, grad = params[which]
        orig = arr.flat[idx]
        arr.flat[idx] = orig + h
        plus = fn(emb, labels, SubCenterBank(weights), cfg).loss
        arr.flat[idx] = orig - h
        minus = fn(emb, labels, SubCenterBank(weights), cfg).loss
        arr.flat[idx] = orig
        numeric = (plus - minus) / (2.0 * h)
        analytic = grad.flat[idx]
        diff = abs(analytic - numeric)
        if diff <= abs_floor:
            continue
        rel = diff / (abs(analytic) + abs(numeric) + 1e-12)
        if rel > worst:
            worst = rel
            logger.debug(f"gradcheck {name}[{idx}]: analytic={analytic:.6e} numeric={numeric:.6e} rel={rel:.3e}")
    return float(worst)
