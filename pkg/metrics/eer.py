"""Equal error rate by threshold sweep with linear interpolation at the FAR/FRR crossing."""
from __future__ import annotations

import numpy as np


def det_points(pos_scores, neg_scores) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    FRR and FAR after rejecting every score <= each distinct threshold.
    Index 0 is "reject nothing" (FRR 0, FAR 1). Tied scores move together.
    """
    pos = np.asarray(pos_scores, dtype=np.float64).ravel()
    neg = np.asarray(neg_scores, dtype=np.float64).ravel()
    if pos.size == 0 or neg.size == 0:
        raise ValueError("EER needs non-empty target and non-target score lists")
    scores = np.concatenate([pos, neg])
    is_target = np.concatenate([np.ones(pos.size), np.zeros(neg.size)])
    order = np.argsort(scores, kind="mergesort")
    scores, is_target = scores[order], is_target[order]
    tar_rejected = np.cumsum(is_target)
    non_rejected = np.cumsum(1.0 - is_target)
    # keep the last index of each run of equal scores
    last = np.r_[scores[1:] != scores[:-1], True]
    frr = np.r_[0.0, tar_rejected[last] / pos.size]
    far = np.r_[1.0, 1.0 - non_rejected[last] / neg.size]
    thresholds = np.r_[-np.inf, scores[last]]
    return frr, far, thresholds


def compute_eer_threshold(pos_scores, neg_scores) -> tuple[float, float]:
    """(EER, score threshold at the crossing)."""
    frr, far, thr = det_points(pos_scores, neg_scores)
    k = int(np.argmax(frr >= far))
    if k == 0:
        return float(frr[0]), float(thr[0])
    d0 = far[k - 1] - frr[k - 1]
    d1 = frr[k] - far[k]
    alpha = d0 / (d0 + d1)
    eer = frr[k - 1] + alpha * (frr[k] - frr[k - 1])
    lo = thr[k - 1] if np.isfinite(thr[k - 1]) else thr[k]
    threshold = lo + alpha * (thr[k] - lo)
    return float(eer), float(threshold)


def compute_eer(pos_scores, neg_scores) -> float:
    return compute_eer_threshold(pos_scores, neg_scores)[0]
