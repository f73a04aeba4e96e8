"""Verification trials: seeded target / non-target pairs and cosine scoring."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from loguru import logger


@dataclass
class TrialSet:
    """Pairs (left[k], right[k]) with is_target[k]; index arrays point into the source set."""
    left_index: np.ndarray
    right_index: np.ndarray
    is_target: np.ndarray
    left: np.ndarray
    right: np.ndarray
    scores: np.ndarray | None = None

    def __len__(self) -> int:
        return self.is_target.shape[0]

    @property
    def num_target(self) -> int:
        return int(self.is_target.sum())

    @property
    def num_nontarget(self) -> int:
        return len(self) - self.num_target

    def target_scores(self) -> np.ndarray:
        return self.require_scores()[self.is_target]

    def nontarget_scores(self) -> np.ndarray:
        return self.require_scores()[~self.is_target]

    def require_scores(self) -> np.ndarray:
        if self.scores is None:
            raise ValueError("trials have not been scored; call score_trials first")
        return self.scores


def _pair_from_linear(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map linear indices over the strict upper triangle of an n x n matrix to (i, j), i < j."""
    # row i starts at i * (2n - i - 1) / 2
    kf = k.astype(np.float64)
    i = np.floor((2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8 * kf)) / 2).astype(np.int64)
    start = i * (2 * n - i - 1) // 2
    # float rounding can land one row off
    over = k < start
    i[over] -= 1
    start = i * (2 * n - i - 1) // 2
    under = k >= start + (n - 1 - i)
    i[under] += 1
    start = i * (2 * n - i - 1) // 2
    j = k - start + i + 1
    return i, j


def _sample_nontarget(labels: np.ndarray, count: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Distinct different-speaker unordered pairs by rejection over the pair index space."""
    n = labels.shape[0]
    total = n * (n - 1) // 2
    chosen = np.zeros(0, dtype=np.int64)
    while chosen.size < count:
        draw = rng.integers(0, total, size=max(2 * (count - chosen.size), 16))
        i, j = _pair_from_linear(draw, n)
        draw = draw[labels[i] != labels[j]]
        # first occurrence order keeps the draw sequence deterministic
        merged = np.concatenate([chosen, draw])
        _, first = np.unique(merged, return_index=True)
        chosen = merged[np.sort(first)]
    chosen = chosen[:count]
    return _pair_from_linear(chosen, n)


def build_trials(embeddings, speaker_ids, num_trials: int, seed: int) -> TrialSet:
    """
    num_trials // 2 target pairs (same speaker, distinct utterances) and the rest
    non-target pairs (different speakers); no unordered pair repeats.
    """
    x = np.asarray(embeddings, dtype=np.float64)
    labels = np.asarray(speaker_ids)
    if x.ndim != 2 or labels.shape != (x.shape[0],):
        raise ValueError("embeddings must be (n, L) with one speaker id per row")
    speakers, inverse, counts = np.unique(labels, return_inverse=True, return_counts=True)
    if len(speakers) < 2:
        raise ValueError("trials need at least 2 speakers")
    if np.any(counts < 2):
        raise ValueError("every speaker needs at least 2 embeddings for target trials")
    if num_trials < 2:
        raise ValueError("need at least 2 trials (one target, one non-target)")

    n_target = num_trials // 2
    n_nontarget = num_trials - n_target
    avail_target = int(np.sum(counts * (counts - 1) // 2))
    n = x.shape[0]
    avail_nontarget = n * (n - 1) // 2 - avail_target
    if n_target > avail_target or n_nontarget > avail_nontarget:
        raise ValueError(
            f"requested {num_trials} trials ({n_target} target / {n_nontarget} non-target) but only "
            f"{avail_target} target / {avail_nontarget} non-target distinct pairs exist"
        )

    rng = np.random.default_rng(seed)
    # all same-speaker pairs, speaker by speaker
    ti, tj = [], []
    for s in range(len(speakers)):
        members = np.flatnonzero(inverse == s)
        a, b = np.triu_indices(len(members), k=1)
        ti.append(members[a])
        tj.append(members[b])
    ti, tj = np.concatenate(ti), np.concatenate(tj)
    pick = rng.choice(ti.size, size=n_target, replace=False)
    ti, tj = ti[pick], tj[pick]

    ni, nj = _sample_nontarget(inverse, n_nontarget, rng)

    left_index = np.concatenate([ti, ni])
    right_index = np.concatenate([tj, nj])
    is_target = np.concatenate([np.ones(n_target, dtype=bool), np.zeros(n_nontarget, dtype=bool)])
    order = rng.permutation(num_trials)
    left_index, right_index, is_target = left_index[order], right_index[order], is_target[order]
    logger.debug(f"Built {num_trials} trials over {len(speakers)} speakers ({n_target} target)")
    return TrialSet(
        left_index=left_index,
        right_index=right_index,
        is_target=is_target,
        left=x[left_index],
        right=x[right_index],
    )


def _cosine_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    num = np.einsum("ij,ij->i", a, b)
    den = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
    return np.clip(num / den, -1.0, 1.0)


def score_trials(trials: TrialSet, workers: int = 1) -> TrialSet:
    """Cosine score every pair (row-wise, so chunking never changes a score)."""
    if workers <= 1 or len(trials) < 2:
        trials.scores = _cosine_rows(trials.left, trials.right)
        return trials
    bounds = np.array_split(np.arange(len(trials)), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda idx: _cosine_rows(trials.left[idx], trials.right[idx]), bounds))
    trials.scores = np.concatenate(parts)
    return trials
