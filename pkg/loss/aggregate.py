"""Unit normalisation and softmax aggregation of sub-center similarities."""
from __future__ import annotations

import numpy as np


class DegenerateVectorError(ValueError):
    """Raised when a zero vector is asked to become a unit vector."""

    def __init__(self, message: str = "degenerate vector"):
        super().__init__(message)


def normalize(v) -> np.ndarray:
    """Return v / ||v|| in double precision."""
    arr = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite entries")
    norm = np.linalg.norm(arr)
    if norm == 0.0:
        raise DegenerateVectorError()
    return arr / norm


def normalize_rows(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Normalise along the last axis. Returns (unit rows, norms with keepdims).
    Any zero row raises DegenerateVectorError.
    """
    arr = np.asarray(mat, dtype=np.float64)
    norms = np.linalg.norm(arr, axis=-1, keepdims=True)
    if np.any(norms == 0.0):
        raise DegenerateVectorError()
    return arr / norms, norms


def softmax_weights(sims: np.ndarray, temperature: float) -> np.ndarray:
    """Softmax of sims / T over the last axis (max-shifted)."""
    z = sims / temperature
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def aggregate_similarity(x, class_subcenters, temperature: float) -> float:
    """
    Softmax-weighted sum of one class's sub-center similarities:
        sum_c softmax_c(w_c.x / T) * (w_c.x)
    With a single sub-center this is exactly w_1.x. The angle used by the loss is
    arccos of this value.
    """
    if not temperature > 0:
        raise ValueError("invalid temperature")
    w = np.atleast_2d(np.asarray(class_subcenters, dtype=np.float64))
    sims = w @ np.asarray(x, dtype=np.float64)
    p = softmax_weights(sims, temperature)
    return float(np.dot(p, sims))
