"""Small feed-forward encoder with a hand-written backward pass."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

Activation = Literal["relu", "tanh"]


@dataclass(frozen=True)
class EncoderConfig:
    """input -> hidden layers (activation) -> linear embedding of size embedding_dim."""
    input_dim: int
    hidden_dims: tuple[int, ...] = (64, 64)
    embedding_dim: int = 16
    activation: Activation = "relu"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "hidden_dims", tuple(int(h) for h in self.hidden_dims))
        if self.input_dim < 1 or any(h < 1 for h in self.hidden_dims):
            raise ValueError("encoder dims must be >= 1")
        if self.embedding_dim < 2:
            raise ValueError("embedding_dim must be >= 2")
        if self.activation not in ("relu", "tanh"):
            raise ValueError(f"activation must be relu or tanh, got {self.activation!r}")


@dataclass
class Encoder:
    """Weights W[k] of shape (in, out) and biases b[k] of shape (out,)."""
    config: EncoderConfig
    weights: list[np.ndarray] = field(default_factory=list)
    biases: list[np.ndarray] = field(default_factory=list)

    @classmethod
    def init(cls, config: EncoderConfig) -> "Encoder":
        """He-style init for relu, Xavier-style for tanh; zero biases."""
        rng = np.random.default_rng(config.seed)
        dims = [config.input_dim, *config.hidden_dims, config.embedding_dim]
        gain = 2.0 if config.activation == "relu" else 1.0
        weights, biases = [], []
        for fan_in, fan_out in zip(dims[:-1], dims[1:]):
            weights.append(rng.standard_normal((fan_in, fan_out)) * np.sqrt(gain / fan_in))
            biases.append(np.zeros(fan_out))
        return cls(config=config, weights=weights, biases=biases)

    def _act(self, z: np.ndarray) -> np.ndarray:
        if self.config.activation == "relu":
            return np.maximum(z, 0.0)
        return np.tanh(z)

    def _act_grad(self, z: np.ndarray, a: np.ndarray) -> np.ndarray:
        if self.config.activation == "relu":
            return (z > 0.0).astype(np.float64)
        return 1.0 - a * a

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, list]:
        """Raw (unnormalised) embeddings and the cache for backward."""
        cache = []
        h = np.asarray(x, dtype=np.float64)
        last = len(self.weights) - 1
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ w + b
            if k == last:
                cache.append((h, None, None))
                h = z
            else:
                a = self._act(z)
                cache.append((h, z, a))
                h = a
        return h, cache

    def backward(self, grad_out: np.ndarray, cache: list) -> tuple[list[np.ndarray], list[np.ndarray]]:
        """Gradients of weights and biases given dloss/d(raw embedding)."""
        grads_w = [None] * len(self.weights)
        grads_b = [None] * len(self.biases)
        g = grad_out
        for k in range(len(self.weights) - 1, -1, -1):
            h_in, z, a = cache[k]
            if z is not None:
                g = g * self._act_grad(z, a)
            grads_w[k] = h_in.T @ g
            grads_b[k] = g.sum(axis=0)
            if k > 0:
                g = g @ self.weights[k].T
        return grads_w, grads_b

    def parameters(self) -> list[np.ndarray]:
        return [*self.weights, *self.biases]

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.parameters())
