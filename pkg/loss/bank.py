"""Sub-center weight bank: N classes x C sub-centers x L dims."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aggregate import normalize_rows


@dataclass
class SubCenterBank:
    """Class sub-center directions. C=1 is the plain one-center-per-class head."""
    weights: np.ndarray  # (N, C, L)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.ndim != 3:
            raise ValueError(f"bank weights must be 3-D (N, C, L), got shape {self.weights.shape}")
        n, c, dim = self.weights.shape
        if n < 2:
            raise ValueError("bank needs at least 2 classes")
        if c < 1 or dim < 1:
            raise ValueError("bank sub-center count and dimension must be positive")
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("bank weights contain non-finite values")

    @property
    def num_classes(self) -> int:
        return self.weights.shape[0]

    @property
    def num_subcenters(self) -> int:
        return self.weights.shape[1]

    @property
    def dim(self) -> int:
        return self.weights.shape[2]

    def class_subcenters(self, label: int) -> np.ndarray:
        """(C, L) unit rows of one class."""
        unit, _ = normalize_rows(self.weights[label])
        return unit

    def unit(self) -> np.ndarray:
        unit, _ = normalize_rows(self.weights)
        return unit

    def project(self) -> "SubCenterBank":
        """Re-project every sub-center onto the unit sphere (in place)."""
        self.weights = self.unit()
        return self

    def copy(self) -> "SubCenterBank":
        return SubCenterBank(self.weights.copy())

    @classmethod
    def random(
        cls,
        num_classes: int,
        num_subcenters: int,
        dim: int,
        rng: np.random.Generator,
    ) -> "SubCenterBank":
        """Unit-normalised Gaussian directions."""
        w = rng.standard_normal((num_classes, num_subcenters, dim))
        return cls(w).project()
