from dataclasses import dataclass

import numpy as np

from src.util.errors import Err, ForgeError


@dataclass(frozen=True, eq=False)
class StressProblem:
    distances: np.ndarray
    weights: np.ndarray
    target_dim: int

    def __post_init__(self):
        d, w = self.distances, self.weights
        if d.ndim != 2 or d.shape[0] != d.shape[1] or w.shape != d.shape:
            raise ForgeError(Err.DIMENSION_MISMATCH, [f"distances {d.shape}, weights {w.shape}"])
        if d.shape[0] < 2:
            raise ForgeError(Err.INVALID_ARGUMENT, ["need at least 2 points"])
        if self.target_dim < 1:
            raise ForgeError(Err.INVALID_ARGUMENT, [f"target_dim {self.target_dim}"])
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise ForgeError(Err.NEGATIVE_DISTANCE, ["distances must be finite and >= 0"])
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ForgeError(Err.INVALID_ARGUMENT, ["weights must be finite and >= 0"])
        if np.any(np.diag(w) != 0) or not np.array_equal(w, w.T):
            raise ForgeError(Err.INVALID_ARGUMENT, ["weights must be symmetric, zero diagonal"])
        if not np.allclose(d, d.T, rtol=0, atol=1e-12):
            raise ForgeError(Err.INVALID_ARGUMENT, ["distances must be symmetric"])
        if w.sum() <= 0:
            raise ForgeError(Err.DISCONNECTED_WEIGHTS, ["all weights are zero"])

    @property
    def size(self) -> int:
        return self.distances.shape[0]
