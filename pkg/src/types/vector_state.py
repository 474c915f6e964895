from dataclasses import dataclass
from typing import List

import numpy as np

from src.util.errors import Err, ForgeError
from src.util.streamable import Streamable, streamable

NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
@streamable
class VectorState(Streamable):
    """
    Unit vector of the truncated Hilbert space, in the eigenbasis of D. It defines
    the state a -> <v, a v> of the truncated algebra.
    """

    coefficients: List[complex]

    def validate(self):
        if len(self.coefficients) == 0:
            raise ForgeError(Err.DIMENSION_MISMATCH, ["empty state"])
        norm = float(np.linalg.norm(self.vector))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ForgeError(Err.NOT_NORMALIZED, [f"norm {norm}"])

    @classmethod
    def from_vector(cls, v: np.ndarray, normalize: bool = True) -> "VectorState":
        v = np.asarray(v, dtype=complex)
        if normalize:
            norm = np.linalg.norm(v)
            if norm == 0:
                raise ForgeError(Err.NOT_NORMALIZED, ["zero vector"])
            v = v / norm
        return cls(list(v))

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=complex)
