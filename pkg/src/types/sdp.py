from dataclasses import dataclass
from enum import Enum
from typing import List

import numpy as np

from src.util.errors import Err, ForgeError
from src.util.streamable import Streamable, streamable

ANTI_HERMITIAN_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class SdpProblem:
    """
    maximize objective . c  subject to  |sum_i c_i commutators[i]| <= 1
    commutators[i] = [D, a_i] is anti-Hermitian for every basis element a_i.
    """

    objective: np.ndarray
    commutators: np.ndarray

    def __post_init__(self):
        if self.objective.ndim != 1 or self.commutators.ndim != 3:
            raise ForgeError(Err.DIMENSION_MISMATCH, ["objective must be 1-d, commutators 3-d"])
        p, d1, d2 = self.commutators.shape
        if p != self.objective.shape[0] or d1 != d2:
            raise ForgeError(
                Err.DIMENSION_MISMATCH,
                [f"objective {self.objective.shape}, commutators {self.commutators.shape}"],
            )
        scale = max(1.0, float(np.max(np.abs(self.commutators), initial=0.0)))
        defect = float(
            np.max(np.abs(self.commutators + self.commutators.conj().transpose(0, 2, 1)), initial=0.0)
        )
        if defect > ANTI_HERMITIAN_TOLERANCE * scale:
            raise ForgeError(Err.NOT_HERMITIAN, [f"commutator anti-Hermitian defect {defect}"])

    @property
    def dim(self) -> int:
        return self.commutators.shape[1]

    @property
    def size(self) -> int:
        return self.objective.shape[0]


class SdpStatus(Enum):
    OPTIMAL = 1
    MAX_ITER = 2
    INFEASIBLE = 3


@dataclass(frozen=True)
@streamable
class SdpSolution(Streamable):
    # certificate is the spectral norm of sum_i c_i K_i recomputed after the solve
    value: float
    coefficients: List[float]
    status: SdpStatus
    primal_residual: float
    dual_residual: float
    iterations: int
    certificate: float
