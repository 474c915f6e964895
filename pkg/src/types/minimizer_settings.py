from dataclasses import dataclass
from enum import Enum
from typing import Dict

from src.util.errors import Err, ForgeError
from src.util.streamable import Streamable, streamable


@dataclass(frozen=True)
@streamable
class MinimizerSettings(Streamable):
    max_iter: int
    grad_tol: float
    restarts: int
    reseeds: int
    memory: int
    eta_clamp: float

    def validate(self):
        if self.max_iter < 1 or self.restarts < 1 or self.memory < 1 or self.reseeds < 0:
            raise ForgeError(Err.INVALID_ARGUMENT, [f"bad minimizer settings {self}"])

    @classmethod
    def from_config(cls, localization_config: Dict) -> "MinimizerSettings":
        return cls(
            int(localization_config["max_iter"]),
            float(localization_config["grad_tol"]),
            int(localization_config["restarts"]),
            int(localization_config["reseeds"]),
            int(localization_config["memory"]),
            float(localization_config["eta_clamp"]),
        )


DEFAULT_MINIMIZER_SETTINGS = MinimizerSettings(500, 1e-8, 3, 5, 10, 1e-14)


class StopReason(Enum):
    # the first two count as converged
    GRADIENT = 1
    ROUNDING_FLOOR = 2
    MAX_ITER = 3
    LINE_SEARCH = 4
    NON_FINITE = 5

    @property
    def converged(self) -> bool:
        return self in (StopReason.GRADIENT, StopReason.ROUNDING_FLOOR)
