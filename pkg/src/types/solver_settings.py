from dataclasses import dataclass
from typing import Dict

from src.util.errors import Err, ForgeError
from src.util.streamable import Streamable, streamable


@dataclass(frozen=True)
@streamable
class SolverSettings(Streamable):
    """
    Operator splitting parameters for the distance SDP. rho is the initial penalty,
    relaxation the over-relaxation factor in (0, 2).
    """

    tol: float
    max_iter: int
    rho: float
    relaxation: float
    both_orientations: bool
    warm_start: bool

    def validate(self):
        if self.tol <= 0 or self.max_iter < 1 or self.rho <= 0:
            raise ForgeError(Err.INVALID_ARGUMENT, [f"bad solver settings {self}"])
        if not 0 < self.relaxation < 2:
            raise ForgeError(Err.INVALID_ARGUMENT, [f"relaxation {self.relaxation}"])

    @classmethod
    def from_config(cls, solver_config: Dict) -> "SolverSettings":
        return cls(
            float(solver_config["tol"]),
            int(solver_config["max_iter"]),
            float(solver_config["rho"]),
            float(solver_config["relaxation"]),
            bool(solver_config["both_orientations"]),
            bool(solver_config["warm_start"]),
        )


DEFAULT_SOLVER_SETTINGS = SolverSettings(1e-6, 20000, 1.0, 1.6, False, True)
