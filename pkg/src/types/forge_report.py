from dataclasses import dataclass
from typing import List

from src.util.streamable import Streamable, streamable


@dataclass(frozen=True)
@streamable
class StateRecord(Streamable):
    index: int
    seed: int
    iterations: int
    energy: float
    eta: float
    converged: bool
    reseeds: int
    wall_time: float
    # StopReason name: GRADIENT or ROUNDING_FLOOR when converged
    stop_reason: str


@dataclass(frozen=True)
@streamable
class PairRecord(Streamable):
    i: int
    j: int
    status: str
    iterations: int
    primal_residual: float
    dual_residual: float


@dataclass(frozen=True)
@streamable
class ForgeReport(Streamable):
    """
    Run report written next to a metric graph. converged is false when any state
    minimization or any pair solve stopped at its iteration cap.
    """

    state_count: int
    count_source: str
    states: List[StateRecord]
    pairs: List[PairRecord]
    metric_violations: List[str]
    wall_time: float
    converged: bool
