from dataclasses import dataclass
from typing import List

from src.util.streamable import Streamable, streamable


@dataclass(frozen=True)
@streamable
class EmbeddingResult(Streamable):
    coords: List[List[float]]
    stress: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
@streamable
class RadiiStatistics(Streamable):
    # radii are measured from the centroid of the embedded points
    centroid: List[float]
    radii: List[float]
    mean: float
    minimum: float
    maximum: float
    std: float
