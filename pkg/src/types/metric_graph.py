from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from src.types.vector_state import VectorState
from src.util.errors import Err, ForgeError
from src.util.json_util import load_versioned, save_versioned
from src.util.streamable import Streamable, streamable


@dataclass(frozen=True)
@streamable
class MetricGraph(Streamable):
    """
    Output of a forge run: the accepted states in order, the mean embedded
    position <phi> of each (its direction is the barycenter) and its dispersion,
    and the pairwise distance matrix.
    """

    triple_name: str
    states: List[VectorState]
    barycenter_coords: List[List[float]]
    dispersions: List[float]
    distances: List[List[float]]

    def validate(self):
        k = len(self.states)
        if len(self.barycenter_coords) != k or len(self.dispersions) != k:
            raise ForgeError(Err.INCONSISTENT_TRIPLE, [f"{k} states, inconsistent records"])
        if len(self.distances) != k or any(len(row) != k for row in self.distances):
            raise ForgeError(Err.DIMENSION_MISMATCH, [f"distance matrix is not {k}x{k}"])
        for i in range(k):
            if self.distances[i][i] != 0:
                raise ForgeError(Err.INCONSISTENT_TRIPLE, [f"distances[{i}][{i}] != 0"])
            for j in range(i + 1, k):
                if self.distances[i][j] != self.distances[j][i]:
                    raise ForgeError(Err.INCONSISTENT_TRIPLE, [f"asymmetric at ({i}, {j})"])
                if self.distances[i][j] < 0:
                    raise ForgeError(Err.NEGATIVE_DISTANCE, [i, j, self.distances[i][j]])
        if any(eta < 0 for eta in self.dispersions):
            raise ForgeError(Err.INVALID_ARGUMENT, ["negative dispersion"])

    @property
    def size(self) -> int:
        return len(self.states)

    def distance_array(self) -> np.ndarray:
        return np.array(self.distances, dtype=float)


def save_graph(
    graph: MetricGraph, path: Union[str, Path], config: Dict = None, extra: Dict = None
) -> None:
    save_versioned(path, graph, config, extra)


def load_graph(path: Union[str, Path]) -> MetricGraph:
    return load_versioned(path, MetricGraph)
