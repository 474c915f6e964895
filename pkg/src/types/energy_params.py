from dataclasses import dataclass
from typing import List

from src.util.errors import Err, ForgeError
from src.util.streamable import Streamable, streamable


@dataclass(frozen=True)
@streamable
class EnergyParams(Streamable):
    # existing_states holds the mean_phi vectors of the states accepted so far
    g_e: float
    existing_states: List[List[float]]

    def validate(self):
        if self.g_e < 0:
            raise ForgeError(Err.INVALID_ARGUMENT, [f"g_e must be >= 0, got {self.g_e}"])
