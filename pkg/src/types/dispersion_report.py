from dataclasses import dataclass
from typing import List

from src.util.errors import Err, ForgeError
from src.util.streamable import Streamable, streamable


@dataclass(frozen=True)
@streamable
class DispersionReport(Streamable):
    """
    Spread of a state around its mean embedded position. barycenter is the unit
    vector mean_phi/|mean_phi| on the sphere and [angle] on the circle; it is
    meaningless when degenerate is set.
    """

    eta: float
    mean_phi: List[float]
    barycenter: List[float]
    degenerate: bool

    def validate(self):
        if self.eta < 0:
            raise ForgeError(Err.INVALID_ARGUMENT, [f"negative dispersion {self.eta}"])
