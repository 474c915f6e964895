from dataclasses import dataclass
from typing import List, Optional

from src.util.streamable import Streamable, streamable


@dataclass(frozen=True)
@streamable
class BoundsReport(Streamable):
    # statuses holds one SdpStatus name per sweep pair, empty for a graph source
    source: str
    pairs: int
    degenerate: int
    statuses: List[str]
    converged: bool


@dataclass(frozen=True)
@streamable
class DispersionScanReport(Streamable):
    """
    Heat state dispersions along a cutoff scan and the fit eta = a log(L) / L^2.
    decreasing is false when some larger cutoff does not give a smaller dispersion.
    """

    geometry: str
    cutoffs: List[float]
    etas: List[float]
    fit_coefficient: float
    max_residual: Optional[float]
    decreasing: bool
