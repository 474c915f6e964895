from dataclasses import dataclass

from src.util.streamable import Streamable, streamable


@dataclass(frozen=True)
@streamable
class BoundRow(Streamable):
    """
    One state pair: the spectral distance (an upper bound on the Wasserstein
    distance), the geodesic distance of the two barycenters and the lower bound
    derived from the dispersions. degenerate is set when either barycenter is
    undefined, in which case geodesic and lower are 0.
    """

    i: int
    j: int
    spectral: float
    geodesic: float
    lower: float
    degenerate: bool
