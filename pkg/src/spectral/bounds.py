"""
Bounds relating truncated distances to the geodesic distance of barycenters.

For vector states with dispersions eta_i and mean embedded positions x_i,

    |d_M(p_1, p_2) - W_1|^2 <= (pi^2 / 4) sum_i (eta_i + 1 - |x_i|^2),

so d_M - (pi / 2) sqrt(sum_i (eta_i + 1 - |x_i|^2)) bounds W_1 from below, while the
truncated spectral distance bounds it from above.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.spectral.connes import SolverContext, build_problem, commutator_basis, solve_distance
from src.spectral.localization import dispersion, heat_state
from src.types.bound_row import BoundRow
from src.types.cutoff_convention import Geometry
from src.types.metric_graph import MetricGraph
from src.types.sdp import SdpStatus
from src.types.solver_settings import DEFAULT_SOLVER_SETTINGS, SolverSettings
from src.types.truncated_triple import TruncatedTriple
from src.types.vector_state import VectorState
from src.util.errors import Err, ForgeError

log = logging.getLogger(__name__)

# Lipschitz constant of the inverse of the embedding on the unit sphere
LIPSCHITZ = math.pi / 2
DEGENERATE_MEAN = 1e-6


def geodesic_distance(mean_a: Sequence[float], mean_b: Sequence[float]) -> Optional[float]:
    """
    Great circle distance of the directions of two mean positions, None when either
    mean is too short to define a direction.
    """
    a = np.asarray(mean_a, dtype=float)
    b = np.asarray(mean_b, dtype=float)
    norm_a, norm_b = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if norm_a < DEGENERATE_MEAN or norm_b < DEGENERATE_MEAN:
        return None
    ua, ub = a / norm_a, b / norm_b
    return float(2 * np.arctan2(np.linalg.norm(ua - ub), np.linalg.norm(ua + ub)))


def lower_bound(geodesic: float, etas: Sequence[float], means: Sequence[Sequence[float]]) -> float:
    spread = sum(eta + 1.0 - float(np.dot(x, x)) for eta, x in zip(etas, means))
    # W_1 >= 0
    return max(0.0, geodesic - LIPSCHITZ * math.sqrt(max(spread, 0.0)))


def bound_row(
    i: int, j: int, spectral: float, eta_i: float, eta_j: float, mean_i, mean_j
) -> BoundRow:
    geodesic = geodesic_distance(mean_i, mean_j)
    if geodesic is None:
        return BoundRow(i, j, spectral, 0.0, 0.0, True)
    return BoundRow(i, j, spectral, geodesic, lower_bound(geodesic, [eta_i, eta_j], [mean_i, mean_j]), False)


def graph_bounds(graph: MetricGraph) -> List[BoundRow]:
    rows = []
    for i in range(graph.size):
        for j in range(i + 1, graph.size):
            rows.append(
                bound_row(
                    i,
                    j,
                    graph.distances[i][j],
                    graph.dispersions[i],
                    graph.dispersions[j],
                    graph.barycenter_coords[i],
                    graph.barycenter_coords[j],
                )
            )
    return rows


def sweep_points(geometry: Geometry, samples: int) -> List[Tuple[float, ...]]:
    """
    A base point followed by samples points moving away from it along a great circle
    (the equator on the sphere), the last one antipodal.
    """
    if samples < 1:
        raise ForgeError(Err.INVALID_ARGUMENT, [f"samples {samples}"])
    angles = [math.pi * k / samples for k in range(samples + 1)]
    if geometry == Geometry.CIRCLE:
        return [(a,) for a in angles]
    return [(math.pi / 2, a) for a in angles]


def sweep_bounds(
    t: TruncatedTriple,
    samples: int,
    spinor_component: int = 0,
    settings: SolverSettings = DEFAULT_SOLVER_SETTINGS,
) -> Tuple[List[BoundRow], List[SdpStatus]]:
    """
    Heat states along a great circle sweep; rows pair the base state with each of
    the others. The second list holds the solver status of every row.
    """
    points = sweep_points(t.geometry, samples)
    component = spinor_component if t.geometry != Geometry.CIRCLE else 0
    states: List[VectorState] = [heat_state(t, p, component) for p in points]
    reports = [dispersion(t, s) for s in states]
    commutators = commutator_basis(t)
    context = SolverContext(commutators)
    rows = []
    statuses = []
    for k in range(1, len(states)):
        solution = solve_distance(
            build_problem(t, states[0], states[k], commutators), settings=settings, context=context
        )
        rows.append(
            bound_row(
                0,
                k,
                solution.value,
                reports[0].eta,
                reports[k].eta,
                reports[0].mean_phi,
                reports[k].mean_phi,
            )
        )
        statuses.append(solution.status)
        log.info(f"Sweep point {k}/{samples}: spectral {solution.value:.6g}, geodesic {rows[-1].geodesic:.6g}")
    return rows, statuses
