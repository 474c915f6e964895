"""
PointForge: generate localized states one at a time, each minimizing dispersion
plus repulsion from the states already accepted, then fill in the pairwise
truncated Connes distances.
"""
import logging
import math
import time
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import gamma

from src.spectral.connes import check_metric_axioms, distance_matrix_detailed
from src.spectral.geometries import weyl_estimate
from src.spectral.localization import dispersion, heat_time, minimize_state_detailed
from src.types.energy_params import EnergyParams
from src.types.forge_config import ForgeConfig
from src.types.forge_report import ForgeReport, PairRecord, StateRecord
from src.types.metric_graph import MetricGraph
from src.types.sdp import SdpStatus
from src.types.truncated_triple import TruncatedTriple
from src.types.vector_state import VectorState
from src.util.errors import Err, ForgeError

log = logging.getLogger(__name__)


def unit_ball_volume(m: int) -> float:
    return math.pi ** (m / 2) / float(gamma(m / 2 + 1))


def estimate_state_count(spectral_dim: int, volume: float, cutoff: float) -> int:
    """
    N = vol / (vol(B_m) eta_0^{m/2}) rounded up, where eta_0 = m 2 log(cutoff) / cutoff^2
    is the dispersion of a heat state: every state occupies a ball of radius
    sqrt(eta_0).
    """
    if spectral_dim < 1:
        raise ForgeError(Err.INVALID_ARGUMENT, [f"spectral dimension {spectral_dim}"])
    if not volume > 0:
        raise ForgeError(Err.INVALID_ARGUMENT, [f"volume {volume}"])
    eta_0 = heat_time(cutoff, spectral_dim)
    return int(math.ceil(volume / (unit_ball_volume(spectral_dim) * eta_0 ** (spectral_dim / 2))))


def resolve_state_count(t: TruncatedTriple, cfg: ForgeConfig) -> Tuple[int, str]:
    if cfg.target_count_override is not None:
        return cfg.target_count_override, "override"
    m = cfg.spectral_dim if cfg.spectral_dim is not None else t.spectral_dim_hint
    volume = cfg.volume
    if m is None or volume is None:
        slope, weyl_volume = weyl_estimate(t.dirac_eigenvalues, cfg.rank_s)
        if m is None:
            m = max(int(round(slope)), 1)
        if volume is None:
            volume = weyl_volume
        log.info(f"Weyl estimate: dimension {slope:.3f}, volume {weyl_volume:.4f}")
    count = estimate_state_count(m, volume, t.cutoff)
    return count, f"estimate(m={m}, volume={volume:.6g})"


def forge(t: TruncatedTriple, cfg: ForgeConfig) -> Tuple[MetricGraph, ForgeReport]:
    start = time.time()
    count, source = resolve_state_count(t, cfg)
    log.info(f"Forging {count} states on {t.name} (dim H = {t.dim}, count from {source})")

    states: List[VectorState] = []
    means: List[List[float]] = []
    dispersions: List[float] = []
    records: List[StateRecord] = []
    # every state restarts from the same draws; only the repulsion term tells them apart
    for index in range(count):
        seed = cfg.seed
        params = EnergyParams(cfg.g_e, [list(x) for x in means])
        result = minimize_state_detailed(t, params, seed, cfg.minimizer, cfg.threads)
        report = dispersion(t, result.state)
        states.append(result.state)
        means.append(report.mean_phi)
        dispersions.append(report.eta)
        records.append(
            StateRecord(
                index,
                seed,
                result.iterations,
                result.energy,
                report.eta,
                result.converged,
                result.reseeds,
                result.wall_time,
                result.stop_reason.name,
            )
        )
        log.info(
            f"State {index + 1}/{count}: eta {report.eta:.6g}, energy {result.energy:.6g}, "
            f"{'converged' if result.converged else 'NOT converged'} ({result.stop_reason.name})"
        )

    matrix, solutions = distance_matrix_detailed(t, states, cfg.solver, cfg.threads)
    pairs = [
        PairRecord(i, j, s.status.name, s.iterations, s.primal_residual, s.dual_residual)
        for (i, j), s in sorted(solutions.items())
    ]
    violations = check_metric_axioms(matrix)
    for violation in violations:
        log.warning(f"Metric axiom violated: {violation}")

    graph = MetricGraph(
        t.name,
        states,
        means,
        dispersions,
        [[float(x) for x in row] for row in matrix],
    )
    converged = all(r.converged for r in records) and all(
        s.status == SdpStatus.OPTIMAL for s in solutions.values()
    )
    run_report = ForgeReport(
        count,
        source,
        records,
        pairs,
        violations,
        time.time() - start,
        converged,
    )
    log.info(f"Forge finished in {run_report.wall_time:.1f}s, converged: {converged}")
    return graph, run_report


def mean_geodesic_separation(graph: MetricGraph) -> Optional[float]:
    """
    Mean great circle distance between the barycenters of a sphere graph (mean
    angular gap on the circle); None when fewer than two states are non degenerate.
    """
    points = []
    for mean in graph.barycenter_coords:
        x = np.asarray(mean, dtype=float)
        norm = float(np.linalg.norm(x))
        if norm > 0:
            points.append(x / norm)
    if len(points) < 2:
        return None
    p = np.array(points)
    cosines = np.clip(p @ p.T, -1.0, 1.0)
    upper = np.triu_indices(len(points), k=1)
    return float(np.mean(np.arccos(cosines[upper])))
